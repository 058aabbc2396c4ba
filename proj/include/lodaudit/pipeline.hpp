#pragma once

// Stage orchestration: harvest -> match (Set 2) -> set1 -> disambiguate
// (Set 3) -> markers -> sample -> report. Every stage reads its inputs from
// files and writes its outputs under out_dir, so stages run standalone from
// the CLI, failed runs resume from the checkpoint, and identical inputs give
// byte-identical bundles.

#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lodaudit/config.hpp"
#include "lodaudit/connectors/aat.hpp"
#include "lodaudit/connectors/http.hpp"
#include "lodaudit/connectors/odwn.hpp"
#include "lodaudit/connectors/pwn.hpp"
#include "lodaudit/connectors/wikidata.hpp"
#include "lodaudit/core.hpp"
#include "lodaudit/evaluation.hpp"
#include "lodaudit/lexicon.hpp"
#include "lodaudit/markers.hpp"
#include "lodaudit/matcher.hpp"
#include "lodaudit/report.hpp"
#include "lodaudit/sha256.hpp"
#include "lodaudit/wsd.hpp"

namespace lodaudit {

class StageError : public AuditError {
public:
    StageError(std::string stage, const std::string& message)
        : AuditError("stage-failure", "stage '" + stage + "': " + message),
          stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

namespace pipeline_detail {

inline std::string out_path(const Config& c, const std::string& name) {
    return (std::filesystem::path(c.out_dir) / name).string();
}

inline nlohmann::json literal_to_json(const RetrievedLiteral& lit) {
    return {{"resource_id", lit.resource.resource_id},
            {"dataset", to_string(lit.resource.dataset)},
            {"language", to_string(lit.resource.language)},
            {"property_path", to_string(lit.property_path.path_id)},
            {"text", lit.text},
            {"retrieved_at", lit.retrieval_timestamp}};
}

inline RetrievedLiteral literal_from_json(const nlohmann::json& j) {
    Dataset d = dataset_from_string(j.at("dataset").get<std::string>());
    RetrievedLiteral lit;
    lit.resource = make_resource(d, j.at("resource_id").get<std::string>(),
                                 language_from_string(j.at("language").get<std::string>()));
    lit.property_path = {d, path_from_string(d, j.at("property_path").get<std::string>())};
    lit.text = j.at("text").get<std::string>();
    lit.retrieval_timestamp = j.value("retrieved_at", std::int64_t{0});
    return lit;
}

inline void write_literals(const Config& c, const std::string& name,
                           std::vector<RetrievedLiteral> literals) {
    std::vector<std::string> lines;
    lines.reserve(literals.size());
    for (const auto& lit : literals) lines.push_back(literal_to_json(lit).dump());
    std::sort(lines.begin(), lines.end());
    std::string body;
    for (const auto& l : lines) body += l + "\n";
    csv::write_file(out_path(c, name), body);
}

inline void load_literals_into(const std::string& path, LiteralStore& store) {
    if (!std::filesystem::exists(path)) return;
    std::istringstream in(csv::read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        store.add(literal_from_json(nlohmann::json::parse(line)));
    }
}

}  // namespace pipeline_detail

// Files produced by the harvest stage and consumed by the later ones.
inline const std::vector<std::string>& literal_files() {
    static const std::vector<std::string> names = {
        "literals_wikidata.jsonl", "literals_aat.jsonl", "literals_pwn.jsonl",
        "literals_odwn.jsonl"};
    return names;
}

class Pipeline {
public:
    Pipeline(Config config, std::shared_ptr<net::Transport> transport, std::uint64_t seed)
        : config_(std::move(config)),
          fetcher_(std::move(transport), config_.cache_dir, config_.rate_limit_per_sec),
          seed_(seed) {
        std::filesystem::create_directories(config_.out_dir);
    }

    const Config& config() const { return config_; }

    // ---------------------------------------------------------------- stages

    void harvest() {
        run_stage("harvest", [&] {
            TermLexicon lexicon = load_lexicon_();
            csv::write_file(pipeline_detail::out_path(config_, "lexicon_snapshot.json"),
                            lexicon.to_json().dump(2) + "\n");
            if (config_.wikidata) harvest_wikidata(lexicon);
            else csv::write_file(pipeline_detail::out_path(config_, "literals_wikidata.jsonl"), "");
            if (config_.aat) harvest_aat();
            else csv::write_file(pipeline_detail::out_path(config_, "literals_aat.jsonl"), "");
            if (config_.pwn_rdf) {
                PwnDatabase db = PwnDatabase::parse_file(*config_.pwn_rdf);
                pipeline_detail::write_literals(config_, "literals_pwn.jsonl",
                                                db.extract_literals());
            } else {
                csv::write_file(pipeline_detail::out_path(config_, "literals_pwn.jsonl"), "");
            }
            if (config_.odwn_xml) {
                OdwnDatabase db = OdwnDatabase::parse_file(*config_.odwn_xml);
                pipeline_detail::write_literals(config_, "literals_odwn.jsonl",
                                                db.extract_literals());
            } else {
                csv::write_file(pipeline_detail::out_path(config_, "literals_odwn.jsonl"), "");
            }
        });
    }

    void match() {
        run_stage("match", [&] {
            TermLexicon lexicon = load_lexicon_();
            LiteralStore store = load_store();
            std::vector<Hit> hits = count_hits(store.literals(), lexicon);
            csv::write_file(pipeline_detail::out_path(config_, "set2_hits.jsonl"),
                            hits_to_jsonl(hits));
            csv::write_file(pipeline_detail::out_path(config_, "set2_hits.csv"), hits_to_csv(hits));
            csv::write_file(pipeline_detail::out_path(config_, "set2_aggregates.csv"),
                            aggregates_to_csv(aggregate(hits)));
            csv::write_file(pipeline_detail::out_path(config_, "set2_aggregates_by_form.csv"),
                            aggregates_to_csv(aggregate(hits, false)));
        });
    }

    void set1() {
        run_stage("set1", [&] {
            TermLexicon lexicon = load_lexicon_();
            LiteralStore store = load_store();
            Set1Result result = build_set1(lexicon, store);
            csv::write_file(pipeline_detail::out_path(config_, "set1_hits.jsonl"),
                            hits_to_jsonl(result.hits));
            csv::write_file(pipeline_detail::out_path(config_, "set1_aggregates.csv"),
                            aggregates_to_csv(aggregate(result.hits)));
            csv::Writer unc({"dataset", "language", "canonical"});
            for (const auto& row : result.uncovered)
                unc.row({row.dataset, to_string(row.language), row.canonical});
            unc.save(pipeline_detail::out_path(config_, "set1_uncovered.csv"));
            csv::Writer missing({"dataset", "language", "resource_id"});
            for (const auto& r : result.missing_from_store)
                missing.row({to_string(r.dataset), to_string(r.language), r.resource_id});
            missing.save(pipeline_detail::out_path(config_, "set1_missing_from_store.csv"));
        });
    }

    void disambiguate() {
        run_stage("disambiguate", [&] {
            TermLexicon lexicon = load_lexicon_();
            LiteralStore store = load_store();
            auto index = index_store(store);
            std::vector<WikidataEntityRecord> wd_records = load_wikidata_records();
            std::map<std::string, WikidataEntityRecord> wd_by_id;
            for (const auto& r : wd_records) wd_by_id[r.entity_id] = r;
            std::optional<OdwnDatabase> odwn;
            if (config_.odwn_xml) odwn = OdwnDatabase::parse_file(*config_.odwn_xml);
            StoreContext context(index, wd_by_id, odwn ? &*odwn : nullptr);

            std::vector<Hit> set2_hits = load_hits("set2_hits.jsonl");
            std::vector<WsdScore> all_scores;
            csv::Writer errors({"canonical", "language", "error"});
            for (Language lang : config_.languages) {
                TextPipeline pipeline = TextPipeline::from_files(config_.stopwords(lang),
                                                                 config_.lemmas(lang));
                EmbeddingModel model = EmbeddingModel::load(config_.embeddings(lang));
                std::vector<WsdGroup> groups;
                std::map<std::string, std::set<ResourceRef>> candidates;
                for (const auto& h : set2_hits)
                    if (h.language == lang) candidates[h.canonical_form].insert(h.literal.resource);
                for (const auto& [canonical, resources] : candidates) {
                    const ContentiousTerm* term = lexicon.find(lang, canonical);
                    if (!term) continue;
                    WsdGroup group;
                    group.canonical = canonical;
                    group.language = lang;
                    try {
                        group.background = build_background(*term, context, pipeline);
                    } catch (const AuditError& e) {
                        errors.row({canonical, to_string(lang), e.code()});
                        continue;
                    }
                    for (const auto& resource : resources) {
                        BagOfWords bow;
                        bow.role = BowRole::context;
                        bow.canonical_form = canonical;
                        bow.language = lang;
                        std::string corpus;
                        auto it = index.find(resource);
                        if (it != index.end())
                            for (const RetrievedLiteral* lit : it->second) {
                                if (!corpus.empty()) corpus += ' ';
                                corpus += lit->text;
                            }
                        bow.tokens = pipeline.run(corpus);
                        group.contexts.emplace_back(resource, std::move(bow));
                    }
                    groups.push_back(std::move(group));
                }
                std::vector<WsdScore> scores =
                    lodaudit::disambiguate(groups, model, config_.wsd_threshold, config_.wsd_top_k);
                all_scores.insert(all_scores.end(), scores.begin(), scores.end());
            }
            csv::write_file(pipeline_detail::out_path(config_, "set3_scores.csv"),
                            scores_to_csv(all_scores));
            errors.save(pipeline_detail::out_path(config_, "wsd_errors.csv"));

            // set3 aggregates: the set2 hits restricted to included resources
            std::set<std::pair<std::string, ResourceRef>> included;
            for (const auto& s : all_scores)
                if (s.included) included.emplace(s.canonical_form, s.resource);
            std::vector<Hit> set3_hits;
            for (const auto& h : set2_hits)
                if (included.count({h.canonical_form, h.literal.resource})) set3_hits.push_back(h);
            csv::write_file(pipeline_detail::out_path(config_, "set3_hits.jsonl"),
                            hits_to_jsonl(set3_hits));
            csv::write_file(pipeline_detail::out_path(config_, "set3_aggregates.csv"),
                            aggregates_to_csv(aggregate(set3_hits)));

            std::vector<MissingRelated> missing = sanity_check_set1(all_scores, lexicon);
            csv::Writer sanity({"dataset", "language", "canonical", "resource_id", "reason"});
            for (const auto& m : missing)
                sanity.row({to_string(m.dataset), to_string(m.language), m.canonical,
                            m.resource_id, m.reason});
            sanity.save(pipeline_detail::out_path(config_, "set1_inclusion_check.csv"));
        });
    }

    void markers() {
        run_stage("markers", [&] {
            TermLexicon lexicon = load_lexicon_();
            LiteralStore store = load_store();
            auto lexemes = load_marker_lexemes(config_.marker_lexemes);
            auto rules = load_marker_rules(config_.marker_rules);

            std::vector<Marker> all =
                scan_implicit(store.literals(), lexemes, config_.markers_scan_labels);
            std::vector<ResourceProperties> props = collect_all_properties();
            std::vector<Marker> explicit_markers = scan_explicit(props, rules);
            all.insert(all.end(), explicit_markers.begin(), explicit_markers.end());
            csv::write_file(pipeline_detail::out_path(config_, "markers.csv"),
                            markers_to_csv(all));

            // suggestions in curated (Set 1) resources
            auto index = index_store(store);
            csv::Writer sugg({"canonical", "language", "dataset", "resource_id", "suggestion",
                              "property_path", "span", "similarity"});
            for (const auto& term : lexicon.terms()) {
                if (term.suggestions.empty()) continue;
                for (const auto& resource : term.related_resources) {
                    auto it = index.find(resource);
                    if (it == index.end()) continue;
                    std::vector<RetrievedLiteral> literals;
                    for (const RetrievedLiteral* lit : it->second) literals.push_back(*lit);
                    for (const auto& m :
                         find_suggestions(literals, term, config_.suggestion_floor))
                        sugg.row({term.canonical_form, to_string(term.language),
                                  to_string(resource.dataset), resource.resource_id, m.suggestion,
                                  to_string(m.property_path), m.span,
                                  format_similarity(m.similarity)});
                }
            }
            sugg.save(pipeline_detail::out_path(config_, "suggestions.csv"));

            // coverage of Set 3 resources
            std::vector<ResourceRef> set3_resources;
            if (std::filesystem::exists(pipeline_detail::out_path(config_, "set3_scores.csv"))) {
                auto rows = csv::read_with_header(
                    pipeline_detail::out_path(config_, "set3_scores.csv"),
                    {"canonical", "dataset", "language", "resource_id", "similarity", "included"});
                std::set<ResourceRef> seen;
                for (const auto& row : rows) {
                    if (row.fields[5] != "true") continue;
                    ResourceRef r = make_resource(dataset_from_string(row.fields[1]),
                                                  row.fields[3],
                                                  language_from_string(row.fields[2]));
                    if (seen.insert(r).second) set3_resources.push_back(r);
                }
            }
            auto coverage = label_coverage_report(store, set3_resources, lexicon, all);
            csv::Writer cov({"dataset", "language", "resources_with_term", "marked"});
            for (const auto& row : coverage)
                cov.row({to_string(row.dataset), to_string(row.language),
                         std::to_string(row.resources_with_term), std::to_string(row.marked)});
            cov.save(pipeline_detail::out_path(config_, "label_coverage.csv"));
        });
    }

    void sample() {
        run_stage("sample", [&] {
            std::vector<WsdScore> set3 = load_scores();
            std::vector<HitAggregate> set2 = load_aggregates("set2_aggregates.csv");
            std::string body;
            bool first = true;
            for (Dataset d : {Dataset::wikidata, Dataset::aat, Dataset::pwn, Dataset::odwn}) {
                for (Language lang : config_.languages) {
                    if (!valid_dataset_language(d, lang)) continue;
                    AnnotationSample s =
                        stratify(set3, d, lang, set2, seed_, config_.sample_per_quartile);
                    std::map<int, std::size_t> per_quartile;
                    for (const auto& e : s.entries) per_quartile[e.quartile]++;
                    for (int q = 1; q <= 4; ++q)
                        if (per_quartile[q] < config_.sample_per_quartile)
                            std::fprintf(stderr,
                                         "warning: %s/%s quartile %d has only %zu candidates\n",
                                         to_string(d).c_str(), to_string(lang).c_str(), q,
                                         per_quartile[q]);
                    std::string csv_text = sample_to_csv(s);
                    if (!first) csv_text = csv_text.substr(csv_text.find('\n') + 1);
                    body += csv_text;
                    first = false;
                }
            }
            csv::write_file(pipeline_detail::out_path(config_, "sample.csv"), body);
        });
    }

    void report() {
        run_stage("report", [&] {
            std::vector<HitAggregate> set1 = load_aggregates("set1_aggregates.csv");
            std::vector<HitAggregate> set2 = load_aggregates("set2_aggregates.csv");
            std::vector<HitAggregate> set3 = load_aggregates("set3_aggregates.csv");
            HitMatrix matrix = build_hit_matrix(set1, set2, set3);
            csv::write_file(pipeline_detail::out_path(config_, "hit_matrix.csv"),
                            hit_matrix_to_csv(matrix));
            csv::write_file(pipeline_detail::out_path(config_, "hit_matrix.json"),
                            hit_matrix_to_json(matrix).dump(2) + "\n");
            for (Dataset d : {Dataset::wikidata, Dataset::aat, Dataset::pwn, Dataset::odwn}) {
                for (Language lang : config_.languages) {
                    if (!valid_dataset_language(d, lang)) continue;
                    auto entries = top_terms(set2, d, lang, 10);
                    csv::write_file(
                        pipeline_detail::out_path(config_, "top_terms_" + to_string(d) + "_" +
                                                               to_string(lang) + ".json"),
                        top_terms_to_json(entries, d, lang).dump(2) + "\n");
                }
            }
            write_manifest();
        });
    }

    // Runs every stage in order; with resume, stages recorded in the
    // checkpoint are skipped.
    void run(bool resume = false) {
        std::set<std::string> done;
        if (resume) done = completed_stages();
        auto step = [&](const std::string& name, auto&& fn) {
            if (done.count(name)) return;
            fn();
        };
        step("harvest", [&] { harvest(); });
        step("match", [&] { match(); });
        step("set1", [&] { set1(); });
        step("disambiguate", [&] { disambiguate(); });
        step("markers", [&] { markers(); });
        step("sample", [&] { sample(); });
        step("report", [&] { report(); });
    }

    std::set<std::string> completed_stages() const {
        std::string path = pipeline_detail::out_path(config_, "checkpoint.json");
        if (!std::filesystem::exists(path)) return {};
        nlohmann::json j = nlohmann::json::parse(csv::read_file(path));
        std::set<std::string> out;
        for (const auto& s : j.at("completed")) out.insert(s.get<std::string>());
        return out;
    }

    // ------------------------------------------------------------- loaders

    LiteralStore load_store() const {
        LiteralStore store;
        for (const auto& name : literal_files())
            pipeline_detail::load_literals_into(pipeline_detail::out_path(config_, name), store);
        return store;
    }

    std::vector<WikidataEntityRecord> load_wikidata_records() const {
        std::string path = pipeline_detail::out_path(config_, "wikidata_records.json");
        if (!std::filesystem::exists(path)) return {};
        return wikidata_records_from_json_file(path);
    }

    std::vector<WsdScore> load_scores() const {
        std::vector<WsdScore> out;
        std::string path = pipeline_detail::out_path(config_, "set3_scores.csv");
        if (!std::filesystem::exists(path)) return out;
        for (const auto& row : csv::read_with_header(
                 path, {"canonical", "dataset", "language", "resource_id", "similarity",
                        "included"})) {
            WsdScore s;
            s.canonical_form = row.fields[0];
            s.resource = make_resource(dataset_from_string(row.fields[1]), row.fields[3],
                                       language_from_string(row.fields[2]));
            if (!row.fields[4].empty()) s.similarity = std::stod(row.fields[4]);
            s.included = row.fields[5] == "true";
            out.push_back(std::move(s));
        }
        return out;
    }

    std::vector<HitAggregate> load_aggregates(const std::string& name) const {
        std::vector<HitAggregate> out;
        std::string path = pipeline_detail::out_path(config_, name);
        if (!std::filesystem::exists(path)) return out;
        for (const auto& row : csv::read_with_header(
                 path, {"canonical", "dataset", "language", "property_path", "count"})) {
            Dataset d = dataset_from_string(row.fields[1]);
            out.push_back({row.fields[0], d, language_from_string(row.fields[2]),
                           path_from_string(d, row.fields[3]),
                           std::stoull(row.fields[4])});
        }
        return out;
    }

    std::vector<Hit> load_hits(const std::string& name) const {
        std::vector<Hit> out;
        std::string path = pipeline_detail::out_path(config_, name);
        if (!std::filesystem::exists(path)) return out;
        std::istringstream in(csv::read_file(path));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line);
            Dataset d = dataset_from_string(j.at("dataset").get<std::string>());
            Language lang = language_from_string(j.at("language").get<std::string>());
            Hit h;
            h.canonical_form = j.at("canonical");
            h.matched_form = j.at("matched_form");
            h.language = lang;
            h.literal.resource = make_resource(d, j.at("resource_id").get<std::string>(), lang);
            h.literal.property_path = {d, path_from_string(d, j.at("property_path").get<std::string>())};
            h.literal.text = j.at("text").get<std::string>();
            out.push_back(std::move(h));
        }
        return out;
    }

    // Map each resource to its literals.
    static std::map<ResourceRef, std::vector<const RetrievedLiteral*>> index_store(
        const LiteralStore& store) {
        std::map<ResourceRef, std::vector<const RetrievedLiteral*>> index;
        for (const auto& lit : store.literals()) index[lit.resource].push_back(&lit);
        return index;
    }

    // WSD background lookups backed by the literal store + dataset handles.
    class StoreContext : public DatasetContext {
    public:
        StoreContext(const std::map<ResourceRef, std::vector<const RetrievedLiteral*>>& index,
                     const std::map<std::string, WikidataEntityRecord>& wikidata,
                     const OdwnDatabase* odwn)
            : index_(index), wikidata_(wikidata), odwn_(odwn) {}

        std::vector<RetrievedLiteral> literals_of(const ResourceRef& r) const override {
            std::vector<RetrievedLiteral> out;
            auto it = index_.find(r);
            if (it != index_.end())
                for (const RetrievedLiteral* lit : it->second) out.push_back(*lit);
            return out;
        }

        std::vector<std::string> class_labels_of(const ResourceRef& r) const override {
            std::vector<std::string> out;
            auto it = wikidata_.find(r.resource_id);
            if (it == wikidata_.end()) return out;
            std::string lang = to_string(r.language);
            auto add_labels = [&](const std::vector<std::string>& targets) {
                for (const auto& target : targets) {
                    auto t = wikidata_.find(target);
                    if (t == wikidata_.end()) continue;
                    auto label = t->second.preferred_label.find(lang);
                    if (label != t->second.preferred_label.end()) out.push_back(label->second);
                }
            };
            add_labels(it->second.instance_of);
            add_labels(it->second.subclass_of);
            return out;
        }

        std::vector<SynsetInfo> synsets_of(const ResourceRef& r) const override {
            if (!odwn_ || r.dataset != Dataset::odwn) return {};
            return odwn_->synsets_of_entry(r.resource_id);
        }

    private:
        const std::map<ResourceRef, std::vector<const RetrievedLiteral*>>& index_;
        const std::map<std::string, WikidataEntityRecord>& wikidata_;
        const OdwnDatabase* odwn_;
    };

private:
    TermLexicon load_lexicon_() const {
        return load_lexicon(config_.lexicon_kg, config_.lexicon_inflections,
                            config_.lexicon_odwn_links);
    }

    void harvest_wikidata(const TermLexicon& lexicon) {
        const WikidataConfig& wd = *config_.wikidata;
        std::map<std::string, WikidataEntityRecord> records;  // id -> record (filtered set)
        for (Language lang : config_.languages) {
            for (const auto& form : lexicon.forms(lang)) {
                auto found = search_wikidata(fetcher_, wd.api_base, form, wd.cap);
                auto kept = filter_wikidata(found, wd.excluded_categories, form,
                                            wd.description_filter_languages);
                for (auto& rec : kept) {
                    auto [it, fresh] = records.emplace(rec.entity_id, rec);
                    if (!fresh && rec.incoming_link_rank > it->second.incoming_link_rank)
                        it->second = rec;
                }
            }
        }
        // curated related resources are part of the harvest even when the
        // search misses them
        std::vector<std::string> related_ids;
        for (const auto& term : lexicon.terms())
            for (const auto& r : term.related_resources)
                if (r.dataset == Dataset::wikidata && is_q_id(r.resource_id))
                    related_ids.push_back(r.resource_id);
        for (auto& rec : fetch_wikidata_entities(fetcher_, wd.api_base, related_ids))
            records.emplace(rec.entity_id, std::move(rec));

        std::vector<WikidataEntityRecord> ordered;
        for (const auto& [_, rec] : records) ordered.push_back(rec);
        nlohmann::json snapshot = nlohmann::json::array();
        for (const auto& rec : ordered) snapshot.push_back(wikidata_record_to_json(rec));
        csv::write_file(pipeline_detail::out_path(config_, "wikidata_records.json"),
                        nlohmann::json{{"records", snapshot}}.dump(2) + "\n");
        std::vector<Language> langs = config_.languages;
        pipeline_detail::write_literals(config_, "literals_wikidata.jsonl",
                                        extract_wikidata_literals(ordered, langs));
    }

    void harvest_aat() {
        const AatConfig& aat = *config_.aat;
        std::vector<RetrievedLiteral> literals;
        for (Language lang : config_.languages) {
            std::string path = lang == Language::en ? aat.subgraph_en : aat.subgraph_nl;
            if (path.empty()) continue;
            if (!aat.endpoint.empty())
                build_aat_subgraph(fetcher_, aat.endpoint, lang, path, aat.page_size);
            if (!std::filesystem::exists(path))
                throw AuditError("io-error", "aat subgraph file missing: " + path);
            rdf::Graph g = rdf::parse_turtle_file(path);
            auto part = extract_aat_literals(g, lang);
            literals.insert(literals.end(), part.begin(), part.end());
        }
        pipeline_detail::write_literals(config_, "literals_aat.jsonl", std::move(literals));
    }

    std::vector<ResourceProperties> collect_all_properties() {
        std::vector<ResourceProperties> props;
        auto append = [&props](std::vector<ResourceProperties> part) {
            props.insert(props.end(), std::make_move_iterator(part.begin()),
                         std::make_move_iterator(part.end()));
        };
        std::vector<WikidataEntityRecord> wd_records = load_wikidata_records();
        for (Language lang : config_.languages)
            append(collect_wikidata_properties(wd_records, lang));
        if (config_.aat) {
            for (Language lang : config_.languages) {
                std::string path =
                    lang == Language::en ? config_.aat->subgraph_en : config_.aat->subgraph_nl;
                if (path.empty() || !std::filesystem::exists(path)) continue;
                append(collect_aat_properties(rdf::parse_turtle_file(path), lang));
            }
        }
        if (config_.pwn_rdf)
            append(PwnDatabase::parse_file(*config_.pwn_rdf).collect_properties());
        if (config_.odwn_xml)
            append(OdwnDatabase::parse_file(*config_.odwn_xml).collect_properties());
        return props;
    }

    void write_manifest() {
        nlohmann::json outputs = nlohmann::json::object();
        std::vector<std::string> names;
        for (const auto& e : std::filesystem::directory_iterator(config_.out_dir)) {
            if (!e.is_regular_file()) continue;
            std::string name = e.path().filename().string();
            if (name == "manifest.json" || name == "checkpoint.json") continue;
            names.push_back(name);
        }
        std::sort(names.begin(), names.end());
        for (const auto& name : names)
            outputs[name] = Sha256::hash(csv::read_file(pipeline_detail::out_path(config_, name)));
        nlohmann::json manifest = {
            {"run_id", Sha256::hash(config_.raw.dump() + "\n" + std::to_string(seed_)).substr(0, 16)},
            {"tool_version", version()},
            {"seed", seed_},
            {"config", config_.raw},
            {"cache_hash", fetcher_.cache().content_hash()},
            {"outputs", outputs}};
        csv::write_file(pipeline_detail::out_path(config_, "manifest.json"),
                        manifest.dump(2) + "\n");
    }

    template <typename Fn>
    void run_stage(const std::string& name, Fn&& fn) {
        try {
            fn();
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(name, e.what());
        }
        mark_completed(name);
    }

    void mark_completed(const std::string& name) {
        std::set<std::string> done = completed_stages();
        done.insert(name);
        nlohmann::json j = {{"completed", done}};
        csv::write_file(pipeline_detail::out_path(config_, "checkpoint.json"), j.dump(2) + "\n");
    }

    static const char* version() { return "0.1.0"; }

    Config config_;
    net::CachingFetcher fetcher_;
    std::uint64_t seed_;
};

}  // namespace lodaudit
