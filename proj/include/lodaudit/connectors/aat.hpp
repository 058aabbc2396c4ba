#pragma once

// AAT subgraph harvesting over the SPARQL protocol: one paged CONSTRUCT per
// property path, duplicate-triple page-boundary detection, and canonical
// N-Triples output so re-runs are byte-identical. Extraction then walks the
// SKOS-XL label structure.

#include <set>
#include <string>
#include <vector>

#include "lodaudit/connectors/http.hpp"
#include "lodaudit/core.hpp"
#include "lodaudit/markers.hpp"
#include "lodaudit/rdf.hpp"

namespace lodaudit {

namespace aat_detail {

struct QuerySpec {
    const char* tag;        // leading comment, also the dispatch key for fixtures
    const char* construct;  // CONSTRUCT template
    const char* where;      // WHERE body with %LANG% placeholder
};

inline const std::vector<QuerySpec>& query_specs() {
    static const std::vector<QuerySpec> specs = {
        {"aat-prefLabel-literalForm",
         "?c xl:prefLabel ?l . ?l xl:literalForm ?f . ?l gvp:termKind ?tk . "
         "?l gvp:historicFlag ?hf .",
         "?c xl:prefLabel ?l . ?l xl:literalForm ?f . FILTER(langMatches(lang(?f), \"%LANG%\"))\n"
         "  OPTIONAL { ?l gvp:termKind ?tk } OPTIONAL { ?l gvp:historicFlag ?hf }"},
        {"aat-prefLabel-comment", "?c xl:prefLabel ?l . ?l rdfs:comment ?f .",
         "?c xl:prefLabel ?l . ?l rdfs:comment ?f . FILTER(langMatches(lang(?f), \"%LANG%\"))"},
        {"aat-altLabel-literalForm",
         "?c xl:altLabel ?l . ?l xl:literalForm ?f . ?l gvp:termKind ?tk . "
         "?l gvp:historicFlag ?hf .",
         "?c xl:altLabel ?l . ?l xl:literalForm ?f . FILTER(langMatches(lang(?f), \"%LANG%\"))\n"
         "  OPTIONAL { ?l gvp:termKind ?tk } OPTIONAL { ?l gvp:historicFlag ?hf }"},
        {"aat-altLabel-comment", "?c xl:altLabel ?l . ?l rdfs:comment ?f .",
         "?c xl:altLabel ?l . ?l rdfs:comment ?f . FILTER(langMatches(lang(?f), \"%LANG%\"))"},
        {"aat-scopeNote-value", "?c skos:scopeNote ?l . ?l rdf:value ?f .",
         "?c skos:scopeNote ?l . ?l rdf:value ?f . FILTER(langMatches(lang(?f), \"%LANG%\"))"},
    };
    return specs;
}

inline std::string build_query(const QuerySpec& spec, const std::string& lang, std::size_t limit,
                               std::size_t offset) {
    std::string where = spec.where;
    std::string::size_type pos;
    while ((pos = where.find("%LANG%")) != std::string::npos) where.replace(pos, 6, lang);
    return std::string("#") + spec.tag + "\n" +
           "PREFIX xl: <http://www.w3.org/2008/05/skos-xl#>\n"
           "PREFIX gvp: <http://vocab.getty.edu/ontology#>\n"
           "PREFIX skos: <http://www.w3.org/2004/02/skos/core#>\n"
           "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n"
           "PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>\n"
           "CONSTRUCT { " + std::string(spec.construct) + " }\n"
           "WHERE { " + where + " }\n"
           "ORDER BY ?c ?l ?f LIMIT " + std::to_string(limit) +
           " OFFSET " + std::to_string(offset) + "\n";
}

}  // namespace aat_detail

// Harvests the five label/scope-note paths for one language into an
// N-Triples file; returns the triple count. A duplicate triple across pages
// means the endpoint shifted under us, which is a hard error.
inline std::size_t build_aat_subgraph(net::CachingFetcher& fetcher, const std::string& endpoint,
                                      Language language, const std::string& out_path,
                                      std::size_t page_size = 1000) {
    std::string lang = to_string(language);
    rdf::Graph combined;
    std::set<std::string> global_seen;
    for (const auto& spec : aat_detail::query_specs()) {
        std::set<std::string> spec_seen;  // page-boundary check is per query
        for (std::size_t offset = 0;; offset += page_size) {
            std::string query = aat_detail::build_query(spec, lang, page_size, offset);
            net::HttpRequest req;
            req.method = "POST";
            req.url = endpoint;
            req.body = "query=" + net::url_encode(query);
            req.content_type = "application/x-www-form-urlencoded";
            req.accept = "application/n-triples";
            net::CachedResponse resp = fetcher.fetch(req);
            if (resp.status != 200)
                throw AuditError("network", std::string("sparql request '") + spec.tag +
                                                "' failed with status " +
                                                std::to_string(resp.status));
            rdf::Graph page = rdf::parse_turtle(resp.body);
            for (const auto& t : page.triples()) {
                std::string line = rdf::to_ntriples(t);
                if (!spec_seen.insert(line).second)
                    throw AuditError("page-boundary",
                                     std::string("duplicate triple across pages of '") + spec.tag +
                                         "': " + line);
                if (global_seen.insert(line).second) combined.add(t);
            }
            if (page.size() < page_size) break;
        }
    }
    csv::write_file(out_path, rdf::to_canonical_ntriples(combined));
    return combined.size();
}

namespace aat_detail {

inline std::string local_name(const std::string& iri_or_literal) {
    auto slash = iri_or_literal.find_last_of("/#");
    return slash == std::string::npos ? iri_or_literal : iri_or_literal.substr(slash + 1);
}

}  // namespace aat_detail

// Emits literals for the five paths; literals whose language tag does not
// match are skipped (the requested language is implied by the subgraph).
inline std::vector<RetrievedLiteral> extract_aat_literals(const rdf::Graph& g, Language language,
                                                          std::vector<std::string>* skipped = nullptr) {
    std::string lang = to_string(language);
    std::vector<RetrievedLiteral> out;
    auto emit_labels = [&](std::string_view label_pred, PathId form_path, PathId comment_path) {
        for (const rdf::Triple* t : g.with_predicate(label_pred)) {
            if (!t->object.is_iri() && t->object.kind != rdf::Term::Kind::blank) continue;
            std::string concept_id = rdf::Graph::subject_key(t->subject);
            std::string label_node = rdf::Graph::subject_key(t->object);
            ResourceRef res = make_resource(Dataset::aat, concept_id, language);
            for (const rdf::Term* f : g.objects(label_node, rdf::vocab::xl_literal_form)) {
                if (!f->is_literal()) continue;
                if (f->lang != lang) {
                    if (skipped && f->lang.empty()) skipped->push_back(label_node);
                    continue;
                }
                if (!f->value.empty())
                    out.push_back({res, {Dataset::aat, form_path}, f->value, 0});
            }
            for (const rdf::Term* c : g.objects(label_node, rdf::vocab::rdfs_comment)) {
                if (!c->is_literal() || c->lang != lang || c->value.empty()) continue;
                out.push_back({res, {Dataset::aat, comment_path}, c->value, 0});
            }
        }
    };
    emit_labels(rdf::vocab::xl_pref_label, PathId::aat_pref_literal_form, PathId::aat_pref_comment);
    emit_labels(rdf::vocab::xl_alt_label, PathId::aat_alt_literal_form, PathId::aat_alt_comment);
    for (const rdf::Triple* t : g.with_predicate(rdf::vocab::skos_scope_note)) {
        std::string concept_id = rdf::Graph::subject_key(t->subject);
        std::string note_node = rdf::Graph::subject_key(t->object);
        ResourceRef res = make_resource(Dataset::aat, concept_id, language);
        for (const rdf::Term* v : g.objects(note_node, rdf::vocab::rdf_value)) {
            if (!v->is_literal()) continue;
            if (v->lang != lang) {
                if (skipped && v->lang.empty()) skipped->push_back(note_node);
                continue;
            }
            if (!v->value.empty())
                out.push_back({res, {Dataset::aat, PathId::aat_scope_note}, v->value, 0});
        }
    }
    return out;
}

// termKind / historicFlag values of a concept's labels, normalized to their
// local names so the rule catalog can match on "Pejorative" etc.
inline std::vector<ResourceProperties> collect_aat_properties(const rdf::Graph& g,
                                                              Language language) {
    std::map<std::string, ResourceProperties> by_concept;
    auto walk = [&](std::string_view label_pred) {
        for (const rdf::Triple* t : g.with_predicate(label_pred)) {
            std::string concept_id = rdf::Graph::subject_key(t->subject);
            std::string label_node = rdf::Graph::subject_key(t->object);
            auto& props = by_concept[concept_id];
            props.resource = make_resource(Dataset::aat, concept_id, language);
            for (const rdf::Term* v : g.objects(label_node, rdf::vocab::gvp_term_kind))
                props.entries.emplace_back("gvp:termKind", aat_detail::local_name(v->value));
            for (const rdf::Term* v : g.objects(label_node, rdf::vocab::gvp_historic_flag))
                props.entries.emplace_back("gvp:historicFlag", aat_detail::local_name(v->value));
        }
    };
    walk(rdf::vocab::xl_pref_label);
    walk(rdf::vocab::xl_alt_label);
    std::vector<ResourceProperties> out;
    for (auto& [_, props] : by_concept)
        if (!props.entries.empty()) out.push_back(std::move(props));
    return out;
}

}  // namespace lodaudit
