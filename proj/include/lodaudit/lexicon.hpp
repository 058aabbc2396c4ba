#pragma once

// Contentious-term lexicon: loads the terminology knowledge graph (SKOS-XL
// label resources), the inflection table, and the auxiliary ODWN link table,
// and exposes a per-language form index.
//
// KG conventions understood by the loader:
//   ?issue culco:hasContentiousLabel ?label   (term entries)
//   ?issue culco:hasSuggestedLabel ?sugg      (usage suggestions)
//   ?label xl:literalForm "term"@lang
//   ?label skos:relatedMatch <external resource>
// Files without culco triples are accepted too: every xl:Label with a
// literalForm is then a term.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lodaudit/core.hpp"
#include "lodaudit/csv.hpp"
#include "lodaudit/rdf.hpp"
#include "lodaudit/text.hpp"

namespace lodaudit {

struct ContentiousTerm {
    std::string canonical_form;           // lowercase
    Language language = Language::en;
    std::set<std::string> inflected_forms;  // includes canonical_form
    std::vector<std::string> suggestions;
    std::vector<ResourceRef> related_resources;
    std::string source_id;  // IRI of the label resource in the KG
};

class TermLexicon {
public:
    const std::vector<ContentiousTerm>& terms() const { return terms_; }

    const ContentiousTerm* find(Language lang, std::string_view canonical) const {
        auto it = canonical_index_.find(key(lang, canonical));
        return it == canonical_index_.end() ? nullptr : &terms_[it->second];
    }

    // Form index: inflected form -> owning term.
    const ContentiousTerm* lookup_form(Language lang, std::string_view form) const {
        auto it = form_index_.find(key(lang, form));
        return it == form_index_.end() ? nullptr : &terms_[it->second];
    }

    std::size_t form_count(Language lang) const {
        std::size_t n = 0;
        for (const auto& [k, _] : form_index_)
            if (k.starts_with(to_string(lang) + "\x1f")) ++n;
        return n;
    }

    std::vector<std::string> forms(Language lang) const {
        std::vector<std::string> out;
        std::string prefix = to_string(lang) + "\x1f";
        for (const auto& [k, _] : form_index_)
            if (k.starts_with(prefix)) out.push_back(k.substr(prefix.size()));
        return out;  // map order: already sorted
    }

    void add_term(ContentiousTerm term) {
        if (term.canonical_form.empty())
            throw AuditError("invalid-term", "empty canonical form");
        term.inflected_forms.insert(term.canonical_form);
        std::size_t idx = terms_.size();
        auto [it, fresh] = canonical_index_.emplace(key(term.language, term.canonical_form), idx);
        if (!fresh)
            throw AuditError("duplicate-term", "canonical form '" + term.canonical_form +
                                                   "' declared twice for " +
                                                   to_string(term.language));
        for (const auto& f : term.inflected_forms)
            index_form(term.language, f, idx, term.canonical_form);
        terms_.push_back(std::move(term));
    }

    void add_form(Language lang, const std::string& canonical, const std::string& form) {
        auto it = canonical_index_.find(key(lang, canonical));
        if (it == canonical_index_.end())
            throw AuditError("unknown-term", "inflection for unknown canonical '" + canonical +
                                                 "' (" + to_string(lang) + ")");
        if (terms_[it->second].inflected_forms.insert(form).second)
            index_form(lang, form, it->second, canonical);
    }

    nlohmann::json to_json() const {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : terms_) {
            nlohmann::json rr = nlohmann::json::array();
            for (const auto& r : t.related_resources)
                rr.push_back({{"dataset", to_string(r.dataset)},
                              {"resource_id", r.resource_id},
                              {"language", to_string(r.language)}});
            terms.push_back({{"canonical_form", t.canonical_form},
                             {"language", to_string(t.language)},
                             {"inflected_forms", t.inflected_forms},
                             {"suggestions", t.suggestions},
                             {"related_resources", rr},
                             {"source_id", t.source_id}});
        }
        return {{"terms", terms}};
    }

    static TermLexicon from_json(const nlohmann::json& j) {
        TermLexicon lex;
        for (const auto& tj : j.at("terms")) {
            ContentiousTerm t;
            t.canonical_form = tj.at("canonical_form");
            t.language = language_from_string(tj.at("language").get<std::string>());
            for (const auto& f : tj.at("inflected_forms"))
                t.inflected_forms.insert(f.get<std::string>());
            for (const auto& s : tj.at("suggestions")) t.suggestions.push_back(s);
            for (const auto& rj : tj.at("related_resources"))
                t.related_resources.push_back(
                    make_resource(dataset_from_string(rj.at("dataset").get<std::string>()),
                                  rj.at("resource_id").get<std::string>(),
                                  language_from_string(rj.at("language").get<std::string>())));
            t.source_id = tj.at("source_id");
            lex.add_term(std::move(t));
        }
        return lex;
    }

private:
    static std::string key(Language lang, std::string_view s) {
        return to_string(lang) + "\x1f" + std::string(s);
    }

    void index_form(Language lang, const std::string& form, std::size_t idx,
                    const std::string& canonical) {
        auto [it, fresh] = form_index_.emplace(key(lang, form), idx);
        if (!fresh && it->second != idx)
            throw AuditError("form-collision",
                             "form '" + form + "' (" + to_string(lang) + ") maps to both '" +
                                 terms_[it->second].canonical_form + "' and '" + canonical + "'");
    }

    std::vector<ContentiousTerm> terms_;
    std::map<std::string, std::size_t> canonical_index_;
    std::map<std::string, std::size_t> form_index_;
};

namespace detail {

inline std::string clean_form(const std::string& raw, std::string_view context) {
    std::string trimmed = text::trim(raw);
    if (trimmed.empty())
        throw AuditError("invalid-form", std::string(context) + ": empty form after trimming");
    return text::lower(trimmed);
}

inline Dataset dataset_of_iri(const std::string& iri) {
    if (iri.find("wikidata.org") != std::string::npos) return Dataset::wikidata;
    if (iri.find("vocab.getty.edu") != std::string::npos) return Dataset::aat;
    if (iri.find("wordnet") != std::string::npos) return Dataset::pwn;
    throw AuditError("unknown-dataset",
                     "cannot infer dataset of related resource <" + iri + ">");
}

// Wikidata resources are tracked by their bare Q-identifier.
inline std::string normalize_resource_id(Dataset d, const std::string& iri) {
    if (d != Dataset::wikidata) return iri;
    auto slash = iri.find_last_of('/');
    std::string id = slash == std::string::npos ? iri : iri.substr(slash + 1);
    if (id.size() < 2 || id[0] != 'Q')
        throw AuditError("invalid-resource", "not a wikidata entity IRI: <" + iri + ">");
    return id;
}

}  // namespace detail

// Loads the KG, the inflection table (header canonical,language,form), and an
// optional ODWN link table (header canonical,language,resource_id).
inline TermLexicon load_lexicon(const std::string& kg_path, const std::string& inflections_path,
                                const std::string& odwn_links_path = {}) {
    rdf::Graph g = rdf::parse_turtle_file(kg_path);

    // Term label resources: via culco:hasContentiousLabel when present,
    // otherwise every typed xl:Label.
    std::vector<std::pair<std::string, std::string>> entries;  // (issue, label)
    for (const rdf::Triple* t : g.with_predicate(rdf::vocab::culco_has_contentious_label))
        entries.emplace_back(rdf::Graph::subject_key(t->subject), t->object.value);
    if (entries.empty())
        for (const auto& label : g.subjects_of_type(std::string(rdf::vocab::xl_label_type)))
            entries.emplace_back("", label);
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });

    std::vector<ContentiousTerm> staged;
    std::map<std::string, std::size_t> by_key;  // lang\x1fcanonical -> index
    auto staged_key = [](Language l, const std::string& c) {
        return to_string(l) + "\x1f" + c;
    };

    for (const auto& [issue, label] : entries) {
        const rdf::Term* form = g.literal(label, rdf::vocab::xl_literal_form);
        if (!form) throw AuditError("invalid-term", "<" + label + "> has no xl:literalForm");
        if (form->lang.empty())
            throw AuditError("unknown-language", "<" + label + ">: literal form without language tag");
        ContentiousTerm term;
        term.language = language_from_string(form->lang);
        term.canonical_form = detail::clean_form(form->value, label);
        term.inflected_forms.insert(term.canonical_form);
        term.source_id = label;

        for (const rdf::Term* o : g.objects(label, rdf::vocab::skos_related_match)) {
            if (!o->is_iri()) continue;
            Dataset d = detail::dataset_of_iri(o->value);
            Language rl = d == Dataset::pwn ? Language::en : term.language;
            term.related_resources.push_back(
                make_resource(d, detail::normalize_resource_id(d, o->value), rl));
        }
        if (!issue.empty()) {
            for (const rdf::Term* s : g.objects(issue, rdf::vocab::culco_has_suggested_label)) {
                const rdf::Term* sf =
                    s->is_literal() ? s : g.literal(s->value, rdf::vocab::xl_literal_form);
                if (sf) term.suggestions.push_back(text::trim(sf->value));
            }
            std::sort(term.suggestions.begin(), term.suggestions.end());
        }
        auto [it, fresh] = by_key.emplace(staged_key(term.language, term.canonical_form),
                                          staged.size());
        if (!fresh)
            throw AuditError("duplicate-term", "canonical form '" + term.canonical_form +
                                                   "' declared twice for " +
                                                   to_string(term.language));
        staged.push_back(std::move(term));
    }

    auto staged_term = [&](Language lang, const std::string& canonical, const std::string& where,
                           std::size_t line) -> ContentiousTerm& {
        auto it = by_key.find(staged_key(lang, canonical));
        if (it == by_key.end())
            throw AuditError("unknown-term", where + " line " + std::to_string(line) +
                                                 ": unknown canonical '" + canonical + "' (" +
                                                 to_string(lang) + ")");
        return staged[it->second];
    };

    for (const auto& row : csv::read_with_header(inflections_path,
                                                 {"canonical", "language", "form"})) {
        if (row.fields.size() != 3)
            throw AuditError("csv-parse", inflections_path + " line " + std::to_string(row.line) +
                                              ": expected 3 fields");
        Language lang = language_from_string(row.fields[1]);
        staged_term(lang, detail::clean_form(row.fields[0], "inflections"), inflections_path,
                    row.line)
            .inflected_forms.insert(detail::clean_form(row.fields[2], "inflections"));
    }

    if (!odwn_links_path.empty()) {
        for (const auto& row : csv::read_with_header(odwn_links_path,
                                                     {"canonical", "language", "resource_id"})) {
            if (row.fields.size() != 3)
                throw AuditError("csv-parse", odwn_links_path + " line " +
                                                  std::to_string(row.line) + ": expected 3 fields");
            Language lang = language_from_string(row.fields[1]);
            if (lang != Language::nl)
                throw AuditError("invalid-resource", odwn_links_path + " line " +
                                                         std::to_string(row.line) +
                                                         ": odwn links must be Dutch");
            staged_term(lang, detail::clean_form(row.fields[0], "odwn links"), odwn_links_path,
                        row.line)
                .related_resources.push_back(
                    make_resource(Dataset::odwn, text::trim(row.fields[2]), Language::nl));
        }
    }

    TermLexicon lex;
    for (auto& term : staged) {
        std::sort(term.related_resources.begin(), term.related_resources.end());
        term.related_resources.erase(
            std::unique(term.related_resources.begin(), term.related_resources.end()),
            term.related_resources.end());
        lex.add_term(std::move(term));
    }
    return lex;
}

// Curated links of one term, optionally filtered by dataset, sorted by id.
inline std::vector<ResourceRef> related_resources(const TermLexicon& lexicon,
                                                  const std::string& canonical, Language language,
                                                  std::optional<Dataset> dataset = {}) {
    const ContentiousTerm* t = lexicon.find(language, canonical);
    if (!t)
        throw AuditError("unknown-term",
                         "unknown canonical term '" + canonical + "' (" + to_string(language) + ")");
    std::vector<ResourceRef> out;
    for (const auto& r : t->related_resources)
        if (!dataset || r.dataset == *dataset) out.push_back(r);
    std::sort(out.begin(), out.end(), [](const ResourceRef& a, const ResourceRef& b) {
        return a.resource_id < b.resource_id;
    });
    return out;
}

}  // namespace lodaudit
