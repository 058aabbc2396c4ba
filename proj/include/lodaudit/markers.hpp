#pragma once

// Contentiousness markers: implicit markers are phrases found inside literals
// (scanned over descriptive properties by default), explicit markers are
// machine-readable property/value pairs matched against a rule catalog. Both
// catalogs are data files, not code.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lodaudit/core.hpp"
#include "lodaudit/csv.hpp"
#include "lodaudit/lexicon.hpp"
#include "lodaudit/matcher.hpp"
#include "lodaudit/text.hpp"

namespace lodaudit {

struct MarkerLexeme {
    Language language = Language::en;
    std::string phrase;
    int category = 1;  // 1 offensiveness, 2 historical, 3 informal, 4 identity,
                       // 5 stereotypes, 6 usage suggestions
};

struct ExplicitMarkerRule {
    Dataset dataset = Dataset::wikidata;
    std::string property;  // e.g. P31, gvp:termKind, usage_domain, Pragmatics.connotation
    std::string value;     // expected value; "*" matches any
    int category = 1;
};

enum class MarkerKind { implicit_marker, explicit_marker };

inline std::string to_string(MarkerKind k) {
    return k == MarkerKind::implicit_marker ? "implicit" : "explicit";
}

struct Marker {
    ResourceRef resource;
    MarkerKind kind = MarkerKind::implicit_marker;
    int category = 1;
    std::string evidence_property;  // property path (implicit) or selector property (explicit)
    std::string evidence_text;      // matched phrase (implicit) or observed value (explicit)

    bool operator==(const Marker&) const = default;
};

// Parsed machine-readable properties of one resource (claims, term kinds,
// usage domains, pragmatics attributes).
struct ResourceProperties {
    ResourceRef resource;
    std::vector<std::pair<std::string, std::string>> entries;  // (property, value)
};

inline int parse_category(const std::string& s, const std::string& origin, std::size_t line) {
    int c = 0;
    try {
        c = std::stoi(s);
    } catch (...) {
    }
    if (c < 1 || c > 6)
        throw AuditError("catalog-parse", origin + " line " + std::to_string(line) +
                                              ": category must be 1..6, got '" + s + "'");
    return c;
}

inline std::vector<MarkerLexeme> load_marker_lexemes(const std::string& path) {
    std::vector<MarkerLexeme> out;
    for (const auto& row : csv::read_with_header(path, {"language", "phrase", "category"})) {
        if (row.fields.size() != 3)
            throw AuditError("catalog-parse",
                             path + " line " + std::to_string(row.line) + ": expected 3 fields");
        out.push_back({language_from_string(row.fields[0]), text::trim(row.fields[1]),
                       parse_category(row.fields[2], path, row.line)});
    }
    return out;
}

inline std::vector<ExplicitMarkerRule> load_marker_rules(const std::string& path) {
    std::vector<ExplicitMarkerRule> out;
    auto rows = csv::parse(csv::read_file(path));
    for (const auto& row : rows) {
        if (row.fields == std::vector<std::string>{"dataset", "selector_property",
                                                   "selector_value", "category"})
            continue;  // optional header
        if (row.fields.size() != 4)
            throw AuditError("catalog-parse",
                             path + " line " + std::to_string(row.line) + ": expected 4 fields");
        out.push_back({dataset_from_string(row.fields[0]), text::trim(row.fields[1]),
                       text::trim(row.fields[2]), parse_category(row.fields[3], path, row.line)});
    }
    return out;
}

// One marker per (resource literal, lexeme) phrase match. Labelling
// properties are skipped unless include_labels is set.
inline std::vector<Marker> scan_implicit(const std::vector<RetrievedLiteral>& literals,
                                         const std::vector<MarkerLexeme>& lexemes,
                                         bool include_labels = false) {
    std::vector<Marker> out;
    for (const auto& lit : literals) {
        if (!include_labels && !is_descriptive(lit.property_path.path_id)) continue;
        for (const auto& lex : lexemes) {
            if (lex.language != lit.resource.language) continue;
            if (!text::contains_phrase(lit.text, lex.phrase)) continue;
            out.push_back({lit.resource, MarkerKind::implicit_marker, lex.category,
                           to_string(lit.property_path.path_id), lex.phrase});
        }
    }
    return out;
}

// One marker per satisfied rule; a rule fires only when its property is
// present with the expected value ("*" accepts any value).
inline std::vector<Marker> scan_explicit(const std::vector<ResourceProperties>& resources,
                                         const std::vector<ExplicitMarkerRule>& rules) {
    std::vector<Marker> out;
    for (const auto& res : resources) {
        for (const auto& [property, value] : res.entries) {
            for (const auto& rule : rules) {
                if (rule.dataset != res.resource.dataset) continue;
                if (rule.property != property) continue;
                if (rule.value != "*" && rule.value != value) continue;
                out.push_back({res.resource, MarkerKind::explicit_marker, rule.category, property,
                               value});
            }
        }
    }
    return out;
}

struct SuggestionMatch {
    std::string suggestion;
    PathId property_path = PathId::wd_pref_label;
    std::string span;  // matched token span from the literal
    double similarity = 0.0;
};

// Fuzzy occurrences of a term's suggested alternatives inside a resource's
// literals: best token span with normalized edit similarity >= floor.
inline std::vector<SuggestionMatch> find_suggestions(
    const std::vector<RetrievedLiteral>& resource_literals, const ContentiousTerm& term,
    double similarity_floor = 0.85) {
    std::vector<SuggestionMatch> out;
    for (const auto& suggestion : term.suggestions) {
        std::vector<std::string> s_tokens = text::tokenize_lower(suggestion);
        if (s_tokens.empty()) continue;
        std::string s_joined;
        for (std::size_t i = 0; i < s_tokens.size(); ++i)
            s_joined += (i ? " " : "") + s_tokens[i];
        for (const auto& lit : resource_literals) {
            std::vector<std::string> tokens = text::tokenize_lower(lit.text);
            SuggestionMatch best;
            best.similarity = -1.0;
            for (std::size_t width = s_tokens.size() > 1 ? s_tokens.size() - 1 : 1;
                 width <= s_tokens.size() + 1; ++width) {
                if (width > tokens.size()) break;
                for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
                    std::string span;
                    for (std::size_t k = 0; k < width; ++k) span += (k ? " " : "") + tokens[i + k];
                    double sim = text::edit_similarity(span, s_joined);
                    if (sim > best.similarity) {
                        best.similarity = sim;
                        best.span = span;
                    }
                }
            }
            if (best.similarity >= similarity_floor) {
                best.suggestion = suggestion;
                best.property_path = lit.property_path.path_id;
                out.push_back(best);
            }
        }
    }
    return out;
}

struct CoverageRow {
    Dataset dataset = Dataset::wikidata;
    Language language = Language::en;
    std::size_t resources_with_term = 0;  // contentious preferred label / lemma
    std::size_t marked = 0;               // of those, resources with any marker
};

inline bool is_primary_label_path(PathId p) {
    return p == PathId::wd_pref_label || p == PathId::aat_pref_literal_form ||
           p == PathId::pwn_written_rep || p == PathId::odwn_lemma_written_form;
}

// Of the given resources, how many carry a contentious term in their
// preferred label / lemma, and how many of those have any marker.
inline std::vector<CoverageRow> label_coverage_report(const LiteralStore& store,
                                                      const std::vector<ResourceRef>& resources,
                                                      const TermLexicon& lexicon,
                                                      const std::vector<Marker>& markers) {
    std::set<ResourceRef> marked;
    for (const auto& m : markers) marked.insert(m.resource);

    std::map<std::pair<Dataset, Language>, CoverageRow> rows;
    std::set<ResourceRef> wanted(resources.begin(), resources.end());
    std::set<ResourceRef> with_term;
    std::map<Language, std::set<std::string>> forms_by_lang;
    for (Language lang : {Language::en, Language::nl}) {
        auto fs = lexicon.forms(lang);
        forms_by_lang[lang] = std::set<std::string>(fs.begin(), fs.end());
    }
    for (const auto& lit : store.literals()) {
        if (!is_primary_label_path(lit.property_path.path_id)) continue;
        if (!wanted.count(lit.resource) || with_term.count(lit.resource)) continue;
        Language lang = lit.resource.language;
        if (match_term(lit.text, forms_by_lang[lang], lang).empty()) continue;
        with_term.insert(lit.resource);
        auto& row = rows[{lit.resource.dataset, lang}];
        row.dataset = lit.resource.dataset;
        row.language = lang;
        ++row.resources_with_term;
        if (marked.count(lit.resource)) ++row.marked;
    }
    std::vector<CoverageRow> out;
    for (auto& [_, row] : rows) out.push_back(row);
    return out;
}

inline std::string markers_to_csv(std::vector<Marker> markers) {
    std::sort(markers.begin(), markers.end(), [](const Marker& a, const Marker& b) {
        return std::tie(a.resource, a.evidence_property, a.evidence_text, a.category) <
               std::tie(b.resource, b.evidence_property, b.evidence_text, b.category);
    });
    csv::Writer w({"resource_id", "dataset", "language", "kind", "category", "evidence_property",
                   "evidence_text"});
    for (const auto& m : markers)
        w.row({m.resource.resource_id, to_string(m.resource.dataset),
               to_string(m.resource.language), to_string(m.kind), std::to_string(m.category),
               m.evidence_property, m.evidence_text});
    return w.str();
}

}  // namespace lodaudit
