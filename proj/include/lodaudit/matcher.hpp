#pragma once

// Term occurrence matching and hit aggregation. Matching is whole-word and
// case-insensitive; multi-word forms match as contiguous token sequences; a
// literal mentioning the same canonical term any number of times yields one
// hit; distinct property values yield distinct hits.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lodaudit/core.hpp"
#include "lodaudit/csv.hpp"
#include "lodaudit/lexicon.hpp"
#include "lodaudit/text.hpp"

namespace lodaudit {

struct Hit {
    RetrievedLiteral literal;
    std::string matched_form;   // lexicographically first matched form
    std::string canonical_form;
    Language language = Language::en;
};

struct HitAggregate {
    std::string canonical_form;  // inflected form instead when grouping is off
    Dataset dataset = Dataset::wikidata;
    Language language = Language::en;
    PathId path_id = PathId::wd_pref_label;
    std::uint64_t count = 0;

    bool operator==(const HitAggregate&) const = default;
};

// Forms of `forms` occurring in `text` as whole words / contiguous phrases.
inline std::set<std::string> match_term(std::string_view text_in,
                                        const std::set<std::string>& forms, Language) {
    std::vector<std::string> tokens = text::tokenize_lower(text_in);
    std::set<std::string> found;
    std::size_t max_n = 1;
    std::vector<std::pair<std::vector<std::string>, const std::string*>> needles;
    for (const auto& f : forms) {
        auto ft = text::tokenize_lower(f);
        if (ft.empty()) continue;
        max_n = std::max(max_n, ft.size());
        needles.emplace_back(std::move(ft), &f);
    }
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        for (const auto& [ft, f] : needles) {
            if (i + ft.size() > tokens.size()) continue;
            bool ok = true;
            for (std::size_t k = 0; k < ft.size(); ++k)
                if (tokens[i + k] != ft[k]) {
                    ok = false;
                    break;
                }
            if (ok) found.insert(*f);
        }
    }
    return found;
}

namespace detail {

// Shared n-gram scan against the lexicon form index.
inline std::map<std::string, std::string> canonical_matches(const std::vector<std::string>& tokens,
                                                            const TermLexicon& lexicon,
                                                            Language lang, std::size_t max_ngram) {
    std::map<std::string, std::string> by_canonical;  // canonical -> smallest matched form
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string window;
        for (std::size_t n = 1; n <= max_ngram && i + n <= tokens.size(); ++n) {
            if (n > 1) window += ' ';
            window += tokens[i + n - 1];
            const ContentiousTerm* t = lexicon.lookup_form(lang, window);
            if (!t) continue;
            auto it = by_canonical.find(t->canonical_form);
            if (it == by_canonical.end() || window < it->second)
                by_canonical[t->canonical_form] = window;
        }
    }
    return by_canonical;
}

inline std::size_t max_form_tokens(const TermLexicon& lexicon, Language lang) {
    std::size_t n = 1;
    for (const auto& f : lexicon.forms(lang))
        n = std::max(n, text::tokenize_lower(f).size());
    return n;
}

}  // namespace detail

// One hit per (literal, canonical term). The literal's language selects the
// lexicon index it is matched against.
inline std::vector<Hit> count_hits(const std::vector<RetrievedLiteral>& literals,
                                   const TermLexicon& lexicon) {
    std::vector<Hit> hits;
    std::size_t max_en = detail::max_form_tokens(lexicon, Language::en);
    std::size_t max_nl = detail::max_form_tokens(lexicon, Language::nl);
    for (const auto& lit : literals) {
        Language lang = lit.resource.language;
        auto tokens = text::tokenize_lower(lit.text);
        auto matches = detail::canonical_matches(tokens, lexicon, lang,
                                                 lang == Language::en ? max_en : max_nl);
        for (const auto& [canonical, form] : matches)
            hits.push_back(Hit{lit, form, canonical, lang});
    }
    return hits;
}

// Counts grouped by (term, dataset, language, property path). With
// group_by_canonical the inflected forms fold into the canonical row;
// otherwise rows are keyed by the matched form.
inline std::vector<HitAggregate> aggregate(const std::vector<Hit>& hits,
                                           bool group_by_canonical = true) {
    std::map<std::tuple<std::string, std::string, std::string, std::string>,
             std::pair<HitAggregate, std::uint64_t>>
        groups;
    for (const auto& h : hits) {
        const std::string& name = group_by_canonical ? h.canonical_form : h.matched_form;
        auto key = std::make_tuple(name, to_string(h.literal.property_path.dataset),
                                   to_string(h.language), to_string(h.literal.property_path.path_id));
        auto& slot = groups[key];
        slot.first = HitAggregate{name, h.literal.property_path.dataset, h.language,
                                  h.literal.property_path.path_id, 0};
        ++slot.second;
    }
    std::vector<HitAggregate> out;
    out.reserve(groups.size());
    for (auto& [key, slot] : groups) {
        slot.first.count = slot.second;
        out.push_back(slot.first);
    }
    return out;  // map iteration: already in (term, dataset, language, path) order
}

struct UncoveredRow {
    std::string dataset;  // "wikidata" | "aat" | "pwn" | "odwn" | "all"
    Language language = Language::en;
    std::string canonical;
};

struct Set1Result {
    std::vector<Hit> hits;
    std::vector<UncoveredRow> uncovered;           // terms without curated links
    std::vector<ResourceRef> missing_from_store;   // curated links with no literals
};

inline const std::vector<Dataset>& datasets_for(Language lang) {
    static const std::vector<Dataset> en = {Dataset::wikidata, Dataset::aat, Dataset::pwn};
    static const std::vector<Dataset> nl = {Dataset::wikidata, Dataset::aat, Dataset::odwn};
    return lang == Language::en ? en : nl;
}

// Set 1: hits inside the literals of curated related resources, plus the
// per-dataset report of terms without related resources.
inline Set1Result build_set1(const TermLexicon& lexicon, const LiteralStore& store) {
    Set1Result result;
    std::set<ResourceRef> related;
    for (const auto& t : lexicon.terms())
        for (const auto& r : t.related_resources) related.insert(r);

    std::set<ResourceRef> seen;
    std::vector<RetrievedLiteral> scoped;
    for (const auto& lit : store.literals())
        if (related.count(lit.resource)) {
            scoped.push_back(lit);
            seen.insert(lit.resource);
        }
    result.hits = count_hits(scoped, lexicon);

    for (const auto& r : related)
        if (!seen.count(r)) result.missing_from_store.push_back(r);

    for (const auto& t : lexicon.terms()) {
        bool any = false;
        for (Dataset d : datasets_for(t.language)) {
            bool covered = std::any_of(t.related_resources.begin(), t.related_resources.end(),
                                       [&](const ResourceRef& r) { return r.dataset == d; });
            if (covered) any = true;
            else result.uncovered.push_back({to_string(d), t.language, t.canonical_form});
        }
        if (!any) result.uncovered.push_back({"all", t.language, t.canonical_form});
    }
    std::sort(result.uncovered.begin(), result.uncovered.end(),
              [](const UncoveredRow& a, const UncoveredRow& b) {
                  return std::tie(a.dataset, a.language, a.canonical) <
                         std::tie(b.dataset, b.language, b.canonical);
              });
    return result;
}

// ------------------------------------------------------------------ exports

inline std::string aggregates_to_csv(const std::vector<HitAggregate>& aggs) {
    csv::Writer w({"canonical", "dataset", "language", "property_path", "count"});
    for (const auto& a : aggs)
        w.row({a.canonical_form, to_string(a.dataset), to_string(a.language),
               to_string(a.path_id), std::to_string(a.count)});
    return w.str();
}

inline nlohmann::json hit_to_json(const Hit& h) {
    return {{"canonical", h.canonical_form},
            {"matched_form", h.matched_form},
            {"dataset", to_string(h.literal.property_path.dataset)},
            {"language", to_string(h.language)},
            {"property_path", to_string(h.literal.property_path.path_id)},
            {"resource_id", h.literal.resource.resource_id},
            {"text", h.literal.text}};
}

inline std::string hits_to_jsonl(std::vector<Hit> hits) {
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return hit_to_json(a).dump() < hit_to_json(b).dump();
    });
    std::string out;
    for (const auto& h : hits) out += hit_to_json(h).dump() + "\n";
    return out;
}

inline std::string hits_to_csv(std::vector<Hit> hits) {
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return hit_to_json(a).dump() < hit_to_json(b).dump();
    });
    csv::Writer w({"canonical", "matched_form", "dataset", "language", "property_path",
                   "resource_id", "text"});
    for (const auto& h : hits)
        w.row({h.canonical_form, h.matched_form, to_string(h.literal.property_path.dataset),
               to_string(h.language), to_string(h.literal.property_path.path_id),
               h.literal.resource.resource_id, h.literal.text});
    return w.str();
}

}  // namespace lodaudit
