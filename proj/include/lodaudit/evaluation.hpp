#pragma once

// Annotation-round support: stratified quartile sampling of disambiguated
// resources, CSV round-trip of samples and judgments, and Krippendorff's
// alpha (nominal difference function) over the collected records.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lodaudit/core.hpp"
#include "lodaudit/csv.hpp"
#include "lodaudit/matcher.hpp"
#include "lodaudit/wsd.hpp"

namespace lodaudit {

// Unbiased bounded draw; mt19937_64 keeps sequences identical across
// platforms, unlike std::uniform_int_distribution.
inline std::uint64_t bounded_random(std::mt19937_64& rng, std::uint64_t n) {
    std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

struct SampleEntry {
    ResourceRef resource;
    std::string canonical;
    int quartile = 1;  // 1..4
};

struct AnnotationSample {
    std::string sample_id;
    std::vector<SampleEntry> entries;
    std::uint64_t rng_seed = 0;
};

struct AnnotationRecord {
    std::string sample_id;
    ResourceRef resource;
    std::string canonical;
    int quartile = 1;
    std::string annotator_id;
    bool relevant = false;
};

// Quartile of each canonical term by ascending Set-2 result count; ties stay
// in the lower quartile.
inline std::map<std::string, int> term_quartiles(
    const std::vector<std::pair<std::string, std::uint64_t>>& term_counts) {
    std::vector<std::pair<std::uint64_t, std::string>> sorted;
    for (const auto& [canonical, count] : term_counts) sorted.emplace_back(count, canonical);
    std::sort(sorted.begin(), sorted.end());
    std::map<std::string, int> out;
    std::size_t n = sorted.size();
    int prev_q = 1;
    for (std::size_t i = 0; i < n; ++i) {
        int q = int(i * 4 / n) + 1;
        if (i > 0 && sorted[i].first == sorted[i - 1].first) q = prev_q;
        out[sorted[i].second] = q;
        prev_q = q;
    }
    return out;
}

// Draws per_quartile resources (all of them when fewer) uniformly without
// replacement from each quartile of one dataset/language slice of Set 3.
inline AnnotationSample stratify(const std::vector<WsdScore>& set3, Dataset dataset, Language language,
                                 const std::vector<HitAggregate>& set2_aggregates,
                                 std::uint64_t seed, std::size_t per_quartile = 10) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& a : set2_aggregates)
        if (a.dataset == dataset && a.language == language) counts[a.canonical_form] += a.count;
    std::vector<std::pair<std::string, std::uint64_t>> term_counts(counts.begin(), counts.end());
    std::map<std::string, int> quartile_of = term_quartiles(term_counts);

    // candidate pool: included resources of this slice, deduplicated
    std::map<int, std::vector<SampleEntry>> pool;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& s : set3) {
        if (!s.included || s.resource.dataset != dataset || s.resource.language != language)
            continue;
        auto it = quartile_of.find(s.canonical_form);
        if (it == quartile_of.end()) continue;  // term absent from Set-2 aggregates
        if (!seen.emplace(s.canonical_form, s.resource.resource_id).second) continue;
        pool[it->second].push_back({s.resource, s.canonical_form, it->second});
    }

    AnnotationSample sample;
    sample.rng_seed = seed;
    sample.sample_id = "sample-" + to_string(dataset) + "-" + to_string(language) + "-" +
                       std::to_string(seed);
    std::mt19937_64 rng(seed);
    for (int q = 1; q <= 4; ++q) {
        auto& candidates = pool[q];
        std::sort(candidates.begin(), candidates.end(),
                  [](const SampleEntry& a, const SampleEntry& b) {
                      return std::tie(a.canonical, a.resource.resource_id) <
                             std::tie(b.canonical, b.resource.resource_id);
                  });
        std::size_t take = std::min(per_quartile, candidates.size());
        for (std::size_t i = 0; i < take; ++i) {  // partial Fisher-Yates
            std::size_t j = i + bounded_random(rng, candidates.size() - i);
            std::swap(candidates[i], candidates[j]);
            sample.entries.push_back(candidates[i]);
        }
    }
    return sample;
}

// ------------------------------------------------------------------- alpha

enum class RelevanceMode { agreement, majority };

struct AgreementReport {
    double alpha = 0.0;
    std::size_t n_items = 0;   // items with at least two ratings
    std::size_t n_raters = 0;  // distinct annotators
    double relevant_fraction = 0.0;           // per configured mode
    double relevant_fraction_agreement = 0.0; // among items all raters agree on
    double relevant_fraction_majority = 0.0;  // majority-pooled (ties dropped)
};

// alpha = 1 - D_o / D_e with the nominal difference function, computed from
// the coincidence matrix; items rated once contribute nothing.
inline AgreementReport krippendorff_alpha(const std::vector<AnnotationRecord>& records,
                                          RelevanceMode mode = RelevanceMode::agreement) {
    std::map<std::string, std::vector<bool>> items;  // resource key -> judgments
    std::set<std::string> raters;
    for (const auto& r : records) {
        items[to_string(r.resource.dataset) + "\x1f" + r.resource.resource_id + "\x1f" +
              to_string(r.resource.language)]
            .push_back(r.relevant);
        raters.insert(r.annotator_id);
    }
    if (raters.size() < 2)
        throw AuditError("undefined-alpha", "need at least two raters");

    // coincidence totals over pairable items (nominal scale: two categories)
    double o_agree = 0, o_disagree = 0;
    double n_rel = 0, n_not = 0;
    std::size_t pairable = 0;
    std::size_t agree_items = 0, agree_relevant = 0;
    std::size_t majority_items = 0, majority_relevant = 0;
    for (const auto& [key, ratings] : items) {
        std::size_t m = ratings.size();
        if (m < 2) continue;
        ++pairable;
        std::size_t rel = 0;
        for (bool b : ratings) rel += b;
        std::size_t noti = m - rel;
        // ordered pairs of ratings from different raters, weighted 1/(m-1)
        double w = 1.0 / double(m - 1);
        o_agree += w * double(rel * (rel - 1) + noti * (noti - 1));
        o_disagree += w * double(2 * rel * noti);
        n_rel += w * double(rel * (rel - 1) + rel * noti);
        n_not += w * double(noti * (noti - 1) + noti * rel);
        if (rel == m || noti == m) {
            ++agree_items;
            if (rel == m) ++agree_relevant;
        }
        if (rel * 2 != m) {
            ++majority_items;
            if (rel * 2 > m) ++majority_relevant;
        }
    }
    if (pairable == 0)
        throw AuditError("undefined-alpha", "no item carries two or more ratings");

    double n = o_agree + o_disagree;  // == n_rel + n_not
    AgreementReport rep;
    rep.n_items = pairable;
    rep.n_raters = raters.size();
    double d_o = o_disagree / n;
    double d_e = (n_rel * n_not + n_not * n_rel) / (n * (n - 1.0));
    rep.alpha = d_o == 0.0 ? 1.0 : 1.0 - d_o / d_e;
    rep.relevant_fraction_agreement =
        agree_items ? double(agree_relevant) / double(agree_items) : 0.0;
    rep.relevant_fraction_majority =
        majority_items ? double(majority_relevant) / double(majority_items) : 0.0;
    rep.relevant_fraction = mode == RelevanceMode::agreement ? rep.relevant_fraction_agreement
                                                             : rep.relevant_fraction_majority;
    return rep;
}

// --------------------------------------------------------------- CSV round trip

inline std::string sample_to_csv(const AnnotationSample& sample) {
    csv::Writer w({"sample_id", "dataset", "language", "resource_id", "canonical", "quartile"});
    for (const auto& e : sample.entries)
        w.row({sample.sample_id, to_string(e.resource.dataset), to_string(e.resource.language),
               e.resource.resource_id, e.canonical, std::to_string(e.quartile)});
    return w.str();
}

inline int parse_quartile(const std::string& s, const std::string& origin, std::size_t line) {
    int q = 0;
    try {
        q = std::stoi(s);
    } catch (...) {
    }
    if (q < 1 || q > 4)
        throw AuditError("csv-parse", origin + " line " + std::to_string(line) +
                                          ": quartile must be 1..4, got '" + s + "'");
    return q;
}

inline AnnotationSample sample_from_csv(const std::string& path) {
    AnnotationSample sample;
    for (const auto& row : csv::read_with_header(
             path, {"sample_id", "dataset", "language", "resource_id", "canonical", "quartile"})) {
        if (row.fields.size() != 6)
            throw AuditError("csv-parse",
                             path + " line " + std::to_string(row.line) + ": expected 6 fields");
        sample.sample_id = row.fields[0];
        int q = parse_quartile(row.fields[5], path, row.line);
        sample.entries.push_back({make_resource(dataset_from_string(row.fields[1]), row.fields[3],
                                                language_from_string(row.fields[2])),
                                  row.fields[4], q});
    }
    return sample;
}

// Annotated sample rows: the sample columns plus annotator_id and judgment.
inline std::vector<AnnotationRecord> import_annotations(const std::string& path) {
    std::vector<AnnotationRecord> out;
    std::set<std::pair<std::string, std::string>> seen;  // (resource, annotator)
    for (const auto& row : csv::read_with_header(
             path, {"sample_id", "dataset", "language", "resource_id", "canonical", "quartile",
                    "annotator_id", "judgment"})) {
        if (row.fields.size() != 8)
            throw AuditError("csv-parse",
                             path + " line " + std::to_string(row.line) + ": expected 8 fields");
        const std::string& judgment = row.fields[7];
        if (judgment != "relevant" && judgment != "not_relevant")
            throw AuditError("csv-parse", path + " line " + std::to_string(row.line) +
                                              ": judgment must be relevant|not_relevant, got '" +
                                              judgment + "'");
        if (row.fields[6].empty())
            throw AuditError("csv-parse",
                             path + " line " + std::to_string(row.line) + ": empty annotator_id");
        if (!seen.emplace(row.fields[3], row.fields[6]).second)
            throw AuditError("duplicate-annotation",
                             path + " line " + std::to_string(row.line) + ": duplicate (" +
                                 row.fields[3] + ", " + row.fields[6] + ")");
        AnnotationRecord rec;
        rec.sample_id = row.fields[0];
        rec.resource = make_resource(dataset_from_string(row.fields[1]), row.fields[3],
                                     language_from_string(row.fields[2]));
        rec.canonical = row.fields[4];
        rec.quartile = parse_quartile(row.fields[5], path, row.line);
        rec.annotator_id = row.fields[6];
        rec.relevant = judgment == "relevant";
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace lodaudit
