#pragma once

// Report emission: the hit matrix across the three sets, top-term rankings
// with per-property breakdowns (stacked-bar plot data), and the run manifest.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lodaudit/core.hpp"
#include "lodaudit/csv.hpp"
#include "lodaudit/matcher.hpp"

namespace lodaudit {

struct HitMatrixCell {
    bool applicable = true;  // pwn carries no Dutch, odwn no English
    std::uint64_t count = 0;
};

struct HitMatrixRow {
    Dataset dataset = Dataset::wikidata;
    PathId path_id = PathId::wd_pref_label;
    // column order: set2 en, set2 nl, set3 en, set3 nl, set1 en, set1 nl
    std::array<HitMatrixCell, 6> cells;
};

struct HitMatrix {
    std::vector<HitMatrixRow> rows;  // 15 rows in dataset/path order
};

inline HitMatrix build_hit_matrix(const std::vector<HitAggregate>& set1,
                                  const std::vector<HitAggregate>& set2,
                                  const std::vector<HitAggregate>& set3) {
    std::map<std::tuple<Dataset, PathId, Language, int>, std::uint64_t> sums;
    auto accumulate = [&](const std::vector<HitAggregate>& aggs, int set_index) {
        for (const auto& a : aggs)
            sums[{a.dataset, a.path_id, a.language, set_index}] += a.count;
    };
    accumulate(set2, 2);
    accumulate(set3, 3);
    accumulate(set1, 1);

    HitMatrix matrix;
    for (Dataset d : {Dataset::wikidata, Dataset::aat, Dataset::pwn, Dataset::odwn}) {
        for (PathId p : paths_of(d)) {
            HitMatrixRow row;
            row.dataset = d;
            row.path_id = p;
            const std::array<std::pair<int, Language>, 6> columns = {
                std::pair{2, Language::en}, {2, Language::nl}, {3, Language::en},
                {3, Language::nl},          {1, Language::en}, {1, Language::nl}};
            for (std::size_t i = 0; i < columns.size(); ++i) {
                auto [set_index, lang] = columns[i];
                if (!valid_dataset_language(d, lang)) {
                    row.cells[i].applicable = false;
                    continue;
                }
                auto it = sums.find({d, p, lang, set_index});
                row.cells[i].count = it == sums.end() ? 0 : it->second;
            }
            matrix.rows.push_back(row);
        }
    }
    return matrix;
}

inline std::string hit_matrix_to_csv(const HitMatrix& matrix) {
    csv::Writer w({"dataset", "property_path", "set2_en", "set2_nl", "set3_en", "set3_nl",
                   "set1_en", "set1_nl"});
    for (const auto& row : matrix.rows) {
        std::vector<std::string> fields = {to_string(row.dataset), to_string(row.path_id)};
        for (const auto& cell : row.cells)
            fields.push_back(cell.applicable ? std::to_string(cell.count) : "NA");
        w.row(fields);
    }
    return w.str();
}

inline nlohmann::json hit_matrix_to_json(const HitMatrix& matrix) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : matrix.rows) {
        nlohmann::json cells = nlohmann::json::object();
        const char* names[6] = {"set2_en", "set2_nl", "set3_en", "set3_nl", "set1_en", "set1_nl"};
        for (std::size_t i = 0; i < 6; ++i)
            cells[names[i]] =
                row.cells[i].applicable ? nlohmann::json(row.cells[i].count) : nlohmann::json();
        rows.push_back({{"dataset", to_string(row.dataset)},
                        {"property_path", to_string(row.path_id)},
                        {"cells", cells}});
    }
    return {{"rows", rows}};
}

struct TopTermEntry {
    std::string canonical;
    std::uint64_t total = 0;
    std::map<std::string, std::uint64_t> by_property;  // path name -> count
};

// Terms of one dataset/language by total hits descending, ties by canonical
// ascending; per-property counts feed the stacked-bar plots.
inline std::vector<TopTermEntry> top_terms(const std::vector<HitAggregate>& aggregates,
                                           Dataset dataset, Language language,
                                           std::size_t k = 10) {
    std::map<std::string, TopTermEntry> by_term;
    for (const auto& a : aggregates) {
        if (a.dataset != dataset || a.language != language) continue;
        auto& entry = by_term[a.canonical_form];
        entry.canonical = a.canonical_form;
        entry.total += a.count;
        entry.by_property[to_string(a.path_id)] += a.count;
    }
    std::vector<TopTermEntry> out;
    for (auto& [_, e] : by_term) out.push_back(std::move(e));
    std::sort(out.begin(), out.end(), [](const TopTermEntry& a, const TopTermEntry& b) {
        if (a.total != b.total) return a.total > b.total;
        return a.canonical < b.canonical;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

inline nlohmann::json top_terms_to_json(const std::vector<TopTermEntry>& entries, Dataset dataset,
                                        Language language) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& e : entries)
        terms.push_back(
            {{"canonical", e.canonical}, {"total", e.total}, {"by_property", e.by_property}});
    return {{"dataset", to_string(dataset)}, {"language", to_string(language)}, {"terms", terms}};
}

}  // namespace lodaudit
