#pragma once

// Run configuration: one JSON document. Relative paths resolve against the
// config file's directory. A dataset section may be omitted to skip that
// dataset entirely.

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lodaudit/core.hpp"
#include "lodaudit/csv.hpp"

namespace lodaudit {

struct WikidataConfig {
    std::string api_base;
    std::size_t cap = 10000;
    std::string excluded_categories_file;
    std::set<std::string> excluded_categories;
    std::vector<std::string> description_filter_languages = {"en"};
};

struct AatConfig {
    std::string endpoint;     // empty: load prebuilt subgraph files instead
    std::string subgraph_en;  // harvest output / snapshot input
    std::string subgraph_nl;
    std::size_t page_size = 1000;
};

struct Config {
    nlohmann::json raw;  // as loaded, for the manifest

    std::vector<Language> languages;
    std::string lexicon_kg;
    std::string lexicon_inflections;
    std::string lexicon_odwn_links;
    std::string stopwords_en, stopwords_nl;
    std::string lemmas_en, lemmas_nl;
    std::string embeddings_en, embeddings_nl;
    std::string cache_dir;
    double rate_limit_per_sec = 5.0;
    std::optional<WikidataConfig> wikidata;
    std::optional<AatConfig> aat;
    std::optional<std::string> pwn_rdf;
    std::optional<std::string> odwn_xml;
    std::string marker_lexemes;
    std::string marker_rules;
    bool markers_scan_labels = false;
    double suggestion_floor = 0.85;
    double wsd_threshold = 0.5;
    std::size_t wsd_top_k = 10;
    std::size_t sample_per_quartile = 10;
    std::string out_dir;

    std::string stopwords(Language l) const { return l == Language::en ? stopwords_en : stopwords_nl; }
    std::string lemmas(Language l) const { return l == Language::en ? lemmas_en : lemmas_nl; }
    std::string embeddings(Language l) const {
        return l == Language::en ? embeddings_en : embeddings_nl;
    }
};

namespace config_detail {

inline std::string resolve(const std::filesystem::path& base, const std::string& p) {
    if (p.empty()) return p;
    std::filesystem::path path(p);
    return path.is_absolute() ? path.string() : (base / path).lexically_normal().string();
}

inline std::string need_string(const nlohmann::json& j, const std::string& key,
                               const std::string& where) {
    if (!j.contains(key) || !j[key].is_string() || j[key].get<std::string>().empty())
        throw AuditError("config-error", where + ": missing required string '" + key + "'");
    return j[key];
}

}  // namespace config_detail

inline Config load_config(const std::string& path) {
    using config_detail::need_string;
    using config_detail::resolve;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(csv::read_file(path));
    } catch (const AuditError&) {
        throw;
    } catch (const std::exception& e) {
        throw AuditError("config-error", path + ": " + e.what());
    }
    std::filesystem::path base = std::filesystem::absolute(path).parent_path();

    Config c;
    c.raw = j;
    if (!j.contains("languages") || !j["languages"].is_array() || j["languages"].empty())
        throw AuditError("config-error", "languages must be a non-empty array");
    for (const auto& l : j["languages"]) c.languages.push_back(language_from_string(l.get<std::string>()));

    const auto& lex = j.contains("lexicon") ? j["lexicon"] : nlohmann::json::object();
    c.lexicon_kg = resolve(base, need_string(lex, "kg", "lexicon"));
    c.lexicon_inflections = resolve(base, need_string(lex, "inflections", "lexicon"));
    c.lexicon_odwn_links = resolve(base, lex.value("odwn_links", ""));

    const auto& stop = j.contains("stopwords") ? j["stopwords"] : nlohmann::json::object();
    c.stopwords_en = resolve(base, need_string(stop, "en", "stopwords"));
    c.stopwords_nl = resolve(base, need_string(stop, "nl", "stopwords"));
    const auto& lem = j.contains("lemmas") ? j["lemmas"] : nlohmann::json::object();
    c.lemmas_en = resolve(base, need_string(lem, "en", "lemmas"));
    c.lemmas_nl = resolve(base, need_string(lem, "nl", "lemmas"));
    const auto& emb = j.contains("embeddings") ? j["embeddings"] : nlohmann::json::object();
    c.embeddings_en = resolve(base, need_string(emb, "en", "embeddings"));
    c.embeddings_nl = resolve(base, need_string(emb, "nl", "embeddings"));

    c.cache_dir = resolve(base, j.value("cache_dir", "cache"));
    c.rate_limit_per_sec = j.value("rate_limit_per_sec", 5.0);
    if (c.rate_limit_per_sec <= 0)
        throw AuditError("config-error", "rate_limit_per_sec must be positive");

    if (j.contains("wikidata")) {
        WikidataConfig w;
        w.api_base = need_string(j["wikidata"], "api_base", "wikidata");
        w.cap = j["wikidata"].value("cap", std::size_t{10000});
        if (w.cap > 10000)
            throw AuditError("config-error", "wikidata.cap exceeds the 10K API limit");
        w.excluded_categories_file =
            resolve(base, need_string(j["wikidata"], "excluded_categories_file", "wikidata"));
        nlohmann::json ex = nlohmann::json::parse(csv::read_file(w.excluded_categories_file));
        for (const auto& q : ex.at("excluded")) w.excluded_categories.insert(q.get<std::string>());
        if (!w.excluded_categories.count("Q13442814") || !w.excluded_categories.count("Q16521"))
            throw AuditError("config-error",
                             "excluded categories must include Q13442814 and Q16521");
        if (j["wikidata"].contains("description_filter_languages")) {
            w.description_filter_languages.clear();
            for (const auto& l : j["wikidata"]["description_filter_languages"])
                w.description_filter_languages.push_back(l.get<std::string>());
        }
        c.wikidata = std::move(w);
    }
    if (j.contains("aat")) {
        AatConfig a;
        a.endpoint = j["aat"].value("endpoint", "");
        a.subgraph_en = resolve(base, j["aat"].value("subgraph_en", ""));
        a.subgraph_nl = resolve(base, j["aat"].value("subgraph_nl", ""));
        a.page_size = j["aat"].value("page_size", std::size_t{1000});
        if (a.subgraph_en.empty() && a.subgraph_nl.empty())
            throw AuditError("config-error", "aat: subgraph_en/subgraph_nl paths are required");
        c.aat = std::move(a);
    }
    if (j.contains("pwn")) c.pwn_rdf = resolve(base, need_string(j["pwn"], "rdf", "pwn"));
    if (j.contains("odwn")) c.odwn_xml = resolve(base, need_string(j["odwn"], "xml", "odwn"));

    const auto& mk = j.contains("markers") ? j["markers"] : nlohmann::json::object();
    c.marker_lexemes = resolve(base, need_string(mk, "lexemes", "markers"));
    c.marker_rules = resolve(base, need_string(mk, "rules", "markers"));
    c.markers_scan_labels = mk.value("scan_labels", false);
    c.suggestion_floor = mk.value("suggestion_floor", 0.85);

    const auto& wsd = j.contains("wsd") ? j["wsd"] : nlohmann::json::object();
    c.wsd_threshold = wsd.value("threshold", 0.5);
    c.wsd_top_k = wsd.value("top_k", std::size_t{10});

    const auto& sample = j.contains("sample") ? j["sample"] : nlohmann::json::object();
    c.sample_per_quartile = sample.value("per_quartile", std::size_t{10});

    c.out_dir = resolve(base, j.value("out_dir", "out"));
    return c;
}

}  // namespace lodaudit
