#pragma once

// Wikidata entity-search harvesting over the MediaWiki Action API: paged
// search ranked by incoming links, batched entity hydration, the three
// result filters, and literal extraction for the three property paths.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lodaudit/connectors/http.hpp"
#include "lodaudit/core.hpp"
#include "lodaudit/markers.hpp"
#include "lodaudit/text.hpp"

namespace lodaudit {

struct WikidataEntityRecord {
    std::string entity_id;                                    // Q-identifier
    std::map<std::string, std::string> preferred_label;       // language -> label
    std::map<std::string, std::vector<std::string>> alternative_labels;
    std::map<std::string, std::string> descriptions;
    std::vector<std::string> instance_of;                     // P31 targets
    std::vector<std::string> subclass_of;                     // P279 targets
    std::vector<std::string> usage_instructions;              // P2559 literals
    int incoming_link_rank = 0;  // higher = more incoming links (search order)
    std::int64_t retrieved_at = 0;

    bool operator==(const WikidataEntityRecord&) const = default;
};

inline bool is_q_id(const std::string& s) {
    if (s.size() < 2 || s[0] != 'Q') return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

namespace wikidata_detail {

inline std::vector<std::string> claim_entity_ids(const nlohmann::json& entity,
                                                 const std::string& property) {
    std::vector<std::string> out;
    const auto claims = entity.find("claims");
    if (claims == entity.end()) return out;
    const auto list = claims->find(property);
    if (list == claims->end()) return out;
    for (const auto& claim : *list) {
        const auto* dv = claim.contains("mainsnak") && claim["mainsnak"].contains("datavalue")
                             ? &claim["mainsnak"]["datavalue"]
                             : nullptr;
        if (!dv || !dv->contains("value")) continue;
        const auto& v = (*dv)["value"];
        if (v.is_object() && v.contains("id")) out.push_back(v["id"].get<std::string>());
        else if (v.is_object() && v.contains("text")) out.push_back(v["text"].get<std::string>());
        else if (v.is_string()) out.push_back(v.get<std::string>());
    }
    return out;
}

inline WikidataEntityRecord parse_entity(const std::string& id, const nlohmann::json& entity,
                                         const std::vector<std::string>& languages) {
    WikidataEntityRecord rec;
    rec.entity_id = id;
    for (const auto& lang : languages) {
        if (entity.contains("labels") && entity["labels"].contains(lang))
            rec.preferred_label[lang] = entity["labels"][lang]["value"].get<std::string>();
        if (entity.contains("aliases") && entity["aliases"].contains(lang))
            for (const auto& alias : entity["aliases"][lang])
                rec.alternative_labels[lang].push_back(alias["value"].get<std::string>());
        if (entity.contains("descriptions") && entity["descriptions"].contains(lang))
            rec.descriptions[lang] = entity["descriptions"][lang]["value"].get<std::string>();
    }
    rec.instance_of = claim_entity_ids(entity, "P31");
    rec.subclass_of = claim_entity_ids(entity, "P279");
    rec.usage_instructions = claim_entity_ids(entity, "P2559");
    return rec;
}

}  // namespace wikidata_detail

// Search one term form, hydrate the hits, and rank them by the search
// service's incoming-links order: rank n-1 for the first hit down to 0.
// Every page and every entity batch goes through the raw-response cache.
inline std::vector<WikidataEntityRecord> search_wikidata(net::CachingFetcher& fetcher,
                                                         const std::string& api_base,
                                                         const std::string& term_form,
                                                         std::size_t cap,
                                                         const std::vector<std::string>& languages =
                                                             {"en", "nl"}) {
    if (cap > 10000)
        throw AuditError("bad-request", "search cap exceeds the 10K API limit");
    std::vector<std::string> ids;
    std::size_t offset = 0;
    const std::size_t page = 500;
    while (ids.size() < cap) {
        std::size_t want = std::min(page, cap - ids.size());
        net::HttpRequest req;
        req.url = api_base + "?action=query&list=search&format=json&srnamespace=0" +
                  "&srsort=incoming_links_desc&srlimit=" + std::to_string(want) +
                  "&sroffset=" + std::to_string(offset) +
                  "&srsearch=" + net::url_encode(term_form);
        net::CachedResponse resp = fetcher.fetch(req);
        if (resp.status != 200)
            throw AuditError("network", "search request failed with status " +
                                            std::to_string(resp.status) + ": " + req.url);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(resp.body);
        } catch (const std::exception& e) {
            throw AuditError("malformed-response",
                             std::string("search payload is not JSON: ") + e.what());
        }
        if (!j.contains("query") || !j["query"].contains("search"))
            throw AuditError("malformed-response", "search payload misses query.search: " + req.url);
        std::size_t before = ids.size();
        for (const auto& hit : j["query"]["search"]) {
            std::string title = hit.value("title", "");
            if (is_q_id(title) && ids.size() < cap) ids.push_back(title);
        }
        bool has_continue = j.contains("continue");
        if (ids.size() == before || !has_continue) break;
        offset += want;
    }

    // hydrate in stable batches of 50 (wbgetentities limit)
    std::map<std::string, WikidataEntityRecord> by_id;
    std::string langs;
    for (const auto& l : languages) langs += (langs.empty() ? "" : "|") + l;
    std::vector<std::string> unique_ids = ids;
    std::sort(unique_ids.begin(), unique_ids.end());
    unique_ids.erase(std::unique(unique_ids.begin(), unique_ids.end()), unique_ids.end());
    for (std::size_t i = 0; i < unique_ids.size(); i += 50) {
        std::string batch;
        for (std::size_t k = i; k < std::min(i + 50, unique_ids.size()); ++k)
            batch += (batch.empty() ? "" : "|") + unique_ids[k];
        net::HttpRequest req;
        req.url = api_base + "?action=wbgetentities&format=json&props=labels|aliases|descriptions|claims" +
                  "&languages=" + langs + "&ids=" + net::url_encode(batch);
        net::CachedResponse resp = fetcher.fetch(req);
        if (resp.status != 200)
            throw AuditError("network", "entity request failed with status " +
                                            std::to_string(resp.status));
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(resp.body);
        } catch (const std::exception& e) {
            throw AuditError("malformed-response",
                             std::string("entity payload is not JSON: ") + e.what());
        }
        if (!j.contains("entities"))
            throw AuditError("malformed-response", "entity payload misses entities");
        for (const auto& [id, entity] : j["entities"].items()) {
            WikidataEntityRecord rec = wikidata_detail::parse_entity(id, entity, languages);
            rec.retrieved_at = resp.fetched_at;
            by_id[id] = std::move(rec);
        }
    }

    std::vector<WikidataEntityRecord> out;
    std::set<std::string> emitted;
    for (const auto& id : ids) {
        if (!emitted.insert(id).second) continue;
        auto it = by_id.find(id);
        if (it == by_id.end()) continue;  // deleted entity between search and hydration
        it->second.incoming_link_rank = int(ids.size() - out.size() - 1);
        out.push_back(it->second);
    }
    return out;
}

// Fetches the given entity ids directly (curated related resources that the
// term search may not surface).
inline std::vector<WikidataEntityRecord> fetch_wikidata_entities(
    net::CachingFetcher& fetcher, const std::string& api_base,
    const std::vector<std::string>& entity_ids,
    const std::vector<std::string>& languages = {"en", "nl"}) {
    std::vector<WikidataEntityRecord> out;
    std::string langs;
    for (const auto& l : languages) langs += (langs.empty() ? "" : "|") + l;
    std::vector<std::string> ids = entity_ids;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (std::size_t i = 0; i < ids.size(); i += 50) {
        std::string batch;
        for (std::size_t k = i; k < std::min(i + 50, ids.size()); ++k)
            batch += (batch.empty() ? "" : "|") + ids[k];
        net::HttpRequest req;
        req.url = api_base + "?action=wbgetentities&format=json&props=labels|aliases|descriptions|claims" +
                  "&languages=" + langs + "&ids=" + net::url_encode(batch);
        net::CachedResponse resp = fetcher.fetch(req);
        if (resp.status != 200)
            throw AuditError("network",
                             "entity request failed with status " + std::to_string(resp.status));
        nlohmann::json j = nlohmann::json::parse(resp.body, nullptr, false);
        if (j.is_discarded() || !j.contains("entities"))
            throw AuditError("malformed-response", "entity payload misses entities");
        for (const auto& [id, entity] : j["entities"].items()) {
            if (entity.contains("missing")) continue;
            WikidataEntityRecord rec = wikidata_detail::parse_entity(id, entity, languages);
            rec.retrieved_at = resp.fetched_at;
            out.push_back(std::move(rec));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.entity_id < b.entity_id; });
    return out;
}

// The three relevance filters, applied in order, order-preserving:
//  (a) instance/subclass closure intersects the excluded categories;
//  (b) a description in one of `description_languages` (default: English
//      only) mentions "scholarly article" / "scientific article";
//  (c) humans (P31=Q5) whose preferred label contains the capitalized form.
inline std::vector<WikidataEntityRecord> filter_wikidata(
    const std::vector<WikidataEntityRecord>& records, const std::set<std::string>& excluded_categories,
    const std::string& term_form,
    const std::vector<std::string>& description_languages = {"en"}) {
    if (!excluded_categories.count("Q13442814") || !excluded_categories.count("Q16521"))
        throw AuditError("config-error",
                         "excluded categories must include Q13442814 and Q16521");
    std::string capitalized = text::capitalize_first(term_form);
    std::vector<WikidataEntityRecord> out;
    for (const auto& rec : records) {
        bool drop = false;
        for (const auto& q : rec.instance_of)
            if (excluded_categories.count(q)) drop = true;
        for (const auto& q : rec.subclass_of)
            if (excluded_categories.count(q)) drop = true;
        if (!drop) {
            for (const auto& lang : description_languages) {
                auto desc = rec.descriptions.find(lang);
                if (desc == rec.descriptions.end()) continue;
                std::string lower = text::lower(desc->second);
                if (lower.find("scholarly article") != std::string::npos ||
                    lower.find("scientific article") != std::string::npos)
                    drop = true;
            }
        }
        if (!drop) {
            bool human = std::find(rec.instance_of.begin(), rec.instance_of.end(), "Q5") !=
                         rec.instance_of.end();
            if (human)
                for (const auto& [lang, label] : rec.preferred_label)
                    if (text::contains_phrase(label, capitalized, /*fold_case=*/false)) drop = true;
        }
        if (!drop) out.push_back(rec);
    }
    return out;
}

inline std::vector<RetrievedLiteral> extract_wikidata_literals(
    const std::vector<WikidataEntityRecord>& records,
    const std::vector<Language>& languages = {Language::en, Language::nl}) {
    std::vector<RetrievedLiteral> out;
    for (const auto& rec : records) {
        for (Language lang : languages) {
            std::string tag = to_string(lang);
            ResourceRef res = make_resource(Dataset::wikidata, rec.entity_id, lang);
            auto pl = rec.preferred_label.find(tag);
            if (pl != rec.preferred_label.end() && !pl->second.empty())
                out.push_back({res, {Dataset::wikidata, PathId::wd_pref_label}, pl->second,
                               rec.retrieved_at});
            auto al = rec.alternative_labels.find(tag);
            if (al != rec.alternative_labels.end())
                for (const auto& alias : al->second)
                    if (!alias.empty())
                        out.push_back({res, {Dataset::wikidata, PathId::wd_alt_label}, alias,
                                       rec.retrieved_at});
            auto d = rec.descriptions.find(tag);
            if (d != rec.descriptions.end() && !d->second.empty())
                out.push_back({res, {Dataset::wikidata, PathId::wd_description}, d->second,
                               rec.retrieved_at});
        }
    }
    return out;
}

inline std::vector<ResourceProperties> collect_wikidata_properties(
    const std::vector<WikidataEntityRecord>& records, Language language) {
    std::vector<ResourceProperties> out;
    for (const auto& rec : records) {
        ResourceProperties props;
        props.resource = make_resource(Dataset::wikidata, rec.entity_id, language);
        for (const auto& q : rec.instance_of) props.entries.emplace_back("P31", q);
        for (const auto& q : rec.subclass_of) props.entries.emplace_back("P279", q);
        for (const auto& v : rec.usage_instructions) props.entries.emplace_back("P2559", v);
        out.push_back(std::move(props));
    }
    return out;
}

// ------------------------------------------------------- snapshot (de)serialization

inline nlohmann::json wikidata_record_to_json(const WikidataEntityRecord& r) {
    return {{"entity_id", r.entity_id},
            {"preferred_label", r.preferred_label},
            {"alternative_labels", r.alternative_labels},
            {"descriptions", r.descriptions},
            {"instance_of", r.instance_of},
            {"subclass_of", r.subclass_of},
            {"usage_instructions", r.usage_instructions},
            {"incoming_link_rank", r.incoming_link_rank},
            {"retrieved_at", r.retrieved_at}};
}

inline WikidataEntityRecord wikidata_record_from_json(const nlohmann::json& j) {
    WikidataEntityRecord r;
    r.entity_id = j.at("entity_id");
    if (!is_q_id(r.entity_id))
        throw AuditError("malformed-response", "bad entity id '" + r.entity_id + "'");
    r.preferred_label = j.at("preferred_label").get<std::map<std::string, std::string>>();
    r.alternative_labels =
        j.at("alternative_labels").get<std::map<std::string, std::vector<std::string>>>();
    r.descriptions = j.at("descriptions").get<std::map<std::string, std::string>>();
    r.instance_of = j.at("instance_of").get<std::vector<std::string>>();
    r.subclass_of = j.at("subclass_of").get<std::vector<std::string>>();
    r.usage_instructions = j.value("usage_instructions", std::vector<std::string>{});
    r.incoming_link_rank = j.at("incoming_link_rank");
    r.retrieved_at = j.value("retrieved_at", std::int64_t{0});
    return r;
}

inline std::vector<WikidataEntityRecord> wikidata_records_from_json_file(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(csv::read_file(path));
    std::vector<WikidataEntityRecord> out;
    for (const auto& rj : j.at("records")) out.push_back(wikidata_record_from_json(rj));
    return out;
}

}  // namespace lodaudit
