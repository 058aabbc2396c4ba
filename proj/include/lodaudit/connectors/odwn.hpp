#pragma once

// Open Dutch WordNet XML: lexical entries with a Lemma writtenForm, senses
// carrying definitions, examples (textualForm and canonicalForm children),
// Pragmatics attributes, and synsets with Definitions/Definition glosses.
// Lemma/sense literals belong to the lexical entry, glosses to the synset.

#include <map>
#include <string>
#include <vector>

#include "lodaudit/core.hpp"
#include "lodaudit/markers.hpp"
#include "lodaudit/wsd.hpp"
#include "lodaudit/xml.hpp"

namespace lodaudit {

struct OdwnSense {
    std::string id;
    std::string synset_id;
    std::string definition;
    std::vector<std::string> examples;
    std::vector<std::pair<std::string, std::string>> pragmatics;  // (attribute, value)
};

struct OdwnEntry {
    std::string id;
    std::string lemma;
    std::vector<OdwnSense> senses;
};

struct OdwnSynset {
    std::string id;
    std::vector<std::string> glosses;
    std::vector<std::string> member_entries;
};

class OdwnDatabase {
public:
    static OdwnDatabase parse_file(const std::string& path) {
        return parse(xml::parse_file(path));
    }

    static OdwnDatabase parse(const xml::Element& root) {
        OdwnDatabase db;
        walk(root, db);
        for (auto& [id, synset] : db.synsets_) synset.id = id;
        return db;
    }

    const std::vector<OdwnEntry>& entries() const { return entries_; }
    const std::map<std::string, OdwnSynset>& synsets() const { return synsets_; }

    std::vector<RetrievedLiteral> extract_literals() const {
        std::vector<RetrievedLiteral> out;
        for (const auto& entry : entries_) {
            ResourceRef res = make_resource(Dataset::odwn, entry.id, Language::nl);
            if (!entry.lemma.empty())
                out.push_back({res, {Dataset::odwn, PathId::odwn_lemma_written_form}, entry.lemma, 0});
            for (const auto& sense : entry.senses) {
                if (!sense.definition.empty())
                    out.push_back(
                        {res, {Dataset::odwn, PathId::odwn_sense_definition}, sense.definition, 0});
                for (const auto& ex : sense.examples)
                    if (!ex.empty())
                        out.push_back({res, {Dataset::odwn, PathId::odwn_sense_example}, ex, 0});
            }
        }
        for (const auto& [id, synset] : synsets_) {
            ResourceRef res = make_resource(Dataset::odwn, id, Language::nl);
            for (const auto& gloss : synset.glosses)
                if (!gloss.empty())
                    out.push_back(
                        {res, {Dataset::odwn, PathId::odwn_synset_definition_gloss}, gloss, 0});
        }
        return out;
    }

    // Pragmatics attributes of each entry's senses.
    std::vector<ResourceProperties> collect_properties() const {
        std::vector<ResourceProperties> out;
        for (const auto& entry : entries_) {
            ResourceProperties props;
            props.resource = make_resource(Dataset::odwn, entry.id, Language::nl);
            for (const auto& sense : entry.senses)
                for (const auto& [attr, value] : sense.pragmatics)
                    props.entries.emplace_back("Pragmatics." + attr, value);
            if (!props.entries.empty()) out.push_back(std::move(props));
        }
        return out;
    }

    // Synset info for the background rule: gloss plus the written forms of
    // every member entry.
    std::vector<DatasetContext::SynsetInfo> synsets_of_entry(const std::string& entry_id) const {
        std::vector<DatasetContext::SynsetInfo> out;
        for (const auto& entry : entries_) {
            if (entry.id != entry_id) continue;
            for (const auto& sense : entry.senses) {
                auto it = synsets_.find(sense.synset_id);
                if (it == synsets_.end()) continue;
                DatasetContext::SynsetInfo info;
                info.gloss.clear();
                for (const auto& gloss : it->second.glosses) {
                    if (!info.gloss.empty()) info.gloss += ' ';
                    info.gloss += gloss;
                }
                for (const auto& member : it->second.member_entries) {
                    for (const auto& e : entries_)
                        if (e.id == member && !e.lemma.empty()) info.lemma_forms.push_back(e.lemma);
                }
                out.push_back(std::move(info));
            }
        }
        return out;
    }

private:
    static void walk(const xml::Element& node, OdwnDatabase& db) {
        if (node.name == "LexicalEntry") {
            // Dutch-only harvest: skip entries tagged with another language
            const xml::Element* lemma = node.first("Lemma");
            std::string lang = node.attr_or("language", "nl");
            if (lang != "nl" && !lang.empty()) return;
            OdwnEntry entry;
            entry.id = node.attr_or("id");
            if (lemma) entry.lemma = lemma->attr_or("writtenForm");
            for (const xml::Element* sense_el : collect_senses(node)) {
                OdwnSense sense;
                sense.id = sense_el->attr_or("id");
                sense.synset_id = sense_el->attr_or("synset");
                sense.definition = sense_el->attr_or("definition");
                if (const xml::Element* defs = sense_el->first("Definition"))
                    if (sense.definition.empty()) sense.definition = defs->attr_or("gloss");
                if (const xml::Element* examples = sense_el->first("SenseExamples")) {
                    for (const auto& ex : examples->children) {
                        if (ex.name != "SenseExample") continue;
                        if (const xml::Element* t = ex.first("textualForm"))
                            sense.examples.push_back(text::trim(t->text));
                        if (const xml::Element* c = ex.first("canonicalForm"))
                            sense.examples.push_back(text::trim(c->text));
                    }
                }
                if (const xml::Element* prag = sense_el->first("Pragmatics"))
                    for (const auto& [attr, value] : prag->attributes)
                        if (!value.empty()) sense.pragmatics.emplace_back(attr, value);
                if (!sense.synset_id.empty()) {
                    auto& synset = db.synsets_[sense.synset_id];
                    synset.member_entries.push_back(entry.id);
                }
                entry.senses.push_back(std::move(sense));
            }
            db.entries_.push_back(std::move(entry));
            return;
        }
        if (node.name == "Synset") {
            std::string id = node.attr_or("id");
            auto& synset = db.synsets_[id];
            if (const xml::Element* defs = node.first("Definitions"))
                for (const auto& def : defs->children)
                    if (def.name == "Definition") {
                        std::string gloss = def.attr_or("gloss");
                        if (!gloss.empty()) synset.glosses.push_back(gloss);
                    }
            return;
        }
        for (const auto& child : node.children) walk(child, db);
    }

    static std::vector<const xml::Element*> collect_senses(const xml::Element& entry) {
        std::vector<const xml::Element*> out;
        for (const auto& child : entry.children) {
            if (child.name == "Sense") out.push_back(&child);
            if (child.name == "Senses")
                for (const auto& inner : child.children)
                    if (inner.name == "Sense") out.push_back(&inner);
        }
        return out;
    }

    std::vector<OdwnEntry> entries_;
    std::map<std::string, OdwnSynset> synsets_;
};

}  // namespace lodaudit
