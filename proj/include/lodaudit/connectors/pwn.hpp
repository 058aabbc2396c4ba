#pragma once

// Princeton WordNet RDF dump: synsets carry a single definition literal in
// which example sentences are embedded between double quotes; lemmas reach
// synsets through the OntoLex entry/sense structure. Resources are synsets.

#include <map>
#include <string>
#include <vector>

#include "lodaudit/core.hpp"
#include "lodaudit/markers.hpp"
#include "lodaudit/rdf.hpp"
#include "lodaudit/wsd.hpp"

namespace lodaudit {

struct PwnDefinition {
    std::string definition;
    std::vector<std::string> examples;
};

// Splits "gloss; \"example one\"; \"example two\"" into gloss and examples.
inline PwnDefinition split_pwn_definition(std::string_view raw) {
    PwnDefinition out;
    std::string current;
    bool inside = false;
    auto flush_outside = [&] {
        std::string t = text::trim(current);
        while (!t.empty() && (t.back() == ';' || t.back() == ',')) t.pop_back();
        t = text::trim(t);
        if (!t.empty()) {
            if (!out.definition.empty()) out.definition += ' ';
            out.definition += t;
        }
        current.clear();
    };
    for (char c : raw) {
        if (c == '"') {
            if (inside) {
                std::string t = text::trim(current);
                if (!t.empty()) out.examples.push_back(t);
                current.clear();
            } else {
                flush_outside();
            }
            inside = !inside;
            continue;
        }
        current.push_back(c);
    }
    if (inside) {
        // unbalanced quote: keep the tail as definition text
        std::string t = text::trim(current);
        if (!t.empty()) {
            if (!out.definition.empty()) out.definition += ' ';
            out.definition += t;
        }
    } else {
        flush_outside();
    }
    return out;
}

class PwnDatabase {
public:
    static PwnDatabase parse_file(const std::string& path) {
        PwnDatabase db;
        db.graph_ = rdf::parse_turtle_file(path);
        db.index();
        return db;
    }

    static PwnDatabase from_graph(rdf::Graph g) {
        PwnDatabase db;
        db.graph_ = std::move(g);
        db.index();
        return db;
    }

    const rdf::Graph& graph() const { return graph_; }

    // One writtenRep literal per (synset, member entry); definition and
    // example literals per synset.
    std::vector<RetrievedLiteral> extract_literals() const {
        std::vector<RetrievedLiteral> out;
        for (const auto& [synset, members] : members_) {
            ResourceRef res = make_resource(Dataset::pwn, synset, Language::en);
            for (const auto& rep : members)
                out.push_back({res, {Dataset::pwn, PathId::pwn_written_rep}, rep, 0});
        }
        for (const rdf::Triple* t : graph_.with_predicate(rdf::vocab::wn_definition)) {
            if (!t->object.is_literal() || t->object.value.empty()) continue;
            std::string synset = rdf::Graph::subject_key(t->subject);
            ResourceRef res = make_resource(Dataset::pwn, synset, Language::en);
            PwnDefinition split = split_pwn_definition(t->object.value);
            if (!split.definition.empty())
                out.push_back({res, {Dataset::pwn, PathId::pwn_definition}, split.definition, 0});
            for (const auto& ex : split.examples)
                out.push_back({res, {Dataset::pwn, PathId::pwn_example}, ex, 0});
        }
        return out;
    }

    // usage_domain links; evidence value is the target's rdfs:label (the
    // sense-key style name) or its IRI local name.
    std::vector<ResourceProperties> collect_properties() const {
        std::map<std::string, ResourceProperties> by_synset;
        for (const rdf::Triple* t : graph_.with_predicate(rdf::vocab::wn_usage_domain)) {
            if (!t->object.is_iri()) continue;
            std::string synset = rdf::Graph::subject_key(t->subject);
            auto& props = by_synset[synset];
            props.resource = make_resource(Dataset::pwn, synset, Language::en);
            props.entries.emplace_back("usage_domain", display_name(t->object.value));
        }
        std::vector<ResourceProperties> out;
        for (auto& [_, props] : by_synset) out.push_back(std::move(props));
        return out;
    }

    std::string display_name(const std::string& synset_iri) const {
        const rdf::Term* label = graph_.literal(synset_iri, rdf::vocab::rdfs_label);
        if (label) return label->value;
        auto slash = synset_iri.find_last_of("/#");
        return slash == std::string::npos ? synset_iri : synset_iri.substr(slash + 1);
    }

private:
    void index() {
        // entry -> writtenRep
        std::map<std::string, std::vector<std::string>> reps;
        for (const rdf::Triple* t : graph_.with_predicate(rdf::vocab::ontolex_canonical_form)) {
            std::string entry = rdf::Graph::subject_key(t->subject);
            for (const rdf::Term* rep :
                 graph_.objects(rdf::Graph::subject_key(t->object), rdf::vocab::ontolex_written_rep))
                if (rep->is_literal() && !rep->value.empty()) reps[entry].push_back(rep->value);
        }
        // entry -> sense -> synset
        for (const rdf::Triple* t : graph_.with_predicate(rdf::vocab::ontolex_sense)) {
            std::string entry = rdf::Graph::subject_key(t->subject);
            for (const rdf::Term* syn :
                 graph_.objects(rdf::Graph::subject_key(t->object),
                                rdf::vocab::ontolex_is_lexicalized_sense_of)) {
                auto it = reps.find(entry);
                if (it == reps.end()) continue;
                for (const auto& rep : it->second) members_[syn->value].push_back(rep);
            }
        }
    }

    rdf::Graph graph_;
    std::map<std::string, std::vector<std::string>> members_;  // synset -> writtenReps
};

}  // namespace lodaudit
