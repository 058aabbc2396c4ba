#pragma once

// Shared domain types for the contentious-term audit pipeline: datasets,
// languages, property paths, resource references, and retrieved literals.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lodaudit {

// Error with a stable machine-readable code ("parse-error", "no-background", ...).
class AuditError : public std::runtime_error {
public:
    AuditError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

enum class Dataset { wikidata, aat, pwn, odwn };
enum class Language { en, nl };

inline std::string to_string(Dataset d) {
    switch (d) {
        case Dataset::wikidata: return "wikidata";
        case Dataset::aat: return "aat";
        case Dataset::pwn: return "pwn";
        case Dataset::odwn: return "odwn";
    }
    return "?";
}

inline std::string to_string(Language l) {
    return l == Language::en ? "en" : "nl";
}

inline Dataset dataset_from_string(std::string_view s) {
    if (s == "wikidata") return Dataset::wikidata;
    if (s == "aat") return Dataset::aat;
    if (s == "pwn") return Dataset::pwn;
    if (s == "odwn") return Dataset::odwn;
    throw AuditError("unknown-dataset", "unknown dataset: " + std::string(s));
}

inline Language language_from_string(std::string_view s) {
    if (s == "en") return Language::en;
    if (s == "nl") return Language::nl;
    throw AuditError("unknown-language", "unknown language tag: " + std::string(s));
}

// One row of the property inventory. The set is closed: no literal may be
// emitted under any other path.
enum class PathId {
    // wikidata
    wd_pref_label,
    wd_alt_label,
    wd_description,
    // aat (SKOS-XL label nodes plus scope notes)
    aat_pref_literal_form,
    aat_pref_comment,
    aat_alt_literal_form,
    aat_alt_comment,
    aat_scope_note,
    // pwn
    pwn_written_rep,
    pwn_definition,
    pwn_example,
    // odwn
    odwn_lemma_written_form,
    odwn_sense_definition,
    odwn_sense_example,
    odwn_synset_definition_gloss,
};

inline Dataset dataset_of(PathId p) {
    switch (p) {
        case PathId::wd_pref_label:
        case PathId::wd_alt_label:
        case PathId::wd_description: return Dataset::wikidata;
        case PathId::aat_pref_literal_form:
        case PathId::aat_pref_comment:
        case PathId::aat_alt_literal_form:
        case PathId::aat_alt_comment:
        case PathId::aat_scope_note: return Dataset::aat;
        case PathId::pwn_written_rep:
        case PathId::pwn_definition:
        case PathId::pwn_example: return Dataset::pwn;
        case PathId::odwn_lemma_written_form:
        case PathId::odwn_sense_definition:
        case PathId::odwn_sense_example:
        case PathId::odwn_synset_definition_gloss: return Dataset::odwn;
    }
    return Dataset::wikidata;
}

inline std::string to_string(PathId p) {
    switch (p) {
        case PathId::wd_pref_label: return "prefLabel";
        case PathId::wd_alt_label: return "altLabel";
        case PathId::wd_description: return "description";
        case PathId::aat_pref_literal_form: return "prefLabel/literalForm";
        case PathId::aat_pref_comment: return "prefLabel/comment";
        case PathId::aat_alt_literal_form: return "altLabel/literalForm";
        case PathId::aat_alt_comment: return "altLabel/comment";
        case PathId::aat_scope_note: return "scopeNote/value";
        case PathId::pwn_written_rep: return "writtenRep";
        case PathId::pwn_definition: return "definition";
        case PathId::pwn_example: return "example";
        case PathId::odwn_lemma_written_form: return "lemmaWrittenForm";
        case PathId::odwn_sense_definition: return "senseDefinition";
        case PathId::odwn_sense_example: return "senseExample";
        case PathId::odwn_synset_definition_gloss: return "synsetDefinitionGloss";
    }
    return "?";
}

inline const std::vector<PathId>& paths_of(Dataset d) {
    static const std::vector<PathId> wd = {PathId::wd_pref_label, PathId::wd_alt_label,
                                           PathId::wd_description};
    static const std::vector<PathId> aat = {PathId::aat_pref_literal_form, PathId::aat_pref_comment,
                                            PathId::aat_alt_literal_form, PathId::aat_alt_comment,
                                            PathId::aat_scope_note};
    static const std::vector<PathId> pwn = {PathId::pwn_written_rep, PathId::pwn_definition,
                                            PathId::pwn_example};
    static const std::vector<PathId> odwn = {PathId::odwn_lemma_written_form,
                                             PathId::odwn_sense_definition,
                                             PathId::odwn_sense_example,
                                             PathId::odwn_synset_definition_gloss};
    switch (d) {
        case Dataset::wikidata: return wd;
        case Dataset::aat: return aat;
        case Dataset::pwn: return pwn;
        case Dataset::odwn: return odwn;
    }
    return wd;
}

inline PathId path_from_string(Dataset d, std::string_view s) {
    for (PathId p : paths_of(d)) {
        if (to_string(p) == s) return p;
    }
    throw AuditError("unknown-path", "unknown property path '" + std::string(s) + "' for dataset " +
                                         to_string(d));
}

struct PropertyPath {
    Dataset dataset;
    PathId path_id;

    bool operator==(const PropertyPath&) const = default;
    auto operator<=>(const PropertyPath&) const = default;
};

// Descriptive (as opposed to labelling) paths; the default scan scope for
// implicit contentiousness markers.
inline bool is_descriptive(PathId p) {
    switch (p) {
        case PathId::wd_description:
        case PathId::aat_pref_comment:
        case PathId::aat_alt_comment:
        case PathId::aat_scope_note:
        case PathId::pwn_definition:
        case PathId::pwn_example:
        case PathId::odwn_sense_definition:
        case PathId::odwn_sense_example:
        case PathId::odwn_synset_definition_gloss: return true;
        default: return false;
    }
}

struct ResourceRef {
    Dataset dataset = Dataset::wikidata;
    std::string resource_id;  // IRI or dataset-native id, non-empty
    Language language = Language::en;

    bool operator==(const ResourceRef&) const = default;
    auto operator<=>(const ResourceRef&) const = default;
};

// pwn carries only English, odwn only Dutch.
inline bool valid_dataset_language(Dataset d, Language l) {
    if (d == Dataset::pwn) return l == Language::en;
    if (d == Dataset::odwn) return l == Language::nl;
    return true;
}

inline ResourceRef make_resource(Dataset d, std::string id, Language l) {
    if (id.empty()) throw AuditError("invalid-resource", "empty resource id");
    if (!valid_dataset_language(d, l))
        throw AuditError("invalid-resource", "dataset " + to_string(d) +
                                                 " does not carry language " + to_string(l) +
                                                 " (resource " + id + ")");
    return ResourceRef{d, std::move(id), l};
}

// One literal value of one property of one resource.
struct RetrievedLiteral {
    ResourceRef resource;
    PropertyPath property_path;
    std::string text;                   // non-empty UTF-8
    std::int64_t retrieval_timestamp = 0;  // unix seconds; 0 for local files

    bool operator==(const RetrievedLiteral&) const = default;
};

// Flat, order-preserving container for harvested literals with a by-resource view.
class LiteralStore {
public:
    void add(RetrievedLiteral lit) {
        if (lit.text.empty()) throw AuditError("invalid-literal", "empty literal text");
        if (lit.property_path.dataset != lit.resource.dataset)
            throw AuditError("invalid-literal", "property path dataset does not match resource");
        literals_.push_back(std::move(lit));
    }

    const std::vector<RetrievedLiteral>& literals() const { return literals_; }
    std::size_t size() const { return literals_.size(); }

    std::vector<const RetrievedLiteral*> for_resource(const ResourceRef& r) const {
        std::vector<const RetrievedLiteral*> out;
        for (const auto& lit : literals_)
            if (lit.resource == r) out.push_back(&lit);
        return out;
    }

private:
    std::vector<RetrievedLiteral> literals_;
};

}  // namespace lodaudit
