#pragma once

// Word sense disambiguation over bag-of-words vectors: background bags come
// from a term's curated related resources, context bags from a candidate
// resource's literals; both are embedded as the mean of their token vectors
// and compared by cosine similarity. Candidates at or above the threshold are
// ranked and capped per canonical form.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "lodaudit/core.hpp"
#include "lodaudit/csv.hpp"
#include "lodaudit/lexicon.hpp"
#include "lodaudit/matcher.hpp"
#include "lodaudit/text.hpp"

namespace lodaudit {

enum class BowRole { background, context };

struct BagOfWords {
    std::vector<std::string> tokens;  // ordered; repeats weight the mean
    BowRole role = BowRole::context;
    std::string canonical_form;
    Language language = Language::en;
};

// Tokenize, lowercase, drop digit-only/non-word tokens, lemmatize via the
// lookup table (identity fallback), drop stop words, drop lemmas under three
// characters.
class TextPipeline {
public:
    TextPipeline() = default;
    TextPipeline(std::set<std::string> stopwords, std::map<std::string, std::string> lemmas)
        : stopwords_(std::move(stopwords)), lemmas_(std::move(lemmas)) {}

    static TextPipeline from_files(const std::string& stopwords_path,
                                   const std::string& lemmas_path) {
        std::set<std::string> stop;
        std::istringstream in(csv::read_file(stopwords_path));
        std::string line;
        while (std::getline(in, line)) {
            std::string w = text::trim(line);
            if (!w.empty() && w[0] != '#') stop.insert(text::lower(w));
        }
        std::map<std::string, std::string> lem;
        for (const auto& row : csv::read_with_header(lemmas_path, {"token", "lemma"})) {
            if (row.fields.size() != 2)
                throw AuditError("csv-parse", lemmas_path + " line " + std::to_string(row.line) +
                                                  ": expected 2 fields");
            lem[text::lower(text::trim(row.fields[0]))] = text::lower(text::trim(row.fields[1]));
        }
        return TextPipeline(std::move(stop), std::move(lem));
    }

    std::vector<std::string> run(std::string_view input) const {
        std::vector<std::string> out;
        for (const auto& tok : text::tokenize(input)) {
            if (!tok.has_letter) continue;  // digit-only / non-word
            std::string t = text::lower(tok.lexeme);
            auto it = lemmas_.find(t);
            const std::string& lemma = it == lemmas_.end() ? t : it->second;
            if (stopwords_.count(lemma)) continue;
            std::size_t cps = 0;
            for (std::size_t i = 0; i < lemma.size();) {
                text::decode_utf8(lemma, i);
                ++cps;
            }
            if (cps < 3) continue;
            out.push_back(lemma);
        }
        return out;
    }

private:
    std::set<std::string> stopwords_;
    std::map<std::string, std::string> lemmas_;
};

inline std::vector<std::string> preprocess(std::string_view input, Language,
                                           const std::set<std::string>& stopwords,
                                           const std::map<std::string, std::string>& lemmas) {
    return TextPipeline(stopwords, lemmas).run(input);
}

// ------------------------------------------------------------- embeddings

// Whitespace-delimited text interchange format: header "vocab_size dimension",
// then one token and `dimension` reals per line.
class EmbeddingModel {
public:
    static EmbeddingModel load(const std::string& path) {
        return parse(csv::read_file(path), path);
    }

    static EmbeddingModel parse(const std::string& content, const std::string& origin = "<memory>") {
        EmbeddingModel m;
        std::istringstream in(content);
        std::size_t vocab = 0;
        if (!(in >> vocab >> m.dimension_) || m.dimension_ == 0)
            throw AuditError("embedding-parse", origin + ": bad header line");
        for (std::size_t row = 0; row < vocab; ++row) {
            std::string token;
            if (!(in >> token))
                throw AuditError("embedding-parse",
                                 origin + ": expected " + std::to_string(vocab) + " rows, got " +
                                     std::to_string(row));
            std::vector<double> vec(m.dimension_);
            for (std::size_t d = 0; d < m.dimension_; ++d)
                if (!(in >> vec[d]))
                    throw AuditError("embedding-parse",
                                     origin + ": token '" + token + "' has fewer than " +
                                         std::to_string(m.dimension_) + " components");
            if (!m.vocab_.emplace(token, std::move(vec)).second)
                throw AuditError("embedding-parse", origin + ": duplicate token '" + token + "'");
        }
        return m;
    }

    std::size_t dimension() const { return dimension_; }
    std::size_t vocabulary_size() const { return vocab_.size(); }

    const std::vector<double>* vector_of(const std::string& token) const {
        auto it = vocab_.find(token);
        return it == vocab_.end() ? nullptr : &it->second;
    }

private:
    std::size_t dimension_ = 0;
    std::unordered_map<std::string, std::vector<double>> vocab_;
};

// Mean of the in-vocabulary token vectors; nullopt when no token is known
// (the "cannot score" sentinel).
inline std::optional<std::vector<double>> embed(const BagOfWords& bow,
                                                const EmbeddingModel& model) {
    std::vector<double> sum(model.dimension(), 0.0);
    std::size_t n = 0;
    for (const auto& token : bow.tokens) {
        const std::vector<double>* v = model.vector_of(token);
        if (!v) continue;
        for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += (*v)[d];
        ++n;
    }
    if (n == 0) return std::nullopt;
    for (double& x : sum) x /= double(n);
    return sum;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw AuditError("dimension-mismatch", "cosine over vectors of unequal dimension");
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0)
        throw AuditError("degenerate-vector", "cosine of a zero-norm vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// --------------------------------------------------- background construction

// Per-dataset lookups needed by the background rules.
class DatasetContext {
public:
    virtual ~DatasetContext() = default;

    virtual std::vector<RetrievedLiteral> literals_of(const ResourceRef& r) const = 0;

    // Wikidata rule: labels of the entity's P31/P279 targets.
    virtual std::vector<std::string> class_labels_of(const ResourceRef&) const { return {}; }

    struct SynsetInfo {
        std::string gloss;
        std::vector<std::string> lemma_forms;
    };
    // ODWN rule: synsets a lexical entry belongs to.
    virtual std::vector<SynsetInfo> synsets_of(const ResourceRef&) const { return {}; }
};

inline bool mentions_term(const ContentiousTerm& term, std::string_view text_value) {
    return !match_term(text_value, term.inflected_forms, term.language).empty();
}

// Background bag of one term, from the literals of its related resources.
//  - Wikidata: when the term occurs in an entity's labels, the labels of the
//    entity's instance-of / subclass-of targets are appended.
//  - ODWN: when the term occurs in a synset definition gloss, only that gloss
//    and the synset's lemma written forms contribute for that resource.
inline BagOfWords build_background(const ContentiousTerm& term, const DatasetContext& sources,
                                   const TextPipeline& pipeline) {
    if (term.related_resources.empty())
        throw AuditError("no-background", "term '" + term.canonical_form + "' (" +
                                              to_string(term.language) +
                                              ") has no related resources");
    std::string corpus;
    auto append = [&corpus](std::string_view s) {
        if (!corpus.empty()) corpus += ' ';
        corpus += s;
    };
    for (const auto& r : term.related_resources) {
        if (r.dataset == Dataset::odwn) {
            std::vector<DatasetContext::SynsetInfo> synsets = sources.synsets_of(r);
            bool gloss_rule = false;
            for (const auto& syn : synsets) {
                if (!syn.gloss.empty() && mentions_term(term, syn.gloss)) {
                    gloss_rule = true;
                    append(syn.gloss);
                    for (const auto& lf : syn.lemma_forms) append(lf);
                }
            }
            if (gloss_rule) continue;
            for (const auto& lit : sources.literals_of(r)) append(lit.text);
            continue;
        }
        bool in_labels = false;
        for (const auto& lit : sources.literals_of(r)) {
            append(lit.text);
            if (r.dataset == Dataset::wikidata && !is_descriptive(lit.property_path.path_id) &&
                mentions_term(term, lit.text))
                in_labels = true;
        }
        if (in_labels)
            for (const auto& label : sources.class_labels_of(r)) append(label);
    }
    BagOfWords bow;
    bow.tokens = pipeline.run(corpus);
    bow.role = BowRole::background;
    bow.canonical_form = term.canonical_form;
    bow.language = term.language;
    return bow;
}

// ------------------------------------------------------------ disambiguation

struct WsdScore {
    ResourceRef resource;
    std::string canonical_form;
    std::optional<double> similarity;  // nullopt: sentinel / degenerate vector
    bool included = false;
};

struct WsdGroup {
    std::string canonical;
    Language language = Language::en;
    BagOfWords background;
    std::vector<std::pair<ResourceRef, BagOfWords>> contexts;
};

// Scores every candidate; marks included the top-k per canonical form among
// those at or above the threshold. Ties break by ascending resource id.
inline std::vector<WsdScore> disambiguate(const std::vector<WsdGroup>& groups,
                                          const EmbeddingModel& model, double threshold = 0.5,
                                          std::size_t top_k = 10) {
    std::vector<WsdScore> out;
    for (const auto& group : groups) {
        std::optional<std::vector<double>> bg = embed(group.background, model);
        std::vector<WsdScore> scored;
        for (const auto& [resource, bow] : group.contexts) {
            WsdScore s;
            s.resource = resource;
            s.canonical_form = group.canonical;
            if (bg) {
                std::optional<std::vector<double>> cx = embed(bow, model);
                if (cx) {
                    try {
                        s.similarity = cosine(*bg, *cx);
                    } catch (const AuditError&) {
                        s.similarity = std::nullopt;  // zero-norm mean vector
                    }
                }
            }
            scored.push_back(std::move(s));
        }
        std::sort(scored.begin(), scored.end(), [](const WsdScore& a, const WsdScore& b) {
            double sa = a.similarity.value_or(-2.0), sb = b.similarity.value_or(-2.0);
            if (sa != sb) return sa > sb;
            return a.resource.resource_id < b.resource.resource_id;
        });
        std::size_t taken = 0;
        for (auto& s : scored) {
            if (taken < top_k && s.similarity && *s.similarity >= threshold) {
                s.included = true;
                ++taken;
            }
        }
        for (auto& s : scored) out.push_back(std::move(s));
    }
    return out;
}

// --------------------------------------------------------- Set 1 sanity check

struct MissingRelated {
    Dataset dataset = Dataset::wikidata;
    Language language = Language::en;
    std::string canonical;
    std::string resource_id;
    std::string reason;  // "excluded" (scored below cut) or "not-scored"
};

// Related resources from Set 1 that did not make it into Set 3.
inline std::vector<MissingRelated> sanity_check_set1(const std::vector<WsdScore>& set3,
                                                     const TermLexicon& lexicon) {
    std::map<std::pair<std::string, std::string>, bool> scored;  // (canonical,resource)->included
    for (const auto& s : set3) {
        auto key = std::make_pair(s.canonical_form, s.resource.resource_id);
        auto it = scored.find(key);
        if (it == scored.end()) scored[key] = s.included;
        else it->second = it->second || s.included;
    }
    std::vector<MissingRelated> out;
    for (const auto& t : lexicon.terms()) {
        for (const auto& r : t.related_resources) {
            auto it = scored.find({t.canonical_form, r.resource_id});
            if (it != scored.end() && it->second) continue;
            out.push_back({r.dataset, t.language, t.canonical_form, r.resource_id,
                           it == scored.end() ? "not-scored" : "excluded"});
        }
    }
    std::sort(out.begin(), out.end(), [](const MissingRelated& a, const MissingRelated& b) {
        return std::tie(a.dataset, a.language, a.canonical, a.resource_id) <
               std::tie(b.dataset, b.language, b.canonical, b.resource_id);
    });
    return out;
}

// ------------------------------------------------------------------ exports

inline std::string format_similarity(const std::optional<double>& s) {
    if (!s) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", *s);
    return buf;
}

inline std::string scores_to_csv(const std::vector<WsdScore>& scores) {
    csv::Writer w({"canonical", "dataset", "language", "resource_id", "similarity", "included"});
    for (const auto& s : scores)
        w.row({s.canonical_form, to_string(s.resource.dataset), to_string(s.resource.language),
               s.resource.resource_id, format_similarity(s.similarity),
               s.included ? "true" : "false"});
    return w.str();
}

}  // namespace lodaudit
