#pragma once

// Turtle / N-Triples parsing and canonical N-Triples serialization.
// Covers the grammar subset used by SKOS / SKOS-XL / OntoLex sources:
// prefixes, base, 'a', predicate and object lists, blank node labels and
// anonymous nodes, short and long strings, language tags, typed literals,
// numeric and boolean shorthand. RDF collections are not supported.

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lodaudit/core.hpp"
#include "lodaudit/csv.hpp"
#include "lodaudit/text.hpp"

namespace lodaudit::rdf {

struct Term {
    enum class Kind { iri, literal, blank };
    Kind kind = Kind::iri;
    std::string value;     // IRI string, literal lexical form, or blank label
    std::string lang;      // literals only
    std::string datatype;  // literals only, IRI

    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;

    static Term iri(std::string v) { return Term{Kind::iri, std::move(v), {}, {}}; }
    static Term blank(std::string v) { return Term{Kind::blank, std::move(v), {}, {}}; }
    static Term literal(std::string v, std::string lang = {}, std::string dt = {}) {
        return Term{Kind::literal, std::move(v), std::move(lang), std::move(dt)};
    }
    bool is_iri() const { return kind == Kind::iri; }
    bool is_literal() const { return kind == Kind::literal; }
};

struct Triple {
    Term subject;    // iri or blank
    Term predicate;  // iri
    Term object;

    bool operator==(const Triple&) const = default;
    auto operator<=>(const Triple&) const = default;
};

namespace vocab {
inline constexpr std::string_view rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view rdf_value = "http://www.w3.org/1999/02/22-rdf-syntax-ns#value";
inline constexpr std::string_view rdfs_comment = "http://www.w3.org/2000/01/rdf-schema#comment";
inline constexpr std::string_view rdfs_label = "http://www.w3.org/2000/01/rdf-schema#label";
inline constexpr std::string_view skos_related_match =
    "http://www.w3.org/2004/02/skos/core#relatedMatch";
inline constexpr std::string_view skos_scope_note =
    "http://www.w3.org/2004/02/skos/core#scopeNote";
inline constexpr std::string_view xl_label_type = "http://www.w3.org/2008/05/skos-xl#Label";
inline constexpr std::string_view xl_literal_form =
    "http://www.w3.org/2008/05/skos-xl#literalForm";
inline constexpr std::string_view xl_pref_label = "http://www.w3.org/2008/05/skos-xl#prefLabel";
inline constexpr std::string_view xl_alt_label = "http://www.w3.org/2008/05/skos-xl#altLabel";
inline constexpr std::string_view gvp_term_kind = "http://vocab.getty.edu/ontology#termKind";
inline constexpr std::string_view gvp_historic_flag =
    "http://vocab.getty.edu/ontology#historicFlag";
inline constexpr std::string_view ontolex_canonical_form =
    "http://www.w3.org/ns/lemon/ontolex#canonicalForm";
inline constexpr std::string_view ontolex_written_rep =
    "http://www.w3.org/ns/lemon/ontolex#writtenRep";
inline constexpr std::string_view ontolex_sense = "http://www.w3.org/ns/lemon/ontolex#sense";
inline constexpr std::string_view ontolex_is_lexicalized_sense_of =
    "http://www.w3.org/ns/lemon/ontolex#isLexicalizedSenseOf";
inline constexpr std::string_view wn_definition =
    "http://wordnet-rdf.princeton.edu/ontology#definition";
inline constexpr std::string_view wn_usage_domain =
    "http://wordnet-rdf.princeton.edu/ontology#usage_domain";
inline constexpr std::string_view culco_has_contentious_label =
    "https://w3id.org/culco#hasContentiousLabel";
inline constexpr std::string_view culco_has_suggested_label =
    "https://w3id.org/culco#hasSuggestedLabel";
}  // namespace vocab

class Graph {
public:
    void add(Triple t) {
        const std::string skey = subject_key(t.subject);
        sp_index_[skey + "\x1f" + t.predicate.value].push_back(triples_.size());
        p_index_[t.predicate.value].push_back(triples_.size());
        triples_.push_back(std::move(t));
    }

    const std::vector<Triple>& triples() const { return triples_; }
    std::size_t size() const { return triples_.size(); }

    std::vector<const Term*> objects(std::string_view subject, std::string_view predicate) const {
        std::vector<const Term*> out;
        auto it = sp_index_.find(std::string(subject) + "\x1f" + std::string(predicate));
        if (it == sp_index_.end()) return out;
        for (std::size_t i : it->second) out.push_back(&triples_[i].object);
        return out;
    }

    // First literal object, if any.
    const Term* literal(std::string_view subject, std::string_view predicate) const {
        for (const Term* t : objects(subject, predicate))
            if (t->is_literal()) return t;
        return nullptr;
    }

    std::vector<const Triple*> with_predicate(std::string_view predicate) const {
        std::vector<const Triple*> out;
        auto it = p_index_.find(std::string(predicate));
        if (it == p_index_.end()) return out;
        for (std::size_t i : it->second) out.push_back(&triples_[i]);
        return out;
    }

    std::vector<std::string> subjects_of_type(std::string_view type_iri) const {
        std::vector<std::string> out;
        for (const Triple* t : with_predicate(vocab::rdf_type))
            if (t->object.is_iri() && t->object.value == type_iri)
                out.push_back(subject_key(t->subject));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    static std::string subject_key(const Term& t) {
        return t.kind == Term::Kind::blank ? "_:" + t.value : t.value;
    }

private:
    std::vector<Triple> triples_;
    std::map<std::string, std::vector<std::size_t>> sp_index_;
    std::map<std::string, std::vector<std::size_t>> p_index_;
};

namespace detail {

class TurtleParser {
public:
    TurtleParser(std::string_view input, Graph& out) : in_(input), g_(out) {}

    void run() {
        skip_ws();
        while (pos_ < in_.size()) {
            statement();
            skip_ws();
        }
    }

private:
    std::string_view in_;
    Graph& g_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::map<std::string, std::string> prefixes_;
    std::string base_;
    int next_blank_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw AuditError("rdf-parse", "line " + std::to_string(line_) + ": " + msg);
    }

    char peek() const { return pos_ < in_.size() ? in_[pos_] : '\0'; }
    char get() {
        char c = in_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }
    bool eat(char c) {
        if (peek() == c) {
            get();
            return true;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < in_.size()) {
            char c = peek();
            if (c == '#') {
                while (pos_ < in_.size() && peek() != '\n') get();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                get();
            } else {
                break;
            }
        }
    }

    bool match_keyword(std::string_view kw) {
        if (in_.substr(pos_, kw.size()) != kw) return false;
        std::size_t after = pos_ + kw.size();
        if (after < in_.size()) {
            char c = in_[after];
            bool wordish = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                           (c >= '0' && c <= '9') || c == '_' || c == ':';
            if (wordish) return false;
        }
        for (std::size_t k = 0; k < kw.size(); ++k) get();
        return true;
    }

    void statement() {
        if (peek() == '@') {
            get();
            if (match_keyword("prefix")) {
                directive_prefix();
                skip_ws();
                if (!eat('.')) fail("expected '.' after @prefix");
                return;
            }
            if (match_keyword("base")) {
                directive_base();
                skip_ws();
                if (!eat('.')) fail("expected '.' after @base");
                return;
            }
            fail("unknown directive");
        }
        if (match_keyword("PREFIX")) {
            directive_prefix();
            return;
        }
        if (match_keyword("BASE")) {
            directive_base();
            return;
        }
        Term subj = subject();
        skip_ws();
        if (peek() != '.') predicate_object_list(subj);  // bare anon subject is legal
        skip_ws();
        if (!eat('.')) fail("expected '.' at end of statement");
    }

    void directive_prefix() {
        skip_ws();
        std::string name;
        while (peek() != ':' && peek() != '\0' && peek() != ' ') name.push_back(get());
        if (!eat(':')) fail("expected ':' in prefix declaration");
        skip_ws();
        prefixes_[name] = iriref();
    }

    void directive_base() {
        skip_ws();
        base_ = iriref();
    }

    std::string iriref() {
        if (!eat('<')) fail("expected '<'");
        std::string iri;
        while (true) {
            if (pos_ >= in_.size()) fail("unterminated IRI");
            char c = get();
            if (c == '>') break;
            if (c == '\\') {
                char e = get();
                if (e == 'u' || e == 'U') iri += unicode_escape(e == 'u' ? 4 : 8);
                else fail("bad escape in IRI");
            } else {
                iri.push_back(c);
            }
        }
        if (!base_.empty() && iri.find("://") == std::string::npos && (iri.empty() || iri[0] != '#'))
            return base_ + iri;
        if (!base_.empty() && !iri.empty() && iri[0] == '#') return base_ + iri;
        return iri;
    }

    std::string unicode_escape(int width) {
        char32_t cp = 0;
        for (int k = 0; k < width; ++k) {
            char c = get();
            cp <<= 4;
            if (c >= '0' && c <= '9') cp |= char32_t(c - '0');
            else if (c >= 'a' && c <= 'f') cp |= char32_t(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') cp |= char32_t(c - 'A' + 10);
            else fail("bad unicode escape");
        }
        std::string out;
        text::append_utf8(out, cp);
        return out;
    }

    static bool pn_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '-' || c == '.' || (unsigned char)c >= 0x80;
    }

    Term prefixed_name() {
        std::string prefix;
        while (pn_char(peek())) prefix.push_back(get());
        if (!eat(':')) fail("expected ':' in prefixed name");
        std::string local;
        while (pn_char(peek()) || peek() == '%' || peek() == '\\') {
            char c = get();
            if (c == '\\') {
                local.push_back(get());  // PN_LOCAL_ESC
            } else {
                local.push_back(c);
            }
        }
        while (!local.empty() && local.back() == '.') {
            local.pop_back();
            --pos_;  // trailing dot belongs to the statement
        }
        auto it = prefixes_.find(prefix);
        if (it == prefixes_.end()) fail("undeclared prefix '" + prefix + ":'");
        return Term::iri(it->second + local);
    }

    Term subject() {
        skip_ws();
        char c = peek();
        if (c == '<') return Term::iri(iriref());
        if (c == '_') return blank_label();
        if (c == '[') return anon_blank();
        return prefixed_name();
    }

    Term blank_label() {
        get();  // _
        if (!eat(':')) fail("expected ':' after '_'");
        std::string label;
        while (pn_char(peek())) label.push_back(get());
        if (label.empty()) fail("empty blank node label");
        return Term::blank(label);
    }

    Term anon_blank() {
        get();  // [
        Term node = Term::blank("anon" + std::to_string(next_blank_++));
        skip_ws();
        if (peek() != ']') {
            predicate_object_list(node);
            skip_ws();
        }
        if (!eat(']')) fail("expected ']'");
        return node;
    }

    Term verb() {
        skip_ws();
        if (peek() == 'a') {
            std::size_t after = pos_ + 1;
            char c = after < in_.size() ? in_[after] : ' ';
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '<') {
                get();
                return Term::iri(std::string(vocab::rdf_type));
            }
        }
        if (peek() == '<') return Term::iri(iriref());
        return prefixed_name();
    }

    void predicate_object_list(const Term& subj) {
        while (true) {
            Term pred = verb();
            skip_ws();
            object_list(subj, pred);
            skip_ws();
            bool more = false;
            while (eat(';')) {
                skip_ws();
                more = true;
            }
            if (!more) break;
            if (peek() == '.' || peek() == ']' || peek() == '\0') break;  // trailing ';'
        }
    }

    void object_list(const Term& subj, const Term& pred) {
        while (true) {
            Term obj = object();
            g_.add(Triple{subj, pred, obj});
            skip_ws();
            if (!eat(',')) break;
            skip_ws();
        }
    }

    Term object() {
        skip_ws();
        char c = peek();
        if (c == '<') return Term::iri(iriref());
        if (c == '_') return blank_label();
        if (c == '[') return anon_blank();
        if (c == '"' || c == '\'') return literal();
        if (c == '(') fail("RDF collections are not supported");
        if ((c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.') return number();
        if (match_keyword("true"))
            return Term::literal("true", {}, "http://www.w3.org/2001/XMLSchema#boolean");
        if (match_keyword("false"))
            return Term::literal("false", {}, "http://www.w3.org/2001/XMLSchema#boolean");
        return prefixed_name();
    }

    Term number() {
        std::string num;
        bool dec = false;
        while (true) {
            char c = peek();
            if ((c >= '0' && c <= '9') || c == '+' || c == '-' || c == 'e' || c == 'E') {
                num.push_back(get());
            } else if (c == '.') {
                // trailing statement dot vs decimal point
                char n = pos_ + 1 < in_.size() ? in_[pos_ + 1] : ' ';
                if (n >= '0' && n <= '9') {
                    dec = true;
                    num.push_back(get());
                } else {
                    break;
                }
            } else {
                break;
            }
        }
        if (num.empty()) fail("expected number");
        return Term::literal(num, {},
                             dec ? "http://www.w3.org/2001/XMLSchema#decimal"
                                 : "http://www.w3.org/2001/XMLSchema#integer");
    }

    Term literal() {
        char quote = get();
        bool long_form = false;
        if (peek() == quote) {
            get();
            if (peek() == quote) {
                get();
                long_form = true;
            } else {
                return finish_literal("");  // empty string
            }
        }
        std::string value;
        while (true) {
            if (pos_ >= in_.size()) fail("unterminated string");
            char c = get();
            if (c == quote) {
                if (!long_form) break;
                if (peek() == quote) {
                    get();
                    if (peek() == quote) {
                        get();
                        break;
                    }
                    value.push_back(quote);
                    value.push_back(quote);
                    continue;
                }
                value.push_back(quote);
                continue;
            }
            if (c == '\\') {
                char e = get();
                switch (e) {
                    case 't': value.push_back('\t'); break;
                    case 'b': value.push_back('\b'); break;
                    case 'n': value.push_back('\n'); break;
                    case 'r': value.push_back('\r'); break;
                    case 'f': value.push_back('\f'); break;
                    case '"': value.push_back('"'); break;
                    case '\'': value.push_back('\''); break;
                    case '\\': value.push_back('\\'); break;
                    case 'u': value += unicode_escape(4); break;
                    case 'U': value += unicode_escape(8); break;
                    default: fail("bad string escape");
                }
                continue;
            }
            if (!long_form && (c == '\n' || c == '\r')) fail("newline in short string");
            value.push_back(c);
        }
        return finish_literal(std::move(value));
    }

    Term finish_literal(std::string value) {
        if (peek() == '@') {
            get();
            std::string lang;
            while ((peek() >= 'a' && peek() <= 'z') || (peek() >= 'A' && peek() <= 'Z') ||
                   peek() == '-' || (peek() >= '0' && peek() <= '9'))
                lang.push_back(get());
            if (lang.empty()) fail("empty language tag");
            return Term::literal(std::move(value), text::lower(lang));
        }
        if (peek() == '^') {
            get();
            if (!eat('^')) fail("expected '^^'");
            skip_ws();
            std::string dt = peek() == '<' ? iriref() : prefixed_name().value;
            return Term::literal(std::move(value), {}, std::move(dt));
        }
        return Term::literal(std::move(value));
    }
};

inline void nt_escape(std::string& out, std::string_view s) {
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if ((unsigned char)c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04X", c);
                    out += buf;
                } else {
                    out.push_back(c);
                }
        }
    }
}

}  // namespace detail

inline Graph parse_turtle(std::string_view input) {
    Graph g;
    detail::TurtleParser(input, g).run();
    return g;
}

inline Graph parse_turtle_file(const std::string& path) {
    return parse_turtle(csv::read_file(path));
}

inline std::string to_ntriples(const Term& t) {
    std::string out;
    switch (t.kind) {
        case Term::Kind::iri:
            out = "<" + t.value + ">";
            break;
        case Term::Kind::blank:
            out = "_:" + t.value;
            break;
        case Term::Kind::literal:
            out = "\"";
            detail::nt_escape(out, t.value);
            out += '"';
            if (!t.lang.empty()) out += "@" + t.lang;
            else if (!t.datatype.empty()) out += "^^<" + t.datatype + ">";
            break;
    }
    return out;
}

inline std::string to_ntriples(const Triple& t) {
    return to_ntriples(t.subject) + " " + to_ntriples(t.predicate) + " " + to_ntriples(t.object) +
           " .\n";
}

// Deterministic serialization: triples sorted, duplicates kept.
inline std::string to_canonical_ntriples(const Graph& g) {
    std::vector<std::string> lines;
    lines.reserve(g.size());
    for (const Triple& t : g.triples()) lines.push_back(to_ntriples(t));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l;
    return out;
}

}  // namespace lodaudit::rdf
