#pragma once

// Minimal non-validating XML DOM, sufficient for the ODWN lexical database:
// elements, attributes, character data, entity references, comments, CDATA.

#include <string>
#include <string_view>
#include <vector>

#include "lodaudit/core.hpp"
#include "lodaudit/csv.hpp"
#include "lodaudit/text.hpp"

namespace lodaudit::xml {

struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    std::string text;  // concatenated direct character data

    const std::string* attr(std::string_view key) const {
        for (const auto& [k, v] : attributes)
            if (k == key) return &v;
        return nullptr;
    }

    std::string attr_or(std::string_view key, std::string fallback = {}) const {
        const std::string* v = attr(key);
        return v ? *v : fallback;
    }

    std::vector<const Element*> children_named(std::string_view n) const {
        std::vector<const Element*> out;
        for (const auto& c : children)
            if (c.name == n) out.push_back(&c);
        return out;
    }

    const Element* first(std::string_view n) const {
        for (const auto& c : children)
            if (c.name == n) return &c;
        return nullptr;
    }
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view in) : in_(in) {}

    Element run() {
        skip_prolog();
        Element root = element();
        skip_misc();
        if (pos_ != in_.size()) fail("trailing content after document element");
        return root;
    }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;

    [[noreturn]] void fail(const std::string& msg) const {
        throw AuditError("xml-parse", "line " + std::to_string(line_) + ": " + msg);
    }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < in_.size() ? in_[pos_ + ahead] : '\0';
    }
    char get() {
        if (pos_ >= in_.size()) fail("unexpected end of input");
        char c = in_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }
    bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }
    void expect(std::string_view s) {
        if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
        for (std::size_t i = 0; i < s.size(); ++i) get();
    }

    void skip_ws() {
        while (pos_ < in_.size()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') get();
            else break;
        }
    }

    void skip_comment_or_pi() {
        if (starts_with("<!--")) {
            expect("<!--");
            while (!starts_with("-->")) get();
            expect("-->");
        } else if (starts_with("<?")) {
            expect("<?");
            while (!starts_with("?>")) get();
            expect("?>");
        } else if (starts_with("<!DOCTYPE")) {
            while (peek() != '>') get();
            get();
        }
    }

    void skip_prolog() {
        skip_ws();
        while (starts_with("<?") || starts_with("<!--") || starts_with("<!DOCTYPE")) {
            skip_comment_or_pi();
            skip_ws();
        }
    }

    void skip_misc() {
        skip_ws();
        while (starts_with("<!--") || starts_with("<?")) {
            skip_comment_or_pi();
            skip_ws();
        }
    }

    static bool name_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '-' || c == '.' || c == ':' || (unsigned char)c >= 0x80;
    }

    std::string name() {
        std::string n;
        while (name_char(peek())) n.push_back(get());
        if (n.empty()) fail("expected name");
        return n;
    }

    std::string entity() {
        expect("&");
        std::string e;
        while (peek() != ';') e.push_back(get());
        get();
        if (e == "amp") return "&";
        if (e == "lt") return "<";
        if (e == "gt") return ">";
        if (e == "quot") return "\"";
        if (e == "apos") return "'";
        if (!e.empty() && e[0] == '#') {
            char32_t cp = 0;
            if (e.size() > 1 && (e[1] == 'x' || e[1] == 'X')) {
                for (std::size_t i = 2; i < e.size(); ++i) {
                    char c = e[i];
                    cp <<= 4;
                    if (c >= '0' && c <= '9') cp |= char32_t(c - '0');
                    else if (c >= 'a' && c <= 'f') cp |= char32_t(c - 'a' + 10);
                    else if (c >= 'A' && c <= 'F') cp |= char32_t(c - 'A' + 10);
                    else fail("bad character reference");
                }
            } else {
                for (std::size_t i = 1; i < e.size(); ++i) {
                    if (e[i] < '0' || e[i] > '9') fail("bad character reference");
                    cp = cp * 10 + char32_t(e[i] - '0');
                }
            }
            std::string out;
            text::append_utf8(out, cp);
            return out;
        }
        fail("unknown entity '&" + e + ";'");
    }

    Element element() {
        expect("<");
        Element el;
        el.name = name();
        while (true) {
            skip_ws();
            if (starts_with("/>")) {
                expect("/>");
                return el;
            }
            if (peek() == '>') {
                get();
                break;
            }
            std::string key = name();
            skip_ws();
            expect("=");
            skip_ws();
            char q = get();
            if (q != '"' && q != '\'') fail("expected quoted attribute value");
            std::string val;
            while (peek() != q) {
                if (peek() == '&') val += entity();
                else val.push_back(get());
            }
            get();
            el.attributes.emplace_back(std::move(key), std::move(val));
        }
        // content
        while (true) {
            if (starts_with("</")) {
                expect("</");
                std::string closing = name();
                if (closing != el.name)
                    fail("mismatched closing tag </" + closing + "> for <" + el.name + ">");
                skip_ws();
                expect(">");
                return el;
            }
            if (starts_with("<!--") || starts_with("<?")) {
                skip_comment_or_pi();
                continue;
            }
            if (starts_with("<![CDATA[")) {
                expect("<![CDATA[");
                while (!starts_with("]]>")) el.text.push_back(get());
                expect("]]>");
                continue;
            }
            if (peek() == '<') {
                el.children.push_back(element());
                continue;
            }
            if (peek() == '&') {
                el.text += entity();
                continue;
            }
            if (pos_ >= in_.size()) fail("unterminated element <" + el.name + ">");
            el.text.push_back(get());
        }
    }
};

}  // namespace detail

inline Element parse(std::string_view input) { return detail::Parser(input).run(); }

inline Element parse_file(const std::string& path) { return parse(csv::read_file(path)); }

}  // namespace lodaudit::xml
