#pragma once

// UTF-8 decoding, lowercasing, and word tokenization tuned for English and
// Dutch literals. Hyphen and apostrophe are word-internal when surrounded by
// word characters, so "half-breed" and "homo's" are single tokens. Diacritics
// are significant and never stripped.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lodaudit::text {

// Decodes the code point starting at byte i; advances i past it. Invalid
// sequences decode as U+FFFD one byte at a time.
inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    auto cont = [&](std::size_t k) { return k < s.size() && (byte(k) & 0xC0) == 0x80; };
    if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
        char32_t cp = (char32_t(b0 & 0x1F) << 6) | (byte(i + 1) & 0x3F);
        i += 2;
        return cp;
    }
    if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
        char32_t cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(byte(i + 1) & 0x3F) << 6) |
                      (byte(i + 2) & 0x3F);
        i += 3;
        return cp;
    }
    if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
        char32_t cp = (char32_t(b0 & 0x07) << 18) | (char32_t(byte(i + 1) & 0x3F) << 12) |
                      (char32_t(byte(i + 2) & 0x3F) << 6) | (byte(i + 3) & 0x3F);
        i += 4;
        return cp;
    }
    ++i;
    return 0xFFFD;
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(char(cp));
    } else if (cp < 0x800) {
        out.push_back(char(0xC0 | (cp >> 6)));
        out.push_back(char(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(char(0xE0 | (cp >> 12)));
        out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(char(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(char(0xF0 | (cp >> 18)));
        out.push_back(char(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(char(0x80 | (cp & 0x3F)));
    }
}

// Simple lowercase mapping covering ASCII, Latin-1 Supplement, and
// Latin Extended-A; enough for the en/nl lexicons.
inline char32_t to_lower_cp(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;  // À..Þ except ×
    if (cp >= 0x100 && cp <= 0x137) return cp | 1;                 // Ā..Ķ pairs
    if (cp >= 0x139 && cp <= 0x148) return ((cp - 1) | 1) + 1;     // Ĺ..Ň odd-even pairs
    if (cp >= 0x14A && cp <= 0x177) return cp | 1;                 // Ŋ..Ŷ pairs
    if (cp == 0x178) return 0xFF;                                  // Ÿ -> ÿ
    if (cp >= 0x179 && cp <= 0x17E) return ((cp - 1) | 1) + 1;     // Ź..Ž
    return cp;
}

inline char32_t to_upper_cp(char32_t cp) {
    if (cp >= U'a' && cp <= U'z') return cp - 0x20;
    if (cp >= 0xE0 && cp <= 0xFE && cp != 0xF7) return cp - 0x20;
    if (cp == 0xFF) return 0x178;
    if (cp >= 0x100 && cp <= 0x137) return cp & ~char32_t(1);
    if (cp >= 0x14A && cp <= 0x177) return cp & ~char32_t(1);
    return cp;
}

inline std::string lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) append_utf8(out, to_lower_cp(decode_utf8(s, i)));
    return out;
}

// Title-cases the first code point only; used by the Wikidata person-name filter.
inline std::string capitalize_first(std::string_view s) {
    if (s.empty()) return {};
    std::size_t i = 0;
    char32_t first = decode_utf8(s, i);
    std::string out;
    append_utf8(out, to_upper_cp(first));
    out.append(s.substr(i));
    return out;
}

inline bool is_digit_cp(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

inline bool is_letter_cp(char32_t cp) {
    if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z')) return true;
    if (cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7) return true;  // Latin-1/Ext
    if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
    if (cp >= 0x370) return true;  // treat further scripts as letters
    return false;
}

inline bool is_word_cp(char32_t cp) { return is_letter_cp(cp) || is_digit_cp(cp); }

inline bool is_joiner_cp(char32_t cp) {
    return cp == U'-' || cp == U'\'' || cp == 0x2019;  // hyphen, apostrophe, right single quote
}

struct Token {
    std::string lexeme;      // original bytes
    std::size_t byte_begin = 0;
    std::size_t byte_end = 0;
    bool has_letter = false;
    bool all_digits = true;
};

// Splits text into word tokens. A joiner (hyphen/apostrophe) is part of a
// token only when the characters on both sides are word characters.
inline std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    Token cur;
    bool in_token = false;
    auto flush = [&](std::size_t end) {
        if (!in_token) return;
        cur.byte_end = end;
        out.push_back(std::move(cur));
        cur = Token{};
        in_token = false;
    };
    while (i < s.size()) {
        std::size_t start = i;
        char32_t cp = decode_utf8(s, i);
        if (is_word_cp(cp)) {
            if (!in_token) {
                in_token = true;
                cur.byte_begin = start;
            }
            cur.lexeme.append(s.substr(start, i - start));
            cur.has_letter = cur.has_letter || is_letter_cp(cp);
            cur.all_digits = cur.all_digits && is_digit_cp(cp);
        } else if (in_token && is_joiner_cp(cp)) {
            // joiner glues only if followed by a word character
            std::size_t j = i;
            if (j < s.size()) {
                char32_t next = decode_utf8(s, j);
                if (is_word_cp(next)) {
                    cur.lexeme.append(s.substr(start, i - start));
                    cur.all_digits = false;
                    continue;
                }
            }
            flush(start);
        } else {
            flush(start);
        }
    }
    flush(s.size());
    return out;
}

// Lowercased token lexemes, in order.
inline std::vector<std::string> tokenize_lower(std::string_view s) {
    std::vector<std::string> out;
    for (const auto& t : tokenize(s)) out.push_back(lower(t.lexeme));
    return out;
}

// Whole-phrase containment: does `phrase` occur in `hay` as a contiguous
// token sequence? Both sides are tokenized with the same rules.
// `fold_case` lowercases both sides before comparing.
inline bool contains_phrase(std::string_view hay, std::string_view phrase, bool fold_case = true) {
    std::vector<std::string> h, p;
    for (const auto& t : tokenize(hay)) h.push_back(fold_case ? lower(t.lexeme) : t.lexeme);
    for (const auto& t : tokenize(phrase)) p.push_back(fold_case ? lower(t.lexeme) : t.lexeme);
    if (p.empty() || p.size() > h.size()) return false;
    for (std::size_t i = 0; i + p.size() <= h.size(); ++i) {
        bool ok = true;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (h[i + k] != p[k]) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (unsigned char)s[b] <= ' ') ++b;
    while (e > b && (unsigned char)s[e - 1] <= ' ') --e;
    return std::string(s.substr(b, e - b));
}

// Levenshtein distance on code points.
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<char32_t> ca, cb;
    for (std::size_t i = 0; i < a.size();) ca.push_back(decode_utf8(a, i));
    for (std::size_t i = 0; i < b.size();) cb.push_back(decode_utf8(b, i));
    std::vector<std::size_t> prev(cb.size() + 1), cur(cb.size() + 1);
    for (std::size_t j = 0; j <= cb.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= ca.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= cb.size(); ++j) {
            std::size_t sub = prev[j - 1] + (ca[i - 1] == cb[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[cb.size()];
}

// 1 - distance/max_len, in [0,1]; 1.0 for two empty strings.
inline double edit_similarity(std::string_view a, std::string_view b) {
    std::size_t la = 0, lb = 0;
    for (std::size_t i = 0; i < a.size();) {
        decode_utf8(a, i);
        ++la;
    }
    for (std::size_t i = 0; i < b.size();) {
        decode_utf8(b, i);
        ++lb;
    }
    std::size_t m = std::max(la, lb);
    if (m == 0) return 1.0;
    return 1.0 - double(edit_distance(a, b)) / double(m);
}

}  // namespace lodaudit::text
