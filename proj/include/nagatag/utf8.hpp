#pragma once

// Minimal UTF-8 decoding and case classification for Latin-script text.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nagatag::utf8 {

/// Decode a UTF-8 string into Unicode scalar values. Throws on malformed input.
inline std::vector<char32_t> decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        int extra = 0;
        char32_t cp = 0;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            extra = 1;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            extra = 2;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            extra = 3;
        } else {
            throw std::invalid_argument("invalid UTF-8 lead byte at offset " + std::to_string(i));
        }
        if (extra > 0 && i + static_cast<std::size_t>(extra) >= s.size()) {
            throw std::invalid_argument("truncated UTF-8 sequence at offset " + std::to_string(i));
        }
        for (int k = 1; k <= extra; ++k) {
            const auto b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) {
                throw std::invalid_argument("invalid UTF-8 continuation byte at offset " +
                                            std::to_string(i + k));
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        out.push_back(cp);
        i += static_cast<std::size_t>(extra) + 1;
    }
    return out;
}

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode(const std::vector<char32_t>& cps, std::size_t first, std::size_t count) {
    std::string out;
    for (std::size_t i = first; i < first + count && i < cps.size(); ++i) append(out, cps[i]);
    return out;
}

namespace detail {

// Blocks where upper/lower alternate; `upper_even` says which parity is uppercase.
struct AlternatingBlock {
    char32_t first;
    char32_t last;
    bool upper_even;
};

inline constexpr AlternatingBlock kAlternating[] = {
    {0x0100, 0x012F, true},   // Latin Extended-A, first run
    {0x0132, 0x0137, true},
    {0x0139, 0x0148, false},
    {0x014A, 0x0177, true},
    {0x0179, 0x017E, false},
    {0x1E00, 0x1E95, true},   // Latin Extended Additional
    {0x1EA0, 0x1EFF, true},
};

inline int alternating_case(char32_t c) {
    for (const auto& b : kAlternating) {
        if (c >= b.first && c <= b.last) {
            const bool even = (c % 2) == 0;
            return even == b.upper_even ? 1 : -1;
        }
    }
    return 0;
}

}  // namespace detail

inline bool is_upper(char32_t c) {
    if (c >= 'A' && c <= 'Z') return true;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return true;
    if (c == 0x0130 || c == 0x0178) return true;
    if (c >= 0x0391 && c <= 0x03A9 && c != 0x03A2) return true;
    if (c >= 0x0400 && c <= 0x042F) return true;
    return detail::alternating_case(c) == 1;
}

inline bool is_lower(char32_t c) {
    if (c >= 'a' && c <= 'z') return true;
    if (c >= 0xDF && c <= 0xFF && c != 0xF7) return true;
    if (c == 0x0131 || c == 0x0138 || c == 0x0149 || c == 0x017F) return true;
    if (c == 0x0259) return true;  // schwa
    if (c >= 0x03B1 && c <= 0x03C9) return true;
    if (c >= 0x0430 && c <= 0x045F) return true;
    return detail::alternating_case(c) == -1;
}

inline bool is_cased(char32_t c) { return is_upper(c) || is_lower(c); }

inline bool is_space(char32_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f' || c == 0x00A0 ||
           c == 0x3000 || (c >= 0x2000 && c <= 0x200A);
}

}  // namespace nagatag::utf8
