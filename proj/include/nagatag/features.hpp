#pragma once

// Per-token observation features: word identity, position flags, word shape,
// neighbouring words and character prefixes/suffixes.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nagatag/utf8.hpp"

namespace nagatag {

struct FeatureConfig {
    int prefix_max = 3;
    int suffix_max = 4;

    bool word = true;
    bool position = true;  // is_first / is_last
    bool casing = true;    // is_capitalized / is_all_caps / is_all_lower / capitals_inside
    bool has_hyphen = true;
    bool is_numeric = true;
    bool neighbours = true;  // prev_word / next_word
    bool prefixes = true;
    bool suffixes = true;

    void validate() const {
        if (prefix_max < 1) throw std::invalid_argument("prefix_max must be >= 1");
        if (suffix_max < 1) throw std::invalid_argument("suffix_max must be >= 1");
    }

    friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

using FeatureValue = std::variant<bool, std::string>;

/// Ordered key -> value map for one token. Insertion order follows the
/// extraction template, which is what the debug dump prints.
class FeatureMap {
public:
    void set(std::string key, FeatureValue value) {
        for (auto& e : entries_) {
            if (e.first == key) {
                e.second = std::move(value);
                return;
            }
        }
        entries_.emplace_back(std::move(key), std::move(value));
    }

    const FeatureValue* find(const std::string& key) const {
        for (const auto& e : entries_) {
            if (e.first == key) return &e.second;
        }
        return nullptr;
    }

    bool flag(const std::string& key) const {
        const auto* v = find(key);
        if (!v || !std::holds_alternative<bool>(*v)) throw std::out_of_range("no boolean feature '" + key + "'");
        return std::get<bool>(*v);
    }

    const std::string& text(const std::string& key) const {
        const auto* v = find(key);
        if (!v || !std::holds_alternative<std::string>(*v)) {
            throw std::out_of_range("no string feature '" + key + "'");
        }
        return std::get<std::string>(*v);
    }

    bool contains(const std::string& key) const { return find(key) != nullptr; }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<std::pair<std::string, FeatureValue>>& entries() const noexcept { return entries_; }

private:
    std::vector<std::pair<std::string, FeatureValue>> entries_;
};

namespace detail {

inline bool all_digits(const std::vector<char32_t>& cps) {
    if (cps.empty()) return false;
    return std::all_of(cps.begin(), cps.end(), [](char32_t c) { return c >= '0' && c <= '9'; });
}

}  // namespace detail

inline FeatureMap extract_token_features(const std::vector<std::string>& sentence, std::size_t t,
                                         const FeatureConfig& config = {}) {
    if (t >= sentence.size()) {
        throw std::out_of_range("token index " + std::to_string(t) + " out of range for sentence of length " +
                                std::to_string(sentence.size()));
    }
    const std::string& w = sentence[t];
    const auto cps = utf8::decode(w);
    const std::size_t n = cps.size();

    FeatureMap fm;
    if (config.word) fm.set("word", w);
    if (config.position) {
        fm.set("is_first", t == 0);
        fm.set("is_last", t + 1 == sentence.size());
    }
    if (config.casing) {
        bool any_cased = false;
        bool all_upper = true;
        bool all_lower = true;
        bool inside = false;
        for (std::size_t i = 0; i < n; ++i) {
            const bool up = utf8::is_upper(cps[i]);
            const bool lo = utf8::is_lower(cps[i]);
            if (up || lo) any_cased = true;
            if (lo) all_upper = false;
            if (up) {
                all_lower = false;
                if (i > 0) inside = true;
            }
        }
        fm.set("is_capitalized", n > 0 && utf8::is_upper(cps[0]));
        fm.set("is_all_caps", any_cased && all_upper);
        fm.set("is_all_lower", any_cased && all_lower);
        fm.set("capitals_inside", inside);
    }
    if (config.has_hyphen) fm.set("has_hyphen", w.find('-') != std::string::npos);
    if (config.is_numeric) fm.set("is_numeric", detail::all_digits(cps));
    if (config.neighbours) {
        fm.set("prev_word", t > 0 ? sentence[t - 1] : std::string());
        fm.set("next_word", t + 1 < sentence.size() ? sentence[t + 1] : std::string());
    }
    if (config.prefixes) {
        for (int k = 1; k <= config.prefix_max && static_cast<std::size_t>(k) <= n; ++k) {
            fm.set("prefix-" + std::to_string(k), utf8::encode(cps, 0, static_cast<std::size_t>(k)));
        }
    }
    if (config.suffixes) {
        for (int k = 1; k <= config.suffix_max && static_cast<std::size_t>(k) <= n; ++k) {
            fm.set("suffix-" + std::to_string(k),
                   utf8::encode(cps, n - static_cast<std::size_t>(k), static_cast<std::size_t>(k)));
        }
    }
    return fm;
}

inline std::string render_value(const FeatureValue& v) {
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
    return std::get<std::string>(v);
}

/// "key=value" attribute strings, lexicographically ordered.
inline std::set<std::string> binarize(const FeatureMap& fm) {
    std::set<std::string> out;
    for (const auto& [k, v] : fm.entries()) out.insert(k + "=" + render_value(v));
    return out;
}

/// Attribute sets for every position of a sentence.
inline std::vector<std::set<std::string>> sentence_attributes(const std::vector<std::string>& words,
                                                              const FeatureConfig& config) {
    std::vector<std::set<std::string>> out;
    out.reserve(words.size());
    for (std::size_t t = 0; t < words.size(); ++t) out.push_back(binarize(extract_token_features(words, t, config)));
    return out;
}

/// Python-dict style line, e.g. `'word': 'Titia', 'is_first': True, ...`.
inline std::string format_feature_map(const FeatureMap& fm) {
    std::string out;
    bool first = true;
    for (const auto& [k, v] : fm.entries()) {
        if (!first) out += ", ";
        first = false;
        out += "'" + k + "': ";
        if (std::holds_alternative<bool>(v)) {
            out += std::get<bool>(v) ? "True" : "False";
        } else {
            out += "'" + std::get<std::string>(v) + "'";
        }
    }
    return out;
}

}  // namespace nagatag
