#pragma once

// Annotated `word/TAG` corpora: tagset, parsing, serialization, splitting,
// frequency counts and inter-annotator agreement.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nagatag/error.hpp"
#include "nagatag/random.hpp"

namespace nagatag {

using TagId = std::uint32_t;

/// Ordered set of tag names; a tag's index is its position.
class TagSet {
public:
    /// The 15-tag Nagamese inventory.
    TagSet() : TagSet(std::vector<std::string>{"ADJ", "ADV", "CONJ", "CMP", "DET", "PP", "INTJ", "N",
                                               "PN", "QN", "V", "FW", "SYM", "UNK", "NUM"}) {}

    explicit TagSet(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            const auto& n = names_[i];
            if (n.empty()) throw DataError("tagset: empty tag name at position " + std::to_string(i));
            for (char c : n) {
                if (c < 'A' || c > 'Z') {
                    throw DataError("tagset: tag '" + n + "' must be uppercase ASCII letters");
                }
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (names_[j] == n) throw DataError("tagset: duplicate tag '" + n + "'");
            }
        }
    }

    /// One tag per line; blank lines and `#` comments ignored.
    static TagSet parse(std::string_view text) {
        std::vector<std::string> names;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto nl = text.find('\n', pos);
            if (nl == std::string_view::npos) nl = text.size();
            auto line = text.substr(pos, nl - pos);
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
                line.remove_suffix(1);
            }
            while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
            if (!line.empty() && line.front() != '#') names.emplace_back(line);
            pos = nl + 1;
        }
        if (names.empty()) throw DataError("tagset: no tags");
        return TagSet(std::move(names));
    }

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(TagId id) const { return names_.at(id); }

    std::optional<TagId> find(std::string_view name) const {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i] == name) return static_cast<TagId>(i);
        }
        return std::nullopt;
    }

    TagId index_of(std::string_view name) const {
        if (auto id = find(name)) return *id;
        throw DataError("unknown tag '" + std::string(name) + "'");
    }

    friend bool operator==(const TagSet&, const TagSet&) = default;

private:
    std::vector<std::string> names_;
};

struct Token {
    std::string word;
    TagId tag = 0;
    friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
    std::vector<Token> tokens;

    std::size_t size() const noexcept { return tokens.size(); }
    std::vector<std::string> words() const {
        std::vector<std::string> w;
        w.reserve(tokens.size());
        for (const auto& t : tokens) w.push_back(t.word);
        return w;
    }
    std::vector<TagId> tags() const {
        std::vector<TagId> out;
        out.reserve(tokens.size());
        for (const auto& t : tokens) out.push_back(t.tag);
        return out;
    }
    friend bool operator==(const Sentence&, const Sentence&) = default;
};

class TaggedCorpus {
public:
    TaggedCorpus() = default;
    explicit TaggedCorpus(std::vector<Sentence> sentences) : sentences_(std::move(sentences)) {
        for (const auto& s : sentences_) {
            if (s.tokens.empty()) throw DataError("corpus: empty sentence");
            token_count_ += s.tokens.size();
        }
    }

    const std::vector<Sentence>& sentences() const noexcept { return sentences_; }
    std::size_t size() const noexcept { return sentences_.size(); }
    bool empty() const noexcept { return sentences_.empty(); }
    std::size_t token_count() const noexcept { return token_count_; }

    friend bool operator==(const TaggedCorpus& a, const TaggedCorpus& b) {
        return a.sentences_ == b.sentences_;
    }

private:
    std::vector<Sentence> sentences_;
    std::size_t token_count_ = 0;
};

enum class UnknownTagPolicy { reject, map_to_unk };

/// Error carrying the 1-based line and byte column of the offending token.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, std::size_t column, std::string token, const std::string& what)
        : DataError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what +
                    " in token '" + token + "'"),
          line_(line),
          column_(column),
          token_(std::move(token)) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& token() const noexcept { return token_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string token_;
};

namespace detail {

inline bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

struct RawToken {
    std::string_view text;
    std::size_t column;
};

// Calls fn(line_number, tokens) for each non-blank, non-comment line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    std::vector<RawToken> tokens;
    while (pos < text.size()) {
        ++line_no;
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const auto line = text.substr(pos, nl - pos);
        tokens.clear();
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && is_ascii_space(line[i])) ++i;
            const std::size_t start = i;
            while (i < line.size() && !is_ascii_space(line[i])) ++i;
            if (i > start) tokens.push_back({line.substr(start, i - start), start + 1});
        }
        // "#" as a standalone first token marks a comment; "#/SYM" stays a token.
        const bool comment = !tokens.empty() && tokens.front().column == 1 && tokens.front().text == "#";
        if (!tokens.empty() && !comment) fn(line_no, tokens);
        pos = nl + 1;
    }
}

}  // namespace detail

/// Parse one sentence per line of `word/TAG` tokens. The tag is whatever
/// follows the last '/'. Blank lines and comment lines ("# ...") are skipped.
inline TaggedCorpus parse_tagged(std::string_view text, const TagSet& tagset,
                                 UnknownTagPolicy policy = UnknownTagPolicy::reject) {
    std::optional<TagId> unk;
    if (policy == UnknownTagPolicy::map_to_unk) {
        unk = tagset.find("UNK");
        if (!unk) throw DataError("unknown-tag policy map_to_unk needs an UNK tag in the tagset");
    }
    std::vector<Sentence> sentences;
    detail::for_each_line(text, [&](std::size_t line_no, const std::vector<detail::RawToken>& raw) {
        Sentence s;
        s.tokens.reserve(raw.size());
        for (const auto& rt : raw) {
            const auto slash = rt.text.rfind('/');
            if (slash == std::string_view::npos) {
                throw ParseError(line_no, rt.column, std::string(rt.text), "missing '/' separator");
            }
            const auto word = rt.text.substr(0, slash);
            const auto tag = rt.text.substr(slash + 1);
            if (word.empty()) throw ParseError(line_no, rt.column, std::string(rt.text), "empty word");
            if (tag.empty()) throw ParseError(line_no, rt.column, std::string(rt.text), "empty tag");
            auto id = tagset.find(tag);
            if (!id) {
                if (!unk) {
                    throw ParseError(line_no, rt.column, std::string(rt.text),
                                     "tag '" + std::string(tag) + "' not in tagset");
                }
                id = unk;
            }
            s.tokens.push_back({std::string(word), *id});
        }
        sentences.push_back(std::move(s));
    });
    return TaggedCorpus(std::move(sentences));
}

/// Untagged input: one whitespace-tokenized sentence per line.
inline std::vector<std::vector<std::string>> parse_raw(std::string_view text) {
    std::vector<std::vector<std::string>> out;
    detail::for_each_line(text, [&](std::size_t, const std::vector<detail::RawToken>& raw) {
        std::vector<std::string> words;
        words.reserve(raw.size());
        for (const auto& rt : raw) words.emplace_back(rt.text);
        out.push_back(std::move(words));
    });
    return out;
}

inline std::string serialize_tagged(const TaggedCorpus& corpus, const TagSet& tagset) {
    std::string out;
    for (const auto& s : corpus.sentences()) {
        bool first = true;
        for (const auto& t : s.tokens) {
            if (!first) out.push_back(' ');
            first = false;
            out += t.word;
            out.push_back('/');
            out += tagset.name(t.tag);
        }
        out.push_back('\n');
    }
    return out;
}

/// Count per tag index; the vector has one slot per tag in the tagset.
inline std::vector<std::size_t> tag_frequencies(const TaggedCorpus& corpus, const TagSet& tagset) {
    std::vector<std::size_t> counts(tagset.size(), 0);
    for (const auto& s : corpus.sentences()) {
        for (const auto& t : s.tokens) counts.at(t.tag) += 1;
    }
    return counts;
}

/// Sentence-level split after a seeded Fisher-Yates shuffle. The first
/// floor(train_fraction * n) shuffled sentences form the training part.
inline std::pair<TaggedCorpus, TaggedCorpus> split_corpus(const TaggedCorpus& corpus, double train_fraction,
                                                          std::uint64_t seed) {
    if (corpus.empty()) throw DataError("split: corpus is empty");
    if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
        throw std::invalid_argument("split: train fraction must be in (0, 1]");
    }
    const std::size_t n = corpus.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(order[i - 1], order[j]);
    }
    // The small epsilon keeps e.g. 0.7 * 10 from landing on 6.999...
    const auto n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(n) + 1e-9);
    std::vector<Sentence> train;
    std::vector<Sentence> test;
    train.reserve(n_train);
    test.reserve(n - n_train);
    for (std::size_t k = 0; k < n; ++k) {
        (k < n_train ? train : test).push_back(corpus.sentences()[order[k]]);
    }
    return {TaggedCorpus(std::move(train)), TaggedCorpus(std::move(test))};
}

struct AgreementReport {
    std::size_t total_tokens = 0;
    std::size_t disagreed = 0;
    std::size_t disagreed_on_excluded_tag = 0;
    double rate = 0.0;
    double rate_excluding = 0.0;
};

/// Rates from raw counts. The excluded-tag rate keeps the full token count
/// as its denominator.
inline AgreementReport make_agreement_report(std::size_t total, std::size_t disagreed,
                                             std::size_t disagreed_on_excluded) {
    if (disagreed_on_excluded > disagreed || disagreed > total) {
        throw std::invalid_argument("agreement: inconsistent counts");
    }
    AgreementReport r;
    r.total_tokens = total;
    r.disagreed = disagreed;
    r.disagreed_on_excluded_tag = disagreed_on_excluded;
    if (total > 0) {
        r.rate = static_cast<double>(disagreed) / static_cast<double>(total);
        r.rate_excluding = static_cast<double>(disagreed - disagreed_on_excluded) / static_cast<double>(total);
    }
    return r;
}

/// Throws DataError unless both corpora carry the same words in the same order.
inline void require_same_structure(const TaggedCorpus& a, const TaggedCorpus& b) {
    if (a.size() != b.size()) {
        throw DataError("sentence count differs: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& sa = a.sentences()[i].tokens;
        const auto& sb = b.sentences()[i].tokens;
        if (sa.size() != sb.size()) {
            throw DataError("sentence " + std::to_string(i + 1) + ": token count differs");
        }
        for (std::size_t t = 0; t < sa.size(); ++t) {
            if (sa[t].word != sb[t].word) {
                throw DataError("sentence " + std::to_string(i + 1) + ", token " + std::to_string(t + 1) +
                                ": word '" + sa[t].word + "' vs '" + sb[t].word + "'");
            }
        }
    }
}

inline AgreementReport agreement(const TaggedCorpus& reference, const TaggedCorpus& other, TagId excluded_tag) {
    require_same_structure(reference, other);
    std::size_t disagreed = 0;
    std::size_t on_excluded = 0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const auto& ra = reference.sentences()[i].tokens;
        const auto& rb = other.sentences()[i].tokens;
        for (std::size_t t = 0; t < ra.size(); ++t) {
            if (ra[t].tag != rb[t].tag) {
                ++disagreed;
                if (ra[t].tag == excluded_tag) ++on_excluded;
            }
        }
    }
    return make_agreement_report(reference.token_count(), disagreed, on_excluded);
}

}  // namespace nagatag
