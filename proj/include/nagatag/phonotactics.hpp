#pragma once

// Nagamese phoneme inventory and syllable-structure templates.
//
// Words are handled as phoneme sequences, reduced to C/V skeletons and
// matched against the template formulas below, where "(C)" is an optional
// consonant. Two independent routes decide acceptance: the compiled slot
// matcher behind classify(), and the regular-expression reading used by
// oracle_accepts()/enumerate_accepted(). Tests hold them equal.

#include <algorithm>
#include <cstdint>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nagatag/random.hpp"

namespace nagatag::phono {

struct Phoneme {
    std::string symbol;  // UTF-8, e.g. "pʰ"
    std::string ascii;   // transliteration, e.g. "ph"
    bool vowel = false;
};

class PhonemeInventory {
public:
    /// 6 vowels and 22 consonants. The consonant printed as "I" in the
    /// usual inventory listing is taken to be the lateral /l/.
    PhonemeInventory() {
        for (const auto& [sym, ascii] : std::vector<std::pair<std::string, std::string>>{
                 {"i", "i"}, {"u", "u"}, {"e", "e"}, {"ə", "@"}, {"o", "o"}, {"a", "a"}}) {
            vowels_.push_back({sym, ascii, true});
        }
        for (const auto& [sym, ascii] : std::vector<std::pair<std::string, std::string>>{
                 {"p", "p"},        {"t", "t"},        {"c", "c"},        {"k", "k"},        {"b", "b"},
                 {"d", "d"},        {"j", "j"},        {"g", "g"},        {"pʰ", "ph"}, {"tʰ", "th"},
                 {"cʰ", "ch"}, {"kʰ", "kh"}, {"m", "m"},        {"n", "n"},        {"ṅ", "ng"},
                 {"s", "s"},        {"š", "sh"},  {"h", "h"},        {"r", "r"},        {"l", "l"},
                 {"w", "w"},        {"y", "y"}}) {
            consonants_.push_back({sym, ascii, false});
        }
    }

    const std::vector<Phoneme>& vowels() const noexcept { return vowels_; }
    const std::vector<Phoneme>& consonants() const noexcept { return consonants_; }

    /// Looks a symbol up by its native form or its ASCII alias.
    const Phoneme* find(std::string_view symbol) const {
        for (const auto* set : {&vowels_, &consonants_}) {
            for (const auto& p : *set) {
                if (p.symbol == symbol || p.ascii == symbol) return &p;
            }
        }
        return nullptr;
    }

private:
    std::vector<Phoneme> vowels_;
    std::vector<Phoneme> consonants_;
};

class PhonotacticError : public std::invalid_argument {
public:
    PhonotacticError(const std::string& what, std::size_t position)
        : std::invalid_argument(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Non-empty string over {C, V}.
class CVSkeleton {
public:
    explicit CVSkeleton(std::string cv) : cv_(std::move(cv)) {
        if (cv_.empty()) throw std::invalid_argument("CV skeleton must be non-empty");
        for (std::size_t i = 0; i < cv_.size(); ++i) {
            if (cv_[i] != 'C' && cv_[i] != 'V') throw PhonotacticError("CV skeleton may only contain C and V", i);
        }
    }
    const std::string& str() const noexcept { return cv_; }
    std::size_t size() const noexcept { return cv_.size(); }
    std::size_t vowel_count() const { return static_cast<std::size_t>(std::count(cv_.begin(), cv_.end(), 'V')); }
    friend bool operator==(const CVSkeleton&, const CVSkeleton&) = default;
    friend auto operator<=>(const CVSkeleton&, const CVSkeleton&) = default;

private:
    std::string cv_;
};

using PhonemeSequence = std::vector<std::string>;

inline CVSkeleton to_skeleton(const PhonemeSequence& phonemes, const PhonemeInventory& inv) {
    std::string cv;
    cv.reserve(phonemes.size());
    for (std::size_t i = 0; i < phonemes.size(); ++i) {
        const auto* p = inv.find(phonemes[i]);
        if (!p) throw PhonotacticError("unknown phoneme '" + phonemes[i] + "' at position " + std::to_string(i), i);
        cv.push_back(p->vowel ? 'V' : 'C');
    }
    return CVSkeleton(std::move(cv));
}

/// Splits "g.o.r" into phoneme symbols and validates each against the inventory.
inline PhonemeSequence parse_phonemes(std::string_view text, const PhonemeInventory& inv) {
    PhonemeSequence out;
    std::size_t pos = 0;
    while (true) {
        const auto dot = text.find('.', pos);
        const auto piece = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        const auto* p = inv.find(piece);
        if (!p) {
            throw PhonotacticError("unknown phoneme '" + std::string(piece) + "' at position " +
                                       std::to_string(out.size()),
                                   out.size());
        }
        out.push_back(p->symbol);
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    return out;
}

inline std::string to_ascii(const PhonemeSequence& phonemes, const PhonemeInventory& inv) {
    std::string out;
    for (std::size_t i = 0; i < phonemes.size(); ++i) {
        const auto* p = inv.find(phonemes[i]);
        if (!p) throw PhonotacticError("unknown phoneme '" + phonemes[i] + "'", i);
        out += p->ascii;
    }
    return out;
}

enum class Slot { vowel, consonant, optional_consonant };

struct SyllableTemplate {
    std::string id;
    std::string formula;
    std::vector<Slot> pattern;
    int syllable_count = 0;
};

/// Compiles formula notation such as "(C)CV(C)" into slots.
inline SyllableTemplate compile_template(std::string id, std::string_view formula) {
    SyllableTemplate t;
    t.id = std::move(id);
    t.formula = std::string(formula);
    for (std::size_t i = 0; i < formula.size(); ++i) {
        const char c = formula[i];
        if (c == ' ') continue;
        if (c == 'V') {
            t.pattern.push_back(Slot::vowel);
            ++t.syllable_count;
        } else if (c == 'C') {
            t.pattern.push_back(Slot::consonant);
        } else if (c == '(' && i + 2 < formula.size() && formula[i + 1] == 'C' && formula[i + 2] == ')') {
            t.pattern.push_back(Slot::optional_consonant);
            i += 2;
        } else {
            throw PhonotacticError("bad template formula '" + std::string(formula) + "'", i);
        }
    }
    if (t.syllable_count < 1 || t.syllable_count > 4) throw std::invalid_argument("template needs 1-4 vowels");
    return t;
}

/// The syllabic formulas. The monosyllabic coda "(C)(C)" carries the
/// repeated-coda superscript of the formula notation: up to two consonants.
inline const std::vector<SyllableTemplate>& templates() {
    static const std::vector<SyllableTemplate> all = {
        compile_template("mono", "(C)(C)V(C)(C)"),
        compile_template("di-1", "V(C)(C)(C)V(C)"),
        compile_template("di-2a", "(C)CV(C)(C)CV(C)(C)"),
        compile_template("di-2b", "(C)CV(C)(C)V(C)(C)"),
        compile_template("tri-1", "V(C)(C)CV(C)(C)CV(C)"),
        compile_template("tri-2", "(C)CV(C)(C)V(C)(C)(C)V(C)"),
        compile_template("tetra", "(C)V(C)CVCV(C)CV(C)"),
    };
    return all;
}

inline bool matches(const SyllableTemplate& t, std::string_view cv) {
    // reachable[i] == true when the first i characters can be consumed by the slots seen so far
    std::vector<char> reachable(cv.size() + 1, 0);
    reachable[0] = 1;
    for (Slot slot : t.pattern) {
        std::vector<char> next(cv.size() + 1, 0);
        for (std::size_t i = 0; i <= cv.size(); ++i) {
            if (!reachable[i]) continue;
            if (slot == Slot::optional_consonant) next[i] = 1;
            if (i < cv.size()) {
                const char want = slot == Slot::vowel ? 'V' : 'C';
                if (cv[i] == want) next[i + 1] = 1;
            }
        }
        reachable.swap(next);
    }
    return reachable[cv.size()] != 0;
}

struct TemplateMatch {
    std::string template_id;
    int syllable_count = 0;
};

struct SyllableAnalysis {
    bool accepted = false;
    std::vector<TemplateMatch> matches;

    /// Smallest syllable count among the matches; 0 when rejected.
    int syllables() const {
        int best = 0;
        for (const auto& m : matches) {
            if (best == 0 || m.syllable_count < best) best = m.syllable_count;
        }
        return best;
    }
};

inline SyllableAnalysis classify(const CVSkeleton& skeleton) {
    SyllableAnalysis a;
    const auto& cv = skeleton.str();
    // A lone vowel, two bare vowels, and anything past four syllables are out.
    if (cv == "V" || cv == "VV" || skeleton.vowel_count() > 4) return a;
    for (const auto& t : templates()) {
        if (matches(t, cv)) a.matches.push_back({t.id, t.syllable_count});
    }
    a.accepted = !a.matches.empty();
    return a;
}

/// Regular-expression reading of the same formulas, kept separate from the
/// slot compiler so the two can be cross-checked.
inline bool oracle_accepts(const std::string& cv) {
    static const std::regex formulas(
        "C{0,2}VC{0,2}"
        "|VC{0,3}VC?"
        "|C?CVC{0,2}CVC{0,2}"
        "|C?CVC{0,2}VC{0,2}"
        "|VC{0,2}CVC{0,2}CVC?"
        "|C?CVC{0,2}VC{0,3}VC?"
        "|C?VC?CVCVC?CVC?");
    if (cv == "V" || cv == "VV") return false;
    return std::regex_match(cv, formulas);
}

/// Every accepted skeleton of length 1..max_len, lexicographically sorted.
inline std::vector<CVSkeleton> enumerate_accepted(int max_len) {
    if (max_len < 1 || max_len > 16) throw std::out_of_range("enumerate_accepted: max_len must be in [1, 16]");
    std::vector<std::string> found;
    for (int len = 1; len <= max_len; ++len) {
        for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
            std::string cv(static_cast<std::size_t>(len), 'C');
            for (int i = 0; i < len; ++i) {
                if (bits & (1u << (len - 1 - i))) cv[static_cast<std::size_t>(i)] = 'V';
            }
            if (oracle_accepts(cv)) found.push_back(std::move(cv));
        }
    }
    std::sort(found.begin(), found.end());
    std::vector<CVSkeleton> out;
    out.reserve(found.size());
    for (auto& s : found) out.emplace_back(std::move(s));
    return out;
}

/// Draws a word with the requested syllable count from a random template,
/// keeping each optional consonant with probability 1/2. Draws the template
/// forbids (a bare vowel, two bare vowels) are redrawn.
inline PhonemeSequence generate_word(Rng& rng, int syllable_count, const PhonemeInventory& inv) {
    if (syllable_count < 1 || syllable_count > 4) throw std::out_of_range("syllable_count must be in [1, 4]");
    std::vector<const SyllableTemplate*> candidates;
    for (const auto& t : templates()) {
        if (t.syllable_count == syllable_count) candidates.push_back(&t);
    }
    while (true) {
        const auto& t = *candidates[uniform_index(rng, candidates.size())];
        PhonemeSequence word;
        std::string cv;
        for (Slot slot : t.pattern) {
            if (slot == Slot::optional_consonant && !coin_flip(rng)) continue;
            const auto& pool = slot == Slot::vowel ? inv.vowels() : inv.consonants();
            word.push_back(pool[uniform_index(rng, pool.size())].symbol);
            cv.push_back(slot == Slot::vowel ? 'V' : 'C');
        }
        const auto analysis = classify(CVSkeleton(cv));
        const bool has_count = std::any_of(analysis.matches.begin(), analysis.matches.end(),
                                           [&](const TemplateMatch& m) { return m.syllable_count == syllable_count; });
        if (analysis.accepted && has_count) return word;
    }
}

inline PhonemeSequence generate_word(std::uint64_t seed, int syllable_count, const PhonemeInventory& inv) {
    Rng rng(seed);
    return generate_word(rng, syllable_count, inv);
}

}  // namespace nagatag::phono
