#pragma once

// Synthetic annotated corpora with a known tagging rule.
//
// Tags follow a first-order Markov chain. Each word is a phonotactically
// valid stem followed by a marker that identifies its tag, so the tag is
// recoverable from suffix features alone. Every sentence ends with a "."
// token tagged SYM.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nagatag/corpus.hpp"
#include "nagatag/phonotactics.hpp"
#include "nagatag/random.hpp"

namespace nagatag {

struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t n_sentences = 100;
    std::size_t min_length = 5;  // word tokens per sentence, before the final "."
    std::size_t max_length = 20;
    TagSet tagset;
    /// word-final marker -> tag
    std::vector<std::pair<std::string, TagId>> suffix_rule;
    /// States of the tag chain, the row-major transition matrix over them and
    /// the initial distribution.
    std::vector<TagId> chain_tags;
    std::vector<double> chain_transition;
    std::vector<double> chain_initial;
    std::string end_marker = ".";
    TagId end_tag = 0;

    /// Default chain over every tag except SYM, with two-letter markers built
    /// from letters that never occur in transliterated stems.
    static SynthConfig standard(std::uint64_t seed, std::size_t n_sentences) {
        SynthConfig c;
        c.seed = seed;
        c.n_sentences = n_sentences;
        c.end_tag = c.tagset.index_of("SYM");
        const std::string lead = "qxzfv";
        const std::string vowel = "aeiou";
        std::size_t next_marker = 0;
        for (TagId t = 0; t < c.tagset.size(); ++t) {
            if (t == c.end_tag) continue;
            c.chain_tags.push_back(t);
            std::string marker{lead[next_marker / vowel.size()], vowel[next_marker % vowel.size()]};
            c.suffix_rule.emplace_back(std::move(marker), t);
            ++next_marker;
        }
        c.suffix_rule.emplace_back(c.end_marker, c.end_tag);
        const std::size_t m = c.chain_tags.size();
        c.chain_transition.assign(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                double v = 1.0;
                if (j == (i + 1) % m) v += 6.0;
                if (j == (i + 5) % m) v += 3.0;
                c.chain_transition[i * m + j] = v;
                row += v;
            }
            for (std::size_t j = 0; j < m; ++j) c.chain_transition[i * m + j] /= row;
        }
        c.chain_initial.assign(m, 1.0 / static_cast<double>(m));
        return c;
    }

    void validate() const {
        if (min_length < 1 || min_length > max_length) throw std::invalid_argument("synth: bad sentence length range");
        const std::size_t m = chain_tags.size();
        if (m == 0) throw std::invalid_argument("synth: empty tag chain");
        if (chain_transition.size() != m * m || chain_initial.size() != m) {
            throw std::invalid_argument("synth: chain matrix size mismatch");
        }
        for (TagId t : chain_tags) {
            if (t >= tagset.size()) throw std::invalid_argument("synth: chain tag outside tagset");
            bool covered = false;
            for (const auto& [marker, tag] : suffix_rule) covered = covered || tag == t;
            if (!covered) throw std::invalid_argument("synth: no marker for tag " + tagset.name(t));
        }
        for (std::size_t i = 0; i < suffix_rule.size(); ++i) {
            const auto& a = suffix_rule[i].first;
            if (a.empty()) throw std::invalid_argument("synth: empty marker");
            for (std::size_t j = 0; j < suffix_rule.size(); ++j) {
                const auto& b = suffix_rule[j].first;
                if (i != j && b.size() >= a.size() && b.compare(b.size() - a.size(), a.size(), a) == 0) {
                    throw std::invalid_argument("synth: marker '" + a + "' is a suffix of '" + b + "'");
                }
            }
        }
        if (end_tag >= tagset.size()) throw std::invalid_argument("synth: end tag outside tagset");
    }

    std::string marker_for(TagId tag) const {
        for (const auto& [marker, t] : suffix_rule) {
            if (t == tag) return marker;
        }
        throw std::invalid_argument("synth: no marker for tag");
    }
};

/// Tag of the longest marker ending `word`, if any.
inline std::optional<TagId> lookup_suffix_rule(const std::string& word, const SynthConfig& config) {
    std::optional<TagId> best;
    std::size_t best_len = 0;
    for (const auto& [marker, tag] : config.suffix_rule) {
        if (marker.size() > best_len && word.size() >= marker.size() &&
            word.compare(word.size() - marker.size(), marker.size(), marker) == 0) {
            best = tag;
            best_len = marker.size();
        }
    }
    return best;
}

namespace detail {

inline std::size_t sample_categorical(Rng& rng, const double* probs, std::size_t n) {
    const double u = uniform_unit(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    return n - 1;
}

}  // namespace detail

inline TaggedCorpus generate_corpus(const SynthConfig& config) {
    config.validate();
    const phono::PhonemeInventory inv;
    Rng rng(config.seed);
    const std::size_t m = config.chain_tags.size();
    std::vector<std::string> markers;
    markers.reserve(m);
    for (TagId t : config.chain_tags) markers.push_back(config.marker_for(t));

    std::vector<Sentence> sentences;
    sentences.reserve(config.n_sentences);
    for (std::size_t s = 0; s < config.n_sentences; ++s) {
        const std::size_t len =
            config.min_length + uniform_index(rng, config.max_length - config.min_length + 1);
        Sentence sent;
        sent.tokens.reserve(len + 1);
        std::size_t state = detail::sample_categorical(rng, config.chain_initial.data(), m);
        for (std::size_t t = 0; t < len; ++t) {
            if (t > 0) state = detail::sample_categorical(rng, &config.chain_transition[state * m], m);
            const int syllables = 1 + static_cast<int>(uniform_index(rng, 3));
            const auto stem = phono::to_ascii(phono::generate_word(rng, syllables, inv), inv);
            sent.tokens.push_back({stem + markers[state], config.chain_tags[state]});
        }
        sent.tokens.push_back({config.end_marker, config.end_tag});
        sentences.push_back(std::move(sent));
    }
    return TaggedCorpus(std::move(sentences));
}

inline nlohmann::json synth_config_to_json(const SynthConfig& c) {
    nlohmann::json rule = nlohmann::json::array();
    for (const auto& [marker, tag] : c.suffix_rule) rule.push_back({marker, c.tagset.name(tag)});
    nlohmann::json chain = nlohmann::json::array();
    for (TagId t : c.chain_tags) chain.push_back(c.tagset.name(t));
    return {{"seed", c.seed},           {"n_sentences", c.n_sentences}, {"min_length", c.min_length},
            {"max_length", c.max_length}, {"tagset", c.tagset.names()},  {"suffix_rule", rule},
            {"chain_tags", chain},        {"chain_transition", c.chain_transition},
            {"chain_initial", c.chain_initial}};
}

/// Corpus file text: a "# {config json}" header line followed by the sentences.
inline std::string generate_corpus_file(const SynthConfig& config) {
    const auto corpus = generate_corpus(config);
    return "# " + synth_config_to_json(config).dump() + "\n" + serialize_tagged(corpus, config.tagset);
}

}  // namespace nagatag
