#pragma once

#include <functional>
#include <unordered_set>

#include "nagatag/corpus.hpp"
#include "nagatag/crf.hpp"
#include "nagatag/features.hpp"
#include "nagatag/optim.hpp"

namespace nagatag {

struct TrainOptions {
    OptimConfig optim;
    FeatureConfig features;
    unsigned threads = 1;
    std::function<void(const IterationRecord&)> on_iteration;
};

struct TrainResult {
    Model model;
    OptimStatus status = OptimStatus::max_iterations;
    IterationTrace trace;
};

/// Attribute vocabulary of a corpus in order of first occurrence.
inline std::vector<std::string> collect_attributes(const TaggedCorpus& corpus, const FeatureConfig& config) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& s : corpus.sentences()) {
        const auto words = s.words();
        for (const auto& attrs : sentence_attributes(words, config)) {
            for (const auto& a : attrs) {
                if (seen.insert(a).second) out.push_back(a);
            }
        }
    }
    return out;
}

inline std::vector<Instance> encode_corpus(const Model& model, const TaggedCorpus& corpus) {
    std::vector<Instance> out;
    out.reserve(corpus.size());
    for (const auto& s : corpus.sentences()) {
        for (const auto& tok : s.tokens) {
            if (tok.tag >= model.num_tags()) throw DataError("corpus tag index outside the model's tagset");
        }
        out.push_back({model.encode(sentence_attributes(s.words(), model.feature_config())), s.tags()});
    }
    return out;
}

/// Fits a CRF to `corpus` starting from all-zero weights.
inline TrainResult train(const TaggedCorpus& corpus, const TagSet& tagset, const TrainOptions& options) {
    if (corpus.empty()) throw DataError("train: corpus is empty");
    options.optim.validate();
    options.features.validate();

    Model model(tagset, options.features, collect_attributes(corpus, options.features));
    const auto batch = encode_corpus(model, corpus);
    const auto layout = model.layout();
    const double c2 = options.optim.c2;
    const unsigned threads = options.threads;

    Objective objective = [&](std::span<const double> w, std::span<double> grad) {
        return nll_and_gradient(layout, w, batch, c2, grad, threads);
    };
    OptimHooks hooks;
    hooks.on_iteration = options.on_iteration;
    auto opt = minimize(objective, std::vector<double>(layout.size(), 0.0), options.optim, hooks);

    model.set_weights(std::move(opt.x));
    model.training.c1 = options.optim.c1;
    model.training.c2 = c2;
    model.training.iterations = static_cast<int>(opt.trace.records.size());
    model.training.final_objective = opt.objective;
    return {std::move(model), opt.status, std::move(opt.trace)};
}

/// Tags every sentence of `corpus` (gold tags ignored) with the model.
inline TaggedCorpus tag_corpus(const Model& model, const TaggedCorpus& corpus) {
    std::vector<Sentence> out;
    out.reserve(corpus.size());
    for (const auto& s : corpus.sentences()) out.push_back(tag_sentence(model, s.words()));
    return TaggedCorpus(std::move(out));
}

}  // namespace nagatag
