#pragma once

// First-order linear-chain CRF.
//
// Parameters live in one flat vector so the optimizer can work on them
// directly. Blocks, in order:
//
//   state       A x K   attribute a crossed with tag y
//   transition  K x K   row = previous tag, column = next tag
//   begin       K       score of the first tag
//   end         K       score of the last tag
//
// All inference is done with natural-log scores.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "nagatag/corpus.hpp"
#include "nagatag/features.hpp"

namespace nagatag {

using AttributeId = std::uint32_t;

/// Attribute indices active at each position of a sequence.
using AttributeSequence = std::vector<std::vector<AttributeId>>;

struct ParamLayout {
    std::size_t num_attributes = 0;
    std::size_t num_tags = 0;

    std::size_t state(std::size_t a, std::size_t y) const noexcept { return a * num_tags + y; }
    std::size_t transition(std::size_t from, std::size_t to) const noexcept {
        return num_attributes * num_tags + from * num_tags + to;
    }
    std::size_t begin(std::size_t y) const noexcept { return (num_attributes + num_tags) * num_tags + y; }
    std::size_t end(std::size_t y) const noexcept { return (num_attributes + num_tags + 1) * num_tags + y; }
    std::size_t size() const noexcept { return (num_attributes + num_tags + 2) * num_tags; }

    std::size_t state_block_size() const noexcept { return num_attributes * num_tags; }
};

inline double logsumexp(std::span<const double> xs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - m);
    return m + std::log(acc);
}

/// Forward-backward tables for one sequence. Matrices are T x K, row-major.
struct Lattice {
    std::size_t length = 0;
    std::size_t num_tags = 0;
    std::vector<double> state;
    std::vector<double> alpha;
    std::vector<double> beta;
    double log_z = 0.0;

    double s(std::size_t t, std::size_t y) const { return state[t * num_tags + y]; }
    double a(std::size_t t, std::size_t y) const { return alpha[t * num_tags + y]; }
    double b(std::size_t t, std::size_t y) const { return beta[t * num_tags + y]; }
};

namespace detail {

inline void check_attributes(const ParamLayout& layout, const AttributeSequence& attrs) {
    for (const auto& pos : attrs) {
        for (AttributeId a : pos) {
            if (a >= layout.num_attributes) throw std::out_of_range("attribute id out of range");
        }
    }
}

inline std::vector<double> state_scores(const ParamLayout& L, std::span<const double> w,
                                        const AttributeSequence& attrs) {
    const std::size_t K = L.num_tags;
    std::vector<double> s(attrs.size() * K, 0.0);
    for (std::size_t t = 0; t < attrs.size(); ++t) {
        double* row = &s[t * K];
        for (AttributeId a : attrs[t]) {
            const double* wa = &w[L.state(a, 0)];
            for (std::size_t y = 0; y < K; ++y) row[y] += wa[y];
        }
    }
    return s;
}

}  // namespace detail

inline Lattice build_lattice(const ParamLayout& L, std::span<const double> w, const AttributeSequence& attrs) {
    if (attrs.empty()) throw std::invalid_argument("build_lattice: empty sequence");
    if (w.size() != L.size()) throw std::invalid_argument("build_lattice: weight vector size mismatch");
    detail::check_attributes(L, attrs);

    const std::size_t T = attrs.size();
    const std::size_t K = L.num_tags;
    Lattice lat;
    lat.length = T;
    lat.num_tags = K;
    lat.state = detail::state_scores(L, w, attrs);
    lat.alpha.assign(T * K, 0.0);
    lat.beta.assign(T * K, 0.0);

    std::vector<double> buf(K);
    for (std::size_t j = 0; j < K; ++j) lat.alpha[j] = w[L.begin(j)] + lat.state[j];
    for (std::size_t t = 1; t < T; ++t) {
        for (std::size_t j = 0; j < K; ++j) {
            for (std::size_t i = 0; i < K; ++i) buf[i] = lat.alpha[(t - 1) * K + i] + w[L.transition(i, j)];
            lat.alpha[t * K + j] = logsumexp(buf) + lat.state[t * K + j];
        }
    }

    for (std::size_t j = 0; j < K; ++j) lat.beta[(T - 1) * K + j] = w[L.end(j)];
    for (std::size_t t = T - 1; t-- > 0;) {
        for (std::size_t i = 0; i < K; ++i) {
            for (std::size_t j = 0; j < K; ++j) {
                buf[j] = w[L.transition(i, j)] + lat.state[(t + 1) * K + j] + lat.beta[(t + 1) * K + j];
            }
            lat.beta[t * K + i] = logsumexp(buf);
        }
    }

    for (std::size_t j = 0; j < K; ++j) buf[j] = lat.alpha[(T - 1) * K + j] + w[L.end(j)];
    lat.log_z = logsumexp(buf);
    return lat;
}

/// Unnormalized log score of a tag path; log p(tags | x) = score - log_z.
inline double sequence_log_score(const ParamLayout& L, std::span<const double> w, const AttributeSequence& attrs,
                                 std::span<const TagId> tags) {
    if (tags.size() != attrs.size()) throw std::invalid_argument("sequence_log_score: length mismatch");
    if (tags.empty()) throw std::invalid_argument("sequence_log_score: empty sequence");
    detail::check_attributes(L, attrs);
    for (TagId y : tags) {
        if (y >= L.num_tags) throw std::out_of_range("sequence_log_score: tag out of range");
    }
    double score = w[L.begin(tags.front())] + w[L.end(tags.back())];
    for (std::size_t t = 0; t < tags.size(); ++t) {
        for (AttributeId a : attrs[t]) score += w[L.state(a, tags[t])];
        if (t > 0) score += w[L.transition(tags[t - 1], tags[t])];
    }
    return score;
}

struct Marginals {
    std::size_t length = 0;
    std::size_t num_tags = 0;
    std::vector<double> unary;     // T x K
    std::vector<double> pairwise;  // (T-1) x K x K

    double node(std::size_t t, std::size_t y) const { return unary[t * num_tags + y]; }
    double edge(std::size_t t, std::size_t i, std::size_t j) const {
        return pairwise[(t * num_tags + i) * num_tags + j];
    }
};

inline Marginals posterior_marginals(const Lattice& lat, const ParamLayout& L, std::span<const double> w) {
    const std::size_t T = lat.length;
    const std::size_t K = lat.num_tags;
    Marginals m;
    m.length = T;
    m.num_tags = K;
    m.unary.resize(T * K);
    m.pairwise.resize((T - 1) * K * K);
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t y = 0; y < K; ++y) m.unary[t * K + y] = std::exp(lat.a(t, y) + lat.b(t, y) - lat.log_z);
    }
    for (std::size_t t = 0; t + 1 < T; ++t) {
        for (std::size_t i = 0; i < K; ++i) {
            for (std::size_t j = 0; j < K; ++j) {
                m.pairwise[(t * K + i) * K + j] = std::exp(lat.a(t, i) + w[L.transition(i, j)] + lat.s(t + 1, j) +
                                                           lat.b(t + 1, j) - lat.log_z);
            }
        }
    }
    return m;
}

struct ViterbiResult {
    std::vector<TagId> tags;
    double score = 0.0;
};

/// Best path. Ties go to the lower tag index at every decision.
inline ViterbiResult viterbi(const ParamLayout& L, std::span<const double> w, const AttributeSequence& attrs) {
    if (attrs.empty()) throw std::invalid_argument("viterbi: empty sequence");
    if (w.size() != L.size()) throw std::invalid_argument("viterbi: weight vector size mismatch");
    detail::check_attributes(L, attrs);
    const std::size_t T = attrs.size();
    const std::size_t K = L.num_tags;
    const auto s = detail::state_scores(L, w, attrs);

    std::vector<double> delta(T * K);
    std::vector<std::size_t> back(T * K, 0);
    for (std::size_t j = 0; j < K; ++j) delta[j] = w[L.begin(j)] + s[j];
    for (std::size_t t = 1; t < T; ++t) {
        for (std::size_t j = 0; j < K; ++j) {
            std::size_t best_i = 0;
            double best = delta[(t - 1) * K] + w[L.transition(0, j)];
            for (std::size_t i = 1; i < K; ++i) {
                const double v = delta[(t - 1) * K + i] + w[L.transition(i, j)];
                if (v > best) {
                    best = v;
                    best_i = i;
                }
            }
            delta[t * K + j] = best + s[t * K + j];
            back[t * K + j] = best_i;
        }
    }
    std::size_t last = 0;
    double best = delta[(T - 1) * K] + w[L.end(0)];
    for (std::size_t j = 1; j < K; ++j) {
        const double v = delta[(T - 1) * K + j] + w[L.end(j)];
        if (v > best) {
            best = v;
            last = j;
        }
    }
    ViterbiResult r;
    r.score = best;
    r.tags.resize(T);
    r.tags[T - 1] = static_cast<TagId>(last);
    for (std::size_t t = T - 1; t > 0; --t) r.tags[t - 1] = static_cast<TagId>(back[t * K + r.tags[t]]);
    return r;
}

/// One training sequence: encoded attributes plus gold tags.
struct Instance {
    AttributeSequence attrs;
    std::vector<TagId> tags;
};

namespace detail {

// Sums log_z - gold score over the batch and accumulates expected minus
// observed feature counts into grad.
inline double accumulate_nll(const ParamLayout& L, std::span<const double> w, std::span<const Instance> batch,
                             std::span<double> grad) {
    const std::size_t K = L.num_tags;
    double loss = 0.0;
    for (const auto& inst : batch) {
        const auto& attrs = inst.attrs;
        const auto& gold = inst.tags;
        if (gold.size() != attrs.size()) throw std::invalid_argument("nll: gold length mismatch");
        const auto lat = build_lattice(L, w, attrs);
        const auto m = posterior_marginals(lat, L, w);
        const std::size_t T = attrs.size();
        loss += lat.log_z - sequence_log_score(L, w, attrs, gold);

        for (std::size_t t = 0; t < T; ++t) {
            const double* u = &m.unary[t * K];
            for (AttributeId a : attrs[t]) {
                double* g = &grad[L.state(a, 0)];
                for (std::size_t y = 0; y < K; ++y) g[y] += u[y];
                g[gold[t]] -= 1.0;
            }
        }
        for (std::size_t t = 0; t + 1 < T; ++t) {
            for (std::size_t i = 0; i < K; ++i) {
                for (std::size_t j = 0; j < K; ++j) grad[L.transition(i, j)] += m.edge(t, i, j);
            }
            grad[L.transition(gold[t], gold[t + 1])] -= 1.0;
        }
        for (std::size_t y = 0; y < K; ++y) {
            grad[L.begin(y)] += m.node(0, y);
            grad[L.end(y)] += m.node(T - 1, y);
        }
        grad[L.begin(gold.front())] -= 1.0;
        grad[L.end(gold.back())] -= 1.0;
    }
    return loss;
}

}  // namespace detail

/// Negative conditional log-likelihood plus c2 * |w|^2, with its gradient
/// written to `grad`. The batch may be split across `threads` workers; the
/// partial sums are combined in a fixed order.
inline double nll_and_gradient(const ParamLayout& L, std::span<const double> w, std::span<const Instance> batch,
                               double c2, std::span<double> grad, unsigned threads = 1) {
    if (batch.empty()) throw std::invalid_argument("nll: empty batch");
    if (w.size() != L.size() || grad.size() != L.size()) throw std::invalid_argument("nll: size mismatch");
    if (c2 < 0.0) throw std::invalid_argument("nll: c2 must be non-negative");
    std::fill(grad.begin(), grad.end(), 0.0);

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(batch.size())));
    double loss = 0.0;
    if (threads == 1) {
        loss = detail::accumulate_nll(L, w, batch, grad);
    } else {
        std::vector<std::vector<double>> partial_grad(threads, std::vector<double>(L.size(), 0.0));
        std::vector<double> partial_loss(threads, 0.0);
        std::vector<std::exception_ptr> failures(threads);
        std::vector<std::thread> workers;
        const std::size_t chunk = (batch.size() + threads - 1) / threads;
        for (unsigned k = 0; k < threads; ++k) {
            const std::size_t first = std::min(batch.size(), k * chunk);
            const std::size_t last = std::min(batch.size(), first + chunk);
            workers.emplace_back([&, k, first, last] {
                try {
                    partial_loss[k] = detail::accumulate_nll(L, w, batch.subspan(first, last - first), partial_grad[k]);
                } catch (...) {
                    failures[k] = std::current_exception();
                }
            });
        }
        for (auto& th : workers) th.join();
        for (auto& f : failures) {
            if (f) std::rethrow_exception(f);
        }
        for (unsigned k = 0; k < threads; ++k) {
            loss += partial_loss[k];
            for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += partial_grad[k][i];
        }
    }

    double norm2 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        norm2 += w[i] * w[i];
        grad[i] += 2.0 * c2 * w[i];
    }
    const double value = loss + c2 * norm2;
    if (!std::isfinite(value)) throw std::runtime_error("nll: non-finite objective value");
    return value;
}

struct TrainingInfo {
    double c1 = 0.0;
    double c2 = 0.0;
    int iterations = 0;
    double final_objective = 0.0;

    friend bool operator==(const TrainingInfo&, const TrainingInfo&) = default;
};

/// Trained (or trainable) CRF: tagset, feature template, attribute
/// vocabulary and the flat weight vector.
class Model {
public:
    Model() = default;
    Model(TagSet tagset, FeatureConfig config, std::vector<std::string> attributes)
        : tagset_(std::move(tagset)), config_(config), attributes_(std::move(attributes)) {
        config_.validate();
        index_.reserve(attributes_.size());
        for (std::size_t i = 0; i < attributes_.size(); ++i) {
            if (!index_.emplace(attributes_[i], static_cast<AttributeId>(i)).second) {
                throw DataError("duplicate attribute '" + attributes_[i] + "'");
            }
        }
        weights_.assign(layout().size(), 0.0);
    }

    ParamLayout layout() const noexcept { return {attributes_.size(), tagset_.size()}; }
    const TagSet& tagset() const noexcept { return tagset_; }
    const FeatureConfig& feature_config() const noexcept { return config_; }
    const std::vector<std::string>& attributes() const noexcept { return attributes_; }
    std::size_t num_tags() const noexcept { return tagset_.size(); }
    std::size_t num_attributes() const noexcept { return attributes_.size(); }

    std::span<const double> weights() const noexcept { return weights_; }
    std::span<double> weights() noexcept { return weights_; }
    void set_weights(std::vector<double> w) {
        if (w.size() != layout().size()) throw std::invalid_argument("set_weights: size mismatch");
        weights_ = std::move(w);
    }

    std::optional<AttributeId> attribute_id(const std::string& attr) const {
        auto it = index_.find(attr);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    double state_weight(std::size_t a, std::size_t y) const { return weights_.at(layout().state(a, y)); }
    double transition(std::size_t from, std::size_t to) const { return weights_.at(layout().transition(from, to)); }
    double begin_weight(std::size_t y) const { return weights_.at(layout().begin(y)); }
    double end_weight(std::size_t y) const { return weights_.at(layout().end(y)); }

    /// Maps attribute strings to ids; attributes outside the vocabulary are dropped.
    AttributeSequence encode(const std::vector<std::set<std::string>>& attrs) const {
        AttributeSequence out(attrs.size());
        for (std::size_t t = 0; t < attrs.size(); ++t) {
            for (const auto& s : attrs[t]) {
                if (auto id = attribute_id(s)) out[t].push_back(*id);
            }
        }
        return out;
    }

    std::size_t nonzero_state_weights() const {
        return static_cast<std::size_t>(std::count_if(weights_.begin(),
                                                      weights_.begin() + static_cast<std::ptrdiff_t>(layout().state_block_size()),
                                                      [](double v) { return v != 0.0; }));
    }

    TrainingInfo training;

private:
    TagSet tagset_;
    FeatureConfig config_;
    std::vector<std::string> attributes_;
    std::unordered_map<std::string, AttributeId> index_;
    std::vector<double> weights_;
};

inline Lattice build_lattice(const Model& model, const std::vector<std::set<std::string>>& attrs) {
    return build_lattice(model.layout(), model.weights(), model.encode(attrs));
}

inline ViterbiResult viterbi(const Model& model, const std::vector<std::set<std::string>>& attrs) {
    return viterbi(model.layout(), model.weights(), model.encode(attrs));
}

inline double sequence_log_score(const Model& model, const std::vector<std::set<std::string>>& attrs,
                                 std::span<const TagId> tags) {
    return sequence_log_score(model.layout(), model.weights(), model.encode(attrs), tags);
}

/// Feature extraction, binarization and Viterbi decoding for one sentence.
inline Sentence tag_sentence(const Model& model, const std::vector<std::string>& words) {
    if (words.empty()) throw std::invalid_argument("tag_sentence: empty sentence");
    const auto best = viterbi(model, sentence_attributes(words, model.feature_config()));
    Sentence s;
    s.tokens.reserve(words.size());
    for (std::size_t t = 0; t < words.size(); ++t) s.tokens.push_back({words[t], best.tags[t]});
    return s;
}

}  // namespace nagatag
