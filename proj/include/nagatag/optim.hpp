#pragma once

// Limited-memory BFGS with backtracking Armijo line search. When an L1
// weight c1 > 0 is configured, the orthant-wise variant (OWL-QN) minimizes
// f(x) + c1 * |x|_1 instead: pseudo-gradients replace gradients, search
// directions are sign-projected and line-search points never leave the
// orthant chosen at the start of the step.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nagatag {

struct OptimConfig {
    int max_iterations = 100;
    int memory_pairs = 10;
    double c1 = 0.1;
    double c2 = 0.1;
    double gradient_tolerance = 1e-5;
    double armijo = 1e-4;
    double backtrack = 0.5;
    int max_line_search = 50;

    void validate() const {
        if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
        if (memory_pairs < 1) throw std::invalid_argument("memory_pairs must be >= 1");
        if (!(c1 >= 0.0) || !(c2 >= 0.0)) throw std::invalid_argument("regularization weights must be >= 0");
        if (!(gradient_tolerance > 0.0)) throw std::invalid_argument("gradient_tolerance must be > 0");
        if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("armijo constant must be in (0, 1)");
        if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("backtrack factor must be in (0, 1)");
        if (max_line_search < 1) throw std::invalid_argument("max_line_search must be >= 1");
    }
};

struct IterationRecord {
    int iteration = 0;
    double objective = 0.0;      // including the L1 term
    double gradient_norm = 0.0;  // max-norm of the (pseudo-)gradient
    double step = 0.0;
    std::size_t nonzero = 0;
};

struct IterationTrace {
    double initial_objective = 0.0;
    std::vector<IterationRecord> records;
};

enum class OptimStatus { converged, max_iterations, line_search_failed };

inline const char* to_string(OptimStatus s) {
    switch (s) {
        case OptimStatus::converged: return "converged";
        case OptimStatus::max_iterations: return "max_iterations";
        case OptimStatus::line_search_failed: return "line_search_failed";
    }
    return "?";
}

struct OptimResult {
    std::vector<double> x;
    double objective = 0.0;
    OptimStatus status = OptimStatus::max_iterations;
    IterationTrace trace;
};

/// Smooth part of the objective: returns f(x) and writes its gradient.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct OptimHooks {
    std::function<void(const IterationRecord&)> on_iteration;
    /// Every line-search trial point together with the orthant it must respect
    /// (entries -1, 0, +1; empty when c1 = 0).
    std::function<void(std::span<const double> trial, std::span<const double> orthant)> on_trial;
};

/// Subgradient of f + c1|x|_1 with the minimum-norm choice at zero coordinates.
inline std::vector<double> pseudo_gradient(std::span<const double> x, std::span<const double> grad, double c1) {
    if (x.size() != grad.size()) throw std::invalid_argument("pseudo_gradient: size mismatch");
    std::vector<double> pg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (c1 == 0.0) {
            pg[i] = grad[i];
        } else if (x[i] > 0.0) {
            pg[i] = grad[i] + c1;
        } else if (x[i] < 0.0) {
            pg[i] = grad[i] - c1;
        } else if (grad[i] + c1 < 0.0) {
            pg[i] = grad[i] + c1;
        } else if (grad[i] - c1 > 0.0) {
            pg[i] = grad[i] - c1;
        } else {
            pg[i] = 0.0;
        }
    }
    return pg;
}

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline double max_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double l1_norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += std::abs(x);
    return acc;
}

inline std::size_t count_nonzero(std::span<const double> v) {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

struct CurvaturePair {
    std::vector<double> s;
    std::vector<double> y;
    double sy;
};

// Returns -H * g using the two-loop recursion.
inline std::vector<double> lbfgs_direction(const std::deque<CurvaturePair>& memory, std::span<const double> g) {
    std::vector<double> q(g.begin(), g.end());
    std::vector<double> alpha(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
        const auto& p = memory[k];
        alpha[k] = dot(p.s, q) / p.sy;
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * p.y[i];
    }
    if (!memory.empty()) {
        const auto& newest = memory.back();
        const double gamma = newest.sy / dot(newest.y, newest.y);
        for (double& v : q) v *= gamma;
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
        const auto& p = memory[k];
        const double beta = dot(p.y, q) / p.sy;
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += p.s[i] * (alpha[k] - beta);
    }
    for (double& v : q) v = -v;
    return q;
}

}  // namespace detail

inline OptimResult minimize(const Objective& objective, std::vector<double> x0, const OptimConfig& config,
                            const OptimHooks& hooks = {}) {
    config.validate();
    const std::size_t n = x0.size();
    const double c1 = config.c1;
    const bool owlqn = c1 > 0.0;

    OptimResult result;
    std::vector<double> x = std::move(x0);
    std::vector<double> g(n);
    double f = objective(x, g);
    if (!std::isfinite(f)) throw std::runtime_error("minimize: objective is not finite at the starting point");
    double F = f + (owlqn ? c1 * detail::l1_norm(x) : 0.0);
    auto pg = pseudo_gradient(x, g, c1);
    result.trace.initial_objective = F;

    std::deque<detail::CurvaturePair> memory;
    std::vector<double> xn(n);
    std::vector<double> gn(n);
    std::vector<double> orthant(owlqn ? n : 0);

    result.status = OptimStatus::max_iterations;
    if (detail::max_norm(pg) <= config.gradient_tolerance) {
        result.status = OptimStatus::converged;
    } else {
        for (int k = 1; k <= config.max_iterations; ++k) {
            auto d = detail::lbfgs_direction(memory, pg);
            if (owlqn) {
                for (std::size_t i = 0; i < n; ++i) {
                    if (d[i] * pg[i] >= 0.0) d[i] = 0.0;
                }
            }
            double slope = detail::dot(pg, d);
            if (!(slope < 0.0)) {
                memory.clear();
                for (std::size_t i = 0; i < n; ++i) d[i] = -pg[i];
                slope = detail::dot(pg, d);
            }
            if (owlqn) {
                for (std::size_t i = 0; i < n; ++i) orthant[i] = x[i] != 0.0 ? detail::sign(x[i]) : detail::sign(-pg[i]);
            }

            double step = memory.empty() ? 1.0 / std::sqrt(detail::dot(d, d)) : 1.0;
            bool accepted = false;
            double fn = 0.0;
            double Fn = 0.0;
            for (int trial = 0; trial < config.max_line_search; ++trial) {
                for (std::size_t i = 0; i < n; ++i) {
                    double v = x[i] + step * d[i];
                    if (owlqn && detail::sign(v) != orthant[i]) v = 0.0;
                    xn[i] = v;
                }
                if (hooks.on_trial) hooks.on_trial(xn, orthant);
                fn = objective(xn, gn);
                if (!std::isfinite(fn)) {
                    throw std::runtime_error("minimize: non-finite objective in line search at iteration " +
                                             std::to_string(k) + ", step " + std::to_string(step));
                }
                Fn = fn + (owlqn ? c1 * detail::l1_norm(xn) : 0.0);
                double decrease = 0.0;
                if (owlqn) {
                    for (std::size_t i = 0; i < n; ++i) decrease += pg[i] * (xn[i] - x[i]);
                } else {
                    decrease = step * slope;
                }
                if (Fn <= F + config.armijo * decrease) {
                    accepted = true;
                    break;
                }
                step *= config.backtrack;
            }
            if (!accepted) {
                result.status = OptimStatus::line_search_failed;
                break;
            }

            detail::CurvaturePair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
            for (std::size_t i = 0; i < n; ++i) {
                pair.s[i] = xn[i] - x[i];
                pair.y[i] = gn[i] - g[i];
            }
            pair.sy = detail::dot(pair.s, pair.y);
            if (pair.sy > 1e-10) {
                memory.push_back(std::move(pair));
                if (memory.size() > static_cast<std::size_t>(config.memory_pairs)) memory.pop_front();
            }

            std::swap(x, xn);
            std::swap(g, gn);
            f = fn;
            F = Fn;
            pg = pseudo_gradient(x, g, c1);

            IterationRecord rec{k, F, detail::max_norm(pg), step, detail::count_nonzero(x)};
            result.trace.records.push_back(rec);
            if (hooks.on_iteration) hooks.on_iteration(rec);
            if (rec.gradient_norm <= config.gradient_tolerance) {
                result.status = OptimStatus::converged;
                break;
            }
        }
    }
    result.x = std::move(x);
    result.objective = F;
    return result;
}

}  // namespace nagatag
