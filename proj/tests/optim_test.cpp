#include <gtest/gtest.h>

#include <cmath>

#include "nagatag/optim.hpp"
#include "nagatag/random.hpp"

using namespace nagatag;

namespace {

OptimConfig tight(double c1 = 0.0) {
    OptimConfig c;
    c.c1 = c1;
    c.c2 = 0.0;
    c.gradient_tolerance = 1e-10;
    c.max_iterations = 1000;
    return c;
}

double rosenbrock(std::span<const double> x, std::span<double> g) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
}

void expect_monotone(const OptimResult& r) {
    double prev = r.trace.initial_objective;
    for (const auto& rec : r.trace.records) {
        EXPECT_LE(rec.objective, prev);
        prev = rec.objective;
    }
}

}  // namespace

TEST(PseudoGradient, Definition) {
    const std::vector<double> x{0.0, 0.0, 0.0, 1.0, -1.0};
    const std::vector<double> g{0.0, -2.0, 3.0, 0.5, 0.5};
    const auto pg = pseudo_gradient(x, g, 1.0);
    EXPECT_EQ(pg[0], 0.0);
    EXPECT_EQ(pg[1], -1.0);
    EXPECT_EQ(pg[2], 2.0);
    EXPECT_EQ(pg[3], 1.5);
    EXPECT_EQ(pg[4], -0.5);
    EXPECT_EQ(pseudo_gradient(x, g, 0.0), g);
}

TEST(Minimize, QuadraticReachesTheMinimum) {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> a(6);
        for (auto& v : a) v = 10.0 * uniform_unit(rng) - 5.0;
        Objective f = [&](std::span<const double> x, std::span<double> g) {
            double v = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                v += (x[i] - a[i]) * (x[i] - a[i]);
                g[i] = 2.0 * (x[i] - a[i]);
            }
            return v;
        };
        const auto r = minimize(f, std::vector<double>(a.size(), 0.0), tight());
        double dist = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) dist += (r.x[i] - a[i]) * (r.x[i] - a[i]);
        EXPECT_LE(std::sqrt(dist), 1e-8);
        EXPECT_LE(r.trace.records.size(), 10u);
        expect_monotone(r);
    }
}

TEST(Minimize, Rosenbrock) {
    const auto r = minimize(rosenbrock, {-1.2, 1.0}, tight());
    EXPECT_NEAR(r.x[0], 1.0, 1e-6);
    EXPECT_NEAR(r.x[1], 1.0, 1e-6);
    expect_monotone(r);
}

TEST(Minimize, SoftThreshold) {
    Objective f = [](std::span<const double> x, std::span<double> g) {
        g[0] = x[0] - 3.0;
        return 0.5 * (x[0] - 3.0) * (x[0] - 3.0);
    };
    const auto r = minimize(f, {0.0}, tight(1.0));
    EXPECT_NEAR(r.x[0], 2.0, 1e-8);
    expect_monotone(r);

    // Minimum at zero when the L1 weight dominates.
    const auto z = minimize(f, {0.0}, tight(5.0));
    EXPECT_EQ(z.x[0], 0.0);
    EXPECT_EQ(z.status, OptimStatus::converged);
}

TEST(Minimize, SeparableLassoMatchesClosedForm) {
    // f = sum 0.5 * d_i * (x_i - b_i)^2 ; minimizer of f + c1|x| is soft-thresholding.
    Rng rng(10);
    const std::size_t n = 12;
    std::vector<double> d(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = 0.5 + 2.0 * uniform_unit(rng);
        b[i] = 6.0 * uniform_unit(rng) - 3.0;
    }
    Objective f = [&](std::span<const double> x, std::span<double> g) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v += 0.5 * d[i] * (x[i] - b[i]) * (x[i] - b[i]);
            g[i] = d[i] * (x[i] - b[i]);
        }
        return v;
    };
    const double c1 = 1.0;
    const auto r = minimize(f, std::vector<double>(n, 0.0), tight(c1));
    for (std::size_t i = 0; i < n; ++i) {
        const double shrink = std::max(0.0, std::abs(b[i]) - c1 / d[i]);
        EXPECT_NEAR(r.x[i], std::copysign(shrink, b[i]), 1e-7) << i;
    }
    expect_monotone(r);
}

TEST(Minimize, OrthantIsRespectedByEveryTrialPoint) {
    Rng rng(12);
    const std::size_t n = 8;
    std::vector<double> b(n);
    for (auto& v : b) v = 4.0 * uniform_unit(rng) - 2.0;
    Objective f = [&](std::span<const double> x, std::span<double> g) {
        // Coupled quadratic so directions are not axis aligned.
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = x[i] - b[i] + 0.3 * x[(i + 1) % n];
            v += r * r;
        }
        std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = x[i] - b[i] + 0.3 * x[(i + 1) % n];
            g[i] += 2.0 * r;
            g[(i + 1) % n] += 0.6 * r;
        }
        return v;
    };
    std::size_t trials = 0;
    OptimHooks hooks;
    hooks.on_trial = [&](std::span<const double> x, std::span<const double> orthant) {
        ++trials;
        ASSERT_EQ(x.size(), orthant.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            EXPECT_TRUE(x[i] == 0.0 || (x[i] > 0.0) == (orthant[i] > 0.0)) << i;
        }
    };
    const auto r = minimize(f, std::vector<double>(n, 0.0), tight(0.7), hooks);
    EXPECT_GT(trials, 0u);
    expect_monotone(r);
}

TEST(Minimize, IsDeterministic) {
    const auto a = minimize(rosenbrock, {-1.2, 1.0}, tight());
    const auto b = minimize(rosenbrock, {-1.2, 1.0}, tight());
    ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
    for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
        EXPECT_EQ(a.trace.records[i].objective, b.trace.records[i].objective);
        EXPECT_EQ(a.trace.records[i].step, b.trace.records[i].step);
    }
    EXPECT_EQ(a.x, b.x);
}

TEST(Minimize, StopsAtIterationCap) {
    OptimConfig c = tight();
    c.max_iterations = 3;
    const auto r = minimize(rosenbrock, {-1.2, 1.0}, c);
    EXPECT_EQ(r.status, OptimStatus::max_iterations);
    EXPECT_EQ(r.trace.records.size(), 3u);
}

TEST(Minimize, Errors) {
    Objective nan_at_start = [](std::span<const double>, std::span<double> g) {
        g[0] = 0.0;
        return std::nan("");
    };
    EXPECT_THROW(minimize(nan_at_start, {0.0}, tight()), std::runtime_error);

    Objective blows_up = [](std::span<const double> x, std::span<double> g) {
        g[0] = -1.0;
        return x[0] > 0.0 ? std::numeric_limits<double>::infinity() : -x[0];
    };
    EXPECT_THROW(minimize(blows_up, {0.0}, tight()), std::runtime_error);

    // Gradient pointing the wrong way: no Armijo step exists.
    Objective liar = [](std::span<const double> x, std::span<double> g) {
        g[0] = 1.0;
        return x[0] * x[0] + 1.0 + (x[0] < 0.0 ? 1.0 : 0.0);
    };
    const auto r = minimize(liar, {0.0}, tight());
    EXPECT_EQ(r.status, OptimStatus::line_search_failed);

    OptimConfig bad;
    bad.max_iterations = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = OptimConfig{};
    bad.c1 = -1.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}
