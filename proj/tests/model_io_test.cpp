#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "nagatag/model_io.hpp"
#include "nagatag/random.hpp"

using namespace nagatag;

namespace {

Model random_model(Rng& rng, std::size_t A) {
    std::vector<std::string> attrs;
    for (std::size_t a = 0; a < A; ++a) attrs.push_back("word=w" + std::to_string(a) + (a % 3 ? "ṅ\"\\" : ""));
    FeatureConfig fc;
    fc.prefix_max = 2;
    fc.neighbours = false;
    Model m(TagSet(), fc, attrs);
    std::vector<double> w(m.layout().size());
    for (auto& v : w) {
        const auto kind = uniform_index(rng, 5);
        if (kind == 0) {
            v = 0.0;
        } else if (kind == 1) {
            v = std::ldexp(uniform_unit(rng) - 0.5, -static_cast<int>(uniform_index(rng, 1070)));
        } else {
            v = 40.0 * uniform_unit(rng) - 20.0;
        }
    }
    m.set_weights(std::move(w));
    m.training = {0.1, 0.2, 37, 1234.5678901234567};
    return m;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(FormatDouble, RoundTripsEveryValue) {
    Rng rng(4);
    for (int i = 0; i < 20000; ++i) {
        std::uint64_t bits = rng();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) continue;
        const auto s = format_double(v);
        ASSERT_TRUE(bit_equal(std::strtod(s.c_str(), nullptr), v)) << s;
    }
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_THROW(format_double(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(ModelIo, RoundTripIsBitFaithful) {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_model(rng, 1 + uniform_index(rng, 30));
        const auto text = save_model(m);
        const auto back = load_model(text);
        ASSERT_EQ(back.attributes(), m.attributes());
        ASSERT_EQ(back.tagset(), m.tagset());
        ASSERT_EQ(back.feature_config().prefix_max, 2);
        ASSERT_FALSE(back.feature_config().neighbours);
        ASSERT_EQ(back.weights().size(), m.weights().size());
        for (std::size_t i = 0; i < m.weights().size(); ++i) {
            ASSERT_TRUE(bit_equal(back.weights()[i], m.weights()[i])) << i;
        }
        EXPECT_EQ(back.training.iterations, 37);
        EXPECT_TRUE(bit_equal(back.training.final_objective, m.training.final_objective));
        EXPECT_EQ(save_model(back), text);
    }
}

TEST(ModelIo, LayoutOfTheFile) {
    Model m(TagSet(std::vector<std::string>{"N", "V"}), FeatureConfig{}, {"a=1", "b=2"});
    std::vector<double> w(m.layout().size(), 0.0);
    w[m.layout().state(1, 0)] = 0.25;
    w[m.layout().transition(0, 1)] = -1.5;
    w[m.layout().end(1)] = 2.0;
    m.set_weights(w);
    const auto j = nlohmann::json::parse(save_model(m));
    EXPECT_EQ(j["format_version"], 1);
    EXPECT_EQ(j["state_weights"].size(), 1u);
    EXPECT_EQ(j["state_weights"][0][0], 1);
    EXPECT_EQ(j["state_weights"][0][1], 0);
    EXPECT_EQ(j["transitions"], nlohmann::json({0.0, -1.5, 0.0, 0.0}));
    EXPECT_EQ(j["end"], nlohmann::json({0.0, 2.0}));
}

TEST(ModelIo, RejectsMalformedFiles) {
    Model m(TagSet(std::vector<std::string>{"N", "V"}), FeatureConfig{}, {"a=1"});
    auto good = nlohmann::json::parse(save_model(m));
    EXPECT_NO_THROW(load_model(good.dump()));
    EXPECT_THROW(load_model("{"), DataError);
    EXPECT_THROW(load_model("[]"), DataError);

    auto bad = good;
    bad["format_version"] = 2;
    EXPECT_THROW(load_model(bad.dump()), DataError);
    bad = good;
    bad["transitions"] = nlohmann::json({1.0, 2.0});
    EXPECT_THROW(load_model(bad.dump()), DataError);
    bad = good;
    bad["state_weights"] = nlohmann::json::array({nlohmann::json::array({5, 0, 1.0})});
    EXPECT_THROW(load_model(bad.dump()), DataError);
    bad = good;
    bad["attributes"] = nlohmann::json({"a=1", "a=1"});
    EXPECT_THROW(load_model(bad.dump()), DataError);
    bad = good;
    bad["tagset"] = nlohmann::json({"N", "N"});
    EXPECT_THROW(load_model(bad.dump()), DataError);
    bad = good;
    bad.erase("begin");
    EXPECT_THROW(load_model(bad.dump()), DataError);
}
