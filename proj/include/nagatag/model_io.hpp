#pragma once

// JSON model file, format_version 1.
//
//   format_version  1
//   tagset          ["ADJ", ...]
//   feature_config  {prefix_max, suffix_max, flags: {...}}
//   attributes      ["word=Titia", ...]            array position = attribute id
//   state_weights   [[attribute, tag, weight], ...] nonzero entries only
//   transitions     K*K numbers, row-major (row = previous tag)
//   begin, end      K numbers each
//   training        {c1, c2, iterations, final_objective}
//
// Numbers are written with 17 significant digits so every double survives a
// write/read cycle unchanged.

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nagatag/crf.hpp"
#include "nagatag/error.hpp"

namespace nagatag {

inline constexpr int kModelFormatVersion = 1;

inline std::string format_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("cannot serialize non-finite number");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

inline void write_number_array(std::ostream& os, std::span<const double> values) {
    os << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ", ";
        os << format_double(values[i]);
    }
    os << ']';
}

inline void write_string_array(std::ostream& os, const std::vector<std::string>& values, const char* sep) {
    os << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << sep;
        os << json_string(values[i]);
    }
    os << ']';
}

}  // namespace detail

inline std::string save_model(const Model& model) {
    const auto L = model.layout();
    const auto w = model.weights();
    const auto& fc = model.feature_config();
    std::ostringstream os;
    os << "{\n";
    os << "  \"format_version\": " << kModelFormatVersion << ",\n";
    os << "  \"tagset\": ";
    detail::write_string_array(os, model.tagset().names(), ", ");
    os << ",\n";
    os << "  \"feature_config\": {\"prefix_max\": " << fc.prefix_max << ", \"suffix_max\": " << fc.suffix_max
       << ", \"flags\": {\"word\": " << std::boolalpha << fc.word << ", \"position\": " << fc.position
       << ", \"casing\": " << fc.casing << ", \"has_hyphen\": " << fc.has_hyphen
       << ", \"is_numeric\": " << fc.is_numeric << ", \"neighbours\": " << fc.neighbours
       << ", \"prefixes\": " << fc.prefixes << ", \"suffixes\": " << fc.suffixes << "}},\n";
    os << "  \"attributes\": ";
    detail::write_string_array(os, model.attributes(), ",\n    ");
    os << ",\n";
    os << "  \"state_weights\": [";
    bool first = true;
    for (std::size_t a = 0; a < L.num_attributes; ++a) {
        for (std::size_t y = 0; y < L.num_tags; ++y) {
            const double v = w[L.state(a, y)];
            if (v == 0.0) continue;
            os << (first ? "\n    [" : ",\n    [") << a << ", " << y << ", " << format_double(v) << ']';
            first = false;
        }
    }
    os << (first ? "]" : "\n  ]") << ",\n";
    os << "  \"transitions\": ";
    detail::write_number_array(os, w.subspan(L.transition(0, 0), L.num_tags * L.num_tags));
    os << ",\n  \"begin\": ";
    detail::write_number_array(os, w.subspan(L.begin(0), L.num_tags));
    os << ",\n  \"end\": ";
    detail::write_number_array(os, w.subspan(L.end(0), L.num_tags));
    os << ",\n  \"training\": {\"c1\": " << format_double(model.training.c1)
       << ", \"c2\": " << format_double(model.training.c2) << ", \"iterations\": " << model.training.iterations
       << ", \"final_objective\": " << format_double(model.training.final_objective) << "}\n";
    os << "}\n";
    return os.str();
}

inline Model load_model(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("model: invalid JSON: ") + e.what());
    }
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw DataError("model: unsupported format_version " + std::to_string(version));
        }
        TagSet tagset(doc.at("tagset").get<std::vector<std::string>>());
        const auto& fcj = doc.at("feature_config");
        FeatureConfig fc;
        fc.prefix_max = fcj.at("prefix_max").get<int>();
        fc.suffix_max = fcj.at("suffix_max").get<int>();
        if (fcj.contains("flags")) {
            const auto& f = fcj.at("flags");
            fc.word = f.value("word", fc.word);
            fc.position = f.value("position", fc.position);
            fc.casing = f.value("casing", fc.casing);
            fc.has_hyphen = f.value("has_hyphen", fc.has_hyphen);
            fc.is_numeric = f.value("is_numeric", fc.is_numeric);
            fc.neighbours = f.value("neighbours", fc.neighbours);
            fc.prefixes = f.value("prefixes", fc.prefixes);
            fc.suffixes = f.value("suffixes", fc.suffixes);
        }
        Model model(std::move(tagset), fc, doc.at("attributes").get<std::vector<std::string>>());
        const auto L = model.layout();
        const std::size_t K = L.num_tags;
        std::vector<double> w(L.size(), 0.0);

        auto finite = [](double v, const char* what) {
            if (!std::isfinite(v)) throw DataError(std::string("model: non-finite value in ") + what);
            return v;
        };
        for (const auto& entry : doc.at("state_weights")) {
            if (!entry.is_array() || entry.size() != 3) throw DataError("model: state_weights entry must be [a, y, w]");
            const auto a = entry[0].get<std::size_t>();
            const auto y = entry[1].get<std::size_t>();
            if (a >= L.num_attributes || y >= K) throw DataError("model: state weight index out of range");
            w[L.state(a, y)] = finite(entry[2].get<double>(), "state_weights");
        }
        const auto trans = doc.at("transitions").get<std::vector<double>>();
        if (trans.size() != K * K) throw DataError("model: transitions must have K*K entries");
        for (std::size_t i = 0; i < K * K; ++i) w[L.transition(0, 0) + i] = finite(trans[i], "transitions");
        const auto begin = doc.at("begin").get<std::vector<double>>();
        const auto end = doc.at("end").get<std::vector<double>>();
        if (begin.size() != K || end.size() != K) throw DataError("model: begin/end must have K entries");
        for (std::size_t y = 0; y < K; ++y) {
            w[L.begin(y)] = finite(begin[y], "begin");
            w[L.end(y)] = finite(end[y], "end");
        }
        model.set_weights(std::move(w));

        if (doc.contains("training")) {
            const auto& t = doc.at("training");
            model.training.c1 = t.value("c1", 0.0);
            model.training.c2 = t.value("c2", 0.0);
            model.training.iterations = t.value("iterations", 0);
            model.training.final_objective = t.value("final_objective", 0.0);
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("model: ") + e.what());
    }
}

}  // namespace nagatag
