#pragma once

// Token-level evaluation and transition inspection.

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nagatag/corpus.hpp"
#include "nagatag/crf.hpp"

namespace nagatag {

/// K x K counts, rows = gold tag, columns = predicted tag.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t num_tags) : k_(num_tags), counts_(num_tags * num_tags, 0) {}

    std::size_t num_tags() const noexcept { return k_; }
    std::size_t at(std::size_t gold, std::size_t predicted) const { return counts_.at(gold * k_ + predicted); }
    void add(std::size_t gold, std::size_t predicted, std::size_t n = 1) { counts_.at(gold * k_ + predicted) += n; }

    std::size_t total() const {
        std::size_t s = 0;
        for (auto c : counts_) s += c;
        return s;
    }
    std::size_t trace() const {
        std::size_t s = 0;
        for (std::size_t i = 0; i < k_; ++i) s += at(i, i);
        return s;
    }
    std::size_t row_sum(std::size_t gold) const {
        std::size_t s = 0;
        for (std::size_t j = 0; j < k_; ++j) s += at(gold, j);
        return s;
    }
    std::size_t column_sum(std::size_t predicted) const {
        std::size_t s = 0;
        for (std::size_t i = 0; i < k_; ++i) s += at(i, predicted);
        return s;
    }

private:
    std::size_t k_;
    std::vector<std::size_t> counts_;
};

inline ConfusionMatrix confusion(const TaggedCorpus& gold, const TaggedCorpus& predicted, std::size_t num_tags) {
    require_same_structure(gold, predicted);
    ConfusionMatrix cm(num_tags);
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const auto& g = gold.sentences()[i].tokens;
        const auto& p = predicted.sentences()[i].tokens;
        for (std::size_t t = 0; t < g.size(); ++t) {
            if (g[t].tag >= num_tags || p[t].tag >= num_tags) throw DataError("confusion: tag index out of range");
            cm.add(g[t].tag, p[t].tag);
        }
    }
    return cm;
}

struct TagMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct EvalReport {
    std::vector<TagMetrics> per_tag;
    double accuracy = 0.0;
    TagMetrics macro;
    TagMetrics weighted;
    std::size_t total = 0;
    std::vector<std::string> warnings;
};

inline EvalReport report(const ConfusionMatrix& cm, const TagSet& tagset) {
    const std::size_t K = cm.num_tags();
    if (tagset.size() != K) throw std::invalid_argument("report: tagset size does not match confusion matrix");
    const std::size_t total = cm.total();
    if (total == 0) throw DataError("report: confusion matrix is empty");

    EvalReport r;
    r.total = total;
    r.per_tag.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        const auto tp = static_cast<double>(cm.at(k, k));
        const auto predicted = cm.column_sum(k);
        const auto support = cm.row_sum(k);
        auto& m = r.per_tag[k];
        m.support = support;
        if (predicted > 0) {
            m.precision = tp / static_cast<double>(predicted);
        } else {
            r.warnings.push_back("precision of " + tagset.name(static_cast<TagId>(k)) +
                                 " is 0/0 (never predicted); set to 0");
        }
        if (support > 0) {
            m.recall = tp / static_cast<double>(support);
        } else {
            r.warnings.push_back("recall of " + tagset.name(static_cast<TagId>(k)) + " is 0/0 (no support); set to 0");
        }
        m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    }
    for (const auto& m : r.per_tag) {
        const double wt = static_cast<double>(m.support) / static_cast<double>(total);
        r.macro.precision += m.precision / static_cast<double>(K);
        r.macro.recall += m.recall / static_cast<double>(K);
        r.macro.f1 += m.f1 / static_cast<double>(K);
        r.weighted.precision += wt * m.precision;
        r.weighted.recall += wt * m.recall;
        r.weighted.f1 += wt * m.f1;
    }
    r.macro.support = total;
    r.weighted.support = total;
    r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
    return r;
}

namespace detail {

inline std::string metric_row(const std::string& label, const TagMetrics& m) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%12s %10.2f %10.2f %10.2f %10zu\n", label.c_str(), m.precision, m.recall, m.f1,
                  m.support);
    return buf;
}

}  // namespace detail

/// Fixed-width table: one row per tag in tagset order, then aggregates.
inline std::string format_report_text(const EvalReport& r, const TagSet& tagset) {
    std::string out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%12s %10s %10s %10s %10s\n\n", "Tag", "precision", "recall", "f1-score", "support");
    out += buf;
    for (std::size_t k = 0; k < r.per_tag.size(); ++k) {
        out += detail::metric_row(tagset.name(static_cast<TagId>(k)), r.per_tag[k]);
    }
    out += "\n";
    out += detail::metric_row("macro avg", r.macro);
    out += detail::metric_row("avg / total", r.weighted);
    std::snprintf(buf, sizeof buf, "\naccuracy: %.4f (%zu tokens)\n", r.accuracy, r.total);
    out += buf;
    return out;
}

inline nlohmann::json report_to_json(const EvalReport& r, const TagSet& tagset) {
    auto metrics = [](const TagMetrics& m) {
        return nlohmann::json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
    };
    nlohmann::json tags = nlohmann::json::object();
    for (std::size_t k = 0; k < r.per_tag.size(); ++k) tags[tagset.name(static_cast<TagId>(k))] = metrics(r.per_tag[k]);
    nlohmann::json order = tagset.names();
    return {{"tags", tags},          {"tag_order", order},
            {"accuracy", r.accuracy}, {"macro_avg", metrics(r.macro)},
            {"weighted_avg", metrics(r.weighted)}, {"total", r.total},
            {"warnings", r.warnings}};
}

/// CSV with a header row and column of tag names; gold tags are rows.
inline std::string confusion_to_csv(const ConfusionMatrix& cm, const TagSet& tagset) {
    std::ostringstream os;
    os << "gold\\predicted";
    for (const auto& n : tagset.names()) os << ',' << n;
    os << '\n';
    for (std::size_t i = 0; i < cm.num_tags(); ++i) {
        os << tagset.name(static_cast<TagId>(i));
        for (std::size_t j = 0; j < cm.num_tags(); ++j) os << ',' << cm.at(i, j);
        os << '\n';
    }
    return os.str();
}

struct TransitionEntry {
    TagId from = 0;
    TagId to = 0;
    double weight = 0.0;
};

struct BoundaryEntry {
    TagId tag = 0;
    double weight = 0.0;
};

struct TransitionRanking {
    std::vector<TransitionEntry> top;
    std::vector<TransitionEntry> bottom;
    std::vector<BoundaryEntry> begin;  // sorted by weight, descending
    std::vector<BoundaryEntry> end;
};

/// Most and least likely tag-to-tag transitions. Equal weights are ordered
/// by (from, to) index in both lists.
inline TransitionRanking top_transitions(const Model& model, std::size_t n) {
    if (n < 1) throw std::invalid_argument("top_transitions: n must be >= 1");
    const std::size_t K = model.num_tags();
    std::vector<TransitionEntry> all;
    all.reserve(K * K);
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < K; ++j) {
            all.push_back({static_cast<TagId>(i), static_cast<TagId>(j), model.transition(i, j)});
        }
    }
    auto tie = [](const TransitionEntry& a, const TransitionEntry& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
    };
    TransitionRanking r;
    r.top = all;
    std::stable_sort(r.top.begin(), r.top.end(), [&](const auto& a, const auto& b) {
        return a.weight != b.weight ? a.weight > b.weight : tie(a, b);
    });
    r.bottom = all;
    std::stable_sort(r.bottom.begin(), r.bottom.end(), [&](const auto& a, const auto& b) {
        return a.weight != b.weight ? a.weight < b.weight : tie(a, b);
    });
    r.top.resize(std::min(n, r.top.size()));
    r.bottom.resize(std::min(n, r.bottom.size()));

    for (std::size_t y = 0; y < K; ++y) {
        r.begin.push_back({static_cast<TagId>(y), model.begin_weight(y)});
        r.end.push_back({static_cast<TagId>(y), model.end_weight(y)});
    }
    auto by_weight = [](const BoundaryEntry& a, const BoundaryEntry& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.tag < b.tag;
    };
    std::stable_sort(r.begin.begin(), r.begin.end(), by_weight);
    std::stable_sort(r.end.begin(), r.end.end(), by_weight);
    return r;
}

inline std::string format_transitions(const TransitionRanking& r, const TagSet& tagset) {
    std::string out;
    char buf[128];
    auto section = [&](const char* title, const std::vector<TransitionEntry>& list) {
        out += title;
        out += '\n';
        for (const auto& e : list) {
            std::snprintf(buf, sizeof buf, "%-6s -> %-6s %12.6f\n", tagset.name(e.from).c_str(),
                          tagset.name(e.to).c_str(), e.weight);
            out += buf;
        }
    };
    section("Top likely transitions:", r.top);
    out += '\n';
    section("Top unlikely transitions:", r.bottom);
    auto boundary = [&](const char* title, const std::vector<BoundaryEntry>& list, bool at_start) {
        out += '\n';
        out += title;
        out += '\n';
        for (const auto& e : list) {
            if (at_start) {
                std::snprintf(buf, sizeof buf, "%-6s -> %-6s %12.6f\n", "BOS", tagset.name(e.tag).c_str(), e.weight);
            } else {
                std::snprintf(buf, sizeof buf, "%-6s -> %-6s %12.6f\n", tagset.name(e.tag).c_str(), "EOS", e.weight);
            }
            out += buf;
        }
    };
    boundary("Sentence-start weights:", r.begin, true);
    boundary("Sentence-end weights:", r.end, false);
    return out;
}

}  // namespace nagatag
