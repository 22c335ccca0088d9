#pragma once

// `nagatag` command-line front end.
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nagatag/corpus.hpp"
#include "nagatag/crf.hpp"
#include "nagatag/datagen.hpp"
#include "nagatag/eval.hpp"
#include "nagatag/features.hpp"
#include "nagatag/model_io.hpp"
#include "nagatag/phonotactics.hpp"
#include "nagatag/trainer.hpp"

namespace nagatag::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
    if (!out) throw DataError("write failed for '" + path + "'");
}

namespace detail {

struct Options {
    std::string input;
    std::string second_input;
    std::string output;
    std::string model_path;
    std::string tagset_path;
    std::string unknown_tags = "reject";
    std::string format = "text";
    std::string confusion_path;
    std::string train_output;
    std::string test_output;
    std::string exclude_tag = "FW";
    std::vector<std::string> words;
    std::vector<std::string> phoneme_strings;
    OptimConfig optim;
    FeatureConfig features;
    unsigned threads = 1;
    double fraction = 0.7;
    std::uint64_t seed = 1;
    std::size_t top_n = 10;
    std::size_t sentences = 100;
    std::size_t min_len = 5;
    std::size_t max_len = 20;
};

inline TagSet load_tagset(const Options& o) {
    return o.tagset_path.empty() ? TagSet() : TagSet::parse(read_file(o.tagset_path));
}

inline UnknownTagPolicy policy(const Options& o) {
    return o.unknown_tags == "unk" ? UnknownTagPolicy::map_to_unk : UnknownTagPolicy::reject;
}

inline void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.output.empty()) {
        out << text;
    } else {
        write_file(o.output, text);
    }
}

inline Model load_model_checked(const Options& o) {
    auto model = load_model(read_file(o.model_path));
    if (!o.tagset_path.empty() && !(load_tagset(o) == model.tagset())) {
        throw DataError("model/tagset mismatch: the model was trained with a different tagset");
    }
    return model;
}

inline void cmd_train(const Options& o, std::ostream&, std::ostream& err) {
    const auto tagset = load_tagset(o);
    const auto corpus = parse_tagged(read_file(o.input), tagset, policy(o));
    TrainOptions opts;
    opts.optim = o.optim;
    opts.features = o.features;
    opts.threads = o.threads;
    opts.on_iteration = [&err](const IterationRecord& r) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "iter %4d  objective %.6f  gnorm %.3e  step %.3e  nonzero %zu\n", r.iteration,
                      r.objective, r.gradient_norm, r.step, r.nonzero);
        err << buf;
    };
    err << "training on " << corpus.size() << " sentences, " << corpus.token_count() << " tokens\n";
    auto result = train(corpus, tagset, opts);
    err << "status: " << to_string(result.status) << ", iterations: " << result.model.training.iterations
        << ", objective: " << result.model.training.final_objective
        << ", attributes: " << result.model.num_attributes()
        << ", nonzero state weights: " << result.model.nonzero_state_weights() << "\n";
    write_file(o.model_path, save_model(result.model));
}

inline void cmd_tag(const Options& o, std::ostream& out, std::ostream&) {
    const auto model = load_model_checked(o);
    const auto raw = parse_raw(read_file(o.input));
    std::vector<Sentence> tagged;
    tagged.reserve(raw.size());
    for (const auto& words : raw) tagged.push_back(tag_sentence(model, words));
    emit(o, out, serialize_tagged(TaggedCorpus(std::move(tagged)), model.tagset()));
}

inline void cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
    const auto model = load_model_checked(o);
    const auto gold = parse_tagged(read_file(o.input), model.tagset(), policy(o));
    if (gold.empty()) throw DataError("eval: corpus is empty");
    const auto predicted = tag_corpus(model, gold);
    const auto cm = confusion(gold, predicted, model.num_tags());
    const auto r = report(cm, model.tagset());
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    if (o.format == "json") {
        emit(o, out, report_to_json(r, model.tagset()).dump(2) + "\n");
    } else {
        emit(o, out, format_report_text(r, model.tagset()));
    }
    if (!o.confusion_path.empty()) write_file(o.confusion_path, confusion_to_csv(cm, model.tagset()));
}

inline void cmd_stats(const Options& o, std::ostream& out, std::ostream&) {
    const auto tagset = load_tagset(o);
    const auto corpus = parse_tagged(read_file(o.input), tagset, policy(o));
    const auto freq = tag_frequencies(corpus, tagset);
    if (o.format == "json") {
        nlohmann::json j = nlohmann::json::object();
        for (std::size_t k = 0; k < freq.size(); ++k) j[tagset.name(static_cast<TagId>(k))] = freq[k];
        emit(o, out,
             nlohmann::json{{"frequencies", j}, {"sentences", corpus.size()}, {"tokens", corpus.token_count()}}.dump(2) +
                 "\n");
        return;
    }
    std::string text;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-8s %-6s %10s\n", "Sl. no.", "tag", "frequency");
    text += buf;
    for (std::size_t k = 0; k < freq.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%-8zu %-6s %10zu\n", k + 1, tagset.name(static_cast<TagId>(k)).c_str(),
                      freq[k]);
        text += buf;
    }
    std::snprintf(buf, sizeof buf, "%-8s %-6s %10zu\n%-8s %-6s %10zu\n", "", "total", corpus.token_count(), "",
                  "sents", corpus.size());
    text += buf;
    emit(o, out, text);
}

inline void cmd_split(const Options& o, std::ostream&, std::ostream& err) {
    if (!(o.fraction > 0.0 && o.fraction <= 1.0)) throw UsageError("--fraction must be in (0, 1]");
    const auto tagset = load_tagset(o);
    const auto corpus = parse_tagged(read_file(o.input), tagset, policy(o));
    const auto [train_part, test_part] = split_corpus(corpus, o.fraction, o.seed);
    const auto train_path = o.train_output.empty() ? o.input + ".train" : o.train_output;
    const auto test_path = o.test_output.empty() ? o.input + ".test" : o.test_output;
    write_file(train_path, serialize_tagged(train_part, tagset));
    write_file(test_path, serialize_tagged(test_part, tagset));
    err << "train: " << train_part.size() << " sentences -> " << train_path << "\n"
        << "test: " << test_part.size() << " sentences -> " << test_path << "\n";
}

inline void cmd_agreement(const Options& o, std::ostream& out, std::ostream&) {
    const auto tagset = load_tagset(o);
    const auto a = parse_tagged(read_file(o.input), tagset, policy(o));
    const auto b = parse_tagged(read_file(o.second_input), tagset, policy(o));
    const auto excluded = tagset.find(o.exclude_tag);
    if (!excluded) throw UsageError("--exclude-tag '" + o.exclude_tag + "' is not in the tagset");
    const auto r = agreement(a, b, *excluded);
    if (o.format == "json") {
        emit(o, out,
             nlohmann::json{{"total_tokens", r.total_tokens},
                            {"disagreed", r.disagreed},
                            {"disagreed_on_excluded_tag", r.disagreed_on_excluded_tag},
                            {"excluded_tag", o.exclude_tag},
                            {"rate", r.rate},
                            {"rate_excluding", r.rate_excluding}}
                     .dump(2) +
                 "\n");
        return;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "tokens: %zu\ndisagreed: %zu\ndisagreed on %s: %zu\ndisagreement: %.2f%%\n"
                  "disagreement excluding %s: %.2f%%\n",
                  r.total_tokens, r.disagreed, o.exclude_tag.c_str(), r.disagreed_on_excluded_tag, 100.0 * r.rate,
                  o.exclude_tag.c_str(), 100.0 * r.rate_excluding);
    emit(o, out, buf);
}

inline void cmd_transitions(const Options& o, std::ostream& out, std::ostream&) {
    if (o.top_n < 1) throw UsageError("--top-n must be >= 1");
    const auto model = load_model_checked(o);
    const auto r = top_transitions(model, o.top_n);
    const auto& ts = model.tagset();
    if (o.format == "json") {
        auto list = [&](const std::vector<TransitionEntry>& v) {
            nlohmann::json a = nlohmann::json::array();
            for (const auto& e : v) a.push_back({{"from", ts.name(e.from)}, {"to", ts.name(e.to)}, {"weight", e.weight}});
            return a;
        };
        auto boundary = [&](const std::vector<BoundaryEntry>& v) {
            nlohmann::json a = nlohmann::json::array();
            for (const auto& e : v) a.push_back({{"tag", ts.name(e.tag)}, {"weight", e.weight}});
            return a;
        };
        emit(o, out,
             nlohmann::json{{"top", list(r.top)},
                            {"bottom", list(r.bottom)},
                            {"begin", boundary(r.begin)},
                            {"end", boundary(r.end)}}
                     .dump(2) +
                 "\n");
        return;
    }
    emit(o, out, format_transitions(r, ts));
}

inline void cmd_features(const Options& o, std::ostream& out, std::ostream&) {
    o.features.validate();
    std::vector<std::vector<std::string>> sentences;
    if (!o.input.empty()) {
        sentences = parse_raw(read_file(o.input));
    } else if (!o.words.empty()) {
        sentences.push_back(o.words);
    } else {
        throw UsageError("features: give a sentence or --input");
    }
    std::string text;
    for (const auto& words : sentences) {
        for (std::size_t t = 0; t < words.size(); ++t) {
            text += format_feature_map(extract_token_features(words, t, o.features));
            text += '\n';
        }
        text += '\n';
    }
    emit(o, out, text);
}

inline void cmd_syllables(const Options& o, std::ostream& out, std::ostream&) {
    const phono::PhonemeInventory inv;
    nlohmann::json all = nlohmann::json::array();
    std::string text;
    for (const auto& s : o.phoneme_strings) {
        phono::PhonemeSequence phonemes;
        try {
            phonemes = phono::parse_phonemes(s, inv);
        } catch (const phono::PhonotacticError& e) {
            throw DataError(std::string("syllables: ") + e.what());
        }
        const auto skeleton = phono::to_skeleton(phonemes, inv);
        const auto a = phono::classify(skeleton);
        if (o.format == "json") {
            nlohmann::json m = nlohmann::json::array();
            for (const auto& x : a.matches) m.push_back({{"template", x.template_id}, {"syllables", x.syllable_count}});
            all.push_back({{"input", s},
                           {"phonemes", phonemes},
                           {"skeleton", skeleton.str()},
                           {"accepted", a.accepted},
                           {"syllables", a.syllables()},
                           {"matches", m}});
        } else {
            text += s + "\t" + skeleton.str() + "\t" + (a.accepted ? "accepted" : "rejected");
            for (const auto& x : a.matches) text += "\t" + x.template_id + "(" + std::to_string(x.syllable_count) + ")";
            text += '\n';
        }
    }
    emit(o, out, o.format == "json" ? all.dump(2) + "\n" : text);
}

inline void cmd_gen(const Options& o, std::ostream& out, std::ostream&) {
    auto config = SynthConfig::standard(o.seed, o.sentences);
    config.min_length = o.min_len;
    config.max_length = o.max_len;
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    emit(o, out, generate_corpus_file(config));
}

inline void add_optim_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--c1", o.optim.c1, "L1 regularization weight")->check(CLI::NonNegativeNumber);
    cmd->add_option("--c2", o.optim.c2, "L2 regularization weight")->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-iter", o.optim.max_iterations, "maximum optimizer iterations")->check(CLI::PositiveNumber);
    cmd->add_option("--memory", o.optim.memory_pairs, "L-BFGS correction pairs")->check(CLI::PositiveNumber);
    cmd->add_option("--tolerance", o.optim.gradient_tolerance, "stop when the gradient max-norm drops below this")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", o.threads, "worker threads for gradient evaluation")->check(CLI::PositiveNumber);
}

inline void add_feature_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--prefix-max", o.features.prefix_max, "longest prefix feature")->check(CLI::PositiveNumber);
    cmd->add_option("--suffix-max", o.features.suffix_max, "longest suffix feature")->check(CLI::PositiveNumber);
}

inline void add_corpus_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--tagset", o.tagset_path, "tagset file (one tag per line); default: built-in 15 tags");
    cmd->add_option("--unknown-tags", o.unknown_tags, "what to do with tags outside the tagset")
        ->check(CLI::IsMember({"reject", "unk"}));
}

inline void add_format_flag(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
}

}  // namespace detail

/// Runs one subcommand. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    detail::Options o;
    CLI::App app{"Linear-chain CRF part-of-speech tagging toolkit", "nagatag"};
    app.require_subcommand(1);

    auto* train = app.add_subcommand("train", "train a model from an annotated corpus");
    train->add_option("corpus", o.input, "annotated corpus (word/TAG)")->required();
    train->add_option("--model", o.model_path, "output model file")->required();
    detail::add_corpus_flags(train, o);
    detail::add_optim_flags(train, o);
    detail::add_feature_flags(train, o);

    auto* tag = app.add_subcommand("tag", "tag raw sentences (one per line)");
    tag->add_option("input", o.input, "raw text file")->required();
    tag->add_option("--model", o.model_path, "model file")->required();
    tag->add_option("--tagset", o.tagset_path, "expected tagset; must match the model");
    tag->add_option("--output", o.output, "output file (default: stdout)");

    auto* eval = app.add_subcommand("eval", "evaluate a model on an annotated corpus");
    eval->add_option("corpus", o.input, "annotated corpus")->required();
    eval->add_option("--model", o.model_path, "model file")->required();
    eval->add_option("--confusion", o.confusion_path, "write the confusion matrix as CSV");
    eval->add_option("--output", o.output, "output file (default: stdout)");
    detail::add_corpus_flags(eval, o);
    detail::add_format_flag(eval, o);

    auto* stats = app.add_subcommand("stats", "tag frequency table");
    stats->add_option("corpus", o.input, "annotated corpus")->required();
    stats->add_option("--output", o.output, "output file (default: stdout)");
    detail::add_corpus_flags(stats, o);
    detail::add_format_flag(stats, o);

    auto* split = app.add_subcommand("split", "seeded sentence-level train/test split");
    split->add_option("corpus", o.input, "annotated corpus")->required();
    split->add_option("--fraction", o.fraction, "training fraction in (0, 1]");
    split->add_option("--seed", o.seed, "shuffle seed");
    split->add_option("--train-output", o.train_output, "training part (default: <corpus>.train)");
    split->add_option("--test-output", o.test_output, "test part (default: <corpus>.test)");
    detail::add_corpus_flags(split, o);

    auto* agree = app.add_subcommand("agreement", "inter-annotator disagreement");
    agree->add_option("reference", o.input, "reference annotation")->required();
    agree->add_option("other", o.second_input, "second annotation of the same text")->required();
    agree->add_option("--exclude-tag", o.exclude_tag, "tag reported separately (default FW)");
    agree->add_option("--output", o.output, "output file (default: stdout)");
    detail::add_corpus_flags(agree, o);
    detail::add_format_flag(agree, o);

    auto* trans = app.add_subcommand("transitions", "most and least likely tag transitions");
    trans->add_option("--model", o.model_path, "model file")->required();
    trans->add_option("--top-n", o.top_n, "entries per list");
    trans->add_option("--tagset", o.tagset_path, "expected tagset; must match the model");
    trans->add_option("--output", o.output, "output file (default: stdout)");
    detail::add_format_flag(trans, o);

    auto* feats = app.add_subcommand("features", "dump per-token features");
    feats->add_option("words", o.words, "sentence words");
    feats->add_option("--input", o.input, "raw text file instead of words");
    feats->add_option("--output", o.output, "output file (default: stdout)");
    detail::add_feature_flags(feats, o);

    auto* syl = app.add_subcommand("syllables", "phonotactic analysis of '.'-separated phoneme strings");
    syl->add_option("phonemes", o.phoneme_strings, "e.g. g.o.r")->required();
    syl->add_option("--output", o.output, "output file (default: stdout)");
    detail::add_format_flag(syl, o);

    auto* gen = app.add_subcommand("gen", "generate a synthetic annotated corpus");
    gen->add_option("--seed", o.seed, "generator seed");
    gen->add_option("--sentences", o.sentences, "number of sentences");
    gen->add_option("--min-len", o.min_len, "minimum words per sentence")->check(CLI::PositiveNumber);
    gen->add_option("--max-len", o.max_len, "maximum words per sentence")->check(CLI::PositiveNumber);
    gen->add_option("--output", o.output, "output file (default: stdout)");

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("nagatag");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*train) detail::cmd_train(o, out, err);
        else if (*tag) detail::cmd_tag(o, out, err);
        else if (*eval) detail::cmd_eval(o, out, err);
        else if (*stats) detail::cmd_stats(o, out, err);
        else if (*split) detail::cmd_split(o, out, err);
        else if (*agree) detail::cmd_agreement(o, out, err);
        else if (*trans) detail::cmd_transitions(o, out, err);
        else if (*feats) detail::cmd_features(o, out, err);
        else if (*syl) detail::cmd_syllables(o, out, err);
        else if (*gen) detail::cmd_gen(o, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

}  // namespace nagatag::cli
