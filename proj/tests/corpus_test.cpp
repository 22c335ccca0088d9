#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "nagatag/corpus.hpp"
#include "nagatag/random.hpp"

using namespace nagatag;

namespace {

const char* kSampleLine1 =
    "Titia/ADV Isor/N koise/V ,/SYM \"/SYM Ujala/N hobole/V dibi/V ./SYM \"/SYM Aru/CONJ Ujala/N hoise/V ./SYM";
const char* kSampleLine2 = "Itu/ADJ dikhikena/V Isor/N khusi/ADJ lagise/V ./SYM";

TaggedCorpus random_corpus(std::uint64_t seed, std::size_t sentences, const TagSet& ts) {
    Rng rng(seed);
    const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJ0123456789-/.,\"";
    std::vector<Sentence> out;
    for (std::size_t s = 0; s < sentences; ++s) {
        Sentence sent;
        const auto len = 1 + uniform_index(rng, 12);
        for (std::size_t t = 0; t < len; ++t) {
            std::string w;
            const auto wl = 1 + uniform_index(rng, 8);
            for (std::size_t i = 0; i < wl; ++i) w.push_back(alphabet[uniform_index(rng, alphabet.size())]);
            sent.tokens.push_back({w, static_cast<TagId>(uniform_index(rng, ts.size()))});
        }
        out.push_back(std::move(sent));
    }
    return TaggedCorpus(std::move(out));
}

}  // namespace

TEST(TagSet, DefaultIsTheFifteenTagInventoryInOrder) {
    const TagSet ts;
    const std::vector<std::string> expected{"ADJ", "ADV", "CONJ", "CMP", "DET", "PP",  "INTJ", "N",
                                            "PN",  "QN",  "V",    "FW",  "SYM", "UNK", "NUM"};
    EXPECT_EQ(ts.names(), expected);
    EXPECT_EQ(ts.index_of("NUM"), 14u);
}

TEST(TagSet, RejectsBadNames) {
    EXPECT_THROW(TagSet(std::vector<std::string>{"N", "N"}), DataError);
    EXPECT_THROW(TagSet(std::vector<std::string>{"n"}), DataError);
    EXPECT_THROW(TagSet(std::vector<std::string>{""}), DataError);
    EXPECT_THROW(TagSet(std::vector<std::string>{"N1"}), DataError);
}

TEST(TagSet, ParsesOneTagPerLine) {
    const auto ts = TagSet::parse("# custom\nNOUN\r\n\nVERB\n");
    EXPECT_EQ(ts.names(), (std::vector<std::string>{"NOUN", "VERB"}));
    EXPECT_THROW(TagSet::parse("\n\n"), DataError);
}

TEST(ParseTagged, SampleSentence) {
    const TagSet ts;
    const auto c = parse_tagged(kSampleLine1, ts);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.token_count(), 14u);
    EXPECT_EQ(c.sentences()[0].tokens[0].word, "Titia");
    EXPECT_EQ(c.sentences()[0].tokens[0].tag, ts.index_of("ADV"));
    EXPECT_EQ(c.sentences()[0].tokens[3].word, ",");
}

TEST(ParseTagged, EmptyInput) {
    const auto c = parse_tagged("", TagSet());
    EXPECT_EQ(c.size(), 0u);
    EXPECT_EQ(c.token_count(), 0u);
}

TEST(ParseTagged, SplitsAtLastSlash) {
    const TagSet ts;
    const auto c = parse_tagged("a/b/N", ts);
    EXPECT_EQ(c.sentences()[0].tokens[0].word, "a/b");
    EXPECT_EQ(c.sentences()[0].tokens[0].tag, ts.index_of("N"));
}

TEST(ParseTagged, SkipsBlankAndCommentLines) {
    const auto c = parse_tagged("\n# {\"seed\": 1}\n  \nx/N   y/V\t\n\n", TagSet());
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.token_count(), 2u);
    const auto hash_token = parse_tagged("#/SYM x/N", TagSet());
    EXPECT_EQ(hash_token.token_count(), 2u);
}

TEST(ParseTagged, ErrorsCarryLineColumnAndToken) {
    const TagSet ts;
    try {
        parse_tagged("x/N\ny/V broken z/N", ts);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 5u);
        EXPECT_EQ(e.token(), "broken");
    }
    EXPECT_THROW(parse_tagged("/N", ts), ParseError);
    EXPECT_THROW(parse_tagged("x/", ts), ParseError);
    EXPECT_THROW(parse_tagged("x/NOUN", ts), ParseError);
}

TEST(ParseTagged, UnknownTagPolicyMapsToUnk) {
    const TagSet ts;
    const auto c = parse_tagged("x/NOUN y/N", ts, UnknownTagPolicy::map_to_unk);
    EXPECT_EQ(c.sentences()[0].tokens[0].tag, ts.index_of("UNK"));
    EXPECT_EQ(c.sentences()[0].tokens[1].tag, ts.index_of("N"));
}

TEST(SerializeTagged, EmptyCorpus) { EXPECT_EQ(serialize_tagged(TaggedCorpus(), TagSet()), ""); }

TEST(SerializeTagged, SampleLineRoundTripsModuloWhitespace) {
    const TagSet ts;
    const std::string messy = std::string("  ") + kSampleLine1 + "   \n";
    const auto out = serialize_tagged(parse_tagged(messy, ts), ts);
    EXPECT_EQ(out, std::string(kSampleLine1) + "\n");
}

TEST(SerializeTagged, RoundTripPropertyOnRandomCorpora) {
    const TagSet ts;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto c = random_corpus(seed, 30, ts);
        const auto text = serialize_tagged(c, ts);
        const auto back = parse_tagged(text, ts);
        ASSERT_EQ(back, c) << "seed " << seed;
        ASSERT_EQ(serialize_tagged(back, ts), text);
    }
}

TEST(TagFrequencies, EmptyCorpusIsAllZero) {
    const TagSet ts;
    const auto f = tag_frequencies(TaggedCorpus(), ts);
    EXPECT_EQ(f.size(), ts.size());
    EXPECT_TRUE(std::all_of(f.begin(), f.end(), [](std::size_t v) { return v == 0; }));
}

TEST(TagFrequencies, HandCountOfTheTwoSampleLines) {
    const TagSet ts;
    const auto c = parse_tagged(std::string(kSampleLine1) + "\n" + kSampleLine2 + "\n", ts);
    ASSERT_EQ(c.token_count(), 20u);
    const auto f = tag_frequencies(c, ts);
    const std::map<std::string, std::size_t> expected{{"ADV", 1}, {"N", 4},    {"V", 6},
                                                      {"SYM", 6}, {"CONJ", 1}, {"ADJ", 2}};
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const auto it = expected.find(ts.name(static_cast<TagId>(k)));
        EXPECT_EQ(f[k], it == expected.end() ? 0u : it->second) << ts.name(static_cast<TagId>(k));
    }
}

TEST(TagFrequencies, SumEqualsTokenCount) {
    const TagSet ts;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto c = random_corpus(seed, 20, ts);
        const auto f = tag_frequencies(c, ts);
        std::size_t sum = 0;
        for (auto v : f) sum += v;
        EXPECT_EQ(sum, c.token_count());
    }
}

TEST(SplitCorpus, SevenHundredFortyNineSentences) {
    const TagSet ts;
    const auto c = random_corpus(7, 749, ts);
    const auto [train, test] = split_corpus(c, 0.7, 1);
    EXPECT_EQ(train.size(), 524u);
    EXPECT_EQ(test.size(), 225u);
}

TEST(SplitCorpus, FullFractionKeepsEverything) {
    const TagSet ts;
    const auto c = random_corpus(3, 10, ts);
    const auto [train, test] = split_corpus(c, 1.0, 5);
    EXPECT_EQ(train.size(), 10u);
    EXPECT_TRUE(test.empty());
}

TEST(SplitCorpus, DeterministicAndAPartition) {
    const TagSet ts;
    const auto c = random_corpus(11, 10, ts);
    const auto a = split_corpus(c, 0.7, 42);
    const auto b = split_corpus(c, 0.7, 42);
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
    EXPECT_EQ(a.first.size(), 7u);

    auto key = [&](const Sentence& s) {
        return serialize_tagged(TaggedCorpus(std::vector<Sentence>{s}), ts);
    };
    std::vector<std::string> original;
    for (const auto& s : c.sentences()) original.push_back(key(s));
    std::vector<std::string> combined;
    for (const auto& s : a.first.sentences()) combined.push_back(key(s));
    for (const auto& s : a.second.sentences()) combined.push_back(key(s));
    std::sort(original.begin(), original.end());
    std::sort(combined.begin(), combined.end());
    EXPECT_EQ(original, combined);
}

TEST(SplitCorpus, Errors) {
    EXPECT_THROW(split_corpus(TaggedCorpus(), 0.7, 1), DataError);
    const auto c = random_corpus(1, 5, TagSet());
    EXPECT_THROW(split_corpus(c, 0.0, 1), std::invalid_argument);
    EXPECT_THROW(split_corpus(c, 1.5, 1), std::invalid_argument);
}

TEST(Agreement, ReportedAnnotatorCounts) {
    const auto r = make_agreement_report(1864, 125, 102);
    EXPECT_NEAR(r.rate, 0.06706, 5e-6);
    EXPECT_NEAR(r.rate_excluding, 0.01234, 5e-6);
}

TEST(Agreement, IdenticalCorporaAgreeFully) {
    const TagSet ts;
    const auto c = random_corpus(5, 15, ts);
    for (TagId t = 0; t < ts.size(); ++t) {
        const auto r = agreement(c, c, t);
        EXPECT_EQ(r.disagreed, 0u);
        EXPECT_EQ(r.rate, 0.0);
        EXPECT_EQ(r.rate_excluding, 0.0);
    }
}

TEST(Agreement, OneDifferingTagInFour) {
    const TagSet ts;
    const auto a = parse_tagged("a/N b/V c/ADJ d/FW", ts);
    const auto b = parse_tagged("a/N b/N c/ADJ d/FW", ts);
    const auto r = agreement(a, b, ts.index_of("FW"));
    EXPECT_EQ(r.disagreed, 1u);
    EXPECT_DOUBLE_EQ(r.rate, 0.25);
    EXPECT_DOUBLE_EQ(r.rate_excluding, 0.25);

    const auto c = parse_tagged("a/N b/V c/ADJ d/N", ts);
    const auto r2 = agreement(a, c, ts.index_of("FW"));
    EXPECT_EQ(r2.disagreed_on_excluded_tag, 1u);
    EXPECT_DOUBLE_EQ(r2.rate_excluding, 0.0);
}

TEST(Agreement, StructuralMismatch) {
    const TagSet ts;
    EXPECT_THROW(agreement(parse_tagged("a/N b/V", ts), parse_tagged("a/N c/V", ts), 0), DataError);
    EXPECT_THROW(agreement(parse_tagged("a/N b/V", ts), parse_tagged("a/N", ts), 0), DataError);
    EXPECT_THROW(agreement(parse_tagged("a/N\nb/V", ts), parse_tagged("a/N", ts), 0), DataError);
}
