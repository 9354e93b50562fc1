#include <gtest/gtest.h>

#include "sqlcorpus/generator.hpp"
#include "sqlcorpus/resources.hpp"
#include "sqlcorpus/stats.hpp"

using namespace sqlcorpus;

TEST(Stopwords, ShippedListSize) { EXPECT_EQ(default_stopwords().size(), 180u); }

TEST(Tokenize, StripsEdgePunctuationAndLowercases) {
  EXPECT_EQ(tokenize("  Show me, the  'orders'? "), (std::vector<std::string>{"show", "me", "the", "orders"}));
  EXPECT_EQ(tokenize("user_id's"), std::vector<std::string>{"user_id's"});
  EXPECT_TRUE(tokenize(" ... ").empty());
}

TEST(LexicalDensity, Examples) {
  const auto& sw = default_stopwords();
  EXPECT_EQ(lexical_density("cat", sw), 1.0);
  EXPECT_DOUBLE_EQ(lexical_density("the cat sat on the mat", sw), 0.5);
  EXPECT_EQ(lexical_density("", sw), 0.0);
}

TEST(Rarity, Examples) {
  const auto& sw = default_stopwords();
  const auto& fq = default_frequencies();
  EXPECT_EQ(rarity("the of and", fq, sw), 0.0);
  EXPECT_EQ(rarity("show salary", fq, sw), 0.0);
  EXPECT_EQ(rarity("show zzqxv", fq, sw), 0.5);
  EXPECT_EQ(rarity("show salary", fq, sw, 100), 1.0);
}

TEST(FrequencyList, RanksAreOneBased) {
  const auto f = FrequencyList::load("# header\nthe\nto\n\nof\n");
  EXPECT_EQ(f.rank("the"), 1u);
  EXPECT_EQ(f.rank("of"), 3u);
  EXPECT_FALSE(f.rank("zebra").has_value());
}

TEST(Syllables, Heuristic) {
  EXPECT_EQ(count_syllables("the"), 1);
  EXPECT_EQ(count_syllables("cat"), 1);
  EXPECT_EQ(count_syllables("make"), 1);
  EXPECT_EQ(count_syllables("table"), 2);
  EXPECT_EQ(count_syllables("readability"), 5);
  EXPECT_EQ(count_syllables("user_id"), 3);
  EXPECT_EQ(count_syllables("2024"), 1);
}

TEST(Flesch, WorkedExample) { EXPECT_NEAR(flesch("The cat sat."), 119.19, 1e-9); }

TEST(Flesch, MonotoneInSyllables) {
  EXPECT_LT(flesch("readability"), flesch("cat"));
  EXPECT_LT(flesch("the information sat"), flesch("the cat sat"));
}

TEST(Flesch, SentenceSplitting) {
  const double one = flesch("cat sat. cat sat.");
  EXPECT_NEAR(one, 206.835 - 1.015 * 2 - 84.6, 1e-9);
  EXPECT_NEAR(flesch("3.50 cat"), 206.835 - 1.015 * 2 - 84.6, 1e-9);
  EXPECT_THROW(flesch("   "), EmptyText);
  EXPECT_THROW(flesch("?!"), EmptyText);
}

TEST(CorpusStats, ScaleInvariantAndRates) {
  GenerateOptions opts;
  opts.level = Level::CS4;
  opts.variant = Variant::Syn;
  opts.count = 400;
  opts.seed = 2;
  const auto ex = generate_examples(Resources::defaults(), opts);
  auto twice = ex;
  twice.insert(twice.end(), ex.begin(), ex.end());
  const auto a = corpus_stats(ex, default_frequencies(), default_stopwords());
  const auto b = corpus_stats(twice, default_frequencies(), default_stopwords());
  EXPECT_NEAR(a.rarity, b.rarity, 1e-12);
  EXPECT_NEAR(a.lexical_density, b.lexical_density, 1e-12);
  EXPECT_NEAR(a.readability, b.readability, 1e-9);
  for (double r : {a.rarity, a.lexical_density, a.order_by_rate, a.where_rate, a.join_rate, a.aggregate_rate}) {
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
  EXPECT_EQ(a.join_rate, 0.0);
  std::size_t hist = 0;
  for (const auto& [cols, n] : a.column_histogram) {
    EXPECT_TRUE(cols >= 2 && cols <= 12);
    hist += n;
  }
  EXPECT_EQ(hist, ex.size());
  EXPECT_THROW(corpus_stats(std::vector<Example>{}, default_frequencies(), default_stopwords()), EmptyDataset);
}

TEST(CorpusStats, TableAndJson) {
  CorpusStats s;
  s.examples = 3;
  s.readability = 45.5;
  std::vector<std::pair<std::string, CorpusStats>> rows{{"CS1_Syn", s}};
  const auto table = format_stats_table(rows);
  EXPECT_NE(table.find("CS1_Syn"), std::string::npos);
  EXPECT_NE(table.find("45.50"), std::string::npos);
  EXPECT_NE(stats_json(s).find("\"readability\":45.5"), std::string::npos);
}
