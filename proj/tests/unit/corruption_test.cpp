#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sqlcorpus/corruption.hpp"
#include "sqlcorpus/generator.hpp"
#include "sqlcorpus/resources.hpp"

using namespace sqlcorpus;

namespace {

std::vector<Example> dataset(Level level, std::size_t n = 600, Variant v = Variant::Base) {
  GenerateOptions opts;
  opts.level = level;
  opts.variant = v;
  opts.count = n;
  opts.seed = 99;
  return generate_examples(Resources::defaults(), opts);
}

Example orders_cs1() {
  Example e;
  e.id = 0;
  e.instruction = "show me the type and date from the orders table";
  e.context = "CREATE TABLE orders ( type CHAR, date INT )";
  e.response = "SELECT type, date FROM orders";
  e.substitutions = {{MentionRole::Field, "type", "type", 12, false, true, 0},
                     {MentionRole::Field, "date", "date", 21, false, true, 1},
                     {MentionRole::Table, "orders", "orders", 35, false, true}};
  return e;
}

}  // namespace

TEST(CorruptionFeature, NamesAndLevels) {
  for (auto f : all_corruption_features()) EXPECT_EQ(parse_corruption_feature(to_string(f)), f);
  EXPECT_EQ(min_level(CorruptionFeature::EngTableName), Level::CS1);
  EXPECT_EQ(min_level(CorruptionFeature::OrderByDirection), Level::CS2);
  EXPECT_EQ(min_level(CorruptionFeature::AggregateFunction), Level::CS3);
  EXPECT_FALSE(parse_corruption_feature("Bogus").has_value());
}

TEST(CorruptExample, OrdersBoxEngTableName) {
  Rng rng(1);
  const auto p = corrupt_example(orders_cs1(), CorruptionFeature::EngTableName, default_vocab(), rng);
  ASSERT_TRUE(p.has_value());
  const std::string prefix =
      "### Instruction: show me the type and date from the orders table ### Context: CREATE TABLE orders ( type "
      "CHAR, date INT ) ### Response: SELECT type, date FROM ";
  EXPECT_EQ(p->clean_prompt, prefix);
  EXPECT_EQ(p->clean_text, "orders");
  EXPECT_NE(p->corrupted_text, "orders");
  EXPECT_EQ(p->gold_clean, "orders");
  EXPECT_EQ(p->gold_corrupted, p->corrupted_text);
  EXPECT_NE(p->corrupted_prompt.find("### Context: CREATE TABLE orders ( type CHAR, date INT )"), std::string::npos);
  EXPECT_TRUE(verify_pair(*p));
}

TEST(CorruptExample, OrdersBoxDefTableNameTouchesOnlyContext) {
  Rng rng(2);
  const auto p = corrupt_example(orders_cs1(), CorruptionFeature::DefTableName, default_vocab(), rng);
  ASSERT_TRUE(p.has_value());
  const auto ctx = p->clean_prompt.find("### Context:");
  EXPECT_GT(p->clean_span.start, ctx);
  EXPECT_EQ(p->corrupted_prompt.substr(0, ctx), p->clean_prompt.substr(0, ctx));
  EXPECT_TRUE(verify_pair(*p));
}

TEST(CorruptExample, DirectionFlipSwapsOnlyTheDirectionWord) {
  Example e = orders_cs1();
  e.level = Level::CS2;
  e.instruction = "show me the category and value from the links table ordered by value in ascending order";
  e.context = "CREATE TABLE links ( category CHAR, value TEXT )";
  e.response = "SELECT category, value FROM links ORDER BY value ASC";
  const auto at = [&](std::string_view w, std::size_t from = 0) { return e.instruction.find(w, from); };
  const std::size_t phrase = at("ordered by");
  e.substitutions = {{MentionRole::Field, "category", "category", at("category"), false, true, 0},
                     {MentionRole::Field, "value", "value", at("value"), false, true, 1},
                     {MentionRole::Table, "links", "links", at("links"), false, true},
                     {MentionRole::Direction, "ASC", "ordered by value in ascending order", phrase, false, false, 0, 0},
                     {MentionRole::OrderField, "value", "value", at("value", phrase), false, true, 0}};
  Rng rng(3);
  const auto p = corrupt_example(e, CorruptionFeature::OrderByDirection, default_vocab(), rng);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->clean_text, "ascending");
  EXPECT_EQ(p->corrupted_text, "descending");
  EXPECT_EQ(p->gold_clean, "ASC");
  EXPECT_EQ(p->gold_corrupted, "DESC");
  EXPECT_TRUE(p->clean_prompt.ends_with("### Response: SELECT category, value FROM links ORDER BY value "));
}

TEST(GenPairs, EveryValidFeatureProducesVerifiedBatches) {
  const auto data = dataset(Level::CS3, 600, Variant::Syn);
  for (auto f : all_corruption_features()) {
    CorruptionOptions opts;
    opts.batch_size = 20;
    opts.n_batches = 3;
    opts.seed = 5;
    const auto batches = gen_pairs(data, f, default_vocab(), opts);
    ASSERT_EQ(batches.size(), 3u);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      ASSERT_EQ(batches[b].size(), 20u);
      for (const auto& p : batches[b]) {
        EXPECT_TRUE(verify_pair(p)) << to_string(f);
        EXPECT_EQ(p.batch, b);
        EXPECT_EQ(p.feature, f);
        EXPECT_NE(p.gold_clean, p.gold_corrupted);
        std::string a = p.clean_prompt, c = p.corrupted_prompt;
        a.erase(p.clean_span.start, p.clean_span.size());
        c.erase(p.corrupted_span.start, p.corrupted_span.size());
        EXPECT_EQ(a, c);
      }
    }
  }
}

TEST(GenPairs, GatingByLevel) {
  const auto cs1 = dataset(Level::CS1, 50);
  EXPECT_THROW(gen_pairs(cs1, CorruptionFeature::AggregateField, default_vocab()), UnsupportedFeature);
  EXPECT_THROW(gen_pairs(cs1, CorruptionFeature::OrderByDirection, default_vocab()), UnsupportedFeature);
  const auto cs2 = dataset(Level::CS2, 50);
  EXPECT_THROW(gen_pairs(cs2, CorruptionFeature::AggregateFunction, default_vocab()), UnsupportedFeature);
  EXPECT_THROW(gen_pairs(std::vector<Example>{}, CorruptionFeature::EngTableName, default_vocab()), EmptyDataset);
}

TEST(GenPairs, DeterministicAcrossWorkers) {
  const auto data = dataset(Level::CS2, 300);
  CorruptionOptions a{10, 6, 17, 1}, b{10, 6, 17, 4};
  EXPECT_EQ(gen_pairs(data, CorruptionFeature::OrderByField, default_vocab(), a),
            gen_pairs(data, CorruptionFeature::OrderByField, default_vocab(), b));
}

TEST(VerifyPair, RejectsTwoEditsAndNoChange) {
  Rng rng(4);
  auto p = *corrupt_example(orders_cs1(), CorruptionFeature::EngTableName, default_vocab(), rng);
  ASSERT_TRUE(verify_pair(p));

  auto same = p;
  same.corrupted_prompt = same.clean_prompt;
  same.corrupted_span = same.clean_span;
  same.corrupted_text = same.clean_text;
  EXPECT_FALSE(verify_pair(same));

  auto two = p;
  two.corrupted_prompt[20] = 'X';
  EXPECT_FALSE(verify_pair(two));

  auto wrong_text = p;
  wrong_text.corrupted_text = "something else";
  EXPECT_FALSE(verify_pair(wrong_text));
}

TEST(PairJson, RoundTrip) {
  Rng rng(4);
  const auto p = *corrupt_example(orders_cs1(), CorruptionFeature::DefFieldName, default_vocab(), rng);
  EXPECT_EQ(pair_from_json_line(to_json_line(p)), p);
}
