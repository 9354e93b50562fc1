#include <gtest/gtest.h>

#include "sqlcorpus/grader.hpp"
#include "sqlcorpus/query_gen.hpp"

using namespace sqlcorpus;

namespace {

const SqlQuery kGold = parse_sql("SELECT type, date FROM orders");

}  // namespace

TEST(Grade, IdentityIsExact) {
  const auto r = grade(render_sql(kGold), kGold);
  EXPECT_TRUE(r.exact_match);
  EXPECT_EQ(r.total, 1.0);
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(Grade, WrongTableWorkedExample) {
  const auto r = grade("SELECT type, date FROM products", kGold);
  EXPECT_FALSE(r.exact_match);
  EXPECT_EQ(r.structural, 1.0);
  EXPECT_EQ(r.semantic, 0.5);
  EXPECT_EQ(r.implementation, 1.0);
  EXPECT_NEAR(r.total, 2.5 / 3.0, 1e-12);
}

TEST(Grade, GarbageScoresZero) {
  const auto r = grade("banana banana", kGold);
  EXPECT_FALSE(r.exact_match);
  EXPECT_EQ(r.structural, 0.0);
  EXPECT_EQ(r.semantic, 0.0);
  EXPECT_EQ(r.implementation, 0.0);
  EXPECT_EQ(r.total, 0.0);
}

TEST(Grade, KeywordCaseAndSpacingIgnored) {
  EXPECT_TRUE(grade("select  type ,date\n FROM orders", kGold).exact_match);
  EXPECT_FALSE(grade("SELECT TYPE, date FROM orders", kGold).exact_match);
}

TEST(Grade, SelectPermutationKeepsSemantic) {
  const auto r = grade("SELECT date, type FROM orders", kGold);
  EXPECT_FALSE(r.exact_match);
  EXPECT_EQ(r.semantic, 1.0);
}

TEST(Grade, SalvageCountsKeywordsInOrder) {
  const auto gold = parse_sql("SELECT a FROM t WHERE a = 1 ORDER BY a ASC");
  EXPECT_DOUBLE_EQ(structural_salvage("SELECT a FROM t WHERE", gold), 0.75);
  EXPECT_DOUBLE_EQ(structural_salvage("ORDER BY a SELECT", gold), 0.25);
  EXPECT_DOUBLE_EQ(structural_salvage("select 'from' x", gold), 0.25);
  const auto r = grade("SELECT a FROM t WHERE", gold);
  EXPECT_DOUBLE_EQ(r.total, 0.75 / 3.0);
}

TEST(Grade, SingleComponentDamageLowersTotal) {
  const auto gold = parse_sql(
      "SELECT MAX(a) AS MAX_a, b FROM t JOIN u ON t.b = u.c WHERE b = 'x' ORDER BY a DESC");
  const std::vector<std::string> mutants{
      "SELECT MAX(a) AS MAX_a, b FROM v JOIN u ON v.b = u.c WHERE b = 'x' ORDER BY a DESC",
      "SELECT MAX(a) AS MAX_a FROM t JOIN u ON t.b = u.c WHERE b = 'x' ORDER BY a DESC",
      "SELECT MAX(a) AS MAX_a, b FROM t JOIN u ON t.b = u.c WHERE b = 'x' ORDER BY a ASC",
      "SELECT MIN(a) AS MIN_a, b FROM t JOIN u ON t.b = u.c WHERE b = 'x' ORDER BY a DESC",
      "SELECT MAX(a) AS MAX_a, b FROM t JOIN u ON t.b = u.d WHERE b = 'x' ORDER BY a DESC",
      "SELECT MAX(a) AS MAX_a, b FROM t JOIN u ON t.b = u.c WHERE b = 'y' ORDER BY a DESC",
  };
  for (const auto& m : mutants) {
    const auto r = grade(m, gold);
    EXPECT_FALSE(r.exact_match) << m;
    EXPECT_LT(r.total, 1.0) << m;
    EXPECT_FALSE(r.diagnostics.empty()) << m;
  }
}

TEST(Grade, ComponentFormulas) {
  const auto gold = parse_sql("SELECT MAX(a) AS MAX_a, b FROM t ORDER BY a DESC, b ASC");
  const auto r = grade("SELECT MAX(a) AS MAX_a, b FROM t ORDER BY a DESC, b DESC", gold);
  EXPECT_EQ(r.semantic, 1.0);
  EXPECT_DOUBLE_EQ(r.implementation, (1.0 + 0.5) / 2);

  const auto dropped = grade("SELECT b FROM t ORDER BY a DESC, b ASC", gold);
  EXPECT_DOUBLE_EQ(dropped.semantic, (1.0 + 2.0 / 3.0) / 2);
  EXPECT_DOUBLE_EQ(dropped.implementation, (0.0 + 1.0) / 2);

  const auto filters = grade("SELECT a FROM t WHERE a = 1 AND b = 2", parse_sql("SELECT a FROM t WHERE b = 2 AND a = 1"));
  EXPECT_TRUE(filters.exact_match);
  EXPECT_EQ(filters.implementation, 1.0);
}

TEST(Grade, Pure) {
  const auto a = grade("SELECT type FROM orders", kGold);
  const auto b = grade("SELECT type FROM orders", kGold);
  EXPECT_EQ(a.total, b.total);
  EXPECT_EQ(a.diagnostics, b.diagnostics);
}

TEST(Dice, Multisets) {
  EXPECT_EQ(dice({}, {}), 1.0);
  EXPECT_EQ(dice({"a"}, {}), 0.0);
  EXPECT_DOUBLE_EQ(dice({"a", "a", "b"}, {"a", "b", "b"}), 2.0 * 2 / 6);
}

TEST(GradeWeights, ParseAndValidate) {
  const auto w = GradeWeights::parse("0.5,0.25,0.25");
  EXPECT_EQ(w.structural, 0.5);
  EXPECT_THROW(GradeWeights::parse("0.5,0.5"), InvalidWeights);
  EXPECT_THROW(GradeWeights::parse("0.5,0.5,0.5"), InvalidWeights);
  EXPECT_THROW(GradeWeights::parse("a,b,c"), InvalidWeights);
  EXPECT_THROW(GradeWeights::parse("-0.5,1,0.5"), InvalidWeights);
  EXPECT_NO_THROW(GradeWeights{}.validate());
  const auto r = grade("SELECT type, date FROM products", kGold, w);
  EXPECT_DOUBLE_EQ(r.total, 0.5 + 0.25 * 0.5 + 0.25);
}

TEST(GradeBatch, AllExactAndHalfGarbage) {
  std::vector<GoldEntry> gold;
  std::vector<Prediction> exact, half;
  for (int i = 0; i < 10; ++i) {
    const auto q = parse_sql("SELECT a" + std::to_string(i) + " FROM t");
    gold.push_back({i, q, i % 2 ? Level::CS1 : Level::CS2});
    exact.push_back({i, render_sql(q)});
    half.push_back({i, i < 5 ? render_sql(q) : "banana"});
  }
  const auto all = grade_batch(exact, gold);
  EXPECT_EQ(all.exact_match_accuracy, 1.0);
  EXPECT_EQ(all.mean_total, 1.0);
  EXPECT_EQ(all.per_level.at(Level::CS1).count, 5u);

  const auto h = grade_batch(half, gold, {}, 4);
  EXPECT_DOUBLE_EQ(h.exact_match_accuracy, 0.5);
  EXPECT_DOUBLE_EQ(h.mean_total, 0.5);
}

TEST(GradeBatch, IdErrorsAndMissing) {
  std::vector<GoldEntry> gold{{1, kGold, Level::CS1}, {2, kGold, Level::CS1}};
  EXPECT_THROW(grade_batch(std::vector<Prediction>{{3, "x"}}, gold), UnknownId);
  EXPECT_THROW(grade_batch(std::vector<Prediction>{{1, "x"}, {1, "y"}}, gold), DuplicateId);
  std::vector<GoldEntry> dup{{1, kGold, Level::CS1}, {1, kGold, Level::CS1}};
  EXPECT_THROW(grade_batch(std::vector<Prediction>{}, dup), DuplicateId);
  const auto s = grade_batch(std::vector<Prediction>{{1, render_sql(kGold)}}, gold);
  EXPECT_EQ(s.missing, std::vector<std::int64_t>{2});
  EXPECT_DOUBLE_EQ(s.exact_match_accuracy, 0.5);
}

TEST(GradeBatch, WorkerCountDoesNotChangeResult) {
  std::vector<GoldEntry> gold;
  std::vector<Prediction> preds;
  for (int i = 0; i < 100; ++i) {
    gold.push_back({i, parse_sql("SELECT a, b FROM t ORDER BY a ASC"), Level::CS2});
    preds.push_back({i, i % 3 ? "SELECT a FROM t ORDER BY a DESC" : "nonsense"});
  }
  const auto one = grade_batch(preds, gold, {}, 1);
  const auto many = grade_batch(preds, gold, {}, 7);
  EXPECT_EQ(one.mean_total, many.mean_total);
  EXPECT_EQ(one.exact_match_accuracy, many.exact_match_accuracy);
}
