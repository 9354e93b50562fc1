#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sqlcorpus/resources.hpp"
#include "sqlcorpus/schema.hpp"

using namespace sqlcorpus;

TEST(RenderCreateTable, OrdersCs1Box) {
  const auto s = fixtures::one_table("orders", {{"type", "CHAR"}, {"date", "INT"}});
  EXPECT_EQ(render_create_table(s), "CREATE TABLE orders ( type CHAR, date INT )");
}

TEST(RenderCreateTable, Table5Cs3SynRow) {
  const auto s = fixtures::one_table("product_versions", {{"skills", "TEXT"}, {"location", "POINT"}});
  EXPECT_EQ(render_create_table(s), "CREATE TABLE product_versions ( skills TEXT, location POINT )");
}

TEST(RenderCreateTable, TwoTablesOneSpaceApartWithLayout) {
  auto s = fixtures::one_table("a", {{"x", "INTEGER"}, {"y", "DECIMAL(10,2)"}}, Level::CS5);
  s.join_table = TableDef{"b", {{"z", SqlType::parse("INTEGER")}, {"w", SqlType::parse("TEXT")}}};
  ContextLayout layout;
  const std::string text = render_create_table(s, &layout);
  EXPECT_EQ(text, "CREATE TABLE a ( x INTEGER, y DECIMAL(10,2) ) CREATE TABLE b ( z INTEGER, w TEXT )");
  EXPECT_EQ(text.substr(layout.main_name.start, layout.main_name.size()), "a");
  ASSERT_TRUE(layout.join_name.has_value());
  EXPECT_EQ(text.substr(layout.join_name->start, layout.join_name->size()), "b");
  EXPECT_EQ(text.substr(layout.main_columns[1].start, layout.main_columns[1].size()), "y");
  EXPECT_EQ(text.substr(layout.join_columns[1].start, layout.join_columns[1].size()), "w");
}

TEST(ParseCreateTable, InvertsRender) {
  auto s = fixtures::one_table("a", {{"x", "INTEGER"}, {"y", "VARCHAR(20)"}}, Level::CS5);
  s.join_table = TableDef{"b", {{"z", SqlType::parse("INTEGER")}, {"w", SqlType::parse("TEXT")}}};
  const auto back = parse_create_table(render_create_table(s));
  EXPECT_EQ(back.main_table, s.main_table);
  EXPECT_EQ(back.join_table, s.join_table);
  EXPECT_THROW(parse_create_table("CREATE TABLE a ( x )"), ParseError);
}

TEST(GenSchema, Cs1SingleTableInRange) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    const auto s = gen_schema(default_vocab(), Level::CS1, rng);
    EXPECT_FALSE(s.join_table.has_value());
    EXPECT_GE(s.main_table.columns.size(), 2u);
    EXPECT_LE(s.main_table.columns.size(), 12u);
    EXPECT_NO_THROW(check_schema(s));
  }
}

TEST(GenSchema, Cs5TwoDistinctTablesWithConsistentSharedTypes) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    const auto s = gen_schema(default_vocab(), Level::CS5, rng);
    ASSERT_TRUE(s.join_table.has_value());
    EXPECT_NE(s.join_table->name, s.main_table.name);
    for (const auto& c : s.join_table->columns) {
      if (const auto* m = s.main_table.find(c.name)) {
        EXPECT_EQ(m->type, c.type);
      }
    }
  }
}

TEST(GenSchema, DeterministicForSeed) {
  Rng a(77), b(77);
  EXPECT_EQ(gen_schema(default_vocab(), Level::CS5, a), gen_schema(default_vocab(), Level::CS5, b));
}

TEST(GenSchema, ColumnCountsUniform) {
  std::vector<int> counts(13, 0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(5, static_cast<std::uint64_t>(i)));
    ++counts[gen_schema(default_vocab(), Level::CS1, rng).main_table.columns.size()];
  }
  for (int c = 2; c <= 12; ++c) EXPECT_NEAR(counts[c] / double(n), 1.0 / 11, 0.01) << c;
}

TEST(GenSchema, TypesComeFromAllowedSetAndRestrictionsHold) {
  const auto& pool = default_vocab();
  for (int i = 0; i < 5000; ++i) {
    Rng rng(derive_seed(6, static_cast<std::uint64_t>(i)));
    const auto s = gen_schema(pool, Level::CS5, rng);
    for (const TableDef* t : {&s.main_table, &*s.join_table}) {
      for (const auto& c : t->columns) {
        const FieldEntry* f = pool.find_field(c.name);
        ASSERT_NE(f, nullptr);
        EXPECT_TRUE(f->allowed_in(t->name)) << c.name << " in " << t->name;
        EXPECT_NE(std::find(f->allowed_types.begin(), f->allowed_types.end(), c.type), f->allowed_types.end());
      }
    }
  }
}

TEST(GenSchema, SalaryStaysInsideItsTables) {
  const auto& pool = default_vocab();
  const FieldEntry* salary = pool.find_field("salary");
  ASSERT_NE(salary, nullptr);
  ASSERT_FALSE(salary->table_restrictions.empty());
  int seen = 0;
  for (int i = 0; i < 20000; ++i) {
    Rng rng(derive_seed(8, static_cast<std::uint64_t>(i)));
    const auto s = gen_schema(pool, Level::CS1, rng);
    if (s.main_table.find("salary")) {
      ++seen;
      const auto& r = salary->table_restrictions;
      EXPECT_NE(std::find(r.begin(), r.end(), s.main_table.name), r.end()) << s.main_table.name;
    }
  }
  EXPECT_GT(seen, 0);
}

TEST(CheckQuery, ReportsUnknownFieldsAndIllegalAggregates) {
  const auto s = fixtures::one_table("t", {{"a", "TEXT"}, {"b", "POINT"}}, Level::CS3);
  SqlQuery q;
  q.table = "t";
  q.select = {SelectItem::aggregated("a", Aggregate::Sum), SelectItem::bare("zzz")};
  EXPECT_GE(query_violations(q, s).size(), 2u);
  EXPECT_THROW(check_query(q, s), InvalidQuery);
  q.select = {SelectItem::aggregated("a", Aggregate::Max), SelectItem::bare("b")};
  EXPECT_TRUE(query_violations(q, s).empty());
}

TEST(Level, ParseForms) {
  EXPECT_EQ(parse_level("cs3"), Level::CS3);
  EXPECT_EQ(parse_level("CS5"), Level::CS5);
  EXPECT_EQ(parse_level("1"), Level::CS1);
  EXPECT_FALSE(parse_level("cs6").has_value());
  EXPECT_EQ(to_string(Level::CS2), "CS2");
}
