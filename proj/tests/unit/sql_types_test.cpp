#include <gtest/gtest.h>

#include "sqlcorpus/sql_types.hpp"

using namespace sqlcorpus;

TEST(SqlType, ParsesAndRendersCanonically) {
  EXPECT_EQ(SqlType::parse("varchar ( 100 )").str(), "VARCHAR(100)");
  EXPECT_EQ(SqlType::parse("DECIMAL(10, 2)").str(), "DECIMAL(10,2)");
  EXPECT_EQ(SqlType::parse("INT").str(), "INT");
  EXPECT_EQ(SqlType::parse("CHAR").str(), "CHAR");
}

TEST(SqlType, RoundTripsEveryKeyword) {
  for (auto kw : type_keywords()) {
    const std::string text = kw == "VARCHAR" ? "VARCHAR(255)" : std::string(kw);
    const SqlType t = SqlType::parse(text);
    EXPECT_EQ(SqlType::parse(t.str()), t) << text;
  }
}

TEST(SqlType, BaseKinds) {
  for (auto kw : {"DECIMAL(5,2)", "INTEGER", "BIGINT", "SMALLINT", "FLOAT", "INT"}) {
    EXPECT_EQ(SqlType::parse(kw).base_kind(), BaseKind::Numeric) << kw;
  }
  for (auto kw : {"VARCHAR(10)", "TEXT", "LONGTEXT", "CHAR"}) EXPECT_EQ(SqlType::parse(kw).base_kind(), BaseKind::Text);
  for (auto kw : {"DATE", "DATETIME", "TIMESTAMP", "TIME"}) {
    EXPECT_EQ(SqlType::parse(kw).base_kind(), BaseKind::Temporal);
  }
  EXPECT_EQ(SqlType::parse("BOOLEAN").base_kind(), BaseKind::Boolean);
  EXPECT_EQ(SqlType::parse("BLOB").base_kind(), BaseKind::Binary);
  EXPECT_EQ(SqlType::parse("POINT").base_kind(), BaseKind::Spatial);
  EXPECT_EQ(SqlType::parse("GEOMETRY").base_kind(), BaseKind::Spatial);
}

TEST(SqlType, RejectsUnknownAndBadArity) {
  EXPECT_THROW(SqlType::parse("JSONB"), std::invalid_argument);
  EXPECT_THROW(SqlType::parse("VARCHAR"), std::invalid_argument);
  EXPECT_THROW(SqlType::parse("INTEGER(3)"), std::invalid_argument);
  EXPECT_THROW(SqlType::parse("VARCHAR(10"), std::invalid_argument);
}

TEST(Aggregates, LegalSetsByKind) {
  EXPECT_TRUE(aggregate_allowed(Aggregate::Sum, BaseKind::Numeric));
  EXPECT_TRUE(aggregate_allowed(Aggregate::Max, BaseKind::Text));
  EXPECT_TRUE(aggregate_allowed(Aggregate::Min, BaseKind::Temporal));
  EXPECT_FALSE(aggregate_allowed(Aggregate::Avg, BaseKind::Text));
  for (auto k : {BaseKind::Boolean, BaseKind::Binary, BaseKind::Spatial}) {
    EXPECT_EQ(legal_aggregates(k), std::vector<Aggregate>{Aggregate::Count});
  }
  EXPECT_EQ(legal_aggregates(BaseKind::Numeric).size(), 5u);
}

TEST(Aggregates, KeywordsRoundTrip) {
  for (auto a : {Aggregate::Count, Aggregate::Sum, Aggregate::Avg, Aggregate::Min, Aggregate::Max}) {
    EXPECT_EQ(parse_aggregate(to_string(a)), a);
  }
  EXPECT_FALSE(parse_aggregate("MEDIAN").has_value());
}
