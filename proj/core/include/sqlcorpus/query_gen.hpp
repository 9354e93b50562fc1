#pragma once

#include <span>

#include "sqlcorpus/rng.hpp"
#include "sqlcorpus/schema.hpp"
#include "sqlcorpus/sql.hpp"

namespace sqlcorpus {

/// Which column pairs may serve as join keys.
enum class JoinRule {
  SameType,      // identical SqlType (default)
  SameBaseKind,  // any shared base kind
};

/// Per-level probabilities for optional clauses.
struct LevelRecipe {
  Level level = Level::CS1;
  double p_order_by = 0.0;
  bool aggregates = false;
  double p_no_aggregate = 0.2;  // per select column, when aggregates are on
  double p_where = 0.0;
  int min_filters = 1;
  int max_filters = 3;
  bool join = false;
  JoinRule join_rule = JoinRule::SameType;

  static LevelRecipe for_level(Level level);
};

/// Column pairs (main index, join index) compatible under the rule.
std::vector<std::pair<std::size_t, std::size_t>> join_candidates(const SchemaContext& schema, JoinRule rule);

/// Gold query for a schema. The result always satisfies check_query.
SqlQuery gen_query(const SchemaContext& schema, const LevelRecipe& recipe, Rng& rng);

/// Random literal for a WHERE filter on a column of this type.
Literal gen_literal(const SqlType& type, CompareOp op, Rng& rng);

class EmptyDataset : public Error {
 public:
  EmptyDataset() : Error("dataset is empty") {}
};

/// Fraction of queries carrying a JoinClause.
double join_rate(std::span<const SqlQuery> queries);

}  // namespace sqlcorpus
