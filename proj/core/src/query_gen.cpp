#include "sqlcorpus/query_gen.hpp"

#include <cstdio>

namespace sqlcorpus {

LevelRecipe LevelRecipe::for_level(Level level) {
  LevelRecipe r;
  r.level = level;
  const int n = static_cast<int>(level);
  r.p_order_by = n >= 2 ? 0.9 : 0.0;
  r.aggregates = n >= 3;
  r.p_where = n >= 4 ? 0.8 : 0.0;
  r.join = n >= 5;
  return r;
}

std::vector<std::pair<std::size_t, std::size_t>> join_candidates(const SchemaContext& schema, JoinRule rule) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (!schema.join_table) return out;
  const auto& left = schema.main_table.columns;
  const auto& right = schema.join_table->columns;
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      const bool ok = rule == JoinRule::SameType ? left[i].type == right[j].type
                                                 : left[i].type.base_kind() == right[j].type.base_kind();
      if (ok) out.emplace_back(i, j);
    }
  }
  return out;
}

namespace {

std::string two_digits(int v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", v);
  return buf;
}

std::string gen_date(Rng& rng) {
  return std::to_string(rng.uniform_int(2000, 2024)) + "-" + two_digits(rng.uniform_int(1, 12)) + "-" +
         two_digits(rng.uniform_int(1, 28));
}

std::string gen_time(Rng& rng) {
  return two_digits(rng.uniform_int(0, 23)) + ":" + two_digits(rng.uniform_int(0, 59)) + ":" +
         two_digits(rng.uniform_int(0, 59));
}

std::vector<CompareOp> operators_for(BaseKind kind) {
  switch (kind) {
    case BaseKind::Numeric: return {CompareOp::Eq, CompareOp::Lt, CompareOp::Gt, CompareOp::Le, CompareOp::Ge};
    case BaseKind::Text: return {CompareOp::Eq, CompareOp::Like};
    case BaseKind::Temporal: return {CompareOp::Eq, CompareOp::Lt, CompareOp::Gt};
    case BaseKind::Boolean: return {CompareOp::Eq};
    default: return {};
  }
}

}  // namespace

Literal gen_literal(const SqlType& type, CompareOp op, Rng& rng) {
  switch (type.base_kind()) {
    case BaseKind::Numeric: {
      const auto& kw = type.keyword();
      if (kw == "DECIMAL" || kw == "FLOAT") {
        const int cents = rng.uniform_int(0, 100000);
        return Literal::number(std::to_string(cents / 100) + "." + two_digits(cents % 100));
      }
      return Literal::number(std::to_string(rng.uniform_int(0, 1000)));
    }
    case BaseKind::Text: {
      if (op == CompareOp::Like) {
        return Literal::string(std::string("%") + static_cast<char>('a' + rng.index(26)) + "%");
      }
      std::string word;
      const int len = rng.uniform_int(3, 8);
      for (int i = 0; i < len; ++i) word += static_cast<char>('a' + rng.index(26));
      return Literal::string(word);
    }
    case BaseKind::Temporal: {
      const auto& kw = type.keyword();
      if (kw == "DATE") return Literal::string(gen_date(rng));
      if (kw == "TIME") return Literal::string(gen_time(rng));
      std::string date = gen_date(rng);
      return Literal::string(date + " " + gen_time(rng));
    }
    case BaseKind::Boolean:
      return Literal::boolean(rng.bernoulli(0.5));
    default:
      throw Error("no literal for " + type.str());
  }
}

SqlQuery gen_query(const SchemaContext& schema, const LevelRecipe& recipe, Rng& rng) {
  if (schema.level != recipe.level) throw Error("schema level does not match recipe level");
  const auto& columns = schema.main_table.columns;
  SqlQuery q;
  q.table = schema.main_table.name;

  const int n_select = rng.uniform_int(1, static_cast<int>(columns.size()));
  for (std::size_t c : rng.sample(columns.size(), static_cast<std::size_t>(n_select))) {
    q.select.push_back(SelectItem::bare(columns[c].name));
  }

  if (recipe.p_order_by > 0 && rng.bernoulli(recipe.p_order_by)) {
    const int n_keys = rng.uniform_int(1, static_cast<int>(columns.size()));
    for (std::size_t c : rng.sample(columns.size(), static_cast<std::size_t>(n_keys))) {
      q.order_by.push_back({columns[c].name, rng.bernoulli(0.5) ? Direction::Asc : Direction::Desc});
    }
  }

  if (recipe.aggregates) {
    for (auto& item : q.select) {
      if (rng.bernoulli(recipe.p_no_aggregate)) continue;
      const auto& legal = legal_aggregates(schema.main_table.find(item.field)->type.base_kind());
      item = SelectItem::aggregated(item.field, rng.pick(legal));
    }
  }

  if (recipe.p_where > 0 && rng.bernoulli(recipe.p_where)) {
    std::vector<std::size_t> filterable;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (!operators_for(columns[i].type.base_kind()).empty()) filterable.push_back(i);
    }
    if (!filterable.empty()) {
      const int hi = std::min<int>(recipe.max_filters, static_cast<int>(filterable.size()));
      const int n_filters = rng.uniform_int(std::min(recipe.min_filters, hi), hi);
      for (std::size_t pick : rng.sample(filterable.size(), static_cast<std::size_t>(n_filters))) {
        const ColumnDef& col = columns[filterable[pick]];
        const auto ops = operators_for(col.type.base_kind());
        const CompareOp op = rng.pick(ops);
        q.filters.push_back({col.name, op, gen_literal(col.type, op, rng)});
      }
    }
  }

  if (recipe.join && schema.join_table) {
    const auto candidates = join_candidates(schema, recipe.join_rule);
    if (!candidates.empty()) {
      const auto [i, j] = rng.pick(candidates);
      q.join = JoinClause{schema.join_table->name, columns[i].name, schema.join_table->columns[j].name};
    }
  }

  check_query(q, schema);
  return q;
}

double join_rate(std::span<const SqlQuery> queries) {
  if (queries.empty()) throw EmptyDataset();
  std::size_t joined = 0;
  for (const auto& q : queries) joined += q.join.has_value();
  return static_cast<double>(joined) / static_cast<double>(queries.size());
}

}  // namespace sqlcorpus
