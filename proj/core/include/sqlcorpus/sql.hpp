#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqlcorpus/sql_types.hpp"

namespace sqlcorpus {

enum class Direction { Asc, Desc };
std::string_view to_string(Direction dir);

struct SelectItem {
  std::string field;
  Aggregate aggregate = Aggregate::None;
  /// Set iff aggregate != None in a well-formed query; the parser keeps
  /// whatever alias the text carried.
  std::optional<std::string> alias;

  static SelectItem bare(std::string field);
  static SelectItem aggregated(std::string field, Aggregate agg);

  friend bool operator==(const SelectItem&, const SelectItem&) = default;
};

/// "<KIND>_<field>", e.g. COUNT_amount.
std::string derive_alias(Aggregate agg, std::string_view field);

struct OrderKey {
  std::string field;
  Direction direction = Direction::Asc;
  friend bool operator==(const OrderKey&, const OrderKey&) = default;
};

enum class CompareOp { Eq, Lt, Gt, Le, Ge, Like };
std::string_view to_string(CompareOp op);

struct Literal {
  enum class Kind { Number, String, Boolean };
  Kind kind = Kind::Number;
  /// Numbers and booleans verbatim (TRUE/FALSE upper case); strings unquoted.
  std::string text;

  static Literal number(std::string text) { return {Kind::Number, std::move(text)}; }
  static Literal string(std::string text) { return {Kind::String, std::move(text)}; }
  static Literal boolean(bool value) { return {Kind::Boolean, value ? "TRUE" : "FALSE"}; }

  /// SQL surface form: strings quoted with '' escaping.
  std::string sql() const;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct WhereFilter {
  std::string field;
  CompareOp op = CompareOp::Eq;
  Literal value;
  friend bool operator==(const WhereFilter&, const WhereFilter&) = default;
};

struct JoinClause {
  std::string right_table;
  std::string left_key;
  std::string right_key;
  friend bool operator==(const JoinClause&, const JoinClause&) = default;
};

/// AST of the restricted grammar shared by all five command levels.
struct SqlQuery {
  std::vector<SelectItem> select;
  std::string table;
  std::optional<JoinClause> join;
  std::vector<WhereFilter> filters;
  std::vector<OrderKey> order_by;

  friend bool operator==(const SqlQuery&, const SqlQuery&) = default;
};

/// Character offsets of interesting tokens inside a rendered query.
struct SqlLayout {
  std::size_t table = 0;
  std::vector<std::size_t> select_field;      // start of each item's field name
  std::vector<std::size_t> select_aggregate;  // start of the aggregate keyword, or npos
  std::vector<std::size_t> order_field;
  std::vector<std::size_t> order_direction;
};

/// Canonical single-line rendering.
std::string render_sql(const SqlQuery& query, SqlLayout* layout = nullptr);

class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t position, std::vector<std::string> expected);

  std::size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

/// Valid SQL that falls outside the grammar (GROUP BY, subqueries, ...).
class UnknownClause : public ParseError {
 public:
  UnknownClause(std::string clause, std::size_t position);
  const std::string& clause() const { return clause_; }

 private:
  std::string clause_;
};

/// Inverse of render_sql; keyword case and whitespace are free.
SqlQuery parse_sql(std::string_view text);

/// Words that may not be used as table or field names.
bool is_reserved_word(std::string_view word);

/// [A-Za-z_][A-Za-z0-9_]* and not reserved.
bool is_identifier(std::string_view word);

}  // namespace sqlcorpus
