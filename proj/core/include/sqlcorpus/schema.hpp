#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqlcorpus/rng.hpp"
#include "sqlcorpus/sql.hpp"
#include "sqlcorpus/vocab.hpp"

namespace sqlcorpus {

/// Command levels: CS1 select/from, CS2 +order by, CS3 +aggregates, CS4 +where, CS5 +join.
enum class Level { CS1 = 1, CS2, CS3, CS4, CS5 };

std::string_view to_string(Level level);
/// Accepts "cs3", "CS3" or "3".
std::optional<Level> parse_level(std::string_view text);

struct ColumnDef {
  std::string name;
  SqlType type;
  friend bool operator==(const ColumnDef&, const ColumnDef&) = default;
};

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;

  const ColumnDef* find(std::string_view column) const;
  friend bool operator==(const TableDef&, const TableDef&) = default;
};

struct SchemaContext {
  TableDef main_table;
  std::optional<TableDef> join_table;  // CS5 only
  Level level = Level::CS1;
  std::uint64_t seed_trace = 0;

  friend bool operator==(const SchemaContext&, const SchemaContext&) = default;
};

inline constexpr int kMinColumns = 2;
inline constexpr int kMaxColumns = 12;

/// Main table with a uniform [2,12] column count honoring table restrictions;
/// at CS5 a second table of independent size. A field that lands in both
/// tables gets the same type in both.
SchemaContext gen_schema(const VocabPool& pool, Level level, Rng& rng);

/// Throws Error when a schema invariant is violated.
void check_schema(const SchemaContext& schema);

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// Offsets of names inside a rendered context.
struct ContextLayout {
  Span main_name;
  std::vector<Span> main_columns;
  std::optional<Span> join_name;
  std::vector<Span> join_columns;
};

/// "CREATE TABLE t ( a INT, b TEXT )", two statements separated by one space at CS5.
std::string render_create_table(const SchemaContext& schema, ContextLayout* layout = nullptr);

/// Inverse of render_create_table. Returns one or two tables; level and seed
/// are left at defaults. Throws ParseError.
SchemaContext parse_create_table(std::string_view text);

class InvalidQuery : public Error {
 public:
  explicit InvalidQuery(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Every SqlQuery invariant that needs the schema: fields exist, aggregates
/// and filters are type-legal, join keys share a base kind, alias rules.
std::vector<std::string> query_violations(const SqlQuery& query, const SchemaContext& schema);

/// Throws InvalidQuery if query_violations is nonempty.
void check_query(const SqlQuery& query, const SchemaContext& schema);

}  // namespace sqlcorpus
