#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sqlcorpus/rng.hpp"
#include "sqlcorpus/sql_types.hpp"

namespace sqlcorpus {

struct TableEntry {
  std::string canonical_name;
  std::vector<std::string> synonyms;
  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

struct FieldEntry {
  std::string canonical_name;
  std::vector<SqlType> allowed_types;
  std::vector<std::string> synonyms;
  /// Empty means the field may appear in any table.
  std::vector<std::string> table_restrictions;

  bool allowed_in(std::string_view table) const;
  friend bool operator==(const FieldEntry&, const FieldEntry&) = default;
};

/// One aggregate phrasing, e.g. {Count, "how many {f}"}.
struct AggregatePhrase {
  Aggregate kind = Aggregate::Count;
  std::string pattern;
  friend bool operator==(const AggregatePhrase&, const AggregatePhrase&) = default;
};

/// An ordering phrase in both directions. Flipping direction swaps to the partner.
struct DirectionPhrase {
  std::string ascending;
  std::string descending;
  friend bool operator==(const DirectionPhrase&, const DirectionPhrase&) = default;
};

class VocabError : public Error {
 public:
  enum class Kind { Malformed, DuplicateName, DanglingRestriction, PoolTooSmall, Ambiguous };
  VocabError(Kind kind, std::size_t line, const std::string& message);

  Kind kind() const { return kind_; }
  /// 1-based source line, 0 when the problem is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

class NoSynonyms : public Error {
 public:
  explicit NoSynonyms(const std::string& name) : Error("no synonyms for '" + name + "'") {}
};

struct VocabLimits {
  std::size_t min_tables = 50;
  std::size_t min_fields = 100;
  /// Every table must keep at least this many eligible fields after restriction filtering.
  std::size_t min_fields_per_table = 12;
};

/// Name pools and phrase lexicons. Immutable after load_vocab.
class VocabPool {
 public:
  const std::vector<TableEntry>& tables() const { return tables_; }
  const std::vector<FieldEntry>& fields() const { return fields_; }
  const std::vector<AggregatePhrase>& aggregate_phrases() const { return aggregates_; }
  const std::vector<DirectionPhrase>& directions() const { return directions_; }

  const TableEntry* find_table(std::string_view name) const;
  const FieldEntry* find_field(std::string_view name) const;

  /// Indices into fields() that may be placed in `table`.
  const std::vector<std::size_t>& eligible_fields(std::string_view table) const;

  /// Indices into aggregate_phrases() for one aggregate kind.
  const std::vector<std::size_t>& phrases_for(Aggregate kind) const;

  friend bool operator==(const VocabPool& a, const VocabPool& b) {
    return a.tables_ == b.tables_ && a.fields_ == b.fields_ && a.aggregates_ == b.aggregates_ &&
           a.directions_ == b.directions_;
  }

 private:
  friend VocabPool load_vocab(std::string_view, const VocabLimits&);
  void build_indexes();

  std::vector<TableEntry> tables_;
  std::vector<FieldEntry> fields_;
  std::vector<AggregatePhrase> aggregates_;
  std::vector<DirectionPhrase> directions_;

  std::map<std::string, std::size_t, std::less<>> table_index_;
  std::map<std::string, std::size_t, std::less<>> field_index_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> eligible_;
  std::map<Aggregate, std::vector<std::size_t>> phrases_by_kind_;
};

/// Parses and validates the vocab text format (see data/default_vocab.txt).
VocabPool load_vocab(std::string_view source, const VocabLimits& limits = {});

/// Uniform choice among the entry's synonyms. Throws NoSynonyms.
const std::string& synonym_for(const TableEntry& entry, Rng& rng);
const std::string& synonym_for(const FieldEntry& entry, Rng& rng);

}  // namespace sqlcorpus
