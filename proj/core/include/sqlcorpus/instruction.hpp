#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqlcorpus/rng.hpp"
#include "sqlcorpus/schema.hpp"
#include "sqlcorpus/sql.hpp"
#include "sqlcorpus/vocab.hpp"

namespace sqlcorpus {

enum class TemplateForm { Command, Question, Complex };
std::string_view to_string(TemplateForm form);

/// Instruction pattern with {FIELDS}, {TABLE} and optional suffix slots.
struct Template {
  int id = 0;
  TemplateForm form = TemplateForm::Command;
  std::string pattern;
};

class TemplateError : public Error {
 public:
  TemplateError(std::size_t line, const std::string& message)
      : Error("template line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class TemplateSet {
 public:
  TemplateSet() = default;
  explicit TemplateSet(std::vector<Template> templates);

  const std::vector<Template>& templates() const { return templates_; }
  std::size_t size() const { return templates_.size(); }

 private:
  std::vector<Template> templates_;
};

/// Parses "id | form | pattern" lines. Throws TemplateError.
TemplateSet load_templates(std::string_view source);

enum class Variant { Base, Syn };
std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view text);

inline constexpr double kTableSynonymRate = 0.8;
inline constexpr double kFieldSynonymRate = 0.5;

enum class MentionRole { Table, Field, Aggregate, OrderField, Direction, FilterField, JoinTable, JoinKey };
std::string_view to_string(MentionRole role);
std::optional<MentionRole> parse_mention_role(std::string_view text);

/// One canonical-to-surface mapping inside the instruction text.
struct Mention {
  MentionRole role = MentionRole::Field;
  std::string canonical;  // name, aggregate keyword or ASC/DESC
  std::string surface;    // exact text at [start, start + surface.size())
  std::size_t start = 0;
  bool synonym = false;        // surface is a dictionary synonym
  bool substitutable = false;  // entry has synonyms at all
  int item = -1;    // select / order / filter index the mention belongs to
  int phrase = -1;  // aggregate phrase or direction pair index in the vocab

  std::size_t end() const { return start + surface.size(); }
  friend bool operator==(const Mention&, const Mention&) = default;
};

using SubstitutionRecord = std::vector<Mention>;

struct Instruction {
  std::string text;
  SubstitutionRecord record;
  int template_id = 0;
};

/// Renders the query as an instruction. Base never substitutes; Syn replaces
/// each table with p=0.8 and each field mention with p=0.5 when a synonym exists.
Instruction gen_instruction(const SqlQuery& query, const SchemaContext& schema, Variant variant,
                            const VocabPool& pool, const TemplateSet& templates, Rng& rng);

/// Natural-language form of one filter, e.g. "salt is containing '%z%'".
std::string filter_phrase(std::string_view field_surface, const WhereFilter& filter);

/// Expands a phrase pattern's {f} slot.
std::string expand_phrase(std::string_view pattern, std::string_view field_surface);

struct SubstitutionRates {
  double table_rate = 0.0;
  double field_rate = 0.0;
  std::size_t table_mentions = 0;
  std::size_t field_mentions = 0;
};

/// Fraction of substitutable table / field mentions that carry a synonym.
/// Throws EmptyDataset when there are no records.
SubstitutionRates substitution_rates(std::span<const SubstitutionRecord> records);

}  // namespace sqlcorpus
