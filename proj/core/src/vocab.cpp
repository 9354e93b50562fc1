#include "sqlcorpus/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "sqlcorpus/sql.hpp"

namespace sqlcorpus {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  while (true) {
    std::size_t at = s.find(sep);
    out.emplace_back(trim(s.substr(0, at)));
    if (at == std::string_view::npos) break;
    s = s.substr(at + 1);
  }
  return out;
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  for (auto& item : split(s, sep)) {
    if (!item.empty()) out.push_back(std::move(item));
  }
  return out;
}

std::size_t count_slots(std::string_view pattern) {
  std::size_t n = 0;
  for (std::size_t at = pattern.find("{f}"); at != std::string_view::npos; at = pattern.find("{f}", at + 3)) ++n;
  return n;
}

std::string underscored(std::string_view phrase) {
  std::string out(phrase);
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

enum class Section { None, Tables, Fields, Aggregates, Directions };

}  // namespace

VocabError::VocabError(Kind kind, std::size_t line, const std::string& message)
    : Error(line ? "vocab line " + std::to_string(line) + ": " + message : "vocab: " + message),
      kind_(kind),
      line_(line) {}

bool FieldEntry::allowed_in(std::string_view table) const {
  return table_restrictions.empty() ||
         std::find(table_restrictions.begin(), table_restrictions.end(), table) != table_restrictions.end();
}

const TableEntry* VocabPool::find_table(std::string_view name) const {
  auto it = table_index_.find(name);
  return it == table_index_.end() ? nullptr : &tables_[it->second];
}

const FieldEntry* VocabPool::find_field(std::string_view name) const {
  auto it = field_index_.find(name);
  return it == field_index_.end() ? nullptr : &fields_[it->second];
}

const std::vector<std::size_t>& VocabPool::eligible_fields(std::string_view table) const {
  auto it = eligible_.find(table);
  if (it != eligible_.end()) return it->second;
  // Tables outside the pool only get unrestricted fields.
  static const std::vector<std::size_t> none;
  auto open = eligible_.find(std::string_view{});
  return open == eligible_.end() ? none : open->second;
}

const std::vector<std::size_t>& VocabPool::phrases_for(Aggregate kind) const {
  static const std::vector<std::size_t> none;
  auto it = phrases_by_kind_.find(kind);
  return it == phrases_by_kind_.end() ? none : it->second;
}

void VocabPool::build_indexes() {
  for (std::size_t i = 0; i < tables_.size(); ++i) table_index_[tables_[i].canonical_name] = i;
  for (std::size_t i = 0; i < fields_.size(); ++i) field_index_[fields_[i].canonical_name] = i;
  for (const auto& t : tables_) {
    auto& list = eligible_[t.canonical_name];
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      if (fields_[i].allowed_in(t.canonical_name)) list.push_back(i);
    }
  }
  auto& open = eligible_[std::string{}];
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (fields_[i].table_restrictions.empty()) open.push_back(i);
  }
  for (std::size_t i = 0; i < aggregates_.size(); ++i) phrases_by_kind_[aggregates_[i].kind].push_back(i);
}

VocabPool load_vocab(std::string_view source, const VocabLimits& limits) {
  using K = VocabError::Kind;
  VocabPool pool;
  std::vector<std::size_t> field_lines;
  Section section = Section::None;
  std::set<std::string, std::less<>> asc_phrases, desc_phrases;

  std::size_t line_no = 0;
  while (!source.empty()) {
    ++line_no;
    std::size_t eol = source.find('\n');
    std::string_view line = trim(source.substr(0, eol));
    source = eol == std::string_view::npos ? std::string_view{} : source.substr(eol + 1);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line == "[tables]") section = Section::Tables;
      else if (line == "[fields]") section = Section::Fields;
      else if (line == "[aggregates]") section = Section::Aggregates;
      else if (line == "[directions]") section = Section::Directions;
      else throw VocabError(K::Malformed, line_no, "unknown section " + std::string(line));
      continue;
    }

    auto cols = split(line, '|');
    switch (section) {
      case Section::None:
        throw VocabError(K::Malformed, line_no, "entry before any section header");

      case Section::Tables: {
        if (cols.size() > 2) throw VocabError(K::Malformed, line_no, "table entry has too many columns");
        TableEntry t{cols[0], cols.size() > 1 ? split_list(cols[1], ',') : std::vector<std::string>{}};
        if (!is_identifier(t.canonical_name)) {
          throw VocabError(K::Malformed, line_no, "invalid table name '" + t.canonical_name + "'");
        }
        if (std::any_of(pool.tables_.begin(), pool.tables_.end(),
                        [&](const TableEntry& e) { return e.canonical_name == t.canonical_name; })) {
          throw VocabError(K::DuplicateName, line_no, "DuplicateName(\"" + t.canonical_name + "\")");
        }
        pool.tables_.push_back(std::move(t));
        break;
      }

      case Section::Fields: {
        if (cols.size() < 2 || cols.size() > 4) {
          throw VocabError(K::Malformed, line_no, "field entry needs 2 to 4 columns");
        }
        FieldEntry f;
        f.canonical_name = cols[0];
        if (!is_identifier(f.canonical_name)) {
          throw VocabError(K::Malformed, line_no, "invalid field name '" + f.canonical_name + "'");
        }
        if (std::any_of(pool.fields_.begin(), pool.fields_.end(),
                        [&](const FieldEntry& e) { return e.canonical_name == f.canonical_name; })) {
          throw VocabError(K::DuplicateName, line_no, "DuplicateName(\"" + f.canonical_name + "\")");
        }
        for (const auto& t : split_list(cols[1], ';')) {
          try {
            SqlType type = SqlType::parse(t);
            if (std::find(f.allowed_types.begin(), f.allowed_types.end(), type) == f.allowed_types.end()) {
              f.allowed_types.push_back(std::move(type));
            }
          } catch (const std::invalid_argument& e) {
            throw VocabError(K::Malformed, line_no, e.what());
          }
        }
        if (f.allowed_types.empty()) throw VocabError(K::Malformed, line_no, "field has no types");
        if (cols.size() > 2) f.synonyms = split_list(cols[2], ',');
        if (cols.size() > 3) f.table_restrictions = split_list(cols[3], ',');
        pool.fields_.push_back(std::move(f));
        field_lines.push_back(line_no);
        break;
      }

      case Section::Aggregates: {
        if (cols.size() != 2) throw VocabError(K::Malformed, line_no, "aggregate entry needs kind | pattern");
        auto kind = parse_aggregate(cols[0]);
        if (!kind) throw VocabError(K::Malformed, line_no, "unknown aggregate '" + cols[0] + "'");
        if (count_slots(cols[1]) != 1) throw VocabError(K::Malformed, line_no, "pattern needs exactly one {f}");
        pool.aggregates_.push_back({*kind, cols[1]});
        break;
      }

      case Section::Directions: {
        if (cols.size() != 2) throw VocabError(K::Malformed, line_no, "direction entry needs asc | desc");
        if (count_slots(cols[0]) != 1 || count_slots(cols[1]) != 1) {
          throw VocabError(K::Malformed, line_no, "direction phrases need exactly one {f}");
        }
        if (!asc_phrases.insert(cols[0]).second || !desc_phrases.insert(cols[1]).second ||
            asc_phrases.count(cols[1]) || desc_phrases.count(cols[0])) {
          throw VocabError(K::Ambiguous, line_no, "direction phrase reused across entries or directions");
        }
        pool.directions_.push_back({cols[0], cols[1]});
        break;
      }
    }
  }

  if (pool.tables_.size() < limits.min_tables || pool.fields_.size() < limits.min_fields) {
    throw VocabError(K::PoolTooSmall, 0,
                     "pool has " + std::to_string(pool.tables_.size()) + " tables and " +
                         std::to_string(pool.fields_.size()) + " fields; need at least " +
                         std::to_string(limits.min_tables) + " and " + std::to_string(limits.min_fields));
  }

  std::set<std::string, std::less<>> table_names, field_names;
  for (const auto& t : pool.tables_) table_names.insert(t.canonical_name);
  for (const auto& f : pool.fields_) field_names.insert(f.canonical_name);

  for (std::size_t i = 0; i < pool.fields_.size(); ++i) {
    for (const auto& r : pool.fields_[i].table_restrictions) {
      if (!table_names.count(r)) {
        throw VocabError(K::DanglingRestriction, field_lines[i],
                         "field '" + pool.fields_[i].canonical_name + "' restricted to unknown table '" + r + "'");
      }
    }
  }

  // Synonyms must resolve to exactly one entry of their category.
  auto check_synonyms = [&](const auto& entries, const auto& names, const char* what) {
    std::set<std::string, std::less<>> seen;
    for (const auto& e : entries) {
      for (const auto& s : e.synonyms) {
        if (names.count(s) || names.count(underscored(s))) {
          throw VocabError(K::Ambiguous, 0,
                           std::string(what) + " synonym '" + s + "' collides with a canonical name");
        }
        if (!seen.insert(s).second) {
          throw VocabError(K::Ambiguous, 0, std::string(what) + " synonym '" + s + "' is used twice");
        }
      }
    }
  };
  check_synonyms(pool.tables_, table_names, "table");
  check_synonyms(pool.fields_, field_names, "field");

  for (Aggregate a : {Aggregate::Count, Aggregate::Sum, Aggregate::Avg, Aggregate::Min, Aggregate::Max}) {
    auto n = std::count_if(pool.aggregates_.begin(), pool.aggregates_.end(),
                           [&](const AggregatePhrase& p) { return p.kind == a; });
    if (n < 3) {
      throw VocabError(K::Malformed, 0, "aggregate " + std::string(to_string(a)) + " needs at least 3 phrases");
    }
  }
  if (pool.directions_.empty()) throw VocabError(K::Malformed, 0, "no [directions] entries");

  pool.build_indexes();
  for (const auto& t : pool.tables_) {
    if (pool.eligible_fields(t.canonical_name).size() < limits.min_fields_per_table) {
      throw VocabError(K::PoolTooSmall, 0,
                       "table '" + t.canonical_name + "' has fewer than " +
                           std::to_string(limits.min_fields_per_table) + " eligible fields");
    }
  }
  return pool;
}

namespace {
template <class Entry>
const std::string& pick_synonym(const Entry& entry, Rng& rng) {
  if (entry.synonyms.empty()) throw NoSynonyms(entry.canonical_name);
  return rng.pick(entry.synonyms);
}
}  // namespace

const std::string& synonym_for(const TableEntry& entry, Rng& rng) { return pick_synonym(entry, rng); }
const std::string& synonym_for(const FieldEntry& entry, Rng& rng) { return pick_synonym(entry, rng); }

}  // namespace sqlcorpus
