#include "sqlcorpus/instruction.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "sqlcorpus/query_gen.hpp"

namespace sqlcorpus {
namespace {

constexpr std::string_view kSlots[] = {"{FIELDS}", "{TABLE}", "{JOIN_SUFFIX}", "{WHERE_SUFFIX}", "{ORDER_SUFFIX}"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::size_t occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto at = haystack.find(needle); at != std::string_view::npos; at = haystack.find(needle, at + 1)) ++n;
  return n;
}

/// Text under construction plus the mentions recorded inside it.
struct Piece {
  std::string text;
  std::vector<Mention> mentions;

  void add(std::string_view s) { text += s; }
  Mention& mention(Mention m) {
    m.start = text.size();
    text += m.surface;
    mentions.push_back(std::move(m));
    return mentions.back();
  }
  void append(const Piece& other) {
    for (Mention m : other.mentions) {
      m.start += text.size();
      mentions.push_back(std::move(m));
    }
    text += other.text;
  }
};

}  // namespace

std::string_view to_string(TemplateForm form) {
  switch (form) {
    case TemplateForm::Command: return "command";
    case TemplateForm::Question: return "question";
    case TemplateForm::Complex: return "complex";
  }
  return "?";
}

std::string_view to_string(Variant v) { return v == Variant::Base ? "base" : "syn"; }

std::optional<Variant> parse_variant(std::string_view text) {
  std::string lower;
  for (char c : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "base") return Variant::Base;
  if (lower == "syn") return Variant::Syn;
  return std::nullopt;
}

std::string_view to_string(MentionRole role) {
  switch (role) {
    case MentionRole::Table: return "table";
    case MentionRole::Field: return "field";
    case MentionRole::Aggregate: return "aggregate";
    case MentionRole::OrderField: return "order_field";
    case MentionRole::Direction: return "direction";
    case MentionRole::FilterField: return "filter_field";
    case MentionRole::JoinTable: return "join_table";
    case MentionRole::JoinKey: return "join_key";
  }
  return "?";
}

std::optional<MentionRole> parse_mention_role(std::string_view text) {
  for (auto r : {MentionRole::Table, MentionRole::Field, MentionRole::Aggregate, MentionRole::OrderField,
                 MentionRole::Direction, MentionRole::FilterField, MentionRole::JoinTable, MentionRole::JoinKey}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

TemplateSet::TemplateSet(std::vector<Template> templates) : templates_(std::move(templates)) {}

TemplateSet load_templates(std::string_view source) {
  std::vector<Template> out;
  std::set<int> ids;
  std::size_t line_no = 0;
  while (!source.empty()) {
    ++line_no;
    const std::size_t eol = source.find('\n');
    std::string_view line = trim(source.substr(0, eol));
    source = eol == std::string_view::npos ? std::string_view{} : source.substr(eol + 1);
    if (line.empty() || line.front() == '#') continue;

    const std::size_t bar1 = line.find('|');
    const std::size_t bar2 = bar1 == std::string_view::npos ? bar1 : line.find('|', bar1 + 1);
    if (bar2 == std::string_view::npos) throw TemplateError(line_no, "expected id | form | pattern");
    Template t;
    std::string_view id_text = trim(line.substr(0, bar1));
    auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), t.id);
    if (ec != std::errc{} || ptr != id_text.data() + id_text.size()) throw TemplateError(line_no, "bad id");
    if (!ids.insert(t.id).second) throw TemplateError(line_no, "duplicate id " + std::to_string(t.id));

    std::string_view form = trim(line.substr(bar1 + 1, bar2 - bar1 - 1));
    if (form == "command") t.form = TemplateForm::Command;
    else if (form == "question") t.form = TemplateForm::Question;
    else if (form == "complex") t.form = TemplateForm::Complex;
    else throw TemplateError(line_no, "unknown form '" + std::string(form) + "'");

    t.pattern = std::string(trim(line.substr(bar2 + 1)));
    if (occurrences(t.pattern, "{FIELDS}") != 1 || occurrences(t.pattern, "{TABLE}") != 1) {
      throw TemplateError(line_no, "pattern needs {FIELDS} and {TABLE} exactly once");
    }
    std::size_t known = 0;
    for (auto slot : kSlots) {
      const std::size_t n = occurrences(t.pattern, slot);
      if (n > 1) throw TemplateError(line_no, std::string(slot) + " appears twice");
      known += n;
    }
    if (occurrences(t.pattern, "{") != known) throw TemplateError(line_no, "unknown slot in pattern");
    out.push_back(std::move(t));
  }
  if (out.empty()) throw TemplateError(line_no, "no templates");
  return TemplateSet(std::move(out));
}

std::string expand_phrase(std::string_view pattern, std::string_view field_surface) {
  const std::size_t at = pattern.find("{f}");
  return std::string(pattern.substr(0, at)) + std::string(field_surface) + std::string(pattern.substr(at + 3));
}

std::string filter_phrase(std::string_view field_surface, const WhereFilter& f) {
  const bool temporal = f.value.kind == Literal::Kind::String;
  std::string verb;
  switch (f.op) {
    case CompareOp::Eq: verb = "is equal to"; break;
    case CompareOp::Lt: verb = temporal ? "is before" : "is less than"; break;
    case CompareOp::Gt: verb = temporal ? "is after" : "is greater than"; break;
    case CompareOp::Le: verb = "is less than or equal to"; break;
    case CompareOp::Ge: verb = "is greater than or equal to"; break;
    case CompareOp::Like: verb = "is containing"; break;
  }
  return std::string(field_surface) + " " + verb + " " + f.value.sql();
}

Instruction gen_instruction(const SqlQuery& query, [[maybe_unused]] const SchemaContext& schema, Variant variant,
                            const VocabPool& pool, const TemplateSet& templates, Rng& rng) {
  if (templates.size() == 0) throw Error("empty template set");
  const Template& tpl = rng.pick(templates.templates());
  const bool syn = variant == Variant::Syn;

  auto field_mention = [&](MentionRole role, const std::string& name, int item) {
    Mention m{role, name, name};
    m.item = item;
    const FieldEntry* entry = pool.find_field(name);
    m.substitutable = entry && !entry->synonyms.empty();
    if (syn && m.substitutable && rng.bernoulli(kFieldSynonymRate)) {
      m.surface = synonym_for(*entry, rng);
      m.synonym = true;
    }
    return m;
  };
  auto table_mention = [&](MentionRole role, const std::string& name) {
    Mention m{role, name, name};
    const TableEntry* entry = pool.find_table(name);
    m.substitutable = entry && !entry->synonyms.empty();
    if (syn && m.substitutable && rng.bernoulli(kTableSynonymRate)) {
      m.surface = synonym_for(*entry, rng);
      m.synonym = true;
    }
    return m;
  };

  // One coin per table per example, drawn before any field coin.
  Piece table;
  table.mention(table_mention(MentionRole::Table, query.table));

  Piece fields;
  for (std::size_t i = 0; i < query.select.size(); ++i) {
    if (i > 0) fields.add(i + 1 == query.select.size() ? " and " : ", ");
    const SelectItem& item = query.select[i];
    Mention field = field_mention(MentionRole::Field, item.field, static_cast<int>(i));
    if (item.aggregate == Aggregate::None) {
      fields.mention(std::move(field));
      continue;
    }
    const auto& options = pool.phrases_for(item.aggregate);
    if (options.empty()) throw Error("no phrase for aggregate " + std::string(to_string(item.aggregate)));
    const std::size_t phrase_index = rng.pick(options);
    const std::string& pattern = pool.aggregate_phrases()[phrase_index].pattern;
    const std::size_t slot = pattern.find("{f}");

    Mention agg{MentionRole::Aggregate, std::string(to_string(item.aggregate)), expand_phrase(pattern, field.surface)};
    agg.item = static_cast<int>(i);
    agg.phrase = static_cast<int>(phrase_index);
    const std::size_t agg_start = fields.text.size();
    agg.start = agg_start;
    fields.add(pattern.substr(0, slot));
    fields.mention(std::move(field));
    fields.add(pattern.substr(slot + 3));
    fields.mentions.push_back(std::move(agg));
  }

  Piece join;
  if (query.join) {
    join.add("join with ");
    join.mention(table_mention(MentionRole::JoinTable, query.join->right_table));
    join.add(" on ");
    Mention lk{MentionRole::JoinKey, query.join->left_key, query.join->left_key};
    lk.item = 0;
    join.mention(std::move(lk));
    join.add(" equals ");
    Mention rk{MentionRole::JoinKey, query.join->right_key, query.join->right_key};
    rk.item = 1;
    join.mention(std::move(rk));
  }

  Piece where;
  for (std::size_t i = 0; i < query.filters.size(); ++i) {
    where.add(i ? " and " : "where ");
    const WhereFilter& f = query.filters[i];
    Mention field = field_mention(MentionRole::FilterField, f.field, static_cast<int>(i));
    const std::string phrase = filter_phrase(field.surface, f);
    where.mention(std::move(field));
    where.add(std::string_view(phrase).substr(where.mentions.back().surface.size()));
  }

  Piece order;
  for (std::size_t i = 0; i < query.order_by.size(); ++i) {
    if (i) order.add(", ");
    const OrderKey& key = query.order_by[i];
    Mention field = field_mention(MentionRole::OrderField, key.field, static_cast<int>(i));
    const std::size_t pair = rng.index(pool.directions().size());
    const DirectionPhrase& dp = pool.directions()[pair];
    const std::string& pattern = key.direction == Direction::Asc ? dp.ascending : dp.descending;
    const std::size_t slot = pattern.find("{f}");

    Mention dir{MentionRole::Direction, std::string(to_string(key.direction)), expand_phrase(pattern, field.surface)};
    dir.item = static_cast<int>(i);
    dir.phrase = static_cast<int>(pair);
    dir.start = order.text.size();
    order.add(pattern.substr(0, slot));
    order.mention(std::move(field));
    order.add(pattern.substr(slot + 3));
    order.mentions.push_back(std::move(dir));
  }

  Piece out;
  auto suffix = [&](const Piece& p) {
    if (p.text.empty()) return;
    out.add(" ");
    out.append(p);
  };
  std::string_view pattern = tpl.pattern;
  bool used_join = false, used_where = false, used_order = false;
  while (!pattern.empty()) {
    const std::size_t open = pattern.find('{');
    out.add(pattern.substr(0, open));
    if (open == std::string_view::npos) break;
    const std::size_t close = pattern.find('}', open);
    const std::string_view slot = pattern.substr(open, close - open + 1);
    if (slot == "{FIELDS}") out.append(fields);
    else if (slot == "{TABLE}") out.append(table);
    else if (slot == "{JOIN_SUFFIX}") suffix(join), used_join = true;
    else if (slot == "{WHERE_SUFFIX}") suffix(where), used_where = true;
    else if (slot == "{ORDER_SUFFIX}") suffix(order), used_order = true;
    pattern = pattern.substr(close + 1);
  }
  if (!used_join) suffix(join);
  if (!used_where) suffix(where);
  if (!used_order) suffix(order);

  std::stable_sort(out.mentions.begin(), out.mentions.end(),
                   [](const Mention& a, const Mention& b) { return a.start < b.start; });
  return Instruction{std::move(out.text), std::move(out.mentions), tpl.id};
}

SubstitutionRates substitution_rates(std::span<const SubstitutionRecord> records) {
  if (records.empty()) throw EmptyDataset();
  SubstitutionRates r;
  std::size_t table_hits = 0, field_hits = 0;
  for (const auto& record : records) {
    for (const auto& m : record) {
      if (!m.substitutable) continue;
      if (m.role == MentionRole::Table || m.role == MentionRole::JoinTable) {
        ++r.table_mentions;
        table_hits += m.synonym;
      } else if (m.role == MentionRole::Field || m.role == MentionRole::OrderField ||
                 m.role == MentionRole::FilterField) {
        ++r.field_mentions;
        field_hits += m.synonym;
      }
    }
  }
  if (r.table_mentions) r.table_rate = static_cast<double>(table_hits) / static_cast<double>(r.table_mentions);
  if (r.field_mentions) r.field_rate = static_cast<double>(field_hits) / static_cast<double>(r.field_mentions);
  return r;
}

}  // namespace sqlcorpus
