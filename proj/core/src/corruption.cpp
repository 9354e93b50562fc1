#include "sqlcorpus/corruption.hpp"

#include <algorithm>
#include <cctype>
#include <thread>

#include "json.hpp"
#include "sqlcorpus/query_gen.hpp"

namespace sqlcorpus {
namespace {

constexpr std::size_t kAttemptsPerPair = 64;

struct Edit {
  std::string text;  // full corrupted region replacement
  std::size_t start = 0;
  std::size_t end = 0;
};

const Mention* find_mention(const SubstitutionRecord& record, MentionRole role, int item) {
  for (const auto& m : record) {
    if (m.role == role && m.item == item) return &m;
  }
  return nullptr;
}

bool in_schema(const SchemaContext& s, std::string_view name) {
  return s.main_table.name == name || (s.join_table && s.join_table->name == name);
}

bool column_in_schema(const SchemaContext& s, std::string_view name) {
  return s.main_table.find(name) || (s.join_table && s.join_table->find(name));
}

const TableEntry& replacement_table(const VocabPool& pool, const SchemaContext& schema, Rng& rng) {
  std::vector<const TableEntry*> candidates;
  for (const auto& t : pool.tables()) {
    if (!in_schema(schema, t.canonical_name)) candidates.push_back(&t);
  }
  if (candidates.empty()) throw PoolExhausted("no replacement table outside the schema");
  return *rng.pick(candidates);
}

const FieldEntry& replacement_field(const VocabPool& pool, const SchemaContext& schema, Rng& rng) {
  std::vector<const FieldEntry*> candidates;
  for (const auto& f : pool.fields()) {
    if (!column_in_schema(schema, f.canonical_name)) candidates.push_back(&f);
  }
  if (candidates.empty()) throw PoolExhausted("no replacement field outside the schema");
  return *rng.pick(candidates);
}

/// Surface for the replacement in the same register as the original mention.
template <class Entry>
std::string surface_like(const Mention& original, const Entry& entry, Rng& rng) {
  if (original.synonym && !entry.synonyms.empty()) return synonym_for(entry, rng);
  return entry.canonical_name;
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::string_view to_string(CorruptionFeature f) {
  switch (f) {
    case CorruptionFeature::EngTableName: return "EngTableName";
    case CorruptionFeature::EngFieldName: return "EngFieldName";
    case CorruptionFeature::DefTableName: return "DefTableName";
    case CorruptionFeature::DefFieldName: return "DefFieldName";
    case CorruptionFeature::OrderByField: return "OrderByField";
    case CorruptionFeature::OrderByDirection: return "OrderByDirection";
    case CorruptionFeature::AggregateField: return "AggregateField";
    case CorruptionFeature::AggregateFunction: return "AggregateFunction";
  }
  return "?";
}

const std::vector<CorruptionFeature>& all_corruption_features() {
  static const std::vector<CorruptionFeature> all{
      CorruptionFeature::EngTableName,   CorruptionFeature::EngFieldName,     CorruptionFeature::DefTableName,
      CorruptionFeature::DefFieldName,   CorruptionFeature::OrderByField,     CorruptionFeature::OrderByDirection,
      CorruptionFeature::AggregateField, CorruptionFeature::AggregateFunction};
  return all;
}

std::optional<CorruptionFeature> parse_corruption_feature(std::string_view text) {
  for (auto f : all_corruption_features()) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

Level min_level(CorruptionFeature f) {
  switch (f) {
    case CorruptionFeature::OrderByField:
    case CorruptionFeature::OrderByDirection: return Level::CS2;
    case CorruptionFeature::AggregateField:
    case CorruptionFeature::AggregateFunction: return Level::CS3;
    default: return Level::CS1;
  }
}

std::optional<CorruptionPair> corrupt_example(const Example& example, CorruptionFeature feature,
                                              const VocabPool& pool, Rng& rng) {
  const SqlQuery query = parse_sql(example.response);
  SqlLayout sql_layout;
  if (render_sql(query, &sql_layout) != example.response) throw Error("response is not in canonical form");
  const SchemaContext schema = parse_create_table(example.context);
  ContextLayout ctx_layout;
  if (render_create_table(schema, &ctx_layout) != example.context) throw Error("context is not in canonical form");
  const SubstitutionRecord& record = example.substitutions;

  bool in_context = false;
  Edit edit;
  std::size_t response_cut = 0;
  std::string gold_clean, gold_corrupted;

  auto bare_items = [&] {
    std::vector<int> items;
    for (std::size_t i = 0; i < query.select.size(); ++i) {
      if (query.select[i].aggregate == Aggregate::None) items.push_back(static_cast<int>(i));
    }
    return items;
  };
  auto aggregated_items = [&] {
    std::vector<int> items;
    for (std::size_t i = 0; i < query.select.size(); ++i) {
      if (query.select[i].aggregate != Aggregate::None) items.push_back(static_cast<int>(i));
    }
    return items;
  };
  auto replace_mention = [&](const Mention& m, std::string text) {
    edit = {std::move(text), m.start, m.end()};
  };

  switch (feature) {
    case CorruptionFeature::EngTableName: {
      const Mention* m = find_mention(record, MentionRole::Table, -1);
      if (!m) return std::nullopt;
      const TableEntry& t = replacement_table(pool, schema, rng);
      replace_mention(*m, surface_like(*m, t, rng));
      response_cut = sql_layout.table;
      gold_clean = query.table;
      gold_corrupted = t.canonical_name;
      break;
    }
    case CorruptionFeature::DefTableName: {
      const TableEntry& t = replacement_table(pool, schema, rng);
      in_context = true;
      edit = {t.canonical_name, ctx_layout.main_name.start, ctx_layout.main_name.end};
      response_cut = sql_layout.table;
      gold_clean = query.table;
      gold_corrupted = t.canonical_name;
      break;
    }
    case CorruptionFeature::EngFieldName:
    case CorruptionFeature::DefFieldName:
    case CorruptionFeature::AggregateField: {
      const auto items = feature == CorruptionFeature::AggregateField ? aggregated_items() : bare_items();
      if (items.empty()) return std::nullopt;
      const int item = rng.pick(items);
      const std::string& field = query.select[static_cast<std::size_t>(item)].field;
      const FieldEntry& f = replacement_field(pool, schema, rng);
      if (feature == CorruptionFeature::DefFieldName) {
        const auto& cols = schema.main_table.columns;
        const auto it = std::find_if(cols.begin(), cols.end(), [&](const ColumnDef& c) { return c.name == field; });
        if (it == cols.end()) return std::nullopt;
        const Span s = ctx_layout.main_columns[static_cast<std::size_t>(it - cols.begin())];
        in_context = true;
        edit = {f.canonical_name, s.start, s.end};
      } else {
        const Mention* m = find_mention(record, MentionRole::Field, item);
        if (!m) return std::nullopt;
        replace_mention(*m, surface_like(*m, f, rng));
      }
      response_cut = sql_layout.select_field[static_cast<std::size_t>(item)];
      gold_clean = field;
      gold_corrupted = f.canonical_name;
      break;
    }
    case CorruptionFeature::OrderByField: {
      if (query.order_by.empty()) return std::nullopt;
      const Mention* m = find_mention(record, MentionRole::OrderField, 0);
      if (!m) return std::nullopt;
      const FieldEntry& f = replacement_field(pool, schema, rng);
      replace_mention(*m, surface_like(*m, f, rng));
      response_cut = sql_layout.order_field[0];
      gold_clean = query.order_by[0].field;
      gold_corrupted = f.canonical_name;
      break;
    }
    case CorruptionFeature::OrderByDirection: {
      if (query.order_by.empty()) return std::nullopt;
      const Mention* dir = find_mention(record, MentionRole::Direction, 0);
      const Mention* field = find_mention(record, MentionRole::OrderField, 0);
      if (!dir || !field || dir->phrase < 0 || static_cast<std::size_t>(dir->phrase) >= pool.directions().size()) {
        return std::nullopt;
      }
      const DirectionPhrase& pair = pool.directions()[static_cast<std::size_t>(dir->phrase)];
      const bool asc = query.order_by[0].direction == Direction::Asc;
      replace_mention(*dir, expand_phrase(asc ? pair.descending : pair.ascending, field->surface));
      response_cut = sql_layout.order_direction[0];
      gold_clean = asc ? "ASC" : "DESC";
      gold_corrupted = asc ? "DESC" : "ASC";
      break;
    }
    case CorruptionFeature::AggregateFunction: {
      std::vector<int> items;
      for (int i : aggregated_items()) {
        const ColumnDef* col = schema.main_table.find(query.select[static_cast<std::size_t>(i)].field);
        if (col && legal_aggregates(col->type.base_kind()).size() > 1) items.push_back(i);
      }
      if (items.empty()) return std::nullopt;
      const int item = rng.pick(items);
      const SelectItem& sel = query.select[static_cast<std::size_t>(item)];
      const Mention* agg = find_mention(record, MentionRole::Aggregate, item);
      const Mention* field = find_mention(record, MentionRole::Field, item);
      if (!agg || !field) return std::nullopt;
      std::vector<Aggregate> others;
      for (Aggregate a : legal_aggregates(schema.main_table.find(sel.field)->type.base_kind())) {
        if (a != sel.aggregate && !pool.phrases_for(a).empty()) others.push_back(a);
      }
      if (others.empty()) return std::nullopt;
      const Aggregate to = rng.pick(others);
      const std::size_t phrase = rng.pick(pool.phrases_for(to));
      replace_mention(*agg, expand_phrase(pool.aggregate_phrases()[phrase].pattern, field->surface));
      response_cut = sql_layout.select_aggregate[static_cast<std::size_t>(item)];
      gold_clean = std::string(to_string(sel.aggregate));
      gold_corrupted = std::string(to_string(to));
      break;
    }
  }

  PromptLayout layout;
  const std::string framed = frame_prompt(example, false, &layout);
  const std::string tail = " " + example.response.substr(0, response_cut);
  CorruptionPair pair;
  pair.source_id = example.id;
  pair.feature = feature;
  pair.clean_prompt = framed + tail;
  const std::size_t base = in_context ? layout.context.start : layout.instruction.start;
  pair.corrupted_prompt = pair.clean_prompt;
  pair.corrupted_prompt.replace(base + edit.start, edit.end - edit.start, edit.text);
  if (pair.corrupted_prompt == pair.clean_prompt) return std::nullopt;

  // Narrow the edited region to whole words that differ.
  const std::string& a = pair.clean_prompt;
  const std::string& b = pair.corrupted_prompt;
  const std::size_t shortest = std::min(a.size(), b.size());
  std::size_t pre = 0;
  while (pre < shortest && a[pre] == b[pre]) ++pre;
  std::size_t suf = 0;
  while (suf < shortest - pre && a[a.size() - 1 - suf] == b[b.size() - 1 - suf]) ++suf;
  while (pre > 0 && word_char(a[pre - 1])) --pre;
  while (suf > 0 && word_char(a[a.size() - suf])) --suf;
  pair.clean_span = {pre, a.size() - suf};
  pair.corrupted_span = {pre, b.size() - suf};
  pair.clean_text = a.substr(pair.clean_span.start, pair.clean_span.size());
  pair.corrupted_text = b.substr(pair.corrupted_span.start, pair.corrupted_span.size());
  pair.gold_clean = std::move(gold_clean);
  pair.gold_corrupted = std::move(gold_corrupted);
  return pair;
}

std::vector<std::vector<CorruptionPair>> gen_pairs(std::span<const Example> dataset, CorruptionFeature feature,
                                                   const VocabPool& pool, const CorruptionOptions& opts) {
  if (dataset.empty()) throw EmptyDataset();
  Level lowest = Level::CS5;
  for (const auto& e : dataset) lowest = std::min(lowest, e.level);
  if (lowest < min_level(feature)) throw UnsupportedFeature(feature, lowest);

  std::vector<std::vector<CorruptionPair>> batches(opts.n_batches);
  auto run_batch = [&](std::size_t b) {
    Rng rng(derive_seed(opts.seed, b));
    auto& out = batches[b];
    out.reserve(opts.batch_size);
    std::size_t tries = 0;
    const std::size_t budget = kAttemptsPerPair * std::max<std::size_t>(opts.batch_size, 1);
    while (out.size() < opts.batch_size) {
      if (++tries > budget) {
        throw PoolExhausted("too few examples carry " + std::string(to_string(feature)));
      }
      const Example& e = dataset[rng.index(dataset.size())];
      auto pair = corrupt_example(e, feature, pool, rng);
      if (!pair) continue;
      pair->batch = b;
      out.push_back(std::move(*pair));
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(opts.n_batches)));
  if (workers <= 1) {
    for (std::size_t b = 0; b < opts.n_batches; ++b) run_batch(b);
    return batches;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t b = w; b < opts.n_batches; b += workers) run_batch(b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return batches;
}

bool verify_pair(const CorruptionPair& p) {
  const std::string& a = p.clean_prompt;
  const std::string& b = p.corrupted_prompt;
  if (p.clean_span.start > p.clean_span.end || p.clean_span.end > a.size()) return false;
  if (p.corrupted_span.start > p.corrupted_span.end || p.corrupted_span.end > b.size()) return false;
  if (p.clean_span.start != p.corrupted_span.start) return false;
  if (a.compare(0, p.clean_span.start, b, 0, p.corrupted_span.start) != 0) return false;
  if (a.size() - p.clean_span.end != b.size() - p.corrupted_span.end) return false;
  if (a.compare(p.clean_span.end, std::string::npos, b, p.corrupted_span.end, std::string::npos) != 0) return false;
  const std::string_view clean = std::string_view(a).substr(p.clean_span.start, p.clean_span.size());
  const std::string_view corrupted = std::string_view(b).substr(p.corrupted_span.start, p.corrupted_span.size());
  return clean != corrupted && clean == p.clean_text && corrupted == p.corrupted_text;
}

std::string to_json_line(const CorruptionPair& p) {
  nlohmann::ordered_json j;
  j["source_id"] = p.source_id;
  j["batch"] = p.batch;
  j["feature"] = to_string(p.feature);
  j["clean_prompt"] = p.clean_prompt;
  j["corrupted_prompt"] = p.corrupted_prompt;
  j["clean_span"] = {p.clean_span.start, p.clean_span.end};
  j["corrupted_span"] = {p.corrupted_span.start, p.corrupted_span.end};
  j["clean_text"] = p.clean_text;
  j["corrupted_text"] = p.corrupted_text;
  j["gold_clean"] = p.gold_clean;
  j["gold_corrupted"] = p.gold_corrupted;
  return j.dump();
}

CorruptionPair pair_from_json_line(std::string_view line) {
  try {
    const auto j = nlohmann::ordered_json::parse(line);
    CorruptionPair p;
    p.source_id = j.at("source_id").get<std::int64_t>();
    p.batch = j.at("batch").get<std::size_t>();
    auto f = parse_corruption_feature(j.at("feature").get<std::string>());
    if (!f) throw Error("unknown feature");
    p.feature = *f;
    p.clean_prompt = j.at("clean_prompt").get<std::string>();
    p.corrupted_prompt = j.at("corrupted_prompt").get<std::string>();
    p.clean_span = {j.at("clean_span").at(0).get<std::size_t>(), j.at("clean_span").at(1).get<std::size_t>()};
    p.corrupted_span = {j.at("corrupted_span").at(0).get<std::size_t>(),
                        j.at("corrupted_span").at(1).get<std::size_t>()};
    p.clean_text = j.at("clean_text").get<std::string>();
    p.corrupted_text = j.at("corrupted_text").get<std::string>();
    p.gold_clean = j.at("gold_clean").get<std::string>();
    p.gold_corrupted = j.at("gold_corrupted").get<std::string>();
    return p;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw RecordError(0, e.what());
  }
}

}  // namespace sqlcorpus
