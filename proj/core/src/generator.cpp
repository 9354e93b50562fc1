#include "sqlcorpus/generator.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <thread>

#include "sqlcorpus/resources.hpp"

namespace sqlcorpus {
namespace {

constexpr std::uint64_t kMaxAttempts = 10000;
constexpr std::uint64_t kShuffleStream = 0x5348554646ULL;

}  // namespace

Resources Resources::defaults() {
  return {default_vocab(), default_templates(), sha256_hex(default_vocab_text()),
          sha256_hex(default_templates_text())};
}

Resources Resources::from_text(std::string_view vocab_text, std::string_view templates_text) {
  return {load_vocab(vocab_text), load_templates(templates_text), sha256_hex(vocab_text), sha256_hex(templates_text)};
}

Example generate_example(const Resources& res, Level level, Variant variant, JoinRule rule, std::uint64_t seed,
                         std::int64_t index, std::uint64_t attempt) {
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(index), attempt));
  const SchemaContext schema = gen_schema(res.pool, level, rng);
  LevelRecipe recipe = LevelRecipe::for_level(level);
  recipe.join_rule = rule;
  const SqlQuery query = gen_query(schema, recipe, rng);
  Instruction instr = gen_instruction(query, schema, variant, res.pool, res.templates, rng);

  Example e;
  e.id = index;
  e.instruction = std::move(instr.text);
  e.context = render_create_table(schema);
  e.response = render_sql(query);
  e.level = level;
  e.variant = variant;
  e.substitutions = std::move(instr.record);
  return e;
}

std::vector<Example> generate_examples(const Resources& res, const GenerateOptions& opts) {
  std::vector<Example> out(opts.count);
  auto make = [&](std::size_t i, std::uint64_t attempt) {
    return generate_example(res, opts.level, opts.variant, opts.join_rule, opts.seed, static_cast<std::int64_t>(i),
                            attempt);
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(std::max<std::size_t>(opts.count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < opts.count; ++i) out[i] = make(i, 0);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (std::size_t i = w; i < opts.count; i += workers) out[i] = make(i, 0);
      });
    }
  }

  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < opts.count; ++i) {
    std::uint64_t attempt = 0;
    while (!seen.emplace(out[i].instruction, out[i].context).second) {
      if (++attempt >= kMaxAttempts) throw Error("cannot find a unique example for id " + std::to_string(i));
      out[i] = make(i, attempt);
    }
  }
  return out;
}

const std::vector<Example>& Corpus::split(std::string_view name) const {
  if (name == "train") return train;
  if (name == "validation") return validation;
  if (name == "test") return test;
  throw Error("unknown split " + std::string(name));
}

std::string serialize_split(const std::vector<Example>& examples) {
  std::string out;
  for (const auto& e : examples) {
    out += to_json_line(e);
    out += '\n';
  }
  return out;
}

Corpus generate_corpus(const Resources& res, const GenerateOptions& opts) {
  const SplitSizes sizes = SplitSizes::for_total(opts.count);
  std::vector<Example> all = generate_examples(res, opts);

  std::vector<std::size_t> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng shuffle_rng(derive_seed(opts.seed, kShuffleStream, 0));
  shuffle_rng.shuffle(order);

  Corpus c;
  auto take = [&](std::vector<Example>& split, std::size_t begin, std::size_t n) {
    std::vector<std::size_t> ids(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                 order.begin() + static_cast<std::ptrdiff_t>(begin + n));
    std::sort(ids.begin(), ids.end());
    split.reserve(n);
    for (std::size_t id : ids) split.push_back(std::move(all[id]));
  };
  take(c.train, 0, sizes.train);
  take(c.validation, sizes.train, sizes.validation);
  take(c.test, sizes.train + sizes.validation, sizes.test);

  Manifest& m = c.manifest;
  m.generator_version = std::string(kGeneratorVersion);
  m.master_seed = opts.seed;
  m.level = opts.level;
  m.variant = opts.variant;
  m.total = opts.count;
  m.splits = sizes;
  m.vocab_sha256 = res.vocab_sha256;
  m.templates_sha256 = res.templates_sha256;
  for (auto name : kSplitNames) m.split_sha256[std::string(name)] = sha256_hex(serialize_split(c.split(name)));
  if (opts.level == Level::CS5) {
    std::vector<SqlQuery> queries;
    queries.reserve(c.train.size());
    for (const auto& e : c.train) queries.push_back(parse_sql(e.response));
    m.train_join_rate = join_rate(queries);
  }
  return c;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  CorpusWriter writer(dir);
  for (auto name : kSplitNames) writer.write_split(corpus.split(name), name);
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  out << corpus.manifest.to_json();
  if (!out.flush()) throw Error("cannot write manifest in " + dir.string());
}

}  // namespace sqlcorpus
