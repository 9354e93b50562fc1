#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqlcorpus/corruption.hpp"
#include "sqlcorpus/dataset.hpp"
#include "sqlcorpus/generator.hpp"
#include "sqlcorpus/grader.hpp"
#include "sqlcorpus/resources.hpp"
#include "sqlcorpus/stats.hpp"

namespace fs = std::filesystem;
using namespace sqlcorpus;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

/// Flag-level problem detected after parsing; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SQLCORPUS_OUT"); env && *env) return env;
  throw UsageError("--out is required (or set SQLCORPUS_OUT)");
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out.flush()) throw Error("cannot write " + file.string());
}

Resources load_resources(const std::string& vocab, const std::string& templates) {
  if (vocab.empty() && templates.empty()) return Resources::defaults();
  const std::string v = vocab.empty() ? std::string(default_vocab_text()) : read_file(vocab);
  const std::string t = templates.empty() ? std::string(default_templates_text()) : read_file(templates);
  return Resources::from_text(v, t);
}

struct GenerateArgs {
  std::string level, variant = "base", out, vocab, templates, join_rule = "same-type";
  std::size_t count = 100000;
  std::uint64_t seed = 0;
  unsigned workers = default_workers();
  bool json = false;
};

int run_generate(const GenerateArgs& a) {
  GenerateOptions opts;
  const auto level = parse_level(a.level);
  const auto variant = parse_variant(a.variant);
  if (!level) throw UsageError("bad --level '" + a.level + "'");
  if (!variant) throw UsageError("bad --variant '" + a.variant + "'");
  opts.level = *level;
  opts.variant = *variant;
  opts.count = a.count;
  opts.seed = a.seed;
  opts.workers = a.workers;
  opts.join_rule = a.join_rule == "same-base-kind" ? JoinRule::SameBaseKind : JoinRule::SameType;
  const fs::path dir = output_dir(a.out);

  const Resources res = load_resources(a.vocab, a.templates);
  const Corpus corpus = generate_corpus(res, opts);
  write_corpus(corpus, dir);

  if (a.json) {
    std::cout << corpus.manifest.to_json();
  } else {
    const auto& m = corpus.manifest;
    std::cout << "wrote " << m.total << " examples to " << dir.string() << " (train " << m.splits.train
              << ", validation " << m.splits.validation << ", test " << m.splits.test << ")\n";
    if (m.train_join_rate) std::printf("train join rate %.4f\n", *m.train_join_rate);
  }
  return kOk;
}

struct GradeArgs {
  std::string gold, pred, weights, report;
  unsigned workers = default_workers();
  bool json = false;
};

ojson report_json(std::int64_t id, const GradeReport& r) {
  ojson j;
  j["id"] = id;
  j["exact_match"] = r.exact_match;
  j["structural"] = r.structural;
  j["semantic"] = r.semantic;
  j["implementation"] = r.implementation;
  j["total"] = r.total;
  j["diagnostics"] = r.diagnostics;
  return j;
}

int run_grade(const GradeArgs& a) {
  GradeWeights weights;
  if (!a.weights.empty()) {
    try {
      weights = GradeWeights::parse(a.weights);
    } catch (const InvalidWeights& e) {
      throw UsageError(e.what());
    }
  }
  const auto gold_examples = read_examples(fs::path(a.gold));
  std::vector<GoldEntry> gold;
  gold.reserve(gold_examples.size());
  for (const auto& e : gold_examples) gold.push_back({e.id, parse_sql(e.response), e.level});
  const auto predictions = read_predictions(fs::path(a.pred));
  const BatchSummary s = grade_batch(predictions, gold, weights, a.workers);

  if (!a.report.empty()) {
    std::string lines;
    for (const auto& g : s.reports) lines += report_json(g.id, g.report).dump() + "\n";
    write_text(a.report, lines);
  }
  if (a.json) {
    ojson j;
    j["count"] = s.count;
    j["exact_match_accuracy"] = s.exact_match_accuracy;
    j["mean_total"] = s.mean_total;
    ojson levels = ojson::object();
    for (const auto& [level, l] : s.per_level) {
      levels[std::string(to_string(level))] = {
          {"count", l.count}, {"exact_match_accuracy", l.exact_match_accuracy}, {"mean_total", l.mean_total}};
    }
    j["per_level"] = std::move(levels);
    j["missing"] = s.missing;
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("examples            %zu\n", s.count);
    std::printf("exact-match         %.4f\n", s.exact_match_accuracy);
    std::printf("mean partial credit %.4f\n", s.mean_total);
    for (const auto& [level, l] : s.per_level) {
      std::printf("  %s  n=%zu  exact=%.4f  mean=%.4f\n", std::string(to_string(level)).c_str(), l.count,
                  l.exact_match_accuracy, l.mean_total);
    }
    if (!s.missing.empty()) std::printf("missing predictions %zu (graded as empty)\n", s.missing.size());
  }
  return kOk;
}

struct StatsArgs {
  std::vector<std::string> data;
  std::string freq, stopwords;
  std::size_t rare_rank = kDefaultRareRank;
  bool json = false;
};

int run_stats(const StatsArgs& a) {
  const FrequencyList freq = a.freq.empty() ? default_frequencies() : FrequencyList::load(read_file(a.freq));
  const StopwordList stop = a.stopwords.empty() ? default_stopwords() : StopwordList::load(read_file(a.stopwords));
  std::vector<std::pair<std::string, CorpusStats>> rows;
  for (const auto& file : a.data) rows.emplace_back(file, corpus_stats(read_examples(fs::path(file)), freq, stop, a.rare_rank));
  if (a.json) {
    for (const auto& [file, s] : rows) {
      auto j = ojson::parse(stats_json(s));
      ojson out;
      out["data"] = file;
      for (auto& [k, v] : j.items()) out[k] = v;
      std::cout << out.dump() << "\n";
    }
  } else {
    std::cout << format_stats_table(rows);
  }
  return kOk;
}

struct CorruptArgs {
  std::string data, feature, out, vocab;
  std::size_t batches = 15, batch_size = 100;
  std::uint64_t seed = 0;
  unsigned workers = default_workers();
  bool json = false;
};

int run_corrupt(const CorruptArgs& a) {
  const auto feature = parse_corruption_feature(a.feature);
  if (!feature) throw UsageError("unknown --feature '" + a.feature + "'");
  const fs::path dir = output_dir(a.out);
  const auto examples = read_examples(fs::path(a.data));
  const VocabPool pool = a.vocab.empty() ? default_vocab() : load_vocab(read_file(a.vocab));
  CorruptionOptions opts{a.batch_size, a.batches, a.seed, a.workers};
  const auto batches = gen_pairs(examples, *feature, pool, opts);

  fs::create_directories(dir);
  std::string lines;
  std::size_t n = 0, failed = 0;
  for (const auto& batch : batches) {
    for (const auto& p : batch) {
      lines += to_json_line(p) + "\n";
      ++n;
      failed += !verify_pair(p);
    }
  }
  const std::string name(to_string(*feature));
  write_text(dir / (name + ".jsonl"), lines);
  ojson m;
  m["feature"] = name;
  m["seed"] = a.seed;
  m["batches"] = a.batches;
  m["batch_size"] = a.batch_size;
  m["source_sha256"] = sha256_hex(read_file(a.data));
  m["pairs_sha256"] = sha256_hex(lines);
  write_text(dir / (name + ".manifest.json"), m.dump(2) + "\n");
  if (a.json) {
    std::cout << ojson{{"feature", name}, {"pairs", n}, {"verify_failures", failed}}.dump() << "\n";
  } else {
    std::cout << "wrote " << n << " " << name << " pairs to " << (dir / (name + ".jsonl")).string() << "\n";
  }
  return failed == 0 ? kOk : kFailure;
}

/// Every invariant a generated record must satisfy, as human-readable strings.
std::vector<std::string> record_violations(const Example& e) {
  std::vector<std::string> v;
  SqlQuery q;
  try {
    q = parse_sql(e.response);
    if (render_sql(q) != e.response) v.push_back("response is not canonical");
  } catch (const ParseError& err) {
    v.push_back(std::string("response: ") + err.what());
    return v;
  }
  SchemaContext schema;
  try {
    schema = parse_create_table(e.context);
    if (render_create_table(schema) != e.context) v.push_back("context is not canonical");
  } catch (const ParseError& err) {
    v.push_back(std::string("context: ") + err.what());
    return v;
  }
  schema.level = e.level;
  for (auto& s : query_violations(q, schema)) v.push_back(std::move(s));

  const int level = static_cast<int>(e.level);
  if (level < 2 && !q.order_by.empty()) v.push_back("ORDER BY below CS2");
  bool agg = false;
  for (const auto& item : q.select) agg = agg || item.aggregate != Aggregate::None;
  if (level < 3 && agg) v.push_back("aggregate below CS3");
  if (level < 4 && !q.filters.empty()) v.push_back("WHERE below CS4");
  if (level < 5 && q.join) v.push_back("JOIN below CS5");
  if ((level == 5) != schema.join_table.has_value()) v.push_back("second table present iff CS5");
  const int cols = static_cast<int>(schema.main_table.columns.size());
  if (cols < kMinColumns || cols > kMaxColumns) v.push_back("column count outside [2,12]");

  for (const auto& m : e.substitutions) {
    if (m.end() > e.instruction.size() || e.instruction.compare(m.start, m.surface.size(), m.surface) != 0) {
      v.push_back("mention '" + m.surface + "' does not match the instruction text");
    }
    if (e.variant == Variant::Base && m.synonym) v.push_back("synonym in a base example");
  }
  return v;
}

struct ValidateArgs {
  std::vector<std::string> data;
  bool json = false;
};

int run_validate(const ValidateArgs& a) {
  std::map<std::pair<std::string, std::string>, std::string> seen;
  std::size_t records = 0;
  std::vector<std::string> problems;
  for (const auto& file : a.data) {
    std::vector<Example> examples;
    try {
      examples = read_examples(fs::path(file));
    } catch (const Error& e) {
      problems.push_back(file + ": " + e.what());
      continue;
    }
    std::set<std::int64_t> ids;
    for (const auto& e : examples) {
      ++records;
      const std::string where = file + " id " + std::to_string(e.id);
      if (!ids.insert(e.id).second) problems.push_back(where + ": duplicate id");
      auto [it, fresh] = seen.emplace(std::make_pair(e.instruction, e.context), where);
      if (!fresh) problems.push_back(where + ": same instruction and context as " + it->second);
      for (const auto& v : record_violations(e)) problems.push_back(where + ": " + v);
    }
  }
  if (a.json) {
    std::cout << ojson{{"records", records}, {"violations", problems}}.dump() << "\n";
  } else {
    for (const auto& p : problems) std::cout << p << "\n";
    std::cout << records << " records, " << problems.size() << " violations\n";
  }
  return problems.empty() ? kOk : kFailure;
}

std::string ast_text(const SqlQuery& q) {
  std::string out = "table: " + q.table + "\nselect:\n";
  for (const auto& s : q.select) {
    out += "  - " + s.field;
    if (s.aggregate != Aggregate::None) out += "  aggregate=" + std::string(to_string(s.aggregate));
    if (s.alias) out += "  alias=" + *s.alias;
    out += "\n";
  }
  if (q.join) {
    out += "join: " + q.join->right_table + " on " + q.table + "." + q.join->left_key + " = " + q.join->right_table +
           "." + q.join->right_key + "\n";
  }
  for (const auto& f : q.filters) {
    out += "where: " + f.field + " " + std::string(to_string(f.op)) + " " + f.value.sql() + "\n";
  }
  for (const auto& o : q.order_by) out += "order by: " + o.field + " " + std::string(to_string(o.direction)) + "\n";
  return out;
}

struct InspectArgs {
  std::string data;
  std::int64_t id = 0;
  bool json = false;
};

int run_inspect(const InspectArgs& a) {
  const auto examples = read_examples(fs::path(a.data));
  const auto it = std::find_if(examples.begin(), examples.end(), [&](const Example& e) { return e.id == a.id; });
  if (it == examples.end()) {
    std::cerr << "no example with id " << a.id << "\n";
    return kFailure;
  }
  if (a.json) {
    auto j = ojson::parse(to_json_line(*it));
    j["prompt"] = frame_prompt(*it, true);
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << "id:          " << it->id << "\n"
            << "level:       " << to_string(it->level) << "\n"
            << "variant:     " << to_string(it->variant) << "\n"
            << "instruction: " << it->instruction << "\n"
            << "context:     " << it->context << "\n"
            << "response:    " << it->response << "\n\n"
            << ast_text(parse_sql(it->response)) << "\n";
  for (const auto& m : it->substitutions) {
    std::cout << "mention " << to_string(m.role) << " '" << m.surface << "' -> " << m.canonical << " @" << m.start
              << (m.synonym ? " (synonym)" : "") << "\n";
  }
  std::cout << "\n" << frame_prompt(*it, true) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic text-to-SQL corpus generator, grader and analysis tools"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate train/validation/test splits and a manifest");
  g->add_option("--level", gen.level, "cs1..cs5")->required();
  g->add_option("--variant", gen.variant, "base or syn")->capture_default_str();
  g->add_option("--count", gen.count, "Total examples, a multiple of 200")->capture_default_str();
  g->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  g->add_option("--out", gen.out, "Output directory (default $SQLCORPUS_OUT)");
  g->add_option("--workers", gen.workers, "Worker threads")->check(CLI::PositiveNumber);
  g->add_option("--vocab", gen.vocab, "Vocabulary file")->check(CLI::ExistingFile);
  g->add_option("--templates", gen.templates, "Template file")->check(CLI::ExistingFile);
  g->add_option("--join-rule", gen.join_rule, "same-type or same-base-kind")
      ->check(CLI::IsMember({"same-type", "same-base-kind"}))
      ->capture_default_str();
  g->add_flag("--json", gen.json, "Print the manifest as JSON");

  GradeArgs grd;
  auto* gr = app.add_subcommand("grade", "Grade predictions against gold examples");
  gr->add_option("--gold", grd.gold, "Gold record file")->required()->check(CLI::ExistingFile);
  gr->add_option("--pred", grd.pred, "Prediction file with {id, prediction} lines")->required()->check(CLI::ExistingFile);
  gr->add_option("--weights", grd.weights, "structural,semantic,implementation weights summing to 1");
  gr->add_option("--report", grd.report, "Write per-example reports to this file");
  gr->add_option("--workers", grd.workers, "Worker threads")->check(CLI::PositiveNumber);
  gr->add_flag("--json", grd.json, "Machine-readable summary");

  StatsArgs st;
  auto* s = app.add_subcommand("stats", "Rarity, lexical density, readability and clause rates");
  s->add_option("--data", st.data, "Record file(s)")->required()->check(CLI::ExistingFile);
  s->add_option("--freq", st.freq, "Word frequency list (default: built in)")->check(CLI::ExistingFile);
  s->add_option("--stopwords", st.stopwords, "Stopword list (default: built in)")->check(CLI::ExistingFile);
  s->add_option("--rare-rank", st.rare_rank, "Words ranked beyond this are rare")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_flag("--json", st.json, "One JSON object per file");

  CorruptArgs cor;
  auto* c = app.add_subcommand("corrupt", "Build clean/corrupted prompt pairs for one feature");
  c->add_option("--data", cor.data, "Record file")->required()->check(CLI::ExistingFile);
  c->add_option("--feature", cor.feature, "EngTableName, EngFieldName, DefTableName, DefFieldName, OrderByField, "
                                          "OrderByDirection, AggregateField or AggregateFunction")
      ->required();
  c->add_option("--batches", cor.batches, "Number of batches")->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--batch-size", cor.batch_size, "Pairs per batch")->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--seed", cor.seed, "Seed")->capture_default_str();
  c->add_option("--out", cor.out, "Output directory (default $SQLCORPUS_OUT)");
  c->add_option("--vocab", cor.vocab, "Vocabulary file for replacements")->check(CLI::ExistingFile);
  c->add_option("--workers", cor.workers, "Worker threads")->check(CLI::PositiveNumber);
  c->add_flag("--json", cor.json, "Machine-readable summary");

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Re-parse every record and check its invariants");
  v->add_option("--data", val.data, "Record file(s)")->required()->check(CLI::ExistingFile);
  v->add_flag("--json", val.json, "Machine-readable result");

  InspectArgs ins;
  auto* in = app.add_subcommand("inspect", "Show one example with its parsed query");
  in->add_option("--data", ins.data, "Record file")->required()->check(CLI::ExistingFile);
  in->add_option("--id", ins.id, "Example id")->required();
  in->add_flag("--json", ins.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return run_generate(gen);
    if (*gr) return run_grade(grd);
    if (*s) return run_stats(st);
    if (*c) return run_corrupt(cor);
    if (*v) return run_validate(val);
    if (*in) return run_inspect(ins);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedFeature& e) {
    std::cerr << "UnsupportedFeature: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidCount& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
