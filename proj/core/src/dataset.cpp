#include "sqlcorpus/dataset.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sqlcorpus {
namespace {

using ojson = nlohmann::ordered_json;

ojson mention_json(const Mention& m) {
  ojson j;
  j["role"] = to_string(m.role);
  j["canonical"] = m.canonical;
  j["surface"] = m.surface;
  j["start"] = m.start;
  j["synonym"] = m.synonym;
  j["substitutable"] = m.substitutable;
  j["item"] = m.item;
  j["phrase"] = m.phrase;
  return j;
}

Mention mention_from(const ojson& j) {
  Mention m;
  auto role = parse_mention_role(j.at("role").get<std::string>());
  if (!role) throw Error("unknown mention role");
  m.role = *role;
  m.canonical = j.at("canonical").get<std::string>();
  m.surface = j.at("surface").get<std::string>();
  m.start = j.at("start").get<std::size_t>();
  m.synonym = j.at("synonym").get<bool>();
  m.substitutable = j.at("substitutable").get<bool>();
  m.item = j.at("item").get<int>();
  m.phrase = j.at("phrase").get<int>();
  return m;
}

template <class F>
auto read_lines(std::istream& in, F&& parse_line) {
  std::vector<decltype(parse_line(std::string_view{}))> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') throw RecordError(n, "CRLF line ending");
    if (line.empty()) continue;
    try {
      out.push_back(parse_line(line));
    } catch (const RecordError& e) {
      throw RecordError(n, e.what());
    } catch (const std::exception& e) {
      throw RecordError(n, e.what());
    }
  }
  return out;
}

std::ifstream open_in(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open " + file.string());
  return in;
}

}  // namespace

std::string to_json_line(const Example& e) {
  ojson j;
  j["id"] = e.id;
  j["instruction"] = e.instruction;
  j["context"] = e.context;
  j["response"] = e.response;
  j["level"] = to_string(e.level);
  j["variant"] = to_string(e.variant);
  ojson subs = ojson::array();
  for (const auto& m : e.substitutions) subs.push_back(mention_json(m));
  j["substitutions"] = std::move(subs);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

Example from_json_line(std::string_view line) {
  try {
    const ojson j = ojson::parse(line);
    Example e;
    e.id = j.at("id").get<std::int64_t>();
    e.instruction = j.at("instruction").get<std::string>();
    e.context = j.at("context").get<std::string>();
    e.response = j.at("response").get<std::string>();
    auto level = parse_level(j.at("level").get<std::string>());
    if (!level) throw RecordError(0, "bad level");
    e.level = *level;
    auto variant = parse_variant(j.at("variant").get<std::string>());
    if (!variant) throw RecordError(0, "bad variant");
    e.variant = *variant;
    if (j.contains("substitutions")) {
      for (const auto& m : j.at("substitutions")) e.substitutions.push_back(mention_from(m));
    }
    return e;
  } catch (const RecordError&) {
    throw;
  } catch (const std::exception& ex) {
    throw RecordError(0, ex.what());
  }
}

std::string frame_prompt(const Example& e, bool include_response, PromptLayout* layout) {
  std::string out;
  out.reserve(kInstructionPrefix.size() + e.instruction.size() + kContextPrefix.size() + e.context.size() +
              kResponsePrefix.size() + 1 + e.response.size());
  out += kInstructionPrefix;
  const std::size_t instr = out.size();
  out += e.instruction;
  out += kContextPrefix;
  const std::size_t ctx = out.size();
  out += e.context;
  out += kResponsePrefix;
  if (layout) *layout = {{instr, instr + e.instruction.size()}, {ctx, ctx + e.context.size()}, out.size()};
  if (include_response) {
    out += ' ';
    out += e.response;
  }
  return out;
}

SplitSizes SplitSizes::for_total(std::size_t total) {
  if (total == 0 || total % 200 != 0) {
    throw InvalidCount("count must be a positive multiple of 200, got " + std::to_string(total));
  }
  SplitSizes s;
  s.train = total / 200 * 153;
  s.validation = total / 200 * 27;
  s.test = total / 10;
  return s;
}

CorpusWriter::CorpusWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::size_t CorpusWriter::write_split(std::span<const Example> examples, std::ostream& sink) {
  for (const auto& e : examples) {
    auto [it, fresh] = seen_.emplace(std::make_pair(e.instruction, e.context), e.id);
    if (!fresh) throw DuplicateExample(it->second, e.id);
  }
  for (const auto& e : examples) sink << to_json_line(e) << '\n';
  sink.flush();
  if (!sink) throw Error("write failed");
  return examples.size();
}

std::size_t CorpusWriter::write_split(std::span<const Example> examples, std::string_view split_name) {
  std::filesystem::create_directories(dir_);
  const auto path = dir_ / (std::string(split_name) + ".jsonl");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string());
  return write_split(examples, out);
}

std::vector<Example> read_examples(std::istream& in) {
  return read_lines(in, [](std::string_view line) { return from_json_line(line); });
}

std::vector<Example> read_examples(const std::filesystem::path& file) {
  auto in = open_in(file);
  return read_examples(in);
}

std::vector<Prediction> read_predictions(std::istream& in) {
  return read_lines(in, [](std::string_view line) {
    const ojson j = ojson::parse(line);
    return Prediction{j.at("id").get<std::int64_t>(), j.at("prediction").get<std::string>()};
  });
}

std::vector<Prediction> read_predictions(const std::filesystem::path& file) {
  auto in = open_in(file);
  return read_predictions(in);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string read_file(const std::filesystem::path& file) {
  auto in = open_in(file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::string Manifest::to_json() const {
  ojson j;
  j["generator_version"] = generator_version;
  j["master_seed"] = master_seed;
  j["level"] = to_string(level);
  j["variant"] = to_string(variant);
  j["total"] = total;
  j["splits"] = {{"train", splits.train}, {"validation", splits.validation}, {"test", splits.test}};
  j["vocab_sha256"] = vocab_sha256;
  j["templates_sha256"] = templates_sha256;
  ojson files = ojson::object();
  for (auto name : kSplitNames) {
    auto it = split_sha256.find(std::string(name));
    if (it != split_sha256.end()) files[std::string(name) + ".jsonl"] = it->second;
  }
  j["split_sha256"] = std::move(files);
  if (train_join_rate) j["train_join_rate"] = *train_join_rate;
  return j.dump(2) + "\n";
}

Manifest Manifest::from_json(std::string_view text) {
  try {
    const ojson j = ojson::parse(text);
    Manifest m;
    m.generator_version = j.at("generator_version").get<std::string>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    auto level = parse_level(j.at("level").get<std::string>());
    auto variant = parse_variant(j.at("variant").get<std::string>());
    if (!level || !variant) throw Error("bad level or variant");
    m.level = *level;
    m.variant = *variant;
    m.total = j.at("total").get<std::size_t>();
    const auto& s = j.at("splits");
    m.splits = {s.at("train").get<std::size_t>(), s.at("validation").get<std::size_t>(),
                s.at("test").get<std::size_t>()};
    m.vocab_sha256 = j.at("vocab_sha256").get<std::string>();
    m.templates_sha256 = j.at("templates_sha256").get<std::string>();
    for (const auto& [file, digest] : j.at("split_sha256").items()) {
      std::string name = file;
      if (name.ends_with(".jsonl")) name.resize(name.size() - 6);
      m.split_sha256[name] = digest.get<std::string>();
    }
    if (j.contains("train_join_rate")) m.train_join_rate = j.at("train_join_rate").get<double>();
    return m;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(std::string("manifest: ") + e.what());
  }
}

}  // namespace sqlcorpus
