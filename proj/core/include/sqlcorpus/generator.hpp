#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sqlcorpus/dataset.hpp"
#include "sqlcorpus/instruction.hpp"
#include "sqlcorpus/query_gen.hpp"
#include "sqlcorpus/vocab.hpp"

namespace sqlcorpus {

inline constexpr std::string_view kGeneratorVersion = "sqlcorpus 1.0.0";

/// Vocabulary and templates plus the digests of their source text.
struct Resources {
  VocabPool pool;
  TemplateSet templates;
  std::string vocab_sha256;
  std::string templates_sha256;

  static Resources defaults();
  static Resources from_text(std::string_view vocab_text, std::string_view templates_text);
};

struct GenerateOptions {
  Level level = Level::CS1;
  Variant variant = Variant::Base;
  std::size_t count = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  JoinRule join_rule = JoinRule::SameType;
};

/// One example from the sub-seed derive_seed(seed, index, attempt).
Example generate_example(const Resources& res, Level level, Variant variant, JoinRule rule, std::uint64_t seed,
                         std::int64_t index, std::uint64_t attempt = 0);

/// count examples with ids 0..count-1, unique by (instruction, context).
/// A duplicate is regenerated with the next attempt number.
std::vector<Example> generate_examples(const Resources& res, const GenerateOptions& opts);

struct Corpus {
  Manifest manifest;
  std::vector<Example> train;
  std::vector<Example> validation;
  std::vector<Example> test;

  const std::vector<Example>& split(std::string_view name) const;
};

/// Throws InvalidCount unless opts.count is a positive multiple of 200.
Corpus generate_corpus(const Resources& res, const GenerateOptions& opts);

/// <dir>/{train,validation,test}.jsonl and <dir>/manifest.json.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

std::string serialize_split(const std::vector<Example>& examples);

}  // namespace sqlcorpus
