#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqlcorpus/dataset.hpp"
#include "sqlcorpus/rng.hpp"
#include "sqlcorpus/vocab.hpp"

namespace sqlcorpus {

enum class CorruptionFeature {
  EngTableName,
  EngFieldName,
  DefTableName,
  DefFieldName,
  OrderByField,
  OrderByDirection,
  AggregateField,
  AggregateFunction,
};

std::string_view to_string(CorruptionFeature f);
std::optional<CorruptionFeature> parse_corruption_feature(std::string_view text);
Level min_level(CorruptionFeature f);
const std::vector<CorruptionFeature>& all_corruption_features();

struct CorruptionPair {
  std::int64_t source_id = 0;
  std::size_t batch = 0;
  CorruptionFeature feature = CorruptionFeature::EngTableName;
  std::string clean_prompt;
  std::string corrupted_prompt;
  Span clean_span;
  Span corrupted_span;
  std::string clean_text;      // clean_prompt at clean_span
  std::string corrupted_text;  // corrupted_prompt at corrupted_span
  std::string gold_clean;      // expected next response token for each prompt
  std::string gold_corrupted;

  friend bool operator==(const CorruptionPair&, const CorruptionPair&) = default;
};

class UnsupportedFeature : public Error {
 public:
  UnsupportedFeature(CorruptionFeature feature, Level level)
      : Error(std::string(to_string(feature)) + " needs " + std::string(to_string(min_level(feature))) +
              " or higher, dataset is " + std::string(to_string(level))),
        feature_(feature),
        level_(level) {}
  CorruptionFeature feature() const { return feature_; }
  Level level() const { return level_; }

 private:
  CorruptionFeature feature_;
  Level level_;
};

class PoolExhausted : public Error {
 public:
  using Error::Error;
};

struct CorruptionOptions {
  std::size_t batch_size = 100;
  std::size_t n_batches = 15;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// One pair from one example, or nullopt when the example has no instance of the feature.
std::optional<CorruptionPair> corrupt_example(const Example& example, CorruptionFeature feature,
                                              const VocabPool& pool, Rng& rng);

/// n_batches batches of batch_size pairs; batch b draws from derive_seed(seed, b).
/// Throws UnsupportedFeature, PoolExhausted, EmptyDataset.
std::vector<std::vector<CorruptionPair>> gen_pairs(std::span<const Example> dataset, CorruptionFeature feature,
                                                   const VocabPool& pool, const CorruptionOptions& opts = {});

/// Single contiguous difference whose span texts differ and match the recorded texts.
bool verify_pair(const CorruptionPair& pair);

std::string to_json_line(const CorruptionPair& pair);
CorruptionPair pair_from_json_line(std::string_view line);

}  // namespace sqlcorpus
