#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sqlcorpus/dataset.hpp"

namespace sqlcorpus {

class StopwordList {
 public:
  /// One word per line; '#' comments.
  static StopwordList load(std::string_view source);
  bool contains(std::string_view word) const { return words_.count(std::string(word)) > 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

class FrequencyList {
 public:
  /// One word per line, most frequent first; '#' comments.
  static FrequencyList load(std::string_view source);
  /// 1-based rank, or nullopt when absent.
  std::optional<std::size_t> rank(std::string_view word) const;
  std::size_t size() const { return ranks_.size(); }

 private:
  std::unordered_map<std::string, std::size_t> ranks_;
};

inline constexpr std::size_t kDefaultRareRank = 20000;

/// Whitespace split, edge punctuation stripped, lower-cased; empty tokens dropped.
std::vector<std::string> tokenize(std::string_view text);

double lexical_density(std::string_view text, const StopwordList& stopwords);
double rarity(std::string_view text, const FrequencyList& freq, const StopwordList& stopwords,
              std::size_t rare_rank = kDefaultRareRank);

class EmptyText : public Error {
 public:
  EmptyText() : Error("text has no words") {}
};

int count_syllables(std::string_view word);
/// Throws EmptyText.
double flesch(std::string_view text);

struct CorpusStats {
  std::size_t examples = 0;
  double rarity = 0.0;
  double lexical_density = 0.0;
  double readability = 0.0;
  double mean_instruction_words = 0.0;
  double order_by_rate = 0.0;
  double where_rate = 0.0;
  double join_rate = 0.0;
  double aggregate_rate = 0.0;
  std::map<int, std::size_t> column_histogram;  // main-table column count
};

/// Throws EmptyDataset, ParseError on a malformed response or context.
CorpusStats corpus_stats(std::span<const Example> examples, const FrequencyList& freq,
                         const StopwordList& stopwords, std::size_t rare_rank = kDefaultRareRank);

/// Aligned text table, one row per labelled corpus.
std::string format_stats_table(std::span<const std::pair<std::string, CorpusStats>> rows);
std::string stats_json(const CorpusStats& stats);

}  // namespace sqlcorpus
