#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqlcorpus/schema.hpp"
#include "sqlcorpus/sql.hpp"

namespace sqlcorpus {

class InvalidWeights : public Error {
 public:
  using Error::Error;
};

struct GradeWeights {
  double structural = 1.0 / 3.0;
  double semantic = 1.0 / 3.0;
  double implementation = 1.0 / 3.0;

  /// "a,b,c" in structural, semantic, implementation order. Must sum to 1.
  static GradeWeights parse(std::string_view text);
  void validate() const;
};

struct GradeReport {
  bool exact_match = false;
  bool parsed = false;
  double structural = 0.0;
  double semantic = 0.0;
  double implementation = 0.0;
  double total = 0.0;
  std::vector<std::string> diagnostics;
};

/// Never throws on bad predictions.
GradeReport grade(std::string_view prediction, const SqlQuery& gold, const GradeWeights& weights = {});

/// 2|A∩B| / (|A|+|B|) over multisets; 1 when both are empty.
double dice(std::vector<std::string> a, std::vector<std::string> b);

/// In-order fraction of SELECT, FROM and the gold's optional clause keywords.
double structural_salvage(std::string_view prediction, const SqlQuery& gold);

struct GoldEntry {
  std::int64_t id = 0;
  SqlQuery query;
  Level level = Level::CS1;
};

struct Prediction {
  std::int64_t id = 0;
  std::string text;
};

class UnknownId : public Error {
 public:
  explicit UnknownId(std::int64_t id) : Error("unknown id " + std::to_string(id)), id_(id) {}
  std::int64_t id() const { return id_; }

 private:
  std::int64_t id_;
};

class DuplicateId : public Error {
 public:
  explicit DuplicateId(std::int64_t id) : Error("duplicate id " + std::to_string(id)), id_(id) {}
  std::int64_t id() const { return id_; }

 private:
  std::int64_t id_;
};

struct LevelSummary {
  std::size_t count = 0;
  double exact_match_accuracy = 0.0;
  double mean_total = 0.0;
};

struct GradedExample {
  std::int64_t id = 0;
  GradeReport report;
};

struct BatchSummary {
  std::size_t count = 0;
  double exact_match_accuracy = 0.0;
  double mean_total = 0.0;
  std::map<Level, LevelSummary> per_level;
  std::vector<std::int64_t> missing;  // gold ids without a prediction, graded as ""
  std::vector<GradedExample> reports; // gold order
};

/// Throws UnknownId, DuplicateId, EmptyDataset.
BatchSummary grade_batch(std::span<const Prediction> predictions, std::span<const GoldEntry> gold,
                         const GradeWeights& weights = {}, unsigned workers = 1);

}  // namespace sqlcorpus
