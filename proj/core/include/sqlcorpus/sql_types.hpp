#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sqlcorpus {

/// Root of every exception this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BaseKind { Numeric, Text, Temporal, Boolean, Binary, Spatial };

std::string_view to_string(BaseKind kind);

/// A column type such as INTEGER, VARCHAR(100) or DECIMAL(10,2).
class SqlType {
 public:
  /// Accepts any keyword of the catalog with its permitted parameter count.
  /// Keyword case and inner whitespace are normalized. Throws std::invalid_argument.
  static SqlType parse(std::string_view text);

  const std::string& keyword() const { return keyword_; }
  const std::vector<int>& params() const { return params_; }
  BaseKind base_kind() const { return kind_; }

  /// Canonical text, e.g. "DECIMAL(10,2)".
  std::string str() const;

  friend bool operator==(const SqlType&, const SqlType&) = default;
  friend auto operator<=>(const SqlType& a, const SqlType& b) {
    if (auto c = a.keyword_ <=> b.keyword_; c != 0) return c;
    return a.params_ <=> b.params_;
  }

 private:
  SqlType(std::string keyword, std::vector<int> params, BaseKind kind)
      : keyword_(std::move(keyword)), params_(std::move(params)), kind_(kind) {}

  std::string keyword_;
  std::vector<int> params_;
  BaseKind kind_;
};

/// Keywords of the type catalog, in catalog order.
const std::vector<std::string_view>& type_keywords();

enum class Aggregate { None, Count, Sum, Avg, Min, Max };

/// "COUNT", "SUM", ...; "" for None.
std::string_view to_string(Aggregate agg);
std::optional<Aggregate> parse_aggregate(std::string_view keyword);

/// Aggregates (excluding None) that are valid over a column of this kind.
/// SUM/AVG need numeric input; MIN/MAX need an ordered kind; COUNT is universal.
const std::vector<Aggregate>& legal_aggregates(BaseKind kind);
bool aggregate_allowed(Aggregate agg, BaseKind kind);

}  // namespace sqlcorpus
