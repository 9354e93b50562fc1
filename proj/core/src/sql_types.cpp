#include "sqlcorpus/sql_types.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace sqlcorpus {
namespace {

struct KeywordInfo {
  std::string_view keyword;
  BaseKind kind;
  int min_params;
  int max_params;
};

constexpr std::array<KeywordInfo, 18> kCatalog{{
    {"INTEGER", BaseKind::Numeric, 0, 0},
    {"INT", BaseKind::Numeric, 0, 0},
    {"BIGINT", BaseKind::Numeric, 0, 0},
    {"SMALLINT", BaseKind::Numeric, 0, 0},
    {"DECIMAL", BaseKind::Numeric, 0, 2},
    {"FLOAT", BaseKind::Numeric, 0, 0},
    {"VARCHAR", BaseKind::Text, 1, 1},
    {"TEXT", BaseKind::Text, 0, 0},
    {"LONGTEXT", BaseKind::Text, 0, 0},
    {"CHAR", BaseKind::Text, 0, 1},
    {"DATE", BaseKind::Temporal, 0, 0},
    {"DATETIME", BaseKind::Temporal, 0, 0},
    {"TIMESTAMP", BaseKind::Temporal, 0, 0},
    {"TIME", BaseKind::Temporal, 0, 0},
    {"BOOLEAN", BaseKind::Boolean, 0, 0},
    {"BLOB", BaseKind::Binary, 0, 0},
    {"POINT", BaseKind::Spatial, 0, 0},
    {"GEOMETRY", BaseKind::Spatial, 0, 0},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::Numeric: return "numeric";
    case BaseKind::Text: return "text";
    case BaseKind::Temporal: return "temporal";
    case BaseKind::Boolean: return "boolean";
    case BaseKind::Binary: return "binary";
    case BaseKind::Spatial: return "spatial";
  }
  return "?";
}

SqlType SqlType::parse(std::string_view text) {
  text = trim(text);
  std::size_t i = 0;
  std::string keyword;
  while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) {
    keyword += static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
    ++i;
  }
  auto info = std::find_if(kCatalog.begin(), kCatalog.end(),
                           [&](const KeywordInfo& k) { return k.keyword == keyword; });
  if (info == kCatalog.end()) {
    throw std::invalid_argument("unknown SQL type '" + std::string(text) + "'");
  }

  std::vector<int> params;
  std::string_view rest = trim(text.substr(i));
  if (!rest.empty()) {
    if (rest.front() != '(' || rest.back() != ')') {
      throw std::invalid_argument("malformed SQL type '" + std::string(text) + "'");
    }
    rest = rest.substr(1, rest.size() - 2);
    while (true) {
      std::size_t comma = rest.find(',');
      std::string_view part = trim(rest.substr(0, comma));
      int value = 0;
      auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
      if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size() || value <= 0) {
        throw std::invalid_argument("bad type parameter in '" + std::string(text) + "'");
      }
      params.push_back(value);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  const int n = static_cast<int>(params.size());
  if (n < info->min_params || n > info->max_params) {
    throw std::invalid_argument("wrong parameter count for " + keyword);
  }
  return SqlType(std::move(keyword), std::move(params), info->kind);
}

std::string SqlType::str() const {
  std::string out = keyword_;
  if (!params_.empty()) {
    out += '(';
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(params_[i]);
    }
    out += ')';
  }
  return out;
}

const std::vector<std::string_view>& type_keywords() {
  static const std::vector<std::string_view> keywords = [] {
    std::vector<std::string_view> v;
    for (const auto& k : kCatalog) v.push_back(k.keyword);
    return v;
  }();
  return keywords;
}

std::string_view to_string(Aggregate agg) {
  switch (agg) {
    case Aggregate::None: return "";
    case Aggregate::Count: return "COUNT";
    case Aggregate::Sum: return "SUM";
    case Aggregate::Avg: return "AVG";
    case Aggregate::Min: return "MIN";
    case Aggregate::Max: return "MAX";
  }
  return "";
}

std::optional<Aggregate> parse_aggregate(std::string_view keyword) {
  std::string upper;
  for (char c : keyword) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Aggregate a : {Aggregate::Count, Aggregate::Sum, Aggregate::Avg, Aggregate::Min, Aggregate::Max}) {
    if (upper == to_string(a)) return a;
  }
  return std::nullopt;
}

const std::vector<Aggregate>& legal_aggregates(BaseKind kind) {
  static const std::vector<Aggregate> numeric{Aggregate::Count, Aggregate::Sum, Aggregate::Avg,
                                              Aggregate::Min, Aggregate::Max};
  static const std::vector<Aggregate> ordered{Aggregate::Count, Aggregate::Min, Aggregate::Max};
  static const std::vector<Aggregate> count_only{Aggregate::Count};
  switch (kind) {
    case BaseKind::Numeric: return numeric;
    case BaseKind::Text:
    case BaseKind::Temporal: return ordered;
    default: return count_only;
  }
}

bool aggregate_allowed(Aggregate agg, BaseKind kind) {
  if (agg == Aggregate::None) return true;
  const auto& legal = legal_aggregates(kind);
  return std::find(legal.begin(), legal.end(), agg) != legal.end();
}

}  // namespace sqlcorpus
