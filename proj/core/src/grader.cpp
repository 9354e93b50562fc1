#include "sqlcorpus/grader.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "sqlcorpus/query_gen.hpp"

namespace sqlcorpus {
namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string filter_key(const WhereFilter& f) {
  return f.field + '\x1f' + std::string(to_string(f.op)) + '\x1f' + f.value.sql();
}

struct Fraction {
  std::size_t hit = 0;
  std::size_t of = 0;
};

/// Items matched by field name, then compared on (aggregate, alias).
Fraction aggregate_check(const SqlQuery& pred, const SqlQuery& gold, std::vector<std::string>& notes) {
  Fraction f;
  std::vector<bool> used(pred.select.size(), false);
  for (const SelectItem& g : gold.select) {
    std::size_t match = pred.select.size();
    for (std::size_t j = 0; j < pred.select.size(); ++j) {
      if (!used[j] && pred.select[j].field == g.field) {
        match = j;
        break;
      }
    }
    if (match == pred.select.size()) {
      if (g.aggregate != Aggregate::None) ++f.of;
      continue;
    }
    used[match] = true;
    const SelectItem& p = pred.select[match];
    if (g.aggregate == Aggregate::None && p.aggregate == Aggregate::None && g.alias == p.alias) continue;
    ++f.of;
    if (g.aggregate == p.aggregate && g.alias == p.alias) {
      ++f.hit;
    } else {
      notes.push_back("aggregate on " + g.field + ": expected " + std::string(to_string(g.aggregate)) + ", got " +
                      std::string(to_string(p.aggregate)));
    }
  }
  for (std::size_t j = 0; j < pred.select.size(); ++j) {
    if (!used[j] && (pred.select[j].aggregate != Aggregate::None || pred.select[j].alias)) ++f.of;
  }
  return f;
}

double implementation_score(const SqlQuery& pred, const SqlQuery& gold, std::vector<std::string>& notes) {
  double sum = 0.0;
  int checks = 0;

  const Fraction agg = aggregate_check(pred, gold, notes);
  if (agg.of > 0) {
    sum += static_cast<double>(agg.hit) / static_cast<double>(agg.of);
    ++checks;
  }

  if (!gold.order_by.empty() || !pred.order_by.empty()) {
    const std::size_t n = std::min(gold.order_by.size(), pred.order_by.size());
    std::size_t hit = 0;
    for (std::size_t i = 0; i < n; ++i) hit += gold.order_by[i] == pred.order_by[i];
    const std::size_t of = std::max(gold.order_by.size(), pred.order_by.size());
    if (hit != of) notes.push_back("order by: " + std::to_string(hit) + "/" + std::to_string(of) + " keys match");
    sum += static_cast<double>(hit) / static_cast<double>(of);
    ++checks;
  }

  if (!gold.filters.empty() || !pred.filters.empty()) {
    std::vector<std::string> a, b;
    for (const auto& f : gold.filters) a.push_back(filter_key(f));
    for (const auto& f : pred.filters) b.push_back(filter_key(f));
    const double d = dice(std::move(a), std::move(b));
    if (d < 1.0) notes.push_back("where: filter sets differ");
    sum += d;
    ++checks;
  }

  if (gold.join || pred.join) {
    int hit = 0;
    if (gold.join && pred.join) {
      hit = (gold.join->right_table == pred.join->right_table) + (gold.join->left_key == pred.join->left_key) +
            (gold.join->right_key == pred.join->right_key);
    }
    if (hit != 3) notes.push_back("join: " + std::to_string(hit) + "/3 components match");
    sum += hit / 3.0;
    ++checks;
  }

  return checks == 0 ? 1.0 : sum / checks;
}

/// Canonical rendering with filters in sorted order.
std::string normalized_rendering(SqlQuery q) {
  std::sort(q.filters.begin(), q.filters.end(),
            [](const WhereFilter& a, const WhereFilter& b) { return filter_key(a) < filter_key(b); });
  return render_sql(q);
}

}  // namespace

GradeWeights GradeWeights::parse(std::string_view text) {
  double v[3];
  int n = 0;
  while (true) {
    const std::size_t comma = text.find(',');
    std::string piece(text.substr(0, comma));
    piece.erase(0, piece.find_first_not_of(' '));
    piece.erase(piece.find_last_not_of(' ') + 1);
    if (n == 3 || piece.empty()) throw InvalidWeights("weights must be three numbers a,b,c");
    std::size_t used = 0;
    try {
      v[n++] = std::stod(piece, &used);
    } catch (const std::exception&) {
      throw InvalidWeights("bad weight '" + piece + "'");
    }
    if (used != piece.size()) throw InvalidWeights("bad weight '" + piece + "'");
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (n != 3) throw InvalidWeights("weights must be three numbers a,b,c");
  GradeWeights w{v[0], v[1], v[2]};
  w.validate();
  return w;
}

void GradeWeights::validate() const {
  for (double x : {structural, semantic, implementation}) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidWeights("weights must be non-negative");
  }
  if (std::abs(structural + semantic + implementation - 1.0) > 1e-9) throw InvalidWeights("weights must sum to 1");
}

double dice(std::vector<std::string> a, std::vector<std::string> b) {
  if (a.empty() && b.empty()) return 1.0;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return 2.0 * static_cast<double>(common.size()) / static_cast<double>(a.size() + b.size());
}

double structural_salvage(std::string_view prediction, const SqlQuery& gold) {
  std::vector<std::string> expected{"SELECT", "FROM"};
  if (gold.join) expected.push_back("JOIN");
  if (!gold.filters.empty()) expected.push_back("WHERE");
  if (!gold.order_by.empty()) expected.push_back("ORDER BY");

  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < prediction.size()) {
    if (prediction[i] == '\'') {
      const std::size_t close = prediction.find('\'', i + 1);
      i = close == std::string_view::npos ? prediction.size() : close + 1;
      continue;
    }
    if (!std::isalnum(static_cast<unsigned char>(prediction[i])) && prediction[i] != '_') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < prediction.size() && (std::isalnum(static_cast<unsigned char>(prediction[j])) || prediction[j] == '_')) ++j;
    std::string w = upper(prediction.substr(i, j - i));
    if (w == "BY" && !words.empty() && words.back() == "ORDER") words.back() = "ORDER BY";
    else words.push_back(std::move(w));
    i = j;
  }

  // Longest common subsequence of expected keywords and the word stream.
  std::vector<std::size_t> prev(words.size() + 1, 0), cur(words.size() + 1, 0);
  for (const auto& k : expected) {
    for (std::size_t j = 1; j <= words.size(); ++j) {
      cur[j] = words[j - 1] == k ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[words.size()]) / static_cast<double>(expected.size());
}

GradeReport grade(std::string_view prediction, const SqlQuery& gold, const GradeWeights& weights) {
  GradeReport r;
  SqlQuery pred;
  try {
    pred = parse_sql(prediction);
    r.parsed = true;
  } catch (const ParseError& e) {
    r.diagnostics.push_back(std::string("unparseable: ") + e.what());
  }

  if (!r.parsed) {
    r.structural = structural_salvage(prediction, gold);
    r.total = weights.structural * r.structural;
    return r;
  }

  r.exact_match = normalized_rendering(pred) == normalized_rendering(gold);
  r.structural = 1.0;

  const double table = pred.table == gold.table ? 1.0 : 0.0;
  if (table == 0.0) r.diagnostics.push_back("table: expected " + gold.table + ", got " + pred.table);
  std::vector<std::string> a, b;
  for (const auto& s : gold.select) a.push_back(s.field);
  for (const auto& s : pred.select) b.push_back(s.field);
  const double fields = dice(std::move(a), std::move(b));
  if (fields < 1.0) r.diagnostics.push_back("select: field sets differ");
  r.semantic = (table + fields) / 2.0;

  r.implementation = implementation_score(pred, gold, r.diagnostics);
  r.total = r.exact_match ? 1.0
                          : weights.structural * r.structural + weights.semantic * r.semantic +
                                weights.implementation * r.implementation;
  if (!r.exact_match && r.diagnostics.empty()) r.diagnostics.push_back("select order differs from gold");
  return r;
}

BatchSummary grade_batch(std::span<const Prediction> predictions, std::span<const GoldEntry> gold,
                         const GradeWeights& weights, unsigned workers) {
  weights.validate();
  if (gold.empty()) throw EmptyDataset();

  std::unordered_map<std::int64_t, std::size_t> gold_index;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold_index.emplace(gold[i].id, i).second) throw DuplicateId(gold[i].id);
  }
  std::vector<const std::string*> text(gold.size(), nullptr);
  for (const auto& p : predictions) {
    auto it = gold_index.find(p.id);
    if (it == gold_index.end()) throw UnknownId(p.id);
    if (text[it->second]) throw DuplicateId(p.id);
    text[it->second] = &p.text;
  }

  BatchSummary s;
  s.count = gold.size();
  s.reports.resize(gold.size());
  static const std::string empty;
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      s.reports[i] = {gold[i].id, grade(text[i] ? *text[i] : empty, gold[i].query, weights)};
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(gold.size())));
  if (workers == 1) {
    work(0, gold.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (gold.size() + workers - 1) / workers;
    for (std::size_t begin = 0; begin < gold.size(); begin += chunk) {
      pool.emplace_back(work, begin, std::min(gold.size(), begin + chunk));
    }
  }

  std::size_t exact = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const GradeReport& r = s.reports[i].report;
    if (!text[i]) s.missing.push_back(gold[i].id);
    exact += r.exact_match;
    total += r.total;
    LevelSummary& l = s.per_level[gold[i].level];
    ++l.count;
    l.exact_match_accuracy += r.exact_match;
    l.mean_total += r.total;
  }
  for (auto& [level, l] : s.per_level) {
    l.exact_match_accuracy /= static_cast<double>(l.count);
    l.mean_total /= static_cast<double>(l.count);
  }
  s.exact_match_accuracy = static_cast<double>(exact) / static_cast<double>(s.count);
  s.mean_total = total / static_cast<double>(s.count);
  return s;
}

}  // namespace sqlcorpus
