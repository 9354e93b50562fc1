#include "sqlcorpus/stats.hpp"

#include <cctype>
#include <cstdio>

#include "json.hpp"
#include "sqlcorpus/query_gen.hpp"

namespace sqlcorpus {
namespace {

template <class F>
void for_each_entry(std::string_view source, F&& f) {
  while (!source.empty()) {
    const std::size_t eol = source.find('\n');
    std::string_view line = source.substr(0, eol);
    source = eol == std::string_view::npos ? std::string_view{} : source.substr(eol + 1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    std::string word(line);
    for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    f(std::move(word));
  }
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

int syllables_in_part(std::string_view part) {
  int groups = 0;
  bool in_vowel = false;
  for (char c : part) {
    const bool v = is_vowel(c);
    if (v && !in_vowel) ++groups;
    in_vowel = v;
  }
  const std::size_t n = part.size();
  // Silent final e, except consonant + "le".
  if (groups > 1 && n >= 2 && part[n - 1] == 'e' && !is_vowel(part[n - 2]) &&
      !(part[n - 2] == 'l' && n >= 3 && !is_vowel(part[n - 3]))) {
    --groups;
  }
  return groups < 1 ? 1 : groups;
}

std::size_t content_count(const std::vector<std::string>& tokens, const StopwordList& stopwords) {
  std::size_t n = 0;
  for (const auto& t : tokens) n += !stopwords.contains(t);
  return n;
}

}  // namespace

StopwordList StopwordList::load(std::string_view source) {
  StopwordList list;
  for_each_entry(source, [&](std::string w) { list.words_.insert(std::move(w)); });
  return list;
}

FrequencyList FrequencyList::load(std::string_view source) {
  FrequencyList list;
  std::size_t rank = 0;
  for_each_entry(source, [&](std::string w) {
    ++rank;
    list.ranks_.emplace(std::move(w), rank);
  });
  return list;
}

std::optional<std::size_t> FrequencyList::rank(std::string_view word) const {
  auto it = ranks_.find(std::string(word));
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string_view tok = text.substr(i, j - i);
    while (!tok.empty() && std::ispunct(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::ispunct(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    if (!tok.empty()) {
      std::string w(tok);
      for (char& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.push_back(std::move(w));
    }
    i = j;
  }
  return out;
}

double lexical_density(std::string_view text, const StopwordList& stopwords) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) return 0.0;
  return static_cast<double>(content_count(tokens, stopwords)) / static_cast<double>(tokens.size());
}

double rarity(std::string_view text, const FrequencyList& freq, const StopwordList& stopwords,
              std::size_t rare_rank) {
  std::size_t content = 0, rare = 0;
  for (const auto& t : tokenize(text)) {
    if (stopwords.contains(t)) continue;
    ++content;
    const auto r = freq.rank(t);
    rare += !r || *r > rare_rank;
  }
  return content == 0 ? 0.0 : static_cast<double>(rare) / static_cast<double>(content);
}

int count_syllables(std::string_view word) {
  int total = 0;
  std::string part;
  auto flush = [&] {
    if (!part.empty()) total += syllables_in_part(part);
    part.clear();
  };
  for (char c : word) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      part += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      flush();
    }
  }
  flush();
  return total < 1 ? 1 : total;
}

double flesch(std::string_view text) {
  const auto words = tokenize(text);
  if (words.empty()) throw EmptyText();
  std::size_t sentences = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      ++sentences;
    }
  }
  if (sentences == 0) sentences = 1;
  std::size_t syllables = 0;
  for (const auto& w : words) syllables += static_cast<std::size_t>(count_syllables(w));
  const double n = static_cast<double>(words.size());
  return 206.835 - 1.015 * (n / static_cast<double>(sentences)) - 84.6 * (static_cast<double>(syllables) / n);
}

CorpusStats corpus_stats(std::span<const Example> examples, const FrequencyList& freq,
                         const StopwordList& stopwords, std::size_t rare_rank) {
  if (examples.empty()) throw EmptyDataset();
  CorpusStats s;
  s.examples = examples.size();
  std::size_t order = 0, where = 0, join = 0, agg = 0;
  for (const auto& e : examples) {
    s.rarity += rarity(e.instruction, freq, stopwords, rare_rank);
    s.lexical_density += lexical_density(e.instruction, stopwords);
    s.readability += flesch(e.instruction);
    s.mean_instruction_words += static_cast<double>(tokenize(e.instruction).size());

    const SqlQuery q = parse_sql(e.response);
    order += !q.order_by.empty();
    where += !q.filters.empty();
    join += q.join.has_value();
    bool any = false;
    for (const auto& item : q.select) any = any || item.aggregate != Aggregate::None;
    agg += any;
    ++s.column_histogram[static_cast<int>(parse_create_table(e.context).main_table.columns.size())];
  }
  const double n = static_cast<double>(examples.size());
  s.rarity /= n;
  s.lexical_density /= n;
  s.readability /= n;
  s.mean_instruction_words /= n;
  s.order_by_rate = static_cast<double>(order) / n;
  s.where_rate = static_cast<double>(where) / n;
  s.join_rate = static_cast<double>(join) / n;
  s.aggregate_rate = static_cast<double>(agg) / n;
  return s;
}

std::string format_stats_table(std::span<const std::pair<std::string, CorpusStats>> rows) {
  std::size_t label_width = 7;
  for (const auto& [label, _] : rows) label_width = std::max(label_width, label.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %8s  %8s  %8s  %9s  %8s  %8s  %8s  %8s\n", static_cast<int>(label_width),
                "Dataset", "Examples", "Rarity", "LexDens", "Flesch", "AvgWords", "OrderBy", "Where", "Join");
  out += buf;
  for (const auto& [label, s] : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %8zu  %8.3f  %8.3f  %9.2f  %8.2f  %8.3f  %8.3f  %8.3f\n",
                  static_cast<int>(label_width), label.c_str(), s.examples, s.rarity, s.lexical_density,
                  s.readability, s.mean_instruction_words, s.order_by_rate, s.where_rate, s.join_rate);
    out += buf;
  }
  return out;
}

std::string stats_json(const CorpusStats& s) {
  nlohmann::ordered_json j;
  j["examples"] = s.examples;
  j["rarity"] = s.rarity;
  j["lexical_density"] = s.lexical_density;
  j["readability"] = s.readability;
  j["mean_instruction_words"] = s.mean_instruction_words;
  j["order_by_rate"] = s.order_by_rate;
  j["where_rate"] = s.where_rate;
  j["join_rate"] = s.join_rate;
  j["aggregate_rate"] = s.aggregate_rate;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [cols, count] : s.column_histogram) hist[std::to_string(cols)] = count;
  j["column_histogram"] = std::move(hist);
  return j.dump();
}

}  // namespace sqlcorpus
