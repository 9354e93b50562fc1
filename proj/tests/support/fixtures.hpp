#pragma once

#include <string>

#include "sqlcorpus/generator.hpp"
#include "sqlcorpus/instruction.hpp"
#include "sqlcorpus/resources.hpp"
#include "sqlcorpus/schema.hpp"
#include "sqlcorpus/sql.hpp"

namespace fixtures {

inline const char* kAggregates =
    "[aggregates]\n"
    "COUNT | how many {f}\nCOUNT | tally {f}\nCOUNT | instances of {f}\n"
    "SUM | total {f}\nSUM | combined {f}\nSUM | sum of {f}\n"
    "AVG | average of {f}\nAVG | mean {f}\nAVG | typical {f}\n"
    "MIN | least recent {f}\nMIN | lowest {f}\nMIN | minimum {f}\n"
    "MAX | latest {f}\nMAX | highest {f}\nMAX | maximum {f}\n";

inline const char* kDirections =
    "[directions]\n"
    "ordered by {f} in ascending order | ordered by {f} in descending order\n";

/// Minimal valid vocabulary: t00..t{tables-1}, f000..f{fields-1}, all INTEGER.
inline std::string synthetic_vocab(int tables = 50, int fields = 100, const std::string& extra_tables = "",
                                   const std::string& extra_fields = "") {
  std::string s = "[tables]\n" + extra_tables;
  for (int i = 0; i < tables; ++i) {
    s += "t" + std::string(i < 10 ? "0" : "") + std::to_string(i) + " | table number " + std::to_string(i) + "\n";
  }
  s += "[fields]\n" + extra_fields;
  for (int i = 0; i < fields; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "f%03d", i);
    s += std::string(name) + " | INTEGER | column number " + std::to_string(i) + "\n";
  }
  s += kAggregates;
  s += kDirections;
  return s;
}

inline sqlcorpus::SchemaContext one_table(const std::string& name,
                                          std::vector<std::pair<std::string, std::string>> cols,
                                          sqlcorpus::Level level = sqlcorpus::Level::CS1) {
  sqlcorpus::SchemaContext s;
  s.main_table.name = name;
  for (auto& [c, t] : cols) s.main_table.columns.push_back({c, sqlcorpus::SqlType::parse(t)});
  s.level = level;
  return s;
}

inline sqlcorpus::TemplateSet only_template(int id) {
  for (const auto& t : sqlcorpus::default_templates().templates()) {
    if (t.id == id) return sqlcorpus::TemplateSet({t});
  }
  throw std::runtime_error("no template " + std::to_string(id));
}

}  // namespace fixtures
