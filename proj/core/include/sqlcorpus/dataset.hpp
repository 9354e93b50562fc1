#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sqlcorpus/grader.hpp"
#include "sqlcorpus/instruction.hpp"
#include "sqlcorpus/schema.hpp"

namespace sqlcorpus {

struct Example {
  std::int64_t id = 0;
  std::string instruction;
  std::string context;
  std::string response;
  Level level = Level::CS1;
  Variant variant = Variant::Base;
  SubstitutionRecord substitutions;

  friend bool operator==(const Example&, const Example&) = default;
};

class RecordError : public Error {
 public:
  RecordError(std::size_t line, const std::string& message)
      : Error("record " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Single JSON object, keys in fixed order, no trailing newline.
std::string to_json_line(const Example& example);
/// Throws RecordError (line 0).
Example from_json_line(std::string_view line);

inline constexpr std::string_view kInstructionPrefix = "### Instruction: ";
inline constexpr std::string_view kContextPrefix = " ### Context: ";
inline constexpr std::string_view kResponsePrefix = " ### Response:";

struct PromptLayout {
  Span instruction;
  Span context;
  std::size_t response = 0;  // first byte after "### Response:"
};

std::string frame_prompt(const Example& example, bool include_response, PromptLayout* layout = nullptr);

class InvalidCount : public Error {
 public:
  using Error::Error;
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;

  /// 76.5 / 13.5 / 10 percent. Throws InvalidCount unless total is a positive multiple of 200.
  static SplitSizes for_total(std::size_t total);
  std::size_t total() const { return train + validation + test; }
  friend bool operator==(const SplitSizes&, const SplitSizes&) = default;
};

inline constexpr std::string_view kSplitNames[] = {"train", "validation", "test"};

class DuplicateExample : public Error {
 public:
  DuplicateExample(std::int64_t first, std::int64_t second)
      : Error("examples " + std::to_string(first) + " and " + std::to_string(second) +
              " share instruction and context"),
        first_(first),
        second_(second) {}
  std::int64_t first() const { return first_; }
  std::int64_t second() const { return second_; }

 private:
  std::int64_t first_;
  std::int64_t second_;
};

/// Writes splits into one directory as <name>.jsonl, rejecting any
/// (instruction, context) pair already written by this writer.
class CorpusWriter {
 public:
  explicit CorpusWriter(std::filesystem::path dir);

  /// Returns the record count. Throws DuplicateExample or Error on I/O failure.
  std::size_t write_split(std::span<const Example> examples, std::string_view split_name);
  /// Same contract against an arbitrary stream.
  std::size_t write_split(std::span<const Example> examples, std::ostream& sink);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::map<std::pair<std::string, std::string>, std::int64_t> seen_;
};

std::vector<Example> read_examples(std::istream& in);
std::vector<Example> read_examples(const std::filesystem::path& file);

/// Prediction file: {"id": .., "prediction": ..} per line.
std::vector<Prediction> read_predictions(std::istream& in);
std::vector<Prediction> read_predictions(const std::filesystem::path& file);

std::string sha256_hex(std::string_view bytes);
std::string read_file(const std::filesystem::path& file);

struct Manifest {
  std::string generator_version;
  std::uint64_t master_seed = 0;
  Level level = Level::CS1;
  Variant variant = Variant::Base;
  std::size_t total = 0;
  SplitSizes splits;
  std::string vocab_sha256;
  std::string templates_sha256;
  std::map<std::string, std::string> split_sha256;
  std::optional<double> train_join_rate;  // CS5 only

  std::string to_json() const;
  static Manifest from_json(std::string_view text);
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

}  // namespace sqlcorpus
