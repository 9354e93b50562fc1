#include "sqlcorpus/resources.hpp"

namespace sqlcorpus {
namespace embedded {
extern const std::string_view kVocab;
extern const std::string_view kTemplates;
extern const std::string_view kStopwords;
extern const std::string_view kFrequencies;
}  // namespace embedded

std::string_view default_vocab_text() { return embedded::kVocab; }
std::string_view default_templates_text() { return embedded::kTemplates; }
std::string_view default_stopwords_text() { return embedded::kStopwords; }
std::string_view default_frequencies_text() { return embedded::kFrequencies; }

const VocabPool& default_vocab() {
  static const VocabPool pool = load_vocab(embedded::kVocab);
  return pool;
}

const TemplateSet& default_templates() {
  static const TemplateSet set = load_templates(embedded::kTemplates);
  return set;
}

const StopwordList& default_stopwords() {
  static const StopwordList list = StopwordList::load(embedded::kStopwords);
  return list;
}

const FrequencyList& default_frequencies() {
  static const FrequencyList list = FrequencyList::load(embedded::kFrequencies);
  return list;
}

}  // namespace sqlcorpus
