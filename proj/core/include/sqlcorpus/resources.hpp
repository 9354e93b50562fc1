#pragma once

#include <string_view>

#include "sqlcorpus/instruction.hpp"
#include "sqlcorpus/stats.hpp"
#include "sqlcorpus/vocab.hpp"

namespace sqlcorpus {

/// Raw text of the data files compiled into the library.
std::string_view default_vocab_text();
std::string_view default_templates_text();
std::string_view default_stopwords_text();
std::string_view default_frequencies_text();

const VocabPool& default_vocab();
const TemplateSet& default_templates();
const StopwordList& default_stopwords();
const FrequencyList& default_frequencies();

}  // namespace sqlcorpus
