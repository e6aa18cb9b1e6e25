#pragma once

// Part-of-speech and named-entity tagging behind a pluggable interface.
// Tags align one-to-one with text::tokenize() tokens of a sentence.

#include <array>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "segdiff/text.hpp"

namespace segdiff {

// Universal POS tag set, fixed order.
inline constexpr std::array<std::string_view, 17> kUposTags = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

inline constexpr std::array<std::string_view, 5> kNerClasses = {"person", "org", "location",
                                                                 "misc", "none"};

std::vector<std::string> upos_categories();
std::vector<std::string> ner_categories();

// Maps an external tag to the universal set; unknown tags become "X".
std::string normalize_upos(std::string_view tag);
// Maps spaCy/CoNLL style labels (PERSON, B-ORG, GPE, O, ...) to kNerClasses.
std::string normalize_ner(std::string_view tag);

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<std::string> tag(const text::Sentence& sentence) const = 0;
};

// Lexicon lookup, a few contextual rules, then suffix rules.
class BuiltinPosTagger : public Tagger {
 public:
  BuiltinPosTagger();
  std::vector<std::string> tag(const text::Sentence& sentence) const override;

 private:
  std::unordered_map<std::string, std::string> lexicon_;
};

// Capitalisation plus gazetteer heuristic.
class BuiltinNerTagger : public Tagger {
 public:
  BuiltinNerTagger();
  std::vector<std::string> tag(const text::Sentence& sentence) const override;

 private:
  std::unordered_map<std::string, std::string> gazetteer_;
};

}  // namespace segdiff
