#pragma once

// Tokenisation and rule-based sentence splitting shared by every text module.
//
// A "word" is a token that contains at least one letter or digit; pure
// punctuation tokens are kept (taggers need them) but never counted as words.
// Bytes >= 0x80 are treated as letters, so UTF-8 words stay whole.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace segdiff::text {

struct Token {
  std::string text;
  std::size_t begin = 0;  // byte offset into the source text
  bool is_word = false;
};

std::vector<Token> tokenize(std::string_view text);

// Lower-cased word tokens only.
std::vector<std::string> words(std::string_view text);
std::size_t word_count(std::string_view text);

std::string to_lower(std::string_view s);

struct Sentence {
  std::size_t begin = 0;  // byte offsets into the document, [begin, end)
  std::size_t end = 0;
  std::string text;
  std::vector<Token> tokens;  // offsets relative to the document
  std::size_t words = 0;
};

struct SentenceList {
  std::vector<Sentence> sentences;
  std::size_t total_words = 0;

  std::size_t size() const { return sentences.size(); }
  const Sentence& operator[](std::size_t i) const { return sentences[i]; }
  std::vector<std::size_t> word_counts() const;
};

// Version tag of the embedded abbreviation list; bump when the list changes.
inline constexpr int kAbbreviationListVersion = 1;

bool is_abbreviation(std::string_view word_before_period, bool next_is_digit);

// Splits on . ! ? (plus trailing closing quotes/brackets) followed by
// whitespace or end of text, except after a listed abbreviation or a single
// capital initial. Fragments without words are merged into a neighbour.
// Always returns at least one sentence for non-blank text.
SentenceList split_sentences(std::string_view text);

// Builds a SentenceList from an explicit slice of another list.
SentenceList slice(const SentenceList& list, std::size_t first, std::size_t last);

// Collapses whitespace runs to one space; `offsets[i]` maps output byte i back
// to the source byte.
std::string normalize_whitespace(std::string_view text,
                                 std::vector<std::size_t>* offsets = nullptr);

}  // namespace segdiff::text
