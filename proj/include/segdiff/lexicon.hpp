#pragma once

// Word lists and lexicons. All lookups are case-folded.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace segdiff {

// Maps words to one or more categories. File format: one
// `word<TAB>category[,category...]` per line; `#` starts a comment line; a
// trailing `*` on the word matches any word with that prefix. Categories keep
// the order of their first appearance.
class CategoryLexicon {
 public:
  static CategoryLexicon parse(std::string name, std::string_view contents);
  static CategoryLexicon load(const std::filesystem::path& path);
  // The shipped open lexicon.
  static const CategoryLexicon& builtin();

  const std::string& name() const { return name_; }
  const std::vector<std::string>& categories() const { return categories_; }
  // Category indices for `word`; empty when the word is not covered.
  std::vector<std::size_t> lookup(std::string_view word) const;

 private:
  std::string name_;
  std::vector<std::string> categories_;
  std::unordered_map<std::string, std::vector<std::size_t>> exact_;
  std::vector<std::pair<std::string, std::vector<std::size_t>>> prefixes_;
};

// Ordered word list, one entry per line.
class WordList {
 public:
  static WordList parse(std::string_view contents);
  static WordList load(const std::filesystem::path& path);
  static const WordList& builtin_stopwords();

  const std::vector<std::string>& words() const { return words_; }
  std::optional<std::size_t> index(std::string_view word) const;
  bool contains(std::string_view word) const { return index(word).has_value(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

// `word<TAB>valence` with valence in [-1, 1]. Zero-valence entries are known
// neutral words.
class SentimentLexicon {
 public:
  static SentimentLexicon parse(std::string_view contents);
  static SentimentLexicon load(const std::filesystem::path& path);
  static const SentimentLexicon& builtin();

  std::optional<double> valence(std::string_view word) const;
  std::size_t size() const { return valence_.size(); }

 private:
  std::unordered_map<std::string, double> valence_;
};

// Splits `contents` into trimmed, non-comment lines.
std::vector<std::string> data_lines(std::string_view contents);

}  // namespace segdiff
