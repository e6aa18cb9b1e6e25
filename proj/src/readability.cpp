#include "segdiff/readability.hpp"

#include <cctype>
#include <cmath>
#include <unordered_set>

#include "segdiff/error.hpp"

namespace segdiff {

Scalar brunet_index(std::span<const std::string> tokens, double a) {
  if (tokens.empty()) throw InvalidArgument("brunet_index: empty token list");
  std::unordered_set<std::string> types;
  for (const auto& t : tokens) types.insert(text::to_lower(t));
  const double n = static_cast<double>(tokens.size());
  const double v = static_cast<double>(types.size());
  return {std::pow(n, std::pow(v, -a)), "index"};
}

namespace {

bool is_vowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y': return true;
    default: return false;
  }
}

}  // namespace

int count_syllables(std::string_view raw) {
  std::string w;
  for (char c : raw)
    if (std::isalpha(static_cast<unsigned char>(c)))
      w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (w.empty()) return 1;
  int groups = 0;
  bool prev_vowel = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !prev_vowel) ++groups;
    prev_vowel = v;
  }
  const std::size_t n = w.size();
  if (groups > 1 && n >= 2 && w[n - 1] == 'e') {
    // "-le" after a consonant is voiced ("table"); other final e is silent.
    const bool voiced_le = n >= 3 && w[n - 2] == 'l' && !is_vowel(w[n - 3]);
    if (!voiced_le && !is_vowel(w[n - 2])) --groups;
  } else if (groups > 1 && n >= 3 && w[n - 1] == 'd' && w[n - 2] == 'e' &&
             w[n - 3] != 't' && w[n - 3] != 'd' && !is_vowel(w[n - 3])) {
    --groups;  // "jumped"
  } else if (groups > 1 && n >= 4 && w[n - 1] == 's' && w[n - 2] == 'e') {
    const char c = w[n - 3];
    const bool voiced = c == 's' || c == 'x' || c == 'z' || c == 'c' || c == 'g' ||
                        (c == 'h' && (w[n - 4] == 'c' || w[n - 4] == 's')) || is_vowel(c);
    if (!voiced) --groups;  // "makes"
  }
  return groups < 1 ? 1 : groups;
}

Scalar flesch_reading_ease(const text::SentenceList& sentences) {
  std::size_t words = 0;
  std::size_t syllables = 0;
  for (const auto& s : sentences.sentences)
    for (const auto& t : s.tokens)
      if (t.is_word) {
        ++words;
        syllables += static_cast<std::size_t>(count_syllables(t.text));
      }
  if (words == 0 || sentences.size() == 0)
    throw InvalidArgument("flesch_reading_ease: segment has no words");
  const double wps = static_cast<double>(words) / static_cast<double>(sentences.size());
  const double spw = static_cast<double>(syllables) / static_cast<double>(words);
  return {206.835 - 1.015 * wps - 84.6 * spw, "score"};
}

}  // namespace segdiff
