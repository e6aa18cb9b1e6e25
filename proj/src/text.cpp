#include "segdiff/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace segdiff::text {
namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

bool is_word_char(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

bool is_digit(unsigned char c) { return std::isdigit(c) != 0; }

// U+2019 RIGHT SINGLE QUOTATION MARK
bool curly_apostrophe_at(std::string_view s, std::size_t i) {
  return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
         static_cast<unsigned char>(s[i + 1]) == 0x80 &&
         static_cast<unsigned char>(s[i + 2]) == 0x99;
}

// Length of a UTF-8 General Punctuation code point (U+2000..U+206F) at i.
std::size_t unicode_punct_length(std::string_view s, std::size_t i) {
  if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2) {
    const unsigned char b = static_cast<unsigned char>(s[i + 1]);
    if (b == 0x80 || b == 0x81) return 3;
  }
  return 0;
}

// Closing characters that may follow a sentence terminator.
std::size_t closer_length(std::string_view s, std::size_t i) {
  const unsigned char c = static_cast<unsigned char>(s[i]);
  if (c == '"' || c == '\'' || c == ')' || c == ']' || c == '}') return 1;
  // U+201D, U+2019
  if (c == 0xE2 && i + 2 < s.size() &&
      static_cast<unsigned char>(s[i + 1]) == 0x80) {
    const unsigned char d = static_cast<unsigned char>(s[i + 2]);
    if (d == 0x9D || d == 0x99) return 3;
  }
  return 0;
}

struct Abbrev {
  std::string_view word;
  bool before_number_only;
};

// v1. Lower-case, without the final period.
constexpr std::array<Abbrev, 58> kAbbreviations{{
    {"mr", false},    {"mrs", false},   {"ms", false},    {"dr", false},
    {"prof", false},  {"sr", false},    {"jr", false},    {"st", false},
    {"mt", false},    {"vs", false},    {"e.g", false},   {"i.e", false},
    {"u.s", false},   {"u.k", false},   {"u.n", false},   {"inc", false},
    {"corp", false},  {"ltd", false},   {"co", false},    {"jan", false},
    {"feb", false},   {"apr", false},   {"jun", false},   {"jul", false},
    {"aug", false},   {"sep", false},   {"sept", false},  {"oct", false},
    {"nov", false},   {"dec", false},   {"gen", false},   {"gov", false},
    {"sen", false},   {"rep", false},   {"lt", false},    {"col", false},
    {"capt", false},  {"sgt", false},   {"approx", false}, {"dept", false},
    {"est", false},   {"a.m", false},   {"p.m", false},   {"ph.d", false},
    {"u.s.a", false}, {"d.c", false},   {"rev", false},   {"hon", false},
    {"messrs", false}, {"mme", false},  {"cf", false},    {"al", false},
    {"no", true},     {"vol", true},    {"pp", true},     {"fig", true},
    {"p", true},      {"nos", true},
}};

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (const std::size_t len = unicode_punct_length(s, i); len > 0) {
      out.push_back(Token{std::string(s.substr(i, len)), i, false});
      i += len;
      continue;
    }
    if (!is_word_char(c)) {
      out.push_back(Token{std::string(1, s[i]), i, false});
      ++i;
      continue;
    }
    const std::size_t begin = i;
    while (i < s.size()) {
      const unsigned char d = static_cast<unsigned char>(s[i]);
      if (curly_apostrophe_at(s, i)) {
        // Keep only when it joins two word characters ("don’t").
        if (i + 3 < s.size() && i > begin &&
            is_word_char(static_cast<unsigned char>(s[i + 3])) &&
            unicode_punct_length(s, i + 3) == 0) {
          i += 3;
          continue;
        }
        break;
      }
      if (unicode_punct_length(s, i) > 0) break;
      if (is_word_char(d)) {
        ++i;
        continue;
      }
      const bool has_next = i + 1 < s.size();
      const unsigned char next = has_next ? static_cast<unsigned char>(s[i + 1]) : 0;
      const unsigned char prev = static_cast<unsigned char>(s[i - 1]);
      if ((d == '\'' || d == '-') && has_next && is_word_char(next) && next < 0x80) {
        ++i;
        continue;
      }
      if ((d == '.' || d == ',') && has_next && is_digit(prev) && is_digit(next)) {
        ++i;
        continue;
      }
      // Dotted abbreviations such as "U.S" or "e.g": letter '.' letter.
      if (d == '.' && has_next && std::isalpha(prev) && std::isalpha(next)) {
        ++i;
        continue;
      }
      break;
    }
    out.push_back(Token{std::string(s.substr(begin, i - begin)), begin, true});
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  for (auto& t : tokenize(s))
    if (t.is_word) out.push_back(to_lower(t.text));
  return out;
}

std::size_t word_count(std::string_view s) {
  std::size_t n = 0;
  for (auto& t : tokenize(s)) n += t.is_word ? 1 : 0;
  return n;
}

std::vector<std::size_t> SentenceList::word_counts() const {
  std::vector<std::size_t> out;
  out.reserve(sentences.size());
  for (auto& s : sentences) out.push_back(s.words);
  return out;
}

bool is_abbreviation(std::string_view word, bool next_is_digit) {
  if (word.size() == 1 && std::isupper(static_cast<unsigned char>(word[0])))
    return true;
  const std::string lower = to_lower(word);
  for (const auto& a : kAbbreviations)
    if (a.word == lower) return !a.before_number_only || next_is_digit;
  return false;
}

namespace {

Sentence make_sentence(std::string_view text, std::size_t begin, std::size_t end) {
  Sentence s;
  s.begin = begin;
  s.end = end;
  s.text = std::string(text.substr(begin, end - begin));
  s.tokens = tokenize(s.text);
  for (auto& t : s.tokens) {
    t.begin += begin;
    s.words += t.is_word ? 1 : 0;
  }
  return s;
}

}  // namespace

SentenceList split_sentences(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    const std::size_t run_begin = i;
    while (i < n && (text[i] == '.' || text[i] == '!' || text[i] == '?')) ++i;
    const std::size_t run_end = i;
    while (i < n) {
      const std::size_t len = closer_length(text, i);
      if (len == 0) break;
      i += len;
    }
    if (i < n && !is_space(static_cast<unsigned char>(text[i]))) continue;

    if (run_end - run_begin == 1 && text[run_begin] == '.') {
      std::size_t wb = run_begin;
      while (wb > start && !is_space(static_cast<unsigned char>(text[wb - 1]))) --wb;
      std::string_view before = text.substr(wb, run_begin - wb);
      while (!before.empty() && !is_word_char(static_cast<unsigned char>(before.front())))
        before.remove_prefix(1);
      std::size_t k = i;
      while (k < n && is_space(static_cast<unsigned char>(text[k]))) ++k;
      const bool next_digit = k < n && is_digit(static_cast<unsigned char>(text[k]));
      if (!before.empty() && is_abbreviation(before, next_digit)) continue;
    }
    spans.emplace_back(start, i);
    start = i;
  }
  if (start < n) spans.emplace_back(start, n);

  SentenceList out;
  for (auto [b, e] : spans) {
    while (b < e && is_space(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && is_space(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b == e) continue;
    Sentence s = make_sentence(text, b, e);
    if (s.words == 0 && !out.sentences.empty()) {
      Sentence& prev = out.sentences.back();
      prev = make_sentence(text, prev.begin, e);
      continue;
    }
    if (!out.sentences.empty() && out.sentences.back().words == 0) {
      s = make_sentence(text, out.sentences.back().begin, e);
      out.sentences.pop_back();
    }
    out.sentences.push_back(std::move(s));
  }
  if (out.sentences.empty() && n > 0) {
    // All-whitespace input still yields one (empty) sentence.
    out.sentences.push_back(make_sentence(text, 0, n));
  }
  for (auto& s : out.sentences) out.total_words += s.words;
  return out;
}

SentenceList slice(const SentenceList& list, std::size_t first, std::size_t last) {
  SentenceList out;
  last = std::min(last, list.size());
  for (std::size_t i = first; i < last; ++i) {
    out.sentences.push_back(list.sentences[i]);
    out.total_words += list.sentences[i].words;
  }
  return out;
}

std::string normalize_whitespace(std::string_view text, std::vector<std::size_t>* offsets) {
  std::string out;
  if (offsets) offsets->clear();
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_space(static_cast<unsigned char>(text[i]))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      if (offsets) offsets->push_back(i - 1);
      pending_space = false;
    }
    out.push_back(text[i]);
    if (offsets) offsets->push_back(i);
  }
  return out;
}

}  // namespace segdiff::text
