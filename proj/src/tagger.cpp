#include "segdiff/tagger.hpp"

#include <algorithm>
#include <cctype>

#include "segdiff/lexicon.hpp"
#include "segdiff/resources.hpp"

namespace segdiff {
namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() + 1 && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_capitalized(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

bool all_digits(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) digit = true;
    else if (c != '.' && c != ',') return false;
  }
  return digit;
}

std::unordered_map<std::string, std::string> load_table(std::string_view contents) {
  std::unordered_map<std::string, std::string> out;
  for (const auto& line : data_lines(contents)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    out.emplace(text::to_lower(line.substr(0, tab)), line.substr(tab + 1));
  }
  return out;
}

std::string suffix_tag(std::string_view w) {
  if (ends_with(w, "ly")) return "ADV";
  if (ends_with(w, "ing") || ends_with(w, "ed") || ends_with(w, "ize") || ends_with(w, "ise") ||
      ends_with(w, "ify") || ends_with(w, "ate"))
    return "VERB";
  if (ends_with(w, "ous") || ends_with(w, "ful") || ends_with(w, "ive") || ends_with(w, "able") ||
      ends_with(w, "ible") || ends_with(w, "al") || ends_with(w, "ic") || ends_with(w, "less") ||
      ends_with(w, "ish") || ends_with(w, "ary") || ends_with(w, "est"))
    return "ADJ";
  return "NOUN";
}

}  // namespace

std::vector<std::string> upos_categories() {
  return {kUposTags.begin(), kUposTags.end()};
}

std::vector<std::string> ner_categories() {
  return {kNerClasses.begin(), kNerClasses.end()};
}

std::string normalize_upos(std::string_view tag) {
  std::string up;
  for (char c : tag) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up == "CONJ") up = "CCONJ";
  for (auto t : kUposTags)
    if (t == up) return up;
  return "X";
}

std::string normalize_ner(std::string_view tag) {
  std::string up;
  for (char c : tag) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up.size() > 2 && (up[0] == 'B' || up[0] == 'I' || up[0] == 'E' || up[0] == 'S') && up[1] == '-')
    up = up.substr(2);
  if (up.empty() || up == "O" || up == "NONE") return "none";
  if (up == "PERSON" || up == "PER") return "person";
  if (up == "ORG" || up == "ORGANIZATION") return "org";
  if (up == "GPE" || up == "LOC" || up == "LOCATION" || up == "FAC") return "location";
  return "misc";
}

BuiltinPosTagger::BuiltinPosTagger() : lexicon_(load_table(resources::get("pos_lexicon.tsv"))) {}

std::vector<std::string> BuiltinPosTagger::tag(const text::Sentence& sentence) const {
  const auto& toks = sentence.tokens;
  std::vector<std::string> tags(toks.size());
  std::vector<std::string> lower(toks.size());
  for (std::size_t i = 0; i < toks.size(); ++i) lower[i] = text::to_lower(toks[i].text);

  auto lex = [&](std::size_t i) -> std::string {
    auto it = lexicon_.find(lower[i]);
    return it == lexicon_.end() ? std::string{} : it->second;
  };
  bool first_word = true;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& t = toks[i];
    if (!t.is_word) {
      const char c = t.text[0];
      tags[i] = (c == '$' || c == '%' || c == '&' || c == '+' || c == '=' || c == '@' || c == '#')
                    ? "SYM"
                    : "PUNCT";
      continue;
    }
    const bool sentence_initial = first_word;
    first_word = false;
    if (all_digits(t.text)) {
      tags[i] = "NUM";
      continue;
    }
    std::string tag = lex(i);
    if (!tag.empty()) {
      tags[i] = tag;
    } else if (is_capitalized(t.text) && !sentence_initial) {
      tags[i] = "PROPN";
    } else {
      tags[i] = suffix_tag(lower[i]);
    }
  }

  // Contextual repairs.
  auto next_word = [&](std::size_t i) -> std::size_t {
    for (std::size_t j = i + 1; j < toks.size(); ++j)
      if (toks[j].is_word) return j;
    return toks.size();
  };
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (!toks[i].is_word) continue;
    const std::size_t j = next_word(i);
    const bool has_next = j < toks.size();
    const std::string& w = lower[i];
    if (w == "to") {
      tags[i] = has_next && (tags[j] == "VERB" || tags[j] == "AUX") &&
                        !ends_with(lower[j], "ing") && !ends_with(lower[j], "ed")
                    ? "PART"
                    : "ADP";
    } else if (w == "has" || w == "have" || w == "had" || w == "do" || w == "does" || w == "did") {
      const bool aux = has_next && (lower[j] == "not" || lower[j] == "n't" ||
                                    ends_with(lower[j], "ed") || ends_with(lower[j], "en") ||
                                    (tags[j] == "VERB" && w.front() == 'd') ||
                                    lower[j] == "been" || tags[j] == "PRON" ||
                                    lower[j] == "never" || lower[j] == "already");
      tags[i] = aux ? "AUX" : "VERB";
    } else if (w == "that" && has_next) {
      // "that" before a noun phrase is a determiner, otherwise a clause marker.
      if (tags[j] == "NOUN" || tags[j] == "ADJ") tags[i] = "DET";
      else if (tags[j] == "PRON" || tags[j] == "DET" || tags[j] == "PROPN") tags[i] = "SCONJ";
      else tags[i] = "PRON";
    }
    // A noun-suffix word right after a pronoun or modal is more likely a verb.
    if (tags[i] == "NOUN" && i > 0) {
      std::size_t p = i;
      while (p > 0 && !toks[p - 1].is_word) --p;
      if (p > 0) {
        const std::string& prev = tags[p - 1];
        const std::string& pw = lower[p - 1];
        if ((prev == "PRON" && pw != "it" && pw != "its" && pw != "my" && pw != "your" &&
             pw != "his" && pw != "her" && pw != "our" && pw != "their" && pw != "what" &&
             pw != "something" && pw != "nothing" && pw != "everything" && pw != "one") ||
            (prev == "AUX" && pw != "is" && pw != "are" && pw != "was" && pw != "were" &&
             pw != "be" && pw != "been" && pw != "being" && pw != "am") ||
            (prev == "PART" && pw == "to"))
          tags[i] = "VERB";
      }
    }
  }
  return tags;
}

BuiltinNerTagger::BuiltinNerTagger() : gazetteer_(load_table(resources::get("gazetteer.tsv"))) {}

std::vector<std::string> BuiltinNerTagger::tag(const text::Sentence& sentence) const {
  static const BuiltinPosTagger pos;
  const auto& toks = sentence.tokens;
  std::vector<std::string> tags(toks.size(), "none");
  const auto lexical = pos.tag(sentence);
  bool first_word = true;
  std::size_t i = 0;
  while (i < toks.size()) {
    if (!toks[i].is_word || !is_capitalized(toks[i].text)) {
      if (toks[i].is_word) first_word = false;
      ++i;
      continue;
    }
    // Maximal run of capitalised words.
    std::size_t j = i;
    while (j < toks.size() && toks[j].is_word && is_capitalized(toks[j].text)) ++j;
    std::string cls;
    bool any_gazetteer = false;
    for (std::size_t k = i; k < j; ++k) {
      auto it = gazetteer_.find(text::to_lower(toks[k].text));
      if (it == gazetteer_.end()) continue;
      any_gazetteer = true;
      // Organisation markers dominate ("Enron Corp"), then people, then places.
      if (it->second == "org" || cls.empty() || (cls == "location" && it->second == "person"))
        cls = it->second;
    }
    std::size_t start = i;
    if (first_word && !any_gazetteer) {
      // A lone sentence-initial capital is usually just the first word.
      if (j - i == 1 || lexical[i] != "PROPN") start = i + 1;
    }
    if (first_word && any_gazetteer && j - i == 1 &&
        gazetteer_.find(text::to_lower(toks[i].text)) == gazetteer_.end())
      start = i + 1;
    if (cls.empty()) cls = "misc";
    for (std::size_t k = start; k < j; ++k) {
      const std::string lw = text::to_lower(toks[k].text);
      if (lexical[k] == "PRON" || lexical[k] == "DET" || lexical[k] == "ADP" ||
          lexical[k] == "CCONJ" || lexical[k] == "SCONJ" || lexical[k] == "AUX" || lw == "i")
        continue;
      tags[k] = cls;
    }
    first_word = false;
    i = j;
  }
  return tags;
}

}  // namespace segdiff
