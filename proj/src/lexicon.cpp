#include "segdiff/lexicon.hpp"

#include <fstream>
#include <sstream>

#include "segdiff/error.hpp"
#include "segdiff/resources.hpp"
#include "segdiff/text.hpp"

namespace segdiff {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("io", "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::vector<std::string> data_lines(std::string_view contents) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    auto nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    std::string line = trim(contents.substr(pos, nl - pos));
    if (!line.empty() && line[0] != '#') out.push_back(std::move(line));
    pos = nl + 1;
  }
  return out;
}

CategoryLexicon CategoryLexicon::parse(std::string name, std::string_view contents) {
  CategoryLexicon lex;
  lex.name_ = std::move(name);
  std::map<std::string, std::size_t> cat_index;
  std::size_t lineno = 0;
  for (const auto& line : data_lines(contents)) {
    ++lineno;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(lineno, "category", "expected word<TAB>category[,category...]");
    std::string word = text::to_lower(trim(std::string_view(line).substr(0, tab)));
    std::vector<std::size_t> cats;
    std::stringstream list(line.substr(tab + 1));
    std::string cat;
    while (std::getline(list, cat, ',')) {
      cat = trim(cat);
      if (cat.empty()) continue;
      auto [it, inserted] = cat_index.emplace(cat, lex.categories_.size());
      if (inserted) lex.categories_.push_back(cat);
      if (std::find(cats.begin(), cats.end(), it->second) == cats.end()) cats.push_back(it->second);
    }
    if (word.empty() || cats.empty())
      throw ParseError(lineno, "category", "empty word or category list");
    if (word.back() == '*') {
      word.pop_back();
      lex.prefixes_.emplace_back(word, cats);
    } else {
      auto& slot = lex.exact_[word];
      for (auto c : cats)
        if (std::find(slot.begin(), slot.end(), c) == slot.end()) slot.push_back(c);
    }
  }
  if (lex.categories_.empty()) throw DataError("lexicon", "lexicon '" + lex.name_ + "' has no categories");
  return lex;
}

CategoryLexicon CategoryLexicon::load(const std::filesystem::path& path) {
  return parse(path.stem().string(), read_file(path));
}

const CategoryLexicon& CategoryLexicon::builtin() {
  static const CategoryLexicon lex = parse("open-categories", resources::get("categories.tsv"));
  return lex;
}

std::vector<std::size_t> CategoryLexicon::lookup(std::string_view word) const {
  const std::string w = text::to_lower(word);
  if (auto it = exact_.find(w); it != exact_.end()) return it->second;
  // Longest matching prefix wins.
  const std::vector<std::size_t>* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& [prefix, cats] : prefixes_) {
    if (prefix.size() >= best_len && w.size() >= prefix.size() &&
        w.compare(0, prefix.size(), prefix) == 0) {
      if (!best || prefix.size() > best_len) {
        best = &cats;
        best_len = prefix.size();
      }
    }
  }
  return best ? *best : std::vector<std::size_t>{};
}

WordList WordList::parse(std::string_view contents) {
  WordList list;
  for (const auto& line : data_lines(contents)) {
    std::string w = text::to_lower(line);
    if (list.index_.emplace(w, list.words_.size()).second) list.words_.push_back(w);
  }
  return list;
}

WordList WordList::load(const std::filesystem::path& path) { return parse(read_file(path)); }

const WordList& WordList::builtin_stopwords() {
  static const WordList list = parse(resources::get("stopwords.txt"));
  return list;
}

std::optional<std::size_t> WordList::index(std::string_view word) const {
  auto it = index_.find(text::to_lower(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SentimentLexicon SentimentLexicon::parse(std::string_view contents) {
  SentimentLexicon lex;
  std::size_t lineno = 0;
  for (const auto& line : data_lines(contents)) {
    ++lineno;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(lineno, "valence", "expected word<TAB>valence");
    double v = 0.0;
    try {
      v = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw ParseError(lineno, "valence", "not a number");
    }
    if (v < -1.0 || v > 1.0) throw ParseError(lineno, "valence", "outside [-1, 1]");
    lex.valence_[text::to_lower(trim(std::string_view(line).substr(0, tab)))] = v;
  }
  return lex;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

const SentimentLexicon& SentimentLexicon::builtin() {
  static const SentimentLexicon lex = parse(resources::get("sentiment.tsv"));
  return lex;
}

std::optional<double> SentimentLexicon::valence(std::string_view word) const {
  auto it = valence_.find(text::to_lower(word));
  if (it == valence_.end()) return std::nullopt;
  return it->second;
}

}  // namespace segdiff
