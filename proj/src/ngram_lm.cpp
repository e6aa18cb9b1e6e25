#include "segdiff/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "segdiff/error.hpp"
#include "segdiff/text.hpp"

namespace segdiff {

std::uint64_t NgramModel::pack(const Id* ids, int n) {
  std::uint64_t key = 0;
  for (int i = 0; i < n; ++i) key = (key << kIdBits) | ids[i];
  return key;
}

NgramModel::Id NgramModel::id_of(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? kUnk : it->second;
}

NgramModel NgramModel::train(const std::vector<Sentence>& sentences, NgramOptions options) {
  if (options.order < 1 || options.order > 3)
    throw InvalidArgument("n-gram order must be 1, 2 or 3");
  if (!(options.discount > 0.0 && options.discount < 1.0))
    throw InvalidArgument("discount must lie in (0, 1)");
  std::map<std::string, std::uint64_t> freq;
  std::size_t tokens = 0;
  for (const auto& s : sentences)
    for (const auto& w : s) {
      ++freq[w];
      ++tokens;
    }
  if (tokens < options.min_tokens)
    throw DataError("lm_too_small", "training corpus has " + std::to_string(tokens) +
                              " tokens, need at least " + std::to_string(options.min_tokens));

  NgramModel m;
  m.options_ = options;
  m.words_ = {"<s>", "<unk>"};
  for (const auto& [w, c] : freq)
    if (c >= 2) {
      m.index_[w] = static_cast<Id>(m.words_.size());
      m.words_.push_back(w);
    }
  if (m.words_.size() >= (std::size_t{1} << kIdBits))
    throw DataError("lm", "vocabulary too large");
  m.unigram_.assign(m.words_.size(), 0);
  m.counts_.resize(static_cast<std::size_t>(options.order));
  m.contexts_.resize(static_cast<std::size_t>(options.order));

  const int ctx = options.order - 1;
  std::vector<Id> seq;
  for (const auto& s : sentences) {
    seq.assign(static_cast<std::size_t>(ctx), kBos);
    for (const auto& w : s) seq.push_back(m.id_of(w));
    for (std::size_t i = static_cast<std::size_t>(ctx); i < seq.size(); ++i) {
      ++m.unigram_[seq[i]];
      ++m.total_;
      for (int k = 2; k <= options.order; ++k)
        ++m.counts_[static_cast<std::size_t>(k - 1)][pack(&seq[i + 1 - static_cast<std::size_t>(k)], k)];
    }
  }
  m.finalize();
  return m;
}

void NgramModel::finalize() {
  const std::uint64_t mask = (std::uint64_t{1} << kIdBits) - 1;
  for (int k = 2; k <= options_.order; ++k) {
    auto& ctx = contexts_[static_cast<std::size_t>(k - 1)];
    ctx.clear();
    for (const auto& [key, count] : counts_[static_cast<std::size_t>(k - 1)]) {
      auto& st = ctx[key >> kIdBits];
      st.total += count;
      st.distinct += 1;
    }
    (void)mask;
  }
}

NgramModel NgramModel::train(const Corpus& docs, NgramOptions options) {
  std::vector<Sentence> sentences;
  for (const auto& d : docs) {
    const auto list = text::split_sentences(d.text);
    for (const auto& s : list.sentences) {
      Sentence words;
      for (const auto& t : s.tokens)
        if (t.is_word) words.push_back(text::to_lower(t.text));
      if (!words.empty()) sentences.push_back(std::move(words));
    }
  }
  return train(sentences, options);
}

double NgramModel::unigram_probability(const std::string& word) const {
  const Id w = id_of(word);
  if (unigram_[w] == 0) return 1.0 / static_cast<double>(total_ + 1);
  return static_cast<double>(unigram_[w]) / static_cast<double>(total_);
}

double NgramModel::probability(const Id* history, int history_len, Id w) const {
  // history holds the most recent `history_len` ids, oldest first.
  double p = unigram_[w] == 0 ? 1.0 / static_cast<double>(total_ + 1)
                              : static_cast<double>(unigram_[w]) / static_cast<double>(total_);
  const double d = options_.discount;
  for (int k = 2; k <= options_.order && k - 1 <= history_len; ++k) {
    const Id* h = history + (history_len - (k - 1));
    const std::uint64_t hkey = pack(h, k - 1);
    const auto& ctx = contexts_[static_cast<std::size_t>(k - 1)];
    auto it = ctx.find(hkey);
    if (it == ctx.end()) continue;
    const double total = static_cast<double>(it->second.total);
    const std::uint64_t key = (hkey << kIdBits) | w;
    const auto& counts = counts_[static_cast<std::size_t>(k - 1)];
    auto c = counts.find(key);
    const double count = c == counts.end() ? 0.0 : static_cast<double>(c->second);
    p = std::max(count - d, 0.0) / total +
        d * static_cast<double>(it->second.distinct) / total * p;
  }
  return p;
}

std::vector<double> NgramModel::surprisals(const Sentence& words) const {
  const int ctx = options_.order - 1;
  std::vector<Id> seq(static_cast<std::size_t>(ctx), kBos);
  for (const auto& w : words) seq.push_back(id_of(text::to_lower(w)));
  std::vector<double> out;
  out.reserve(words.size());
  for (std::size_t i = static_cast<std::size_t>(ctx); i < seq.size(); ++i)
    out.push_back(-std::log2(probability(seq.data() + i - ctx, ctx, seq[i])));
  return out;
}

void NgramModel::save(std::ostream& out) const {
  out << "segdiff-ngram v1\n";
  out << "order " << options_.order << "\n";
  out << "discount " << std::setprecision(17) << options_.discount << "\n";
  out << "vocab " << words_.size() << "\n";
  for (std::size_t i = 0; i < words_.size(); ++i) out << words_[i] << '\t' << unigram_[i] << '\n';
  const std::uint64_t mask = (std::uint64_t{1} << kIdBits) - 1;
  for (int k = 2; k <= options_.order; ++k) {
    const auto& counts = counts_[static_cast<std::size_t>(k - 1)];
    std::vector<std::pair<std::uint64_t, std::uint64_t>> rows(counts.begin(), counts.end());
    std::sort(rows.begin(), rows.end());
    out << "ngrams " << k << ' ' << rows.size() << '\n';
    for (const auto& [key, count] : rows) {
      for (int j = k - 1; j >= 0; --j) {
        out << ((key >> (kIdBits * j)) & mask);
        out << (j == 0 ? '\t' : ' ');
      }
      out << count << '\n';
    }
  }
}

std::string NgramModel::serialize() const {
  std::ostringstream out;
  save(out);
  return out.str();
}

NgramModel NgramModel::load(std::istream& in) {
  auto fail = [](const std::string& what) -> NgramModel {
    throw DataError("lm", "malformed model file: " + what);
  };
  std::string line, word;
  if (!std::getline(in, line) || line != "segdiff-ngram v1") return fail("bad header");
  NgramModel m;
  std::size_t vocab = 0;
  if (!(in >> word >> m.options_.order) || word != "order") return fail("order");
  if (!(in >> word >> m.options_.discount) || word != "discount") return fail("discount");
  if (!(in >> word >> vocab) || word != "vocab") return fail("vocab");
  if (m.options_.order < 1 || m.options_.order > 3 || vocab < 2) return fail("values");
  std::getline(in, line);
  m.words_.resize(vocab);
  m.unigram_.resize(vocab);
  for (std::size_t i = 0; i < vocab; ++i) {
    if (!std::getline(in, line)) return fail("truncated vocab");
    const auto tab = line.find('\t');
    if (tab == std::string::npos) return fail("vocab line");
    m.words_[i] = line.substr(0, tab);
    m.unigram_[i] = std::stoull(line.substr(tab + 1));
    m.total_ += m.unigram_[i];
    if (i >= 2) m.index_[m.words_[i]] = static_cast<Id>(i);
  }
  m.counts_.resize(static_cast<std::size_t>(m.options_.order));
  m.contexts_.resize(static_cast<std::size_t>(m.options_.order));
  for (int k = 2; k <= m.options_.order; ++k) {
    int kk = 0;
    std::size_t rows = 0;
    if (!(in >> word >> kk >> rows) || word != "ngrams" || kk != k) return fail("ngram header");
    auto& counts = m.counts_[static_cast<std::size_t>(k - 1)];
    for (std::size_t r = 0; r < rows; ++r) {
      std::uint64_t key = 0;
      for (int j = 0; j < k; ++j) {
        std::uint64_t id = 0;
        if (!(in >> id) || id >= vocab) return fail("ngram id");
        key = (key << kIdBits) | id;
      }
      std::uint64_t count = 0;
      if (!(in >> count)) return fail("ngram count");
      counts[key] = count;
    }
  }
  m.finalize();
  return m;
}

NgramModel NgramModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("io", "cannot open model file '" + path.string() + "'");
  return load(in);
}

}  // namespace segdiff
