#pragma once

// Interpolated n-gram language model with absolute discounting.
//
//   P_k(w | h) = max(c(h w) - D, 0) / c(h) + D * N1+(h .) / c(h) * P_{k-1}(w | h')
//   P_1(w)     = c(w) / N
//
// Training words seen once are replaced by <unk>, which also stands for any
// out-of-vocabulary word at scoring time. Each sentence is scored with
// order-1 <s> tokens of left context; no end-of-sentence event is scored, so
// a sentence of n words yields n surprisals.
//
// Model files are plain text:
//   segdiff-ngram v1
//   order <k>
//   discount <D>
//   vocab <V>            followed by V lines "<word>\t<count>", id order
//   ngrams <k> <lines>   followed by lines "<id> ... <id>\t<count>", sorted
// The same corpus and options always produce a byte-identical file.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "segdiff/corpus.hpp"

namespace segdiff {

struct NgramOptions {
  int order = 3;
  double discount = 0.75;
  std::size_t min_tokens = 1000;
};

class NgramModel {
 public:
  using Sentence = std::vector<std::string>;

  static NgramModel train(const std::vector<Sentence>& sentences, NgramOptions options = {});
  // Uses every document's lower-cased word tokens, split into sentences.
  static NgramModel train(const Corpus& docs, NgramOptions options = {});

  static NgramModel load(std::istream& in);
  static NgramModel load(const std::filesystem::path& path);
  void save(std::ostream& out) const;
  std::string serialize() const;

  int order() const { return options_.order; }
  double discount() const { return options_.discount; }
  std::size_t vocab_size() const { return words_.size() - 2; }  // excludes <s>, <unk>
  std::size_t training_tokens() const { return total_; }

  // Unigram probability of `word` (after <unk> mapping).
  double unigram_probability(const std::string& word) const;
  // -log2 P(word_i | context) for each word of one sentence.
  std::vector<double> surprisals(const Sentence& words) const;

 private:
  using Id = std::uint32_t;
  static constexpr Id kBos = 0;
  static constexpr Id kUnk = 1;
  static constexpr int kIdBits = 21;

  struct ContextStats {
    std::uint64_t total = 0;
    std::uint64_t distinct = 0;
  };

  static std::uint64_t pack(const Id* ids, int n);
  Id id_of(const std::string& word) const;
  double probability(const Id* history, int history_len, Id w) const;
  void add_ngram(int k, std::uint64_t key, std::uint64_t count, const Id* ids);
  void finalize();

  NgramOptions options_;
  std::vector<std::string> words_;  // id -> word
  std::vector<std::uint64_t> unigram_;
  std::unordered_map<std::string, Id> index_;
  std::uint64_t total_ = 0;
  // counts_[k-1]: packed k-gram -> count, for k >= 2.
  std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> counts_;
  // contexts_[k-1]: packed (k-1)-gram context -> stats, for k >= 2.
  std::vector<std::unordered_map<std::uint64_t, ContextStats>> contexts_;
};

}  // namespace segdiff
