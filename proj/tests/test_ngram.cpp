#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "segdiff/error.hpp"
#include "segdiff/features.hpp"
#include "segdiff/ngram_lm.hpp"
#include "segdiff/rng.hpp"

using namespace segdiff;
using Sent = std::vector<std::string>;

namespace {

std::vector<Sent> random_corpus(std::uint64_t seed, std::size_t sentences, std::size_t vocab) {
  Rng rng(seed);
  std::vector<Sent> out;
  for (std::size_t i = 0; i < sentences; ++i) {
    Sent s;
    const std::size_t len = 3 + rng.below(10);
    std::size_t w = rng.below(vocab);
    for (std::size_t k = 0; k < len; ++k) {
      // a loose chain so that higher orders matter
      w = rng.bernoulli(0.6) ? (w * 7 + 3) % vocab : rng.below(vocab);
      s.push_back("v" + std::to_string(w));
    }
    out.push_back(std::move(s));
  }
  return out;
}

// Straightforward recursive reading of the interpolated absolute-discount
// formula over string-keyed count tables.
struct ReferenceLm {
  int order;
  double d;
  std::map<std::string, long> uni;
  long total = 0;
  std::map<std::vector<std::string>, long> grams;  // k >= 2
  std::map<std::vector<std::string>, long> ctx_total;
  std::map<std::vector<std::string>, long> ctx_distinct;

  ReferenceLm(const std::vector<Sent>& corpus, int order_, double d_) : order(order_), d(d_) {
    std::map<std::string, long> freq;
    for (auto& s : corpus)
      for (auto& w : s) ++freq[w];
    for (auto& s : corpus) {
      std::vector<std::string> seq(static_cast<std::size_t>(order - 1), "<s>");
      for (auto& w : s) seq.push_back(freq[w] >= 2 ? w : "<unk>");
      for (std::size_t i = static_cast<std::size_t>(order - 1); i < seq.size(); ++i) {
        ++uni[seq[i]];
        ++total;
        for (int k = 2; k <= order; ++k) {
          std::vector<std::string> g(seq.begin() + static_cast<long>(i) + 1 - k, seq.begin() + static_cast<long>(i) + 1);
          if (grams[g]++ == 0) ++ctx_distinct[std::vector<std::string>(g.begin(), g.end() - 1)];
          ++ctx_total[std::vector<std::string>(g.begin(), g.end() - 1)];
        }
      }
    }
  }

  double p(const std::vector<std::string>& hist, const std::string& w) const {
    auto u = uni.find(w);
    double prob = u == uni.end() ? 1.0 / static_cast<double>(total + 1) : static_cast<double>(u->second) / static_cast<double>(total);
    for (int k = 2; k <= order; ++k) {
      std::vector<std::string> h(hist.end() - (k - 1), hist.end());
      auto t = ctx_total.find(h);
      if (t == ctx_total.end()) continue;
      auto g = h;
      g.push_back(w);
      auto c = grams.find(g);
      const double cnt = c == grams.end() ? 0.0 : static_cast<double>(c->second);
      const double tot = static_cast<double>(t->second);
      prob = std::max(cnt - d, 0.0) / tot + d * static_cast<double>(ctx_distinct.at(h)) / tot * prob;
    }
    return prob;
  }

  std::vector<double> surprisals(const Sent& s, const std::set<std::string>& vocab) const {
    std::vector<std::string> seq(static_cast<std::size_t>(order - 1), "<s>");
    std::vector<double> out;
    for (auto& w : s) {
      const std::string id = vocab.count(w) ? w : "<unk>";
      out.push_back(-std::log2(p(seq, id)));
      seq.push_back(id);
    }
    return out;
  }
};

}  // namespace

TEST_CASE("uniform unigram model gives 3 bits per token") {
  std::vector<Sent> corpus;
  for (int rep = 0; rep < 200; ++rep) {
    Sent s;
    for (int w = 0; w < 8; ++w) s.push_back("u" + std::to_string(w));
    corpus.push_back(s);
  }
  NgramOptions o;
  o.order = 1;
  auto lm = NgramModel::train(corpus, o);
  CHECK(lm.vocab_size() == 8);
  auto s = lm.surprisals({"u3", "u0", "u7", "u7"});
  for (double x : s) CHECK(x == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(ngram_perplexity(s).avg_ppl.value == doctest::Approx(8.0));
}

TEST_CASE("order 1 reproduces unigram frequencies") {
  auto corpus = random_corpus(3, 300, 40);
  NgramOptions o;
  o.order = 1;
  auto lm = NgramModel::train(corpus, o);
  std::map<std::string, double> freq;
  double n = 0;
  for (auto& s : corpus)
    for (auto& w : s) {
      freq[w] += 1;
      n += 1;
    }
  for (auto& [w, c] : freq)
    if (c >= 2) CHECK(lm.unigram_probability(w) == doctest::Approx(c / n).epsilon(1e-12));
  CHECK(lm.training_tokens() == static_cast<std::size_t>(n));
}

TEST_CASE("trigram surprisals equal the reference implementation") {
  auto corpus = random_corpus(11, 400, 60);
  corpus.push_back({"hapax1", "v1", "hapax2"});
  auto lm = NgramModel::train(corpus);
  ReferenceLm ref(corpus, 3, 0.75);
  std::set<std::string> vocab;
  for (auto& [w, c] : ref.uni)
    if (w != "<unk>") vocab.insert(w);
  auto test = random_corpus(12, 50, 70);  // includes unseen words
  test.push_back({"hapax1", "never", "v2"});
  for (auto& s : test) {
    auto got = lm.surprisals(s);
    auto want = ref.surprisals(s, vocab);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
}

TEST_CASE("probabilities sum to one over the vocabulary") {
  auto corpus = random_corpus(5, 300, 30);
  auto lm = NgramModel::train(corpus);
  std::set<std::string> vocab;
  for (auto& s : corpus)
    for (auto& w : s) vocab.insert(w);
  for (const Sent& prefix : {Sent{}, Sent{"v3"}, Sent{"v3", "v24"}}) {
    double sum = 0;
    for (auto& w : vocab) {
      Sent s = prefix;
      s.push_back(w);
      sum += std::exp2(-lm.surprisals(s).back());
    }
    // <unk> carries no mass here (every word occurs at least twice)
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("training text is more predictable than shuffled text") {
  auto corpus = random_corpus(21, 400, 50);
  auto lm = NgramModel::train(corpus);
  Rng rng(1);
  double train_bits = 0, shuffled_bits = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    auto s = corpus[i];
    for (double x : lm.surprisals(s)) train_bits += x;
    for (std::size_t k = s.size(); k > 1; --k) std::swap(s[k - 1], s[rng.below(k)]);
    for (double x : lm.surprisals(s)) shuffled_bits += x;
  }
  CHECK(train_bits < shuffled_bits);
}

TEST_CASE("one-sentence corpus of distinct tokens") {
  Sent sentence;
  for (int i = 0; i < 40; ++i) sentence.push_back("t" + std::to_string(i));
  std::vector<Sent> corpus(30, sentence);
  NgramOptions o;
  o.min_tokens = 1;
  auto lm = NgramModel::train(corpus, o);
  Sent shuffled = sentence;
  Rng rng(9);
  for (std::size_t k = shuffled.size(); k > 1; --k) std::swap(shuffled[k - 1], shuffled[rng.below(k)]);
  CHECK(ngram_perplexity(lm.surprisals(sentence)).avg_ppl.value <
        ngram_perplexity(lm.surprisals(shuffled)).avg_ppl.value);
}

TEST_CASE("model files are deterministic and round trip") {
  auto corpus = random_corpus(7, 300, 40);
  auto a = NgramModel::train(corpus);
  auto b = NgramModel::train(corpus);
  CHECK(a.serialize() == b.serialize());
  std::istringstream in(a.serialize());
  auto c = NgramModel::load(in);
  CHECK(c.serialize() == a.serialize());
  for (auto& s : random_corpus(8, 20, 45)) CHECK(c.surprisals(s) == a.surprisals(s));
  std::istringstream bad("segdiff-ngram v2\n");
  CHECK_THROWS_AS(NgramModel::load(bad), DataError);
}

TEST_CASE("too little training text") {
  try {
    NgramModel::train(std::vector<Sent>{{"a", "b"}});
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(e.kind() == "lm_too_small");
  }
  NgramOptions o;
  o.order = 4;
  CHECK_THROWS_AS(NgramModel::train(random_corpus(1, 300, 10), o), InvalidArgument);
}

TEST_CASE("surprisal series length equals the word count") {
  auto lm = NgramModel::train(random_corpus(2, 300, 30));
  for (std::size_t n : {1u, 5u, 17u}) {
    Sent s(n, "v1");
    auto r = ngram_perplexity(lm.surprisals(s));
    CHECK(r.surprisal.values.size() == n);
    double mean = 0;
    for (double x : r.surprisal.values) mean += x;
    mean /= static_cast<double>(n);
    CHECK(r.avg_ppl.value == std::exp2(mean));
  }
}
