#pragma once

// Per-segment feature extraction.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "segdiff/corpus.hpp"
#include "segdiff/feature_value.hpp"
#include "segdiff/lexicon.hpp"
#include "segdiff/ngram_lm.hpp"
#include "segdiff/segmenter.hpp"
#include "segdiff/tagger.hpp"
#include "segdiff/text.hpp"

namespace segdiff {

// ---- individual features --------------------------------------------------

struct SentimentScores {
  Scalar sentiment;     // mean valence over all tokens, in [-1, 1]
  Scalar subjectivity;  // nonzero-valence tokens / in-lexicon tokens, in [0, 1]
};
SentimentScores sentiment_subjectivity(const std::vector<std::string>& tokens,
                                       const SentimentLexicon& lexicon);

// Heylighen-Dewaele formality over a universal-POS distribution. NOUN and
// PROPN count as nouns, VERB and AUX as verbs.
Scalar formality_score(const Distribution& pos);

// Normalised counts of the listed words; other tokens are dropped.
Maybe<Distribution> token_distribution(const std::vector<std::string>& tokens,
                                       const WordList& list);
// A token adds one to every category it belongs to.
Maybe<Distribution> token_distribution(const std::vector<std::string>& tokens,
                                       const CategoryLexicon& lexicon);

// Counts tags over a fixed category list; tags outside the list are an error.
Maybe<Distribution> tag_distribution(const std::vector<std::string>& tags,
                                     const std::vector<std::string>& categories);

struct PerplexityResult {
  Scalar avg_ppl;        // 2^(mean surprisal)
  TokenSeries surprisal; // bits per token
};
// From a series of per-token surprisals in bits. Throws on an empty series.
PerplexityResult ngram_perplexity(std::vector<double> surprisals);
// Scores each sentence with `lm`; sentences are scored independently.
PerplexityResult ngram_perplexity(const std::vector<std::vector<std::string>>& sentences,
                                  const NgramModel& lm);

// Coefficient of variation (population std / mean) of per-sentence mean
// surprisal. Unavailable for fewer than two sentences or a zero mean.
Maybe<Scalar> burstiness(const std::vector<double>& sentence_surprisals);

struct ContentFlow {
  Maybe<Scalar> mean_cosine;  // unavailable for a single sentence
  Vector segment_embedding;
};
// Throws on an empty list or ragged lengths.
ContentFlow content_flow(const std::vector<std::vector<double>>& embeddings);

// Character-class, word-length and function-word frequencies, each block
// normalised separately.
inline constexpr std::size_t kCharClassDims = 6;
inline constexpr std::size_t kWordLengthDims = 15;
Vector writeprints(const text::SentenceList& sentences, const WordList& function_words);
std::size_t writeprints_dims(const WordList& function_words);

// ---- segment profiles -----------------------------------------------------

// Feature ids in output order.
inline constexpr std::string_view kFeatureIds[] = {
    "brunet",     "flesch",     "sentiment",       "subjectivity", "formality",
    "stopwords",  "pos",        "ner",             "categories",   "writeprints",
    "perplexity", "surprisal",  "token_surprisal", "burstiness",   "content_flow",
    "embedding"};

bool is_feature_id(std::string_view id);
// Parses a comma-separated list; "all" selects every feature.
std::vector<std::string> parse_feature_bundle(std::string_view spec);

// Shared immutable resources. Null taggers disable built-in tagging; a null
// lm disables built-in perplexity (ingested token_ppl still works).
struct FeatureResources {
  const WordList* stopwords = &WordList::builtin_stopwords();
  const CategoryLexicon* categories = &CategoryLexicon::builtin();
  const SentimentLexicon* sentiment = &SentimentLexicon::builtin();
  std::shared_ptr<const Tagger> pos_tagger = std::make_shared<BuiltinPosTagger>();
  std::shared_ptr<const Tagger> ner_tagger = std::make_shared<BuiltinNerTagger>();
  std::shared_ptr<const NgramModel> lm;
};

struct FeatureProfile {
  std::string doc_id;
  Setting setting = Setting::kC1;
  SegmentId segment = SegmentId::kIntro;
  std::map<std::string, Maybe<FeatureValue>> values;

  const Maybe<FeatureValue>& at(const std::string& feature_id) const;
};

// A document with its sentence split, computed once and shared by segments.
struct PreparedDocument {
  const Document* doc = nullptr;
  text::SentenceList sentences;
  std::vector<std::size_t> word_offset;  // index of each sentence's first word token

  explicit PreparedDocument(const Document& d);
};

// Computes `bundle` on sentences [range.first, range.last) of the document.
std::map<std::string, Maybe<FeatureValue>> extract_features(const PreparedDocument& doc,
                                                            SentenceRange range,
                                                            const std::vector<std::string>& bundle,
                                                            const FeatureResources& res);

FeatureProfile extract_segment_features(const PreparedDocument& doc, const Segmentation& seg,
                                        SegmentId segment, const std::vector<std::string>& bundle,
                                        const FeatureResources& res);

// Same features over an arbitrary text (no annotations), e.g. the I+C scope.
std::map<std::string, Maybe<FeatureValue>> extract_text_features(
    std::string_view text, const std::vector<std::string>& bundle, const FeatureResources& res);

// One JSON line per feature: {id, setting, segment, feature_id, kind, value}.
nlohmann::json feature_value_json(const Maybe<FeatureValue>& v);
std::vector<nlohmann::json> profile_json(const FeatureProfile& p);

}  // namespace segdiff
