#pragma once

// Parallel human/AI document collections and their descriptive statistics.
//
// Corpus files are JSON lines, one document per line:
//   {"id": ..., "domain": ..., "source": "human" | <llm name>, "text": ...,
//    "pair_id": ..., "annotations": {...}}
// Unknown keys are kept verbatim and written back on save.

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "segdiff/setting.hpp"

namespace segdiff {

inline constexpr const char* kCorpusSchemaVersion = "1";

struct Domain {
  enum class Kind { kNews, kEmail, kEssay, kOther };
  Kind kind = Kind::kOther;
  std::string name;  // set for kOther

  static Domain parse(const std::string& s);
  std::string str() const;
  friend bool operator==(const Domain&, const Domain&) = default;
};

struct Source {
  std::optional<std::string> llm;  // nullopt = human

  static Source human() { return {}; }
  static Source model(std::string name) { return Source{std::move(name)}; }
  static Source parse(const std::string& s);

  bool is_human() const { return !llm.has_value(); }
  bool is_ai() const { return llm.has_value(); }
  std::string str() const { return llm ? *llm : "human"; }
  std::string source_class() const { return is_human() ? "human" : "ai"; }
  friend bool operator==(const Source&, const Source&) = default;
};

// Ingested segmentation: either three verbatim substrings or sentence indices.
struct SegmentsE {
  std::optional<std::array<std::string, 3>> texts;
  std::optional<std::pair<std::size_t, std::size_t>> indices;  // intro_end, body_end
  friend bool operator==(const SegmentsE&, const SegmentsE&) = default;
};

// Scope key ("total", "intro", "body", "conclusion") -> score in [0, 1].
using ScopeScores = std::map<std::string, double>;

struct Annotations {
  std::optional<SegmentsE> segments_e;
  std::optional<std::vector<std::vector<double>>> sentence_embeddings;
  std::optional<std::vector<double>> token_ppl;  // one per word token
  std::optional<std::vector<std::vector<std::string>>> pos_tags;  // per sentence, per token
  std::optional<std::vector<std::vector<std::string>>> ner_tags;
  std::map<std::string, ScopeScores> detector_scores;
  nlohmann::json extra = nlohmann::json::object();

  bool empty() const;
  friend bool operator==(const Annotations&, const Annotations&) = default;
};

struct Document {
  std::string id;
  Domain domain;
  Source source;
  std::string text;
  std::optional<std::string> pair_id;
  Annotations annotations;
  nlohmann::json extra = nlohmann::json::object();

  friend bool operator==(const Document&, const Document&) = default;
};

using Corpus = std::vector<Document>;

// Parses one record; `line` is used for error messages only.
Document parse_document(const nlohmann::json& record, std::size_t line);
nlohmann::json to_json(const Document& doc);

// Fails with ParseError on the first malformed line, DataError("no records")
// for an empty file, DataError on duplicate ids or unknown schema versions.
Corpus load_corpus(const std::filesystem::path& path,
                   const std::string& schema_version = kCorpusSchemaVersion);
Corpus parse_corpus(const std::string& contents,
                    const std::string& schema_version = kCorpusSchemaVersion);
std::string serialize_corpus(const Corpus& corpus);

struct CorpusStatsRow {
  std::string domain;
  std::string source_class;  // "human" or "ai"
  std::size_t n_texts = 0;
  double avg_words = 0.0;
  double avg_sentences = 0.0;
  std::array<double, 3> ibc_percent{};  // word mass in intro/body/conclusion
  std::array<int, 3> ibc_rounded{};     // largest-remainder integers summing to 100
  std::string ibc_label() const;        // "13-67-20"
};

struct SkippedDocument {
  std::string id;
  std::string reason;
};

struct CorpusStats {
  std::vector<CorpusStatsRow> rows;  // sorted by (domain, source_class)
  std::vector<SkippedDocument> skipped;
};

CorpusStats corpus_stats(const Corpus& docs, Setting setting, std::uint64_t seed = 0,
                         unsigned jobs = 1);

}  // namespace segdiff
