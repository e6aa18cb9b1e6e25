#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace segdiff::cli {

// Every knob of every subcommand. A --config JSON file fills it first, then
// command-line flags override single fields.
struct RunConfig {
  // inputs and outputs
  std::string corpus;
  std::string out = "segdiff-out";
  std::vector<std::string> inputs;  // report: result directories (default: out)

  std::string setting = "c1";
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  // features
  std::vector<std::string> features = {"all"};
  std::string stopwords;
  std::string categories;
  std::string sentiment;
  bool pos_tagger = true;
  bool ner_tagger = true;
  std::string lm;  // empty: train on the corpus
  int lm_order = 3;
  double lm_discount = 0.75;

  // statistics
  double alpha = 0.05;
  std::size_t min_pairs = 30;
  std::string jsd = "divergence";  // or "distance" (square root)
  std::string zero_policy = "discard";
  std::size_t exact_max_n = 25;
  bool continuity = true;
  std::size_t resample_points = 100;

  // segmentation similarity
  std::string reference = "e";
  std::string against;  // segments JSONL compared with the reference instead of `setting`
  std::size_t near_miss_window = 2;

  // detection
  std::string detector_scores;
  double threshold = 0.5;
  std::string voting = "majority";  // or "mean"
  std::vector<std::string> variation_bundle = {"stopwords", "pos", "brunet", "surprisal",
                                               "content_flow"};
  bool builtin_detector = false;
  double calibration_fraction = 0.5;
  std::size_t length_bins = 4;

  // chess
  std::string pgn;
  std::string engine_evals;
  bool strict_pgn = false;
  bool filter_length = true;
  std::size_t min_moves = 30;
  std::size_t max_moves = 100;
  bool skip_invalid = false;
  int elo_bin = 100;

  // synth
  std::string scenario = "null";
  std::size_t pairs = 200;
  std::size_t games = 500;
  std::string domain = "news";
  bool middle_effect = true;
  bool random_play = false;
};

nlohmann::json to_json(const RunConfig& c);
// Throws UsageError on unknown keys or mistyped values.
void apply_json(RunConfig& c, const nlohmann::json& j);
void apply_config_file(RunConfig& c, const std::string& path);

// Checks enumerated values and ranges.
void validate(const RunConfig& c);

}  // namespace segdiff::cli
