#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "segdiff/comparison.hpp"
#include "segdiff/corpus.hpp"
#include "segdiff/features.hpp"
#include "segdiff/io.hpp"

namespace segdiff::cli {

// Files produced by a subcommand. Nothing touches the disk until commit(),
// so a failing command leaves no partial output behind.
class Output {
 public:
  explicit Output(std::filesystem::path dir) : dir_(std::move(dir)) {}
  void add(std::string name, std::string contents);
  // Writes config.json and every file, each atomically.
  void commit(const RunConfig& config) const;
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

using Command = void (*)(const RunConfig&, Output&);

void cmd_stats(const RunConfig& c, Output& out);
void cmd_segment(const RunConfig& c, Output& out);
void cmd_features(const RunConfig& c, Output& out);
void cmd_compare_source(const RunConfig& c, Output& out);
void cmd_compare_segment(const RunConfig& c, Output& out);
void cmd_validate_segmentation(const RunConfig& c, Output& out);
void cmd_train_lm(const RunConfig& c, Output& out);
void cmd_detect(const RunConfig& c, Output& out);
void cmd_pair_detect(const RunConfig& c, Output& out);
void cmd_chess(const RunConfig& c, Output& out);
void cmd_report(const RunConfig& c, Output& out);
void cmd_synth(const RunConfig& c, Output& out);

// ---- shared helpers ----------------------------------------------------------

Corpus input_corpus(const RunConfig& c);
// Union of the listed specs ("all" or comma lists) in canonical feature order.
std::vector<std::string> feature_bundle(const std::vector<std::string>& specs);
bool needs_lm(const std::vector<std::string>& bundle);
// Lexicons, taggers and the language model. Without --lm the model is trained
// on `corpus`; a corpus too small to train on leaves the LM features
// unavailable.
FeatureResources make_resources(const RunConfig& c, const Corpus& corpus,
                                const std::vector<std::string>& bundle);
DeltaOptions delta_options(const RunConfig& c);
ComparisonOptions comparison_options(const RunConfig& c);

std::string num(double v);
std::string jsonl(const std::vector<nlohmann::json>& lines);
std::string skipped_csv(const std::vector<SkippedDocument>& skipped);

}  // namespace segdiff::cli
