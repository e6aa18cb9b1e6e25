#include "config.hpp"

#include <fstream>
#include <set>

#include "segdiff/error.hpp"
#include "segdiff/features.hpp"
#include "segdiff/io.hpp"
#include "segdiff/setting.hpp"
#include "segdiff/synth.hpp"

namespace segdiff::cli {

namespace {

// One list keeps to_json and apply_json in step.
#define SEGDIFF_CONFIG_FIELDS(X)                                                             \
  X(corpus) X(out) X(inputs) X(setting) X(seed) X(jobs) X(features) X(stopwords)             \
  X(categories) X(sentiment) X(pos_tagger) X(ner_tagger) X(lm) X(lm_order) X(lm_discount)   \
  X(alpha) X(min_pairs) X(jsd) X(zero_policy) X(exact_max_n) X(continuity)                  \
  X(resample_points) X(reference) X(against) X(near_miss_window) X(detector_scores)         \
  X(threshold) X(voting) X(variation_bundle) X(builtin_detector) X(calibration_fraction)    \
  X(length_bins) X(pgn) X(engine_evals) X(strict_pgn) X(filter_length) X(min_moves)         \
  X(max_moves) X(skip_invalid) X(elo_bin) X(scenario) X(pairs) X(games) X(domain)           \
  X(middle_effect) X(random_play)

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& field) {
  try {
    field = j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config key '") + key + "': " + e.what());
  }
}

void check_bundle(const std::vector<std::string>& bundle, const char* what) {
  try {
    for (const auto& f : bundle) (void)parse_feature_bundle(f);
  } catch (const Error& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j = nlohmann::json::object();
#define X(name) j[#name] = c.name;
  SEGDIFF_CONFIG_FIELDS(X)
#undef X
  return j;
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::set<std::string> known = [] {
    std::set<std::string> k;
    const auto defaults = to_json(RunConfig{});  // items() does not keep a temporary alive
    for (auto& [key, _] : defaults.items()) k.insert(key);
    return k;
  }();
  for (auto& [key, _] : j.items())
    if (!known.count(key)) throw UsageError("unknown config key '" + key + "'");
#define X(name) \
  if (j.contains(#name)) read_field(j.at(#name), #name, c.name);
  SEGDIFF_CONFIG_FIELDS(X)
#undef X
}

void apply_config_file(RunConfig& c, const std::string& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  apply_json(c, j);
}

void validate(const RunConfig& c) {
  auto one_of = [](const std::string& v, std::initializer_list<const char*> allowed,
                   const char* key) {
    for (auto a : allowed)
      if (v == a) return;
    throw UsageError(std::string("invalid ") + key + " '" + v + "'");
  };
  try {
    (void)parse_setting(c.setting);
    (void)parse_setting(c.reference);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  one_of(c.jsd, {"divergence", "distance"}, "jsd");
  one_of(c.zero_policy, {"discard", "pratt"}, "zero_policy");
  one_of(c.voting, {"majority", "mean"}, "voting");
  one_of(c.scenario, {"null", "body-gap", "segment-varying", "detector", "chess"}, "scenario");
  check_bundle(c.features, "features");
  check_bundle(c.variation_bundle, "variation_bundle");
  if (c.jobs < 1) throw UsageError("jobs must be >= 1");
  if (!(c.alpha > 0 && c.alpha < 1)) throw UsageError("alpha must lie in (0, 1)");
  if (!(c.threshold >= 0 && c.threshold <= 1)) throw UsageError("threshold must lie in [0, 1]");
  if (!(c.calibration_fraction > 0 && c.calibration_fraction < 1))
    throw UsageError("calibration_fraction must lie in (0, 1)");
  if (c.lm_order < 1 || c.lm_order > 3) throw UsageError("lm_order must be 1, 2 or 3");
  if (c.resample_points < 3) throw UsageError("resample_points must be >= 3");
  if (c.length_bins < 1) throw UsageError("length_bins must be >= 1");
  if (c.elo_bin < 1) throw UsageError("elo_bin must be >= 1");
  if (c.min_moves > c.max_moves) throw UsageError("min_moves exceeds max_moves");
}

}  // namespace segdiff::cli
