#include <CLI11.hpp>
#include <json.hpp>

#include "common.hpp"
#include "segdiff/cli.hpp"
#include "segdiff/error.hpp"

namespace segdiff::cli {

namespace {

void error_line(std::ostream& err, const std::string& kind, const std::string& message) {
  err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
}

void add_common(CLI::App* sub, RunConfig& c) {
  // Applied the moment it is parsed, so flags (assigned after parsing) win.
  sub->add_option_function<std::string>(
         "--config", [&c](const std::string& path) { apply_config_file(c, path); },
         "JSON config file; flags override its values")
      ->trigger_on_parse();
  sub->add_option("--out", c.out, "Output directory");
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--jobs", c.jobs, "Worker threads");
}

void add_corpus(CLI::App* sub, RunConfig& c) {
  sub->add_option("--corpus", c.corpus, "Corpus file (JSON lines)");
  sub->add_option("--setting", c.setting, "Segmentation setting: e, c1 or c2");
}

void add_lm(CLI::App* sub, RunConfig& c) {
  sub->add_option("--lm", c.lm, "Trained model file (default: train on the corpus)");
  sub->add_option("--lm-order", c.lm_order, "n-gram order when training");
  sub->add_option("--lm-discount", c.lm_discount, "Absolute discount when training");
}

void add_resources(CLI::App* sub, RunConfig& c) {
  sub->add_option("--stopwords", c.stopwords, "Stopword list file");
  sub->add_option("--categories", c.categories, "Category lexicon file");
  sub->add_option("--sentiment", c.sentiment, "Sentiment lexicon file");
  sub->add_flag("--pos-tagger,!--no-pos-tagger", c.pos_tagger, "Built-in POS tagger");
  sub->add_flag("--ner-tagger,!--no-ner-tagger", c.ner_tagger, "Built-in NER tagger");
  add_lm(sub, c);
}

void add_wilcoxon(CLI::App* sub, RunConfig& c) {
  sub->add_option("--alpha", c.alpha, "Significance level");
  sub->add_option("--zero-policy", c.zero_policy, "Wilcoxon zeros: discard or pratt");
  sub->add_option("--exact-max-n", c.exact_max_n, "Largest n for the exact Wilcoxon test");
  sub->add_flag("--continuity,!--no-continuity", c.continuity,
                "Continuity correction in the normal approximation");
}

void add_delta(CLI::App* sub, RunConfig& c) {
  sub->add_option("--jsd", c.jsd, "divergence or distance (square root)");
  sub->add_option("--resample-points", c.resample_points, "Token-series resampling points");
}

struct Sub {
  const char* name;
  const char* help;
  Command run;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Segment-level comparison of human and AI texts, and of chess game phases",
               "segdiff"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "segdiff 1.0");

  const Sub subs[] = {
      {"stats", "Corpus statistics per dataset and source", cmd_stats},
      {"segment", "Intro/body/conclusion boundaries per document", cmd_segment},
      {"features", "Feature values per document segment", cmd_features},
      {"compare-source", "Do human texts vary more across segments than AI texts?",
       cmd_compare_source},
      {"compare-segment", "Which segment separates human and AI texts most?", cmd_compare_segment},
      {"detect", "Detector evaluation per scope, voting and length", cmd_detect},
      {"pair-detect", "Pair decisions with the cross-segment variation fallback", cmd_pair_detect},
      {"validate-segmentation", "Segmentation similarity between two settings",
       cmd_validate_segmentation},
      {"chess", "Chess phase segmentation and human/computer comparison", cmd_chess},
      {"report", "Summary tables from earlier outputs", cmd_report},
      {"synth", "Seeded synthetic corpora and games", cmd_synth},
      {"train-lm", "Train and save the n-gram language model", cmd_train_lm},
  };
  std::map<CLI::App*, Command> commands;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    commands[sub] = s.run;
    add_common(sub, c);
    const std::string n = s.name;
    if (n != "chess" && n != "report" && n != "synth") add_corpus(sub, c);
    if (n == "features" || n == "compare-source" || n == "compare-segment") {
      sub->add_option("--features,--feature", c.features, "Feature ids, comma lists or 'all'")
          ->delimiter(',');
      add_resources(sub, c);
    }
    if (n == "compare-source" || n == "compare-segment") {
      add_wilcoxon(sub, c);
      add_delta(sub, c);
      sub->add_option("--min-pairs", c.min_pairs, "Units below which outcomes are underpowered");
    }
    if (n == "validate-segmentation") {
      sub->add_option("--reference", c.reference, "Reference setting");
      sub->add_option("--against", c.against, "Segments JSONL compared with the reference");
      sub->add_option("--near-miss-window", c.near_miss_window, "Near-miss window in sentences");
    }
    if (n == "train-lm") {
      sub->add_option("--lm-order", c.lm_order, "n-gram order");
      sub->add_option("--lm-discount", c.lm_discount, "Absolute discount");
    }
    if (n == "detect" || n == "pair-detect") {
      sub->add_option("--detector-scores", c.detector_scores, "Detector scores (JSON lines)");
      sub->add_option("--threshold", c.threshold, "AI label threshold");
    }
    if (n == "detect") {
      sub->add_option("--voting", c.voting, "majority or mean");
      sub->add_flag("--builtin-detector,!--no-builtin-detector", c.builtin_detector,
                    "Also score with the built-in n-gram detector");
      sub->add_option("--calibration-fraction", c.calibration_fraction,
                      "Share of documents used to calibrate the built-in detector");
      sub->add_option("--length-bins", c.length_bins, "Length bins for FNR by length");
      add_lm(sub, c);
    }
    if (n == "pair-detect") {
      sub->add_option("--variation-bundle", c.variation_bundle, "Features of the variation score")
          ->delimiter(',');
      add_resources(sub, c);
      add_delta(sub, c);
    }
    if (n == "chess") {
      sub->add_option("--pgn", c.pgn, "PGN file");
      sub->add_option("--engine-evals", c.engine_evals, "Engine evaluations (JSON lines)");
      sub->add_flag("--strict-pgn,!--no-strict-pgn", c.strict_pgn, "Require the seven-tag roster");
      sub->add_flag("--filter-length,!--no-filter-length", c.filter_length,
                    "Keep games within the move bounds");
      sub->add_option("--min-moves", c.min_moves, "Fewest full moves kept");
      sub->add_option("--max-moves", c.max_moves, "Most full moves kept");
      sub->add_flag("--skip-invalid,!--no-skip-invalid", c.skip_invalid,
                    "Exclude games with illegal moves instead of failing");
      sub->add_option("--elo-bin", c.elo_bin, "Elo bin width");
      add_wilcoxon(sub, c);
    }
    if (n == "report") sub->add_option("--in", c.inputs, "Result directories (default: --out)");
    if (n == "synth") {
      sub->add_option("--scenario", c.scenario,
                      "null, body-gap, segment-varying, detector or chess");
      sub->add_option("--pairs", c.pairs, "Document pairs");
      sub->add_option("--games", c.games, "Chess games");
      sub->add_option("--domain", c.domain, "Dataset name of the documents");
      sub->add_flag("--middle-effect,!--no-middle-effect", c.middle_effect,
                    "Computer side avoids pawn moves in the middle game");
      sub->add_flag("--random-play,!--no-random-play", c.random_play, "Uniformly random games");
    }
  }

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    out << app.help();
    error_line(err, "usage", e.what());
    return 2;
  } catch (const UsageError& e) {
    error_line(err, "usage", e.what());
    return 2;
  }

  try {
    validate(c);
    for (auto* sub : app.get_subcommands()) {
      Output output(c.out);
      commands.at(sub)(c, output);
      output.commit(c);
    }
  } catch (const UsageError& e) {
    error_line(err, "usage", e.what());
    return 2;
  } catch (const Error& e) {
    error_line(err, e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    error_line(err, "internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace segdiff::cli
