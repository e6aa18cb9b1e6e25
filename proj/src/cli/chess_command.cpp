#include <fstream>
#include <optional>

#include "common.hpp"
#include "segdiff/chess/pgn.hpp"
#include "segdiff/chess/phases.hpp"
#include "segdiff/error.hpp"
#include "segdiff/parallel.hpp"

namespace segdiff::cli {

namespace {

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string range_cell(const chess::MoveRange& r, bool first) {
  if (r.empty()) return "";
  return std::to_string(first ? r.first : r.last);
}

}  // namespace

void cmd_chess(const RunConfig& c, Output& out) {
  if (c.pgn.empty()) throw UsageError("--pgn is required");
  std::ifstream in(c.pgn, std::ios::binary);
  if (!in) throw DataError("io", "cannot read " + c.pgn);
  chess::PgnOptions po;
  po.strict = c.strict_pgn;
  po.filter_length = c.filter_length;
  po.min_moves = c.min_moves;
  po.max_moves = c.max_moves;
  po.skip_invalid = c.skip_invalid;
  const auto parsed = chess::parse_pgn(in, po);
  const auto& games = parsed.games;

  std::vector<chess::GameAnalysis> analyses(games.size());
  parallel_for(games.size(), c.jobs,
               [&](std::size_t i) { analyses[i] = chess::analyze_game(games[i]); });

  io::CsvWriter phases({"game", "id", "full_moves", "opening_first", "opening_last",
                        "middle_first", "middle_last", "endgame_first", "endgame_last"});
  io::CsvWriter per_game({"game", "id", "human_side", "opening", "middle", "endgame"});
  for (std::size_t i = 0; i < games.size(); ++i) {
    const auto& p = analyses[i].phases;
    phases.row({std::to_string(games[i].index), games[i].id(),
                std::to_string(games[i].full_moves()), range_cell(p.opening, true),
                range_cell(p.opening, false), range_cell(p.middle, true),
                range_cell(p.middle, false), range_cell(p.end, true), range_cell(p.end, false)});
    const auto side = analyses[i].human_side();
    if (!side) continue;
    per_game.row({std::to_string(games[i].index), games[i].id(),
                  *side == chess::kWhite ? "white" : "black",
                  opt_num(chess::game_phase_jsd(analyses[i], chess::Phase::kOpening)),
                  opt_num(chess::game_phase_jsd(analyses[i], chess::Phase::kMiddle)),
                  opt_num(chess::game_phase_jsd(analyses[i], chess::Phase::kEnd))});
  }

  io::CsvWriter compare({"feature", "phase", "jsd", "jaccard", "human_moves", "ai_moves"});
  for (auto phase : chess::kPhases) {
    const std::string name(chess::to_string(phase));
    std::optional<chess::PhaseComparison> pc;
    try {
      pc = chess::compare_phase(analyses, phase);
    } catch (const InvalidArgument&) {
    }
    for (std::size_t f = 0; f < chess::kCategoricalMoveFeatures.size(); ++f) {
      const std::string feature(chess::kCategoricalMoveFeatures[f]);
      if (!pc) {
        compare.row({feature, name, "", "", "0", "0"});
        continue;
      }
      compare.row({feature, name, opt_num(pc->jsd[f]), num(pc->jaccard),
                   std::to_string(pc->human_moves), std::to_string(pc->ai_moves)});
    }
    if (pc)
      compare.row({"mean", name, num(pc->mean_jsd()), num(pc->jaccard),
                   std::to_string(pc->human_moves), std::to_string(pc->ai_moves)});
  }

  io::CsvWriter means({"phase", "side", "feature", "moves", "mean"});
  for (auto phase : chess::kPhases)
    for (bool computer : {false, true}) {
      std::vector<const chess::MoveRecord*> moves;
      for (const auto& a : analyses)
        for (auto side : {chess::kWhite, chess::kBlack})
          if (a.game->is_computer(side) == computer) {
            auto m = a.moves(phase, side);
            moves.insert(moves.end(), m.begin(), m.end());
          }
      const auto agg = chess::aggregate(moves);
      for (std::size_t f = 0; f < chess::kNumericMoveFeatures.size(); ++f)
        means.row({std::string(chess::to_string(phase)), computer ? "ai" : "human",
                   std::string(chess::kNumericMoveFeatures[f]), std::to_string(agg.n_moves),
                   agg.means[f] ? num(*agg.means[f]) : std::string()});
    }

  stats::WilcoxonOptions wo;
  wo.zeros = c.zero_policy == "pratt" ? stats::ZeroPolicy::kPratt : stats::ZeroPolicy::kDiscard;
  wo.exact_max_n = c.exact_max_n;
  wo.continuity = c.continuity;
  std::vector<chess::PhaseContrast> contrasts;
  std::vector<double> p;
  for (auto other : {chess::Phase::kOpening, chess::Phase::kEnd}) {
    contrasts.push_back(chess::middle_vs(analyses, other, wo));
    p.push_back(contrasts.back().test.p_two_sided);
  }
  const auto p_adj = stats::holm(p);
  io::CsvWriter tests({"comparison", "n_games", "mean_middle", "mean_other", "statistic", "p_raw",
                       "p_adj", "verdict"});
  for (std::size_t k = 0; k < contrasts.size(); ++k) {
    const auto& ct = contrasts[k];
    const std::string other(chess::to_string(ct.other));
    std::string verdict = "~";
    if (ct.n_games && p_adj[k] < c.alpha && ct.test.direction != 0)
      verdict = ct.test.direction > 0 ? "middle>" + other : other + ">middle";
    tests.row({"middle vs " + other, std::to_string(ct.n_games), num(ct.mean_middle),
               num(ct.mean_other), num(ct.test.w_plus), num(ct.test.p_two_sided), num(p_adj[k]),
               verdict});
  }

  io::CsvWriter excluded({"game", "id", "reason"});
  for (const auto& e : parsed.excluded) excluded.row({std::to_string(e.index), e.id, e.reason});

  out.add("chess_phases.csv", phases.str());
  out.add("chess_game_jsd.csv", per_game.str());
  out.add("chess_phase_compare.csv", compare.str());
  out.add("chess_phase_means.csv", means.str());
  out.add("chess_phase_tests.csv", tests.str());
  out.add("chess_excluded.csv", excluded.str());

  if (!c.engine_evals.empty()) {
    const auto evals = chess::load_engine_evals(c.engine_evals);
    io::CsvWriter opt({"elo_bin", "side", "phase", "moves", "optimal", "rate"});
    for (const auto& r : chess::optimal_moves(analyses, evals, c.elo_bin))
      opt.row({r.elo_bin < 0 ? "unknown" : std::to_string(r.elo_bin), r.side,
               std::string(chess::to_string(r.phase)), std::to_string(r.moves),
               std::to_string(r.optimal), num(r.rate())});
    out.add("chess_optimal_elo.csv", opt.str());
  }
}

}  // namespace segdiff::cli
