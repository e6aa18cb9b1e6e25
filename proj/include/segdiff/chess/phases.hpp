#pragma once

// Opening / middle game / endgame segmentation, per-move features and
// human-vs-computer phase comparison.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "segdiff/chess/pgn.hpp"
#include "segdiff/feature_value.hpp"
#include "segdiff/stats.hpp"

namespace segdiff::chess {

// Inclusive full-move range, 1-based; empty when first > last.
struct MoveRange {
  int first = 1;
  int last = 0;
  bool empty() const { return first > last; }
  int size() const { return empty() ? 0 : last - first + 1; }
  bool contains(int m) const { return m >= first && m <= last; }
  friend bool operator==(const MoveRange&, const MoveRange&) = default;
};

enum class Phase { kOpening = 0, kMiddle = 1, kEnd = 2 };
inline constexpr Phase kPhases[] = {Phase::kOpening, Phase::kMiddle, Phase::kEnd};
std::string_view to_string(Phase p);  // opening, middle, endgame

struct GamePhases {
  MoveRange opening, middle, end;
  Phase phase_of(int full_move) const;
  const MoveRange& range(Phase p) const;
};

struct PhaseRules {
  int opening_max_move = 16;     // opening while move number <= this
  int opening_max_exchanges = 8; // ... or captured units <= this
  int endgame_max_pieces = 11;   // endgame once pieces on board <= this
  int king_min_mobility = 8;     // ... or both kings this mobile on rank 3 or 6
  int tail_cutoff = 50;          // games up to this many moves use tail_short
  double tail_short = 0.35;
  double tail_long = 0.45;
};

// Board facts after full move m (index m - 1).
struct MoveSnapshot {
  int pieces = 32;
  int exchanges = 0;
  bool castled[2] = {false, false};
  int king_mobility[2] = {0, 0};
  int king_rank[2] = {0, 7};  // 0-based
};

std::vector<MoveSnapshot> snapshots(const Game& game);
GamePhases segment_phases(const std::vector<MoveSnapshot>& snaps, const PhaseRules& rules = {});
GamePhases segment_game(const Game& game, const PhaseRules& rules = {});

// ---- move features ---------------------------------------------------------

inline constexpr std::array<std::string_view, 10> kCategoricalMoveFeatures = {
    "piece", "capture", "check", "castle", "promotion",
    "from_file", "from_rank", "to_file", "to_rank", "center_delta"};
inline constexpr std::array<std::string_view, 3> kNumericMoveFeatures = {"material", "mobility",
                                                                         "pieces"};
const std::vector<std::string>& move_feature_categories(std::size_t feature);

struct MoveRecord {
  int ply = 0;        // 1-based
  int full_move = 0;  // 1-based
  Color mover = kWhite;
  std::string san;
  std::array<std::size_t, kCategoricalMoveFeatures.size()> category{};  // index per feature
  // Material balance after the move (mover's view), mover's legal move
  // count before it, pieces on the board after it.
  std::array<double, kNumericMoveFeatures.size()> numeric{};
};

std::vector<MoveRecord> move_records(const Game& game);

struct MoveFeatureSet {
  std::size_t n_moves = 0;
  std::vector<Maybe<Distribution>> distributions;  // per categorical feature
  std::vector<Maybe<double>> means;                // per numeric feature
  std::set<std::string> san;
};

MoveFeatureSet aggregate(const std::vector<const MoveRecord*>& moves);

// ---- comparison --------------------------------------------------------------

struct GameAnalysis {
  const Game* game = nullptr;
  GamePhases phases;
  std::vector<MoveRecord> records;

  // Moves of one side in one phase.
  std::vector<const MoveRecord*> moves(Phase p, Color side) const;
  // Side played by a human against a computer; nullopt otherwise.
  std::optional<Color> human_side() const;
};

GameAnalysis analyze_game(const Game& game, const PhaseRules& rules = {});

struct PhaseComparison {
  Phase phase = Phase::kOpening;
  std::size_t human_moves = 0;
  std::size_t ai_moves = 0;
  std::vector<std::optional<double>> jsd;  // per categorical feature
  double jaccard = 1.0;                    // unique SAN sets
  double mean_jsd() const;
};

// Pools every human-side and computer-side move of the phase. Throws
// InvalidArgument when either side has no move in the phase.
PhaseComparison compare_phase(const std::vector<GameAnalysis>& games, Phase phase);

// Mean JSD over categorical features between the human and computer sides of
// one human-vs-computer game in `phase`; nullopt when a side has no move.
std::optional<double> game_phase_jsd(const GameAnalysis& game, Phase phase);

struct PhaseContrast {
  Phase other = Phase::kOpening;
  std::size_t n_games = 0;
  double mean_middle = 0.0;
  double mean_other = 0.0;
  stats::WilcoxonResult test;
};

// Paired per-game test of middle-phase JSD against `other`.
PhaseContrast middle_vs(const std::vector<GameAnalysis>& games, Phase other,
                        const stats::WilcoxonOptions& options = {});

// ---- engine evaluations --------------------------------------------------------

struct EngineEval {
  std::string game_id;
  int ply = 0;
  std::string best_san;
  double win_prob = 0.0;
};

std::vector<EngineEval> parse_engine_evals(const std::string& contents);
std::vector<EngineEval> load_engine_evals(const std::filesystem::path& path);

struct OptimalMoveRow {
  int elo_bin = -1;  // lower edge; -1 when the mover's Elo is unknown
  std::string side;  // "human" or "ai"
  Phase phase = Phase::kOpening;
  std::size_t moves = 0;
  std::size_t optimal = 0;
  double rate() const { return moves ? static_cast<double>(optimal) / static_cast<double>(moves) : 0.0; }
};

// Fraction of played moves equal to the engine's best move, per Elo bin,
// side class and phase. Throws DataError listing uncovered plies.
std::vector<OptimalMoveRow> optimal_moves(const std::vector<GameAnalysis>& games,
                                          const std::vector<EngineEval>& evals,
                                          int elo_bin_width = 100);

}  // namespace segdiff::chess
