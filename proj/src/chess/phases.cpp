#include "segdiff/chess/phases.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "segdiff/divergence.hpp"
#include "segdiff/error.hpp"

namespace segdiff::chess {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kOpening: return "opening";
    case Phase::kMiddle: return "middle";
    case Phase::kEnd: return "endgame";
  }
  return "?";
}

Phase GamePhases::phase_of(int m) const {
  if (opening.contains(m)) return Phase::kOpening;
  if (middle.contains(m)) return Phase::kMiddle;
  return Phase::kEnd;
}

const MoveRange& GamePhases::range(Phase p) const {
  switch (p) {
    case Phase::kOpening: return opening;
    case Phase::kMiddle: return middle;
    case Phase::kEnd: return end;
  }
  return end;
}

std::vector<MoveSnapshot> snapshots(const Game& game) {
  std::vector<MoveSnapshot> out;
  Position pos = game.initial();
  MoveSnapshot cur;
  cur.pieces = pos.piece_count();
  const std::size_t n = game.moves.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Move& m = game.moves[i];
    const Color mover = pos.side_to_move();
    if (m.capture) ++cur.exchanges;
    if (m.castle) cur.castled[mover] = true;
    pos = pos.play(m);
    // A full move ends after Black's reply, or at the last ply.
    if (pos.side_to_move() == kWhite || i + 1 == n) {
      cur.pieces = pos.piece_count();
      for (Color c : {kWhite, kBlack}) {
        cur.king_mobility[c] = pos.king_mobility(c);
        cur.king_rank[c] = rank_of(pos.king(c));
      }
      out.push_back(cur);
    }
  }
  return out;
}

GamePhases segment_phases(const std::vector<MoveSnapshot>& snaps, const PhaseRules& rules) {
  const int n = static_cast<int>(snaps.size());
  const double frac = n <= rules.tail_cutoff ? rules.tail_short : rules.tail_long;
  const int tail = static_cast<int>(std::floor(frac * n + 1e-9));
  int end_start = n - tail + 1;
  for (int m = 1; m <= n && m < end_start; ++m) {
    const auto& s = snaps[static_cast<std::size_t>(m - 1)];
    const bool few_pieces = s.pieces <= rules.endgame_max_pieces;
    bool kings = true;
    for (int c = 0; c < 2; ++c)
      kings = kings && s.king_mobility[c] >= rules.king_min_mobility &&
              (s.king_rank[c] == 2 || s.king_rank[c] == 5);
    if (few_pieces || kings) {
      end_start = m;
      break;
    }
  }
  int opening_end = 0;
  for (int m = 1; m <= n; ++m) {
    const auto& s = snaps[static_cast<std::size_t>(m - 1)];
    if (m <= rules.opening_max_move || s.exchanges <= rules.opening_max_exchanges ||
        !(s.castled[0] && s.castled[1]))
      opening_end = m;
  }
  opening_end = std::min(opening_end, end_start - 1);
  GamePhases p;
  p.opening = {1, opening_end};
  p.middle = {opening_end + 1, end_start - 1};
  p.end = {end_start, n};
  return p;
}

GamePhases segment_game(const Game& game, const PhaseRules& rules) {
  return segment_phases(snapshots(game), rules);
}

const std::vector<std::string>& move_feature_categories(std::size_t feature) {
  static const std::vector<std::vector<std::string>> kCats = {
      {"P", "N", "B", "R", "Q", "K"},
      {"0", "1"},
      {"0", "1"},
      {"0", "1"},
      {"0", "1"},
      {"a", "b", "c", "d", "e", "f", "g", "h"},
      {"1", "2", "3", "4", "5", "6", "7", "8"},
      {"a", "b", "c", "d", "e", "f", "g", "h"},
      {"1", "2", "3", "4", "5", "6", "7", "8"},
      {"-1", "0", "+1"}};
  return kCats.at(feature);
}

namespace {

int center_count(const Position& p, Color c) {
  int n = 0;
  for (Square s : {make_square(3, 3), make_square(4, 3), make_square(3, 4), make_square(4, 4)})
    n += !p.at(s).empty() && p.at(s).color == c;
  return n;
}

}  // namespace

std::vector<MoveRecord> move_records(const Game& game) {
  std::vector<MoveRecord> out;
  Position pos = game.initial();
  int full = 1;
  for (std::size_t i = 0; i < game.moves.size(); ++i) {
    const Move& m = game.moves[i];
    const Color mover = pos.side_to_move();
    MoveRecord r;
    r.ply = static_cast<int>(i) + 1;
    r.full_move = full;
    r.mover = mover;
    r.san = game.san.at(i);
    const auto legal = pos.legal_moves();
    const Position next = pos.play(m);
    const int type = pos.at(m.from).type;
    const int delta = std::clamp(center_count(next, mover) - center_count(pos, mover), -1, 1);
    r.category = {static_cast<std::size_t>(type - 1),
                  m.capture ? 1u : 0u,
                  next.in_check() ? 1u : 0u,
                  m.castle ? 1u : 0u,
                  m.promotion != kNoPiece ? 1u : 0u,
                  static_cast<std::size_t>(file_of(m.from)),
                  static_cast<std::size_t>(rank_of(m.from)),
                  static_cast<std::size_t>(file_of(m.to)),
                  static_cast<std::size_t>(rank_of(m.to)),
                  static_cast<std::size_t>(delta + 1)};
    r.numeric = {static_cast<double>(next.material_balance(mover)),
                 static_cast<double>(legal.size()), static_cast<double>(next.piece_count())};
    out.push_back(std::move(r));
    if (mover == kBlack) ++full;
    pos = next;
  }
  return out;
}

MoveFeatureSet aggregate(const std::vector<const MoveRecord*>& moves) {
  MoveFeatureSet out;
  out.n_moves = moves.size();
  for (std::size_t f = 0; f < kCategoricalMoveFeatures.size(); ++f) {
    const auto& cats = move_feature_categories(f);
    std::vector<double> counts(cats.size(), 0.0);
    for (const auto* m : moves) counts[m->category[f]] += 1.0;
    auto d = Distribution::from_counts(cats, counts);
    if (d) out.distributions.emplace_back(std::move(d.value()));
    else out.distributions.emplace_back(Unavailable{"no moves in phase"});
  }
  for (std::size_t f = 0; f < kNumericMoveFeatures.size(); ++f) {
    if (moves.empty()) {
      out.means.emplace_back(Unavailable{"no moves in phase"});
      continue;
    }
    double sum = 0;
    for (const auto* m : moves) sum += m->numeric[f];
    out.means.emplace_back(sum / static_cast<double>(moves.size()));
  }
  for (const auto* m : moves) out.san.insert(m->san);
  return out;
}

std::vector<const MoveRecord*> GameAnalysis::moves(Phase p, Color side) const {
  std::vector<const MoveRecord*> out;
  for (const auto& r : records)
    if (r.mover == side && phases.phase_of(r.full_move) == p) out.push_back(&r);
  return out;
}

std::optional<Color> GameAnalysis::human_side() const {
  const bool w = game->is_computer(kWhite), b = game->is_computer(kBlack);
  if (w == b) return std::nullopt;
  return w ? kBlack : kWhite;
}

GameAnalysis analyze_game(const Game& game, const PhaseRules& rules) {
  GameAnalysis a;
  a.game = &game;
  a.phases = segment_game(game, rules);
  a.records = move_records(game);
  return a;
}

double PhaseComparison::mean_jsd() const {
  double sum = 0;
  int n = 0;
  for (const auto& v : jsd)
    if (v) {
      sum += *v;
      ++n;
    }
  return n ? sum / n : 0.0;
}

namespace {

std::vector<std::optional<double>> feature_jsd(const MoveFeatureSet& a, const MoveFeatureSet& b) {
  std::vector<std::optional<double>> out;
  for (std::size_t f = 0; f < kCategoricalMoveFeatures.size(); ++f) {
    if (a.distributions[f] && b.distributions[f]) out.push_back(jsd(*a.distributions[f], *b.distributions[f]));
    else out.push_back(std::nullopt);
  }
  return out;
}

}  // namespace

PhaseComparison compare_phase(const std::vector<GameAnalysis>& games, Phase phase) {
  std::vector<const MoveRecord*> human, ai;
  for (const auto& g : games)
    for (Color c : {kWhite, kBlack}) {
      auto m = g.moves(phase, c);
      auto& dest = g.game->is_computer(c) ? ai : human;
      dest.insert(dest.end(), m.begin(), m.end());
    }
  if (human.empty() || ai.empty())
    throw InvalidArgument(std::string("no ") + (human.empty() ? "human" : "computer") +
                          " moves in the " + std::string(to_string(phase)));
  const auto h = aggregate(human), a = aggregate(ai);
  PhaseComparison out;
  out.phase = phase;
  out.human_moves = human.size();
  out.ai_moves = ai.size();
  out.jsd = feature_jsd(h, a);
  std::set<std::string> hs(h.san), as(a.san);
  out.jaccard = jaccard(hs, as);
  return out;
}

std::optional<double> game_phase_jsd(const GameAnalysis& game, Phase phase) {
  const auto side = game.human_side();
  if (!side) return std::nullopt;
  const auto h = game.moves(phase, *side), a = game.moves(phase, opponent(*side));
  if (h.empty() || a.empty()) return std::nullopt;
  PhaseComparison tmp;
  tmp.jsd = feature_jsd(aggregate(h), aggregate(a));
  return tmp.mean_jsd();
}

PhaseContrast middle_vs(const std::vector<GameAnalysis>& games, Phase other,
                        const stats::WilcoxonOptions& options) {
  PhaseContrast out;
  out.other = other;
  std::vector<double> diffs;
  double sm = 0, so = 0;
  for (const auto& g : games) {
    const auto m = game_phase_jsd(g, Phase::kMiddle), o = game_phase_jsd(g, other);
    if (!m || !o) continue;
    diffs.push_back(*m - *o);
    sm += *m;
    so += *o;
  }
  out.n_games = diffs.size();
  if (diffs.empty()) {
    out.test.all_zero = true;
    return out;
  }
  out.mean_middle = sm / static_cast<double>(diffs.size());
  out.mean_other = so / static_cast<double>(diffs.size());
  out.test = stats::wilcoxon_signed_rank(diffs, options);
  return out;
}

std::vector<EngineEval> parse_engine_evals(const std::string& contents) {
  std::vector<EngineEval> out;
  std::istringstream in(contents);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(n, "<record>", e.what());
    }
    EngineEval e;
    for (const char* key : {"game_id", "ply", "best_san", "win_prob"})
      if (!j.contains(key)) throw ParseError(n, key, "missing");
    const auto& gid = j.at("game_id");
    if (gid.is_string()) e.game_id = gid.get<std::string>();
    else if (gid.is_number_integer()) e.game_id = std::to_string(gid.get<long long>());
    else throw ParseError(n, "game_id", "expected a string or integer");
    if (!j.at("ply").is_number_integer() || j.at("ply").get<int>() < 1)
      throw ParseError(n, "ply", "expected a positive integer");
    e.ply = j.at("ply").get<int>();
    if (!j.at("best_san").is_string()) throw ParseError(n, "best_san", "expected a string");
    e.best_san = j.at("best_san").get<std::string>();
    if (!j.at("win_prob").is_number()) throw ParseError(n, "win_prob", "expected a number");
    e.win_prob = j.at("win_prob").get<double>();
    if (!(e.win_prob >= 0.0 && e.win_prob <= 1.0)) throw ParseError(n, "win_prob", "outside [0, 1]");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<EngineEval> load_engine_evals(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("io", "cannot open engine evaluation file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_engine_evals(buf.str());
}

namespace {

std::string strip_suffix(std::string s) {
  while (!s.empty() && std::string_view("+#!?").find(s.back()) != std::string_view::npos) s.pop_back();
  return s;
}

}  // namespace

std::vector<OptimalMoveRow> optimal_moves(const std::vector<GameAnalysis>& games,
                                          const std::vector<EngineEval>& evals, int width) {
  if (width <= 0) throw InvalidArgument("Elo bin width must be positive");
  std::map<std::pair<std::string, int>, const EngineEval*> index;
  for (const auto& e : evals) index[{e.game_id, e.ply}] = &e;
  std::map<std::tuple<int, std::string, int>, OptimalMoveRow> rows;
  std::vector<std::string> missing;
  for (const auto& g : games) {
    const std::string id = g.game->id();
    for (const auto& r : g.records) {
      auto it = index.find({id, r.ply});
      if (it == index.end()) {
        missing.push_back(id + ":" + std::to_string(r.ply));
        continue;
      }
      int bin = -1;
      if (auto elo = g.game->header(r.mover == kWhite ? "WhiteElo" : "BlackElo")) {
        try {
          const int v = std::stoi(*elo);
          if (v > 0) bin = v / width * width;
        } catch (const std::exception&) {
        }
      }
      const std::string side = g.game->is_computer(r.mover) ? "ai" : "human";
      const Phase phase = g.phases.phase_of(r.full_move);
      auto& row = rows[{bin, side, static_cast<int>(phase)}];
      row.elo_bin = bin;
      row.side = side;
      row.phase = phase;
      ++row.moves;
      if (strip_suffix(it->second->best_san) == strip_suffix(r.san)) ++row.optimal;
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) list += (i ? ", " : "") + missing[i];
    if (missing.size() > 20) list += ", ...";
    throw DataError("missing_evals", std::to_string(missing.size()) +
                                         " plies have no engine evaluation: " + list);
  }
  std::vector<OptimalMoveRow> out;
  for (auto& [k, v] : rows) out.push_back(v);
  return out;
}

}  // namespace segdiff::chess
