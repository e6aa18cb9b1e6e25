#include "segdiff/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "segdiff/chess/phases.hpp"
#include "segdiff/error.hpp"
#include "segdiff/lexicon.hpp"
#include "segdiff/rng.hpp"
#include "segdiff/text.hpp"

namespace segdiff::synth {

std::string_view to_string(TextScenario s) {
  switch (s) {
    case TextScenario::kNull: return "null";
    case TextScenario::kBodyGap: return "body-gap";
    case TextScenario::kSegmentVarying: return "segment-varying";
    case TextScenario::kDetector: return "detector";
  }
  return "?";
}

TextScenario parse_scenario(std::string_view s) {
  for (auto sc : {TextScenario::kNull, TextScenario::kBodyGap, TextScenario::kSegmentVarying,
                  TextScenario::kDetector})
    if (to_string(sc) == s) return sc;
  throw UsageError("unknown synthetic scenario '" + std::string(s) + "'");
}

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> kVocab = [] {
    const char* onsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
    const char* vowels[] = {"a", "e", "i", "o", "u"};
    std::vector<std::string> syl;
    for (auto o : onsets)
      for (auto v : vowels) syl.push_back(std::string(o) + v);
    const auto& stop = WordList::builtin_stopwords();
    std::vector<std::string> out;
    // Two-syllable words in a scrambled but fixed order, then a final
    // consonant so no word ends in a vowel pattern shared with English.
    for (std::size_t i = 0; i < syl.size() && out.size() < 1200; ++i)
      for (std::size_t j = 0; j < syl.size() && out.size() < 1200; ++j) {
        const std::size_t a = (i * 37 + j * 11) % syl.size();
        const std::size_t b = (j * 53 + i * 7 + 3) % syl.size();
        std::string w = syl[a] + syl[b] + "n";
        if (stop.contains(w) || text::is_abbreviation(w, false)) continue;
        if (std::find(out.begin(), out.end(), w) != out.end()) continue;
        out.push_back(std::move(w));
      }
    return out;
  }();
  return kVocab;
}

namespace {

struct SegmentStyle {
  std::size_t pool = 100;         // content words drawn from vocabulary()[offset, offset + pool)
  std::size_t offset = 0;
  std::size_t stop_first = 0;     // stopwords drawn from this slice of the list
  std::size_t stop_last = 80;
  std::vector<double> direction;  // embedding mean
};

std::vector<double> unit_direction(std::size_t dims, std::size_t k) {
  std::vector<double> v(dims, 0.0);
  v[k % dims] = 1.0;
  v[(k + 1) % dims] = 0.5;
  return v;
}

constexpr double kStopwordRate = 0.3;

std::string capitalize(std::string w) {
  if (!w.empty()) w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

std::string styled_sentence(const SegmentStyle& st, std::size_t words, Rng& rng) {
  const auto& vocab = vocabulary();
  const auto& stop = WordList::builtin_stopwords().words();
  std::string s;
  for (std::size_t k = 0; k < words; ++k) {
    std::string w;
    if (k > 0 && k + 1 < words && rng.bernoulli(kStopwordRate))
      w = stop[st.stop_first + rng.below(st.stop_last - st.stop_first)];
    else
      w = vocab[st.offset + rng.below(st.pool)];
    if (k == 0) w = capitalize(w);
    if (k) s += ' ';
    s += w;
  }
  return s + ".";
}

// Successor table of the word chain used by the detector scenario.
struct Chain {
  static constexpr std::size_t kWords = 300;
  static constexpr std::size_t kSuccessors = 3;
  std::vector<std::array<std::size_t, kSuccessors>> next;
  Chain() {
    Rng rng(0xC4A1);
    next.resize(kWords);
    for (auto& n : next)
      for (auto& x : n) x = rng.below(kWords);
  }
};

std::string chain_sentence(std::size_t words, double follow, Rng& rng) {
  static const Chain chain;
  const auto& vocab = vocabulary();
  std::size_t cur = rng.below(Chain::kWords);
  std::string s = capitalize(vocab[cur]);
  for (std::size_t k = 1; k < words; ++k) {
    cur = rng.bernoulli(follow) ? chain.next[cur][rng.below(Chain::kSuccessors)]
                                : rng.below(Chain::kWords);
    s += ' ' + vocab[cur];
  }
  return s + ".";
}

Document make_document(const std::string& id, const std::string& pair, bool human,
                       const TextOptions& o, const std::array<SegmentStyle, 3>& styles,
                       double chain_follow, Rng& rng) {
  Document d;
  d.id = id;
  d.domain = Domain::parse(o.domain);
  d.source = human ? Source::human() : Source::model("synth-llm");
  d.pair_id = pair;
  std::array<std::string, 3> seg_text;
  std::vector<std::vector<double>> emb;
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t k = 0; k < o.sentences_per_segment; ++k) {
      const std::string sentence = o.scenario == TextScenario::kDetector
                                       ? chain_sentence(o.words_per_sentence, chain_follow, rng)
                                       : styled_sentence(styles[s], o.words_per_sentence, rng);
      if (!seg_text[s].empty()) seg_text[s] += ' ';
      seg_text[s] += sentence;
      std::vector<double> e(o.embedding_dims);
      for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = (styles[s].direction.empty() ? 0.0 : styles[s].direction[i]) + rng.normal(0.0, 0.3);
      emb.push_back(std::move(e));
    }
  }
  d.text = seg_text[0] + " " + seg_text[1] + " " + seg_text[2];
  SegmentsE se;
  se.texts = seg_text;
  d.annotations.segments_e = se;
  d.annotations.sentence_embeddings = std::move(emb);
  d.annotations.detector_scores["constant"] = {
      {"total", 0.7}, {"intro", 0.7}, {"body", 0.7}, {"conclusion", 0.7}, {"intro+conclusion", 0.7}};
  return d;
}

}  // namespace

Corpus text_corpus(const TextOptions& o) {
  if (o.sentences_per_segment < 1 || o.words_per_sentence < 3)
    throw InvalidArgument("synthetic documents need >= 1 sentence per segment and >= 3 words");
  const std::size_t dims = o.embedding_dims;
  SegmentStyle uniform;
  uniform.direction = unit_direction(dims, 0);
  std::array<SegmentStyle, 3> neutral = {uniform, uniform, uniform};
  std::array<SegmentStyle, 3> human = neutral, ai = neutral;
  double follow_h = 0.0, follow_a = 0.0;
  switch (o.scenario) {
    case TextScenario::kNull:
      break;
    case TextScenario::kBodyGap:
      human[1].pool = 200;
      ai[1].pool = 40;
      break;
    case TextScenario::kSegmentVarying:
      human[0].pool = 40;
      human[1].pool = 200;
      human[2].pool = 80;
      human[0].stop_first = 0, human[0].stop_last = 20;
      human[1].stop_first = 20, human[1].stop_last = 60;
      human[2].stop_first = 60, human[2].stop_last = 80;
      for (std::size_t s = 0; s < 3; ++s) human[s].direction = unit_direction(dims, 2 * s + 1);
      break;
    case TextScenario::kDetector:
      follow_h = 0.5;
      follow_a = 0.9;
      break;
  }
  Corpus out;
  Rng rng(o.seed);
  char buf[32];
  for (std::size_t i = 0; i < o.pairs; ++i) {
    std::snprintf(buf, sizeof buf, "%05zu", i + 1);
    const std::string pair = std::string("p") + buf;
    out.push_back(make_document(std::string("h") + buf, pair, true, o, human, follow_h, rng));
    out.push_back(make_document(std::string("a") + buf, pair, false, o, ai, follow_a, rng));
  }
  return out;
}

// ---- chess --------------------------------------------------------------------

namespace {

using chess::Color;
using chess::Move;
using chess::Position;

bool both_castled(const bool castled[2]) { return castled[0] && castled[1]; }

// Chooses a move by weights that depend on the (online) phase. The opening
// develops minor pieces, castles and trades until enough units are gone; the
// middle game avoids captures so the board stays full until the tail.
Move pick(const Position& pos, const std::vector<Move>& legal, chess::Phase phase, bool computer,
          bool middle_effect, int exchanges, Rng& rng) {
  std::vector<double> w(legal.size(), 1.0);
  bool any_non_pawn = false;
  for (const auto& m : legal) any_non_pawn |= pos.at(m.from).type != chess::kPawn;
  const int home = pos.side_to_move() == chess::kWhite ? 0 : 7;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    const auto& m = legal[i];
    const auto type = pos.at(m.from).type;
    const bool pawn = type == chess::kPawn;
    switch (phase) {
      case chess::Phase::kOpening:
        if (m.castle) w[i] = 1000.0;
        else if (type == chess::kKing || type == chess::kRook) w[i] = 0.02;
        else if ((type == chess::kKnight || type == chess::kBishop) && chess::rank_of(m.from) == home)
          w[i] = 6.0;
        if (m.capture) w[i] *= exchanges < 10 ? 60.0 : 0.05;
        break;
      case chess::Phase::kMiddle:
        if (m.capture) w[i] *= 0.02;
        if (middle_effect) {
          if (computer && pawn && any_non_pawn) w[i] = 0.0;
          if (!computer && pawn) w[i] *= 4.0;
        }
        break;
      case chess::Phase::kEnd:
        if (m.capture) w[i] *= 0.3;
        break;
    }
  }
  double total = 0;
  for (double x : w) total += x;
  if (total <= 0) return legal[rng.below(legal.size())];
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    u -= w[i];
    if (u < 0) return legal[i];
  }
  return legal.back();
}

std::optional<chess::Game> try_game(const ChessOptions& o, std::size_t index, Rng& rng) {
  chess::Game g;
  Position pos = Position::start();
  const bool human_white = index % 2 == 0;
  int full_moves = o.full_moves;
  if (o.random_play) full_moves = 20 + static_cast<int>(rng.below(81));
  const std::size_t plies = static_cast<std::size_t>(2 * full_moves);
  chess::PhaseRules rules;
  const double frac = full_moves <= rules.tail_cutoff ? rules.tail_short : rules.tail_long;
  const int tail_start = full_moves - static_cast<int>(std::floor(frac * full_moves + 1e-9)) + 1;
  bool castled[2] = {false, false};
  int exchanges = 0;
  bool endgame = false;
  for (std::size_t ply = 0; ply < plies; ++ply) {
    const auto legal = pos.legal_moves();
    if (legal.empty()) return std::nullopt;
    const int m = static_cast<int>(ply / 2) + 1;
    chess::Phase phase = chess::Phase::kMiddle;
    if (endgame || m >= tail_start) phase = chess::Phase::kEnd;
    else if (m <= rules.opening_max_move || exchanges <= rules.opening_max_exchanges ||
             !both_castled(castled))
      phase = chess::Phase::kOpening;
    const Color mover = pos.side_to_move();
    const bool computer = (mover == chess::kWhite) != human_white;
    const Move mv = o.random_play ? legal[rng.below(legal.size())]
                                  : pick(pos, legal, phase, computer, o.middle_effect, exchanges, rng);
    if (mv.capture) ++exchanges;
    if (mv.castle) castled[mover] = true;
    g.san.push_back(chess::to_san(pos, mv));
    g.moves.push_back(mv);
    pos = pos.play(mv);
    if (mover == chess::kBlack &&
        (pos.piece_count() <= rules.endgame_max_pieces ||
         (pos.king_mobility(chess::kWhite) >= rules.king_min_mobility &&
          pos.king_mobility(chess::kBlack) >= rules.king_min_mobility &&
          (chess::rank_of(pos.king(chess::kWhite)) == 2 || chess::rank_of(pos.king(chess::kWhite)) == 5) &&
          (chess::rank_of(pos.king(chess::kBlack)) == 2 || chess::rank_of(pos.king(chess::kBlack)) == 5))))
      endgame = true;
  }
  char id[32];
  std::snprintf(id, sizeof id, "g%05zu", index + 1);
  g.index = index + 1;
  g.headers = {{"Event", "synthetic"},
               {"Site", "-"},
               {"Date", "2024.01.01"},
               {"Round", std::to_string(index + 1)},
               {"White", human_white ? "human" : "engine"},
               {"Black", human_white ? "engine" : "human"},
               {"Result", "*"},
               {"GameId", id},
               {"WhiteElo", std::to_string(1200 + rng.below(1200))},
               {"BlackElo", std::to_string(1200 + rng.below(1200))},
               {"WhiteIsComp", human_white ? "No" : "Yes"},
               {"BlackIsComp", human_white ? "Yes" : "No"}};
  return g;
}

}  // namespace

std::vector<chess::Game> chess_games(const ChessOptions& o) {
  std::vector<chess::Game> out;
  for (std::size_t i = 0; i < o.games; ++i) {
    Rng rng(derive_seed(o.seed, i));
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000) throw DataError("synth", "could not complete a synthetic game");
      if (auto g = try_game(o, i, rng)) {
        out.push_back(std::move(*g));
        break;
      }
    }
  }
  return out;
}

}  // namespace segdiff::synth
