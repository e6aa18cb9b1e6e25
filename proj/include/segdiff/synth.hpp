#pragma once

// Seeded synthetic corpora and chess games with known, constructed effects.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "segdiff/chess/pgn.hpp"
#include "segdiff/corpus.hpp"

namespace segdiff::synth {

enum class TextScenario {
  kNull,            // human and AI documents come from one process
  kBodyGap,         // human and AI differ in the body only
  kSegmentVarying,  // human style changes across segments, AI style does not
  kDetector,        // AI texts follow a word chain closely, human texts are noisy
};
std::string_view to_string(TextScenario s);
TextScenario parse_scenario(std::string_view s);

struct TextOptions {
  TextScenario scenario = TextScenario::kNull;
  std::size_t pairs = 200;
  std::uint64_t seed = 0;
  std::string domain = "news";
  std::size_t sentences_per_segment = 4;
  std::size_t words_per_sentence = 10;
  std::size_t embedding_dims = 8;
};

// One human and one AI document per pair, with segments_e texts, sentence
// embeddings and a constant-score detector annotation.
Corpus text_corpus(const TextOptions& options);

// Pseudo-word vocabulary shared by all scenarios (no collisions with the
// stopword or abbreviation lists).
const std::vector<std::string>& vocabulary();

struct ChessOptions {
  std::size_t games = 500;
  std::uint64_t seed = 0;
  int full_moves = 60;
  // The computer side avoids pawn moves in the middle game.
  bool middle_effect = true;
  // Uniformly random legal moves of random length (for round-trip tests).
  bool random_play = false;
};

std::vector<chess::Game> chess_games(const ChessOptions& options);

}  // namespace segdiff::synth
