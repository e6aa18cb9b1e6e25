#pragma once

// PGN export-format reader and writer.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "segdiff/chess/board.hpp"

namespace segdiff::chess {

struct Game {
  std::vector<std::pair<std::string, std::string>> headers;  // file order, verbatim
  std::vector<std::string> san;                              // canonical SAN per ply
  std::vector<Move> moves;
  std::string result = "*";
  std::size_t index = 0;  // 1-based position in the source file

  std::optional<std::string> header(const std::string& key) const;
  // GameId header, else the 1-based index.
  std::string id() const;
  std::size_t plies() const { return moves.size(); }
  std::size_t full_moves() const { return (moves.size() + 1) / 2; }
  // From the WhiteIsComp / BlackIsComp headers.
  bool is_computer(Color c) const;
  Position initial() const;  // honours a FEN header (with SetUp "1")
  // Positions before each ply plus the final one (plies() + 1 entries).
  std::vector<Position> positions() const;
};

struct PgnOptions {
  bool strict = false;        // require the seven-tag roster
  bool filter_length = true;  // keep only games within [min_moves, max_moves] full moves
  std::size_t min_moves = 30;
  std::size_t max_moves = 100;
  bool skip_invalid = false;  // record illegal games in `excluded` instead of throwing
};

struct ExcludedGame {
  std::size_t index = 0;
  std::string id;
  std::string reason;
};

struct PgnResult {
  std::vector<Game> games;
  std::vector<ExcludedGame> excluded;
};

// Throws DataError("pgn") on malformed movetext, an illegal move (naming the
// game index and ply) or, in strict mode, missing roster tags.
PgnResult parse_pgn(std::istream& in, const PgnOptions& options = {});
PgnResult parse_pgn_string(const std::string& text, const PgnOptions& options = {});

// Export format with the moves regenerated from the tracked positions.
std::string write_pgn(const Game& game);

}  // namespace segdiff::chess
