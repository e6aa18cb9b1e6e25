#pragma once

// Board representation, legal move generation and SAN.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace segdiff::chess {

enum Color : std::uint8_t { kWhite = 0, kBlack = 1 };
inline Color opponent(Color c) { return c == kWhite ? kBlack : kWhite; }

enum PieceType : std::uint8_t { kNoPiece = 0, kPawn, kKnight, kBishop, kRook, kQueen, kKing };

struct Piece {
  PieceType type = kNoPiece;
  Color color = kWhite;
  bool empty() const { return type == kNoPiece; }
  friend bool operator==(const Piece&, const Piece&) = default;
};

// Squares are rank * 8 + file with a1 = 0, h8 = 63.
using Square = int;
inline int file_of(Square s) { return s & 7; }
inline int rank_of(Square s) { return s >> 3; }
inline Square make_square(int file, int rank) { return rank * 8 + file; }
std::string square_name(Square s);
Square parse_square(std::string_view s);  // -1 when invalid

char piece_letter(PieceType t);  // 'P', 'N', ..., 'K'

struct Move {
  Square from = 0;
  Square to = 0;
  PieceType promotion = kNoPiece;
  bool capture = false;
  bool en_passant = false;
  bool castle = false;
  friend bool operator==(const Move&, const Move&) = default;
};

// Castling-right bits.
inline constexpr std::uint8_t kWhiteShort = 1, kWhiteLong = 2, kBlackShort = 4, kBlackLong = 8;

class Position {
 public:
  static Position start();
  // Throws InvalidArgument on a malformed FEN.
  static Position from_fen(std::string_view fen);
  std::string fen() const;

  const Piece& at(Square s) const { return board_[static_cast<std::size_t>(s)]; }
  Color side_to_move() const { return side_; }
  std::uint8_t castling() const { return castling_; }
  Square en_passant() const { return ep_; }
  int fullmove() const { return fullmove_; }
  Square king(Color c) const { return king_[c]; }

  bool attacked(Square s, Color by) const;
  bool in_check() const { return attacked(king_[side_], opponent(side_)); }

  std::vector<Move> legal_moves() const;
  // Applies a move assumed legal.
  Position play(const Move& m) const;

  // Number of pieces of both colours, kings and pawns included.
  int piece_count() const;
  // Material of `c` minus material of the opponent (P1 N3 B3 R5 Q9).
  int material_balance(Color c) const;
  // Legal destinations of `c`'s king, ignoring castling and whose turn it is.
  int king_mobility(Color c) const;

 private:
  void pseudo_moves(std::vector<Move>& out) const;
  void set(Square s, Piece p);

  std::array<Piece, 64> board_{};
  Color side_ = kWhite;
  std::uint8_t castling_ = 0;
  Square ep_ = -1;
  int halfmove_ = 0;
  int fullmove_ = 1;
  std::array<Square, 2> king_{-1, -1};
};

std::uint64_t perft(const Position& p, int depth);

// SAN of a legal move in `p`, with '+' or '#' suffix.
std::string to_san(const Position& p, const Move& m);
// SAN without the check suffix, given the legal move list of `p`.
std::string to_san_core(const Position& p, const Move& m, const std::vector<Move>& legal);

// Resolves a SAN token (check marks, annotations, 0-0 accepted). Throws
// InvalidArgument when the token is malformed, illegal or ambiguous.
Move parse_san(const Position& p, std::string_view san);
Move parse_san(const Position& p, std::string_view san, const std::vector<Move>& legal);

}  // namespace segdiff::chess
