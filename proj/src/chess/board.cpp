#include "segdiff/chess/board.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "segdiff/error.hpp"

namespace segdiff::chess {

namespace {

constexpr int kKnightSteps[8][2] = {{1, 2}, {2, 1}, {2, -1}, {1, -2},
                                    {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}};
constexpr int kKingSteps[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                  {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
constexpr int kBishopDirs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
constexpr int kRookDirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

bool on_board(int f, int r) { return f >= 0 && f < 8 && r >= 0 && r < 8; }

int value_of(PieceType t) {
  switch (t) {
    case kPawn: return 1;
    case kKnight:
    case kBishop: return 3;
    case kRook: return 5;
    case kQueen: return 9;
    default: return 0;
  }
}

PieceType type_from_letter(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'P': return kPawn;
    case 'N': return kKnight;
    case 'B': return kBishop;
    case 'R': return kRook;
    case 'Q': return kQueen;
    case 'K': return kKing;
    default: return kNoPiece;
  }
}

}  // namespace

std::string square_name(Square s) {
  return {static_cast<char>('a' + file_of(s)), static_cast<char>('1' + rank_of(s))};
}

Square parse_square(std::string_view s) {
  if (s.size() != 2 || s[0] < 'a' || s[0] > 'h' || s[1] < '1' || s[1] > '8') return -1;
  return make_square(s[0] - 'a', s[1] - '1');
}

char piece_letter(PieceType t) { return " PNBRQK"[t]; }

void Position::set(Square s, Piece p) {
  board_[static_cast<std::size_t>(s)] = p;
  if (p.type == kKing) king_[p.color] = s;
}

Position Position::start() {
  return from_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1");
}

Position Position::from_fen(std::string_view fen) {
  std::istringstream in{std::string(fen)};
  std::string placement, side, castling, ep;
  int half = 0, full = 1;
  if (!(in >> placement >> side)) throw InvalidArgument("FEN: missing fields");
  if (!(in >> castling)) castling = "-";
  if (!(in >> ep)) ep = "-";
  if (!(in >> half)) half = 0;
  if (!(in >> full)) full = 1;
  Position p;
  int rank = 7, file = 0;
  for (char c : placement) {
    if (c == '/') {
      if (file != 8) throw InvalidArgument("FEN: bad rank length");
      --rank;
      file = 0;
    } else if (c >= '1' && c <= '8') {
      file += c - '0';
    } else {
      const PieceType t = type_from_letter(c);
      if (t == kNoPiece || !on_board(file, rank)) throw InvalidArgument("FEN: bad placement");
      p.set(make_square(file, rank), {t, std::isupper(static_cast<unsigned char>(c)) ? kWhite : kBlack});
      ++file;
    }
    if (file > 8) throw InvalidArgument("FEN: bad rank length");
  }
  if (rank != 0 || file != 8) throw InvalidArgument("FEN: bad placement");
  if (p.king_[kWhite] < 0 || p.king_[kBlack] < 0) throw InvalidArgument("FEN: missing king");
  if (side != "w" && side != "b") throw InvalidArgument("FEN: bad side to move");
  p.side_ = side == "w" ? kWhite : kBlack;
  for (char c : castling) {
    if (c == 'K') p.castling_ |= kWhiteShort;
    else if (c == 'Q') p.castling_ |= kWhiteLong;
    else if (c == 'k') p.castling_ |= kBlackShort;
    else if (c == 'q') p.castling_ |= kBlackLong;
    else if (c != '-') throw InvalidArgument("FEN: bad castling field");
  }
  p.ep_ = ep == "-" ? -1 : parse_square(ep);
  if (ep != "-" && p.ep_ < 0) throw InvalidArgument("FEN: bad en passant square");
  p.halfmove_ = half;
  p.fullmove_ = full;
  return p;
}

std::string Position::fen() const {
  std::string out;
  for (int r = 7; r >= 0; --r) {
    int gap = 0;
    for (int f = 0; f < 8; ++f) {
      const Piece& pc = at(make_square(f, r));
      if (pc.empty()) {
        ++gap;
        continue;
      }
      if (gap) out += static_cast<char>('0' + gap);
      gap = 0;
      const char c = piece_letter(pc.type);
      out += pc.color == kWhite ? c : static_cast<char>(std::tolower(c));
    }
    if (gap) out += static_cast<char>('0' + gap);
    if (r) out += '/';
  }
  out += side_ == kWhite ? " w " : " b ";
  std::string c;
  if (castling_ & kWhiteShort) c += 'K';
  if (castling_ & kWhiteLong) c += 'Q';
  if (castling_ & kBlackShort) c += 'k';
  if (castling_ & kBlackLong) c += 'q';
  out += c.empty() ? "-" : c;
  out += ' ';
  out += ep_ < 0 ? "-" : square_name(ep_);
  out += ' ' + std::to_string(halfmove_) + ' ' + std::to_string(fullmove_);
  return out;
}

bool Position::attacked(Square s, Color by) const {
  const int f = file_of(s), r = rank_of(s);
  const int pawn_dir = by == kWhite ? -1 : 1;  // attacking pawns sit behind s
  for (int df : {-1, 1}) {
    const int pf = f + df, pr = r + pawn_dir;
    if (on_board(pf, pr)) {
      const Piece& p = at(make_square(pf, pr));
      if (p.type == kPawn && p.color == by) return true;
    }
  }
  for (const auto& st : kKnightSteps) {
    const int nf = f + st[0], nr = r + st[1];
    if (!on_board(nf, nr)) continue;
    const Piece& p = at(make_square(nf, nr));
    if (p.type == kKnight && p.color == by) return true;
  }
  for (const auto& st : kKingSteps) {
    const int nf = f + st[0], nr = r + st[1];
    if (!on_board(nf, nr)) continue;
    const Piece& p = at(make_square(nf, nr));
    if (p.type == kKing && p.color == by) return true;
  }
  auto slide = [&](const int (*dirs)[2], PieceType a, PieceType b) {
    for (int d = 0; d < 4; ++d) {
      int nf = f + dirs[d][0], nr = r + dirs[d][1];
      while (on_board(nf, nr)) {
        const Piece& p = at(make_square(nf, nr));
        if (!p.empty()) {
          if (p.color == by && (p.type == a || p.type == b)) return true;
          break;
        }
        nf += dirs[d][0];
        nr += dirs[d][1];
      }
    }
    return false;
  };
  return slide(kBishopDirs, kBishop, kQueen) || slide(kRookDirs, kRook, kQueen);
}

void Position::pseudo_moves(std::vector<Move>& out) const {
  const Color us = side_;
  for (Square s = 0; s < 64; ++s) {
    const Piece& pc = at(s);
    if (pc.empty() || pc.color != us) continue;
    const int f = file_of(s), r = rank_of(s);
    auto add = [&](Square to, bool capture) {
      out.push_back({s, to, kNoPiece, capture, false, false});
    };
    switch (pc.type) {
      case kPawn: {
        const int dir = us == kWhite ? 1 : -1;
        const int start_rank = us == kWhite ? 1 : 6;
        const int last_rank = us == kWhite ? 7 : 0;
        auto push = [&](Square to, bool capture, bool ep) {
          if (rank_of(to) == last_rank) {
            for (PieceType t : {kQueen, kRook, kBishop, kKnight})
              out.push_back({s, to, t, capture, false, false});
          } else {
            out.push_back({s, to, kNoPiece, capture, ep, false});
          }
        };
        if (on_board(f, r + dir) && at(make_square(f, r + dir)).empty()) {
          push(make_square(f, r + dir), false, false);
          if (r == start_rank && at(make_square(f, r + 2 * dir)).empty())
            push(make_square(f, r + 2 * dir), false, false);
        }
        for (int df : {-1, 1}) {
          const int nf = f + df, nr = r + dir;
          if (!on_board(nf, nr)) continue;
          const Square to = make_square(nf, nr);
          const Piece& t = at(to);
          if (!t.empty() && t.color != us) push(to, true, false);
          else if (to == ep_) push(to, true, true);
        }
        break;
      }
      case kKnight:
      case kKing: {
        const auto& steps = pc.type == kKnight ? kKnightSteps : kKingSteps;
        for (const auto& st : steps) {
          const int nf = f + st[0], nr = r + st[1];
          if (!on_board(nf, nr)) continue;
          const Piece& t = at(make_square(nf, nr));
          if (t.empty()) add(make_square(nf, nr), false);
          else if (t.color != us) add(make_square(nf, nr), true);
        }
        break;
      }
      case kBishop:
      case kRook:
      case kQueen: {
        auto slide = [&](const int (*dirs)[2]) {
          for (int d = 0; d < 4; ++d) {
            int nf = f + dirs[d][0], nr = r + dirs[d][1];
            while (on_board(nf, nr)) {
              const Piece& t = at(make_square(nf, nr));
              if (t.empty()) {
                add(make_square(nf, nr), false);
              } else {
                if (t.color != us) add(make_square(nf, nr), true);
                break;
              }
              nf += dirs[d][0];
              nr += dirs[d][1];
            }
          }
        };
        if (pc.type != kRook) slide(kBishopDirs);
        if (pc.type != kBishop) slide(kRookDirs);
        break;
      }
      default: break;
    }
  }
  // Castling: squares between empty, king not in check, not passing through check.
  const Color them = opponent(us);
  const int home = us == kWhite ? 0 : 7;
  const Square k = make_square(4, home);
  if (king_[us] == k && !attacked(k, them)) {
    const std::uint8_t short_bit = us == kWhite ? kWhiteShort : kBlackShort;
    const std::uint8_t long_bit = us == kWhite ? kWhiteLong : kBlackLong;
    const Piece rook{kRook, us};
    if ((castling_ & short_bit) && at(make_square(7, home)) == rook &&
        at(make_square(5, home)).empty() && at(make_square(6, home)).empty() &&
        !attacked(make_square(5, home), them) && !attacked(make_square(6, home), them))
      out.push_back({k, make_square(6, home), kNoPiece, false, false, true});
    if ((castling_ & long_bit) && at(make_square(0, home)) == rook &&
        at(make_square(1, home)).empty() && at(make_square(2, home)).empty() &&
        at(make_square(3, home)).empty() && !attacked(make_square(3, home), them) &&
        !attacked(make_square(2, home), them))
      out.push_back({k, make_square(2, home), kNoPiece, false, false, true});
  }
}

Position Position::play(const Move& m) const {
  Position p = *this;
  const Piece moving = at(m.from);
  const Color us = side_;
  p.set(m.from, {});
  if (m.en_passant) p.set(make_square(file_of(m.to), rank_of(m.from)), {});
  p.set(m.to, m.promotion != kNoPiece ? Piece{m.promotion, us} : moving);
  if (m.castle) {
    const int home = rank_of(m.from);
    if (file_of(m.to) == 6) {
      p.set(make_square(7, home), {});
      p.set(make_square(5, home), {kRook, us});
    } else {
      p.set(make_square(0, home), {});
      p.set(make_square(3, home), {kRook, us});
    }
  }
  // Any move from or to a corner or king square clears the matching rights.
  auto clear = [&](Square s) {
    if (s == make_square(4, 0)) p.castling_ &= static_cast<std::uint8_t>(~(kWhiteShort | kWhiteLong));
    if (s == make_square(4, 7)) p.castling_ &= static_cast<std::uint8_t>(~(kBlackShort | kBlackLong));
    if (s == make_square(7, 0)) p.castling_ &= static_cast<std::uint8_t>(~kWhiteShort);
    if (s == make_square(0, 0)) p.castling_ &= static_cast<std::uint8_t>(~kWhiteLong);
    if (s == make_square(7, 7)) p.castling_ &= static_cast<std::uint8_t>(~kBlackShort);
    if (s == make_square(0, 7)) p.castling_ &= static_cast<std::uint8_t>(~kBlackLong);
  };
  clear(m.from);
  clear(m.to);
  p.ep_ = -1;
  if (moving.type == kPawn && std::abs(rank_of(m.to) - rank_of(m.from)) == 2)
    p.ep_ = make_square(file_of(m.from), (rank_of(m.from) + rank_of(m.to)) / 2);
  p.halfmove_ = (moving.type == kPawn || m.capture) ? 0 : halfmove_ + 1;
  if (us == kBlack) ++p.fullmove_;
  p.side_ = opponent(us);
  return p;
}

std::vector<Move> Position::legal_moves() const {
  std::vector<Move> pseudo, out;
  pseudo.reserve(64);
  pseudo_moves(pseudo);
  for (const auto& m : pseudo) {
    const Position next = play(m);
    if (!next.attacked(next.king_[side_], next.side_)) out.push_back(m);
  }
  return out;
}

int Position::piece_count() const {
  int n = 0;
  for (const auto& p : board_) n += !p.empty();
  return n;
}

int Position::material_balance(Color c) const {
  int v = 0;
  for (const auto& p : board_)
    if (!p.empty()) v += (p.color == c ? 1 : -1) * value_of(p.type);
  return v;
}

int Position::king_mobility(Color c) const {
  const Square k = king_[c];
  Position probe = *this;
  probe.set(k, {});  // the king must not shield squares behind it
  int n = 0;
  for (const auto& st : kKingSteps) {
    const int nf = file_of(k) + st[0], nr = rank_of(k) + st[1];
    if (!on_board(nf, nr)) continue;
    const Square to = make_square(nf, nr);
    const Piece& t = at(to);
    if (!t.empty() && t.color == c) continue;
    Position after = probe;
    after.board_[static_cast<std::size_t>(to)] = {kKing, c};
    if (!after.attacked(to, opponent(c))) ++n;
  }
  return n;
}

std::uint64_t perft(const Position& p, int depth) {
  if (depth == 0) return 1;
  const auto moves = p.legal_moves();
  if (depth == 1) return moves.size();
  std::uint64_t n = 0;
  for (const auto& m : moves) n += perft(p.play(m), depth - 1);
  return n;
}

std::string to_san_core(const Position& p, const Move& m, const std::vector<Move>& legal) {
  if (m.castle) return file_of(m.to) == 6 ? "O-O" : "O-O-O";
  const PieceType t = p.at(m.from).type;
  std::string out;
  if (t == kPawn) {
    if (m.capture) out += static_cast<char>('a' + file_of(m.from));
  } else {
    out += piece_letter(t);
    bool ambiguous = false, same_file = false, same_rank = false;
    for (const auto& o : legal) {
      if (o.to != m.to || o.from == m.from || p.at(o.from).type != t) continue;
      ambiguous = true;
      same_file |= file_of(o.from) == file_of(m.from);
      same_rank |= rank_of(o.from) == rank_of(m.from);
    }
    if (ambiguous) {
      if (!same_file) out += static_cast<char>('a' + file_of(m.from));
      else if (!same_rank) out += static_cast<char>('1' + rank_of(m.from));
      else out += square_name(m.from);
    }
  }
  if (m.capture) out += 'x';
  out += square_name(m.to);
  if (m.promotion != kNoPiece) {
    out += '=';
    out += piece_letter(m.promotion);
  }
  return out;
}

std::string to_san(const Position& p, const Move& m) {
  const auto legal = p.legal_moves();
  std::string out = to_san_core(p, m, legal);
  const Position next = p.play(m);
  if (next.in_check()) out += next.legal_moves().empty() ? '#' : '+';
  return out;
}

Move parse_san(const Position& p, std::string_view san) {
  return parse_san(p, san, p.legal_moves());
}

Move parse_san(const Position& p, std::string_view san_in, const std::vector<Move>& legal) {
  std::string san(san_in);
  while (!san.empty() && std::string_view("+#!?").find(san.back()) != std::string_view::npos)
    san.pop_back();
  auto fail = [&](const std::string& why) -> Move {
    throw InvalidArgument("SAN '" + std::string(san_in) + "': " + why);
  };
  if (san.empty()) return fail("empty");
  std::replace(san.begin(), san.end(), '0', 'O');
  if (san == "O-O" || san == "O-O-O") {
    const int file = san == "O-O" ? 6 : 2;
    for (const auto& m : legal)
      if (m.castle && file_of(m.to) == file) return m;
    return fail("illegal castling");
  }
  // Piece letter, optional origin hints, optional 'x', target, optional promotion.
  PieceType piece = kPawn;
  std::size_t i = 0;
  if (std::isupper(static_cast<unsigned char>(san[0]))) {
    piece = type_from_letter(san[0]);
    if (piece == kNoPiece || piece == kPawn) return fail("bad piece letter");
    i = 1;
  }
  PieceType promo = kNoPiece;
  if (auto eq = san.find('='); eq != std::string::npos) {
    if (eq + 2 != san.size()) return fail("bad promotion");
    promo = type_from_letter(san[eq + 1]);
    san.resize(eq);
  } else if (piece == kPawn && san.size() >= 3 &&
             std::isupper(static_cast<unsigned char>(san.back()))) {
    promo = type_from_letter(san.back());  // "e8Q"
    san.pop_back();
  }
  if (san.size() < i + 2) return fail("missing target square");
  const Square to = parse_square(std::string_view(san).substr(san.size() - 2));
  if (to < 0) return fail("bad target square");
  std::string hints = san.substr(i, san.size() - 2 - i);
  bool capture = false;
  if (!hints.empty() && hints.back() == 'x') {
    capture = true;
    hints.pop_back();
  }
  int from_file = -1, from_rank = -1;
  for (char c : hints) {
    if (c >= 'a' && c <= 'h') from_file = c - 'a';
    else if (c >= '1' && c <= '8') from_rank = c - '1';
    else return fail("bad disambiguation");
  }
  const Move* found = nullptr;
  for (const auto& m : legal) {
    if (m.castle || m.to != to || p.at(m.from).type != piece || m.promotion != promo) continue;
    if (from_file >= 0 && file_of(m.from) != from_file) continue;
    if (from_rank >= 0 && rank_of(m.from) != from_rank) continue;
    if (capture && !m.capture) continue;
    if (found) return fail("ambiguous");
    found = &m;
  }
  if (!found) return fail("illegal in this position");
  return *found;
}

}  // namespace segdiff::chess
