#include "perft_oracle.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace {

// piece codes: +1..+6 white P N B R Q K, negative for black, 0 empty
enum { P = 1, N, B, R, Q, K };

struct Pos {
  int b[128] = {};
  int side = 1;  // +1 white, -1 black
  int castle = 0;  // 1 K, 2 Q, 4 k, 8 q
  int ep = -1;
};

struct Move {
  int from, to, promo = 0, flag = 0;  // flag 1 ep, 2 castle, 3 double push
};

const int kN[8] = {33, 31, 18, 14, -33, -31, -18, -14};
const int kKing[8] = {1, -1, 16, -16, 17, 15, -17, -15};
const int kDiag[4] = {17, 15, -17, -15};
const int kOrth[4] = {1, -1, 16, -16};

bool on(int sq) { return !(sq & 0x88); }

Pos parse(const std::string& fen) {
  Pos p;
  std::istringstream in(fen);
  std::string board, side, castle, ep;
  in >> board >> side >> castle >> ep;
  int rank = 7, file = 0;
  for (char c : board) {
    if (c == '/') {
      --rank;
      file = 0;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      file += c - '0';
    } else {
      const char* letters = "pnbrqk";
      int t = 0;
      for (int i = 0; i < 6; ++i)
        if (std::tolower(static_cast<unsigned char>(c)) == letters[i]) t = i + 1;
      if (!t) throw std::runtime_error("bad fen");
      p.b[rank * 16 + file] = std::isupper(static_cast<unsigned char>(c)) ? t : -t;
      ++file;
    }
  }
  p.side = side == "w" ? 1 : -1;
  for (char c : castle) {
    if (c == 'K') p.castle |= 1;
    if (c == 'Q') p.castle |= 2;
    if (c == 'k') p.castle |= 4;
    if (c == 'q') p.castle |= 8;
  }
  if (ep != "-") p.ep = (ep[1] - '1') * 16 + (ep[0] - 'a');
  return p;
}

// Is `sq` attacked by side `by`?
bool attacked(const Pos& p, int sq, int by) {
  const int pawn_from[2] = {by == 1 ? -15 : 15, by == 1 ? -17 : 17};
  for (int d : pawn_from)
    if (on(sq + d) && p.b[sq + d] == P * by) return true;
  for (int d : kN)
    if (on(sq + d) && p.b[sq + d] == N * by) return true;
  for (int d : kKing)
    if (on(sq + d) && p.b[sq + d] == K * by) return true;
  for (int d : kDiag)
    for (int s = sq + d; on(s); s += d) {
      if (p.b[s] == B * by || p.b[s] == Q * by) return true;
      if (p.b[s]) break;
    }
  for (int d : kOrth)
    for (int s = sq + d; on(s); s += d) {
      if (p.b[s] == R * by || p.b[s] == Q * by) return true;
      if (p.b[s]) break;
    }
  return false;
}

int king_sq(const Pos& p, int side) {
  for (int s = 0; s < 128; ++s)
    if (on(s) && p.b[s] == K * side) return s;
  return -1;
}

void pseudo(const Pos& p, std::vector<Move>& out) {
  const int me = p.side;
  for (int s = 0; s < 128; ++s) {
    if (!on(s)) continue;
    const int pc = p.b[s] * me;
    if (pc <= 0) continue;
    if (pc == P) {
      const int fwd = 16 * me;
      const int start = me == 1 ? 1 : 6, last = me == 1 ? 7 : 0;
      auto push = [&](int to, int flag) {
        if (to >> 4 == last)
          for (int pr : {Q, R, B, N}) out.push_back({s, to, pr, flag});
        else
          out.push_back({s, to, 0, flag});
      };
      if (on(s + fwd) && !p.b[s + fwd]) {
        push(s + fwd, 0);
        if (s >> 4 == start && !p.b[s + 2 * fwd]) out.push_back({s, s + 2 * fwd, 0, 3});
      }
      for (int d : {fwd + 1, fwd - 1}) {
        const int t = s + d;
        if (!on(t)) continue;
        if (p.b[t] * me < 0) push(t, 0);
        else if (t == p.ep) out.push_back({s, t, 0, 1});
      }
      continue;
    }
    auto step = [&](const int* dirs, int n, bool slide) {
      for (int i = 0; i < n; ++i)
        for (int t = s + dirs[i]; on(t); t += dirs[i]) {
          if (p.b[t] * me > 0) break;
          out.push_back({s, t});
          if (p.b[t] || !slide) break;
        }
    };
    if (pc == N) step(kN, 8, false);
    if (pc == B || pc == Q) step(kDiag, 4, true);
    if (pc == R || pc == Q) step(kOrth, 4, true);
    if (pc == K) {
      step(kKing, 8, false);
      const int home = me == 1 ? 4 : 0x74;
      const int ks = me == 1 ? 1 : 4, qs = me == 1 ? 2 : 8;
      if (s == home && !attacked(p, s, -me)) {
        if ((p.castle & ks) && !p.b[s + 1] && !p.b[s + 2] && p.b[s + 3] == R * me &&
            !attacked(p, s + 1, -me) && !attacked(p, s + 2, -me))
          out.push_back({s, s + 2, 0, 2});
        if ((p.castle & qs) && !p.b[s - 1] && !p.b[s - 2] && !p.b[s - 3] &&
            p.b[s - 4] == R * me && !attacked(p, s - 1, -me) && !attacked(p, s - 2, -me))
          out.push_back({s, s - 2, 0, 2});
      }
    }
  }
}

Pos make(const Pos& p, const Move& m) {
  Pos q = p;
  const int me = p.side;
  int pc = q.b[m.from];
  q.b[m.from] = 0;
  if (m.flag == 1) q.b[m.to - 16 * me] = 0;
  if (m.flag == 2) {
    if (m.to > m.from) {
      q.b[m.to - 1] = q.b[m.to + 1];
      q.b[m.to + 1] = 0;
    } else {
      q.b[m.to + 1] = q.b[m.to - 2];
      q.b[m.to - 2] = 0;
    }
  }
  if (m.promo) pc = m.promo * me;
  q.b[m.to] = pc;
  q.ep = m.flag == 3 ? m.from + 16 * me : -1;
  // rights vanish when the king or a rook leaves home or a rook is taken
  auto clear = [&](int sq) {
    if (sq == 0x04) q.castle &= ~3;
    if (sq == 0x74) q.castle &= ~12;
    if (sq == 0x00) q.castle &= ~2;
    if (sq == 0x07) q.castle &= ~1;
    if (sq == 0x70) q.castle &= ~8;
    if (sq == 0x77) q.castle &= ~4;
  };
  clear(m.from);
  clear(m.to);
  q.side = -me;
  return q;
}

std::uint64_t count(const Pos& p, int depth) {
  if (depth == 0) return 1;
  std::vector<Move> moves;
  pseudo(p, moves);
  std::uint64_t n = 0;
  for (const auto& m : moves) {
    const Pos q = make(p, m);
    if (attacked(q, king_sq(q, p.side), q.side)) continue;
    n += count(q, depth - 1);
  }
  return n;
}

}  // namespace

std::uint64_t perft(const std::string& fen, int depth) { return count(parse(fen), depth); }

}  // namespace oracle
