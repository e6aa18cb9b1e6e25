#include <doctest.h>

#include "perft_oracle.hpp"
#include "segdiff/chess/board.hpp"
#include "segdiff/error.hpp"
#include "segdiff/rng.hpp"

using namespace segdiff::chess;

namespace {

const char* kKiwipete = "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1";
const char* kPosition3 = "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1";
const char* kPosition4 = "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1";

}  // namespace

TEST_CASE("perft from the start position") {
  const auto p = Position::start();
  CHECK(p.fen() == oracle::kStartFen);
  for (int d = 1; d <= 4; ++d) CHECK(perft(p, d) == oracle::perft(oracle::kStartFen, d));
  // published counts as well
  CHECK(perft(p, 3) == 8902);
  CHECK(perft(p, 4) == 197281);
}

TEST_CASE("perft on tricky positions") {
  for (const char* fen : {kKiwipete, kPosition3, kPosition4}) {
    CAPTURE(fen);
    const auto p = Position::from_fen(fen);
    for (int d = 1; d <= 3; ++d) CHECK(perft(p, d) == oracle::perft(fen, d));
  }
  CHECK(perft(Position::from_fen(kKiwipete), 3) == 97862);
  CHECK(perft(Position::from_fen(kPosition3), 4) == 43238);
}

TEST_CASE("perft along random games") {
  segdiff::Rng rng(12);
  for (int g = 0; g < 20; ++g) {
    auto p = Position::start();
    for (int ply = 0; ply < 60; ++ply) {
      auto legal = p.legal_moves();
      if (legal.empty()) break;
      p = p.play(legal[rng.below(legal.size())]);
      if (ply % 15 == 14) {
        const auto fen = p.fen();
        CAPTURE(fen);
        CHECK(perft(p, 2) == oracle::perft(fen, 2));
      }
    }
  }
}

TEST_CASE("FEN round trip and errors") {
  for (const char* fen : {kKiwipete, kPosition3, kPosition4, oracle::kStartFen})
    CHECK(Position::from_fen(fen).fen() == fen);
  CHECK_THROWS_AS(Position::from_fen("not a fen"), segdiff::InvalidArgument);
  CHECK_THROWS_AS(Position::from_fen("8/8/8/8/8/8/8/8 w - - 0 1"), segdiff::InvalidArgument);
}

TEST_CASE("squares") {
  CHECK(square_name(0) == "a1");
  CHECK(square_name(63) == "h8");
  CHECK(parse_square("e4") == make_square(4, 3));
  CHECK(parse_square("i9") == -1);
}

TEST_CASE("SAN parsing and formatting") {
  auto p = Position::start();
  auto e4 = parse_san(p, "e4");
  CHECK(square_name(e4.from) == "e2");
  CHECK(square_name(e4.to) == "e4");
  CHECK(to_san(p, e4) == "e4");
  CHECK(to_san(p, parse_san(p, "Nf3")) == "Nf3");
  CHECK_THROWS_AS(parse_san(p, "Ke3"), segdiff::InvalidArgument);
  CHECK_THROWS_AS(parse_san(p, "e5"), segdiff::InvalidArgument);
  CHECK_THROWS_AS(parse_san(p, "Zz9"), segdiff::InvalidArgument);

  // every legal move of the tricky positions survives format -> parse
  for (const char* fen : {kKiwipete, kPosition3, kPosition4}) {
    const auto q = Position::from_fen(fen);
    for (const auto& m : q.legal_moves()) {
      const auto s = to_san(q, m);
      CAPTURE(s);
      CHECK(parse_san(q, s) == m);
    }
  }
  const auto k = Position::from_fen(kKiwipete);
  CHECK(to_san(k, parse_san(k, "O-O")) == "O-O");
  CHECK(to_san(k, parse_san(k, "0-0-0")) == "O-O-O");
}

TEST_CASE("check, mate and disambiguation") {
  // Scholar's mate
  auto p = Position::start();
  for (const char* s : {"e4", "e5", "Bc4", "Nc6", "Qh5", "Nf6"}) p = p.play(parse_san(p, s));
  const auto mate = parse_san(p, "Qxf7");
  CHECK(to_san(p, mate) == "Qxf7#");
  CHECK(p.play(mate).legal_moves().empty());
  CHECK(p.play(mate).in_check());

  // two rooks on one rank
  const auto r = Position::from_fen("4k3/8/8/8/8/4K3/8/R6R w - - 0 1");
  CHECK(to_san(r, parse_san(r, "Rad1")) == "Rad1");
  CHECK_THROWS_AS(parse_san(r, "Rd1"), segdiff::InvalidArgument);
  // two knights on one file
  const auto n = Position::from_fen("4k3/8/8/1N6/8/1N6/8/4K3 w - - 0 1");
  CHECK(to_san(n, parse_san(n, "N5d4")) == "N5d4");
  // promotion with check
  const auto pr = Position::from_fen("7k/P7/8/8/8/8/8/K7 w - - 0 1");
  CHECK(to_san(pr, parse_san(pr, "a8=Q")) == "a8=Q+");
}

TEST_CASE("material and counts") {
  const auto p = Position::start();
  CHECK(p.piece_count() == 32);
  CHECK(p.material_balance(kWhite) == 0);
  CHECK(p.king_mobility(kWhite) == 0);
  const auto q = Position::from_fen("4k3/8/8/8/3K4/8/8/7Q w - - 0 1");
  CHECK(q.material_balance(kWhite) == 9);
  CHECK(q.material_balance(kBlack) == -9);
  CHECK(q.king_mobility(kWhite) == 8);
}
