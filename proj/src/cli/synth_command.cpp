#include "common.hpp"
#include "segdiff/chess/pgn.hpp"
#include "segdiff/synth.hpp"

namespace segdiff::cli {

void cmd_synth(const RunConfig& c, Output& out) {
  if (c.scenario == "chess") {
    synth::ChessOptions o;
    o.games = c.games;
    o.seed = c.seed;
    o.middle_effect = c.middle_effect;
    o.random_play = c.random_play;
    std::string pgn;
    for (const auto& g : synth::chess_games(o)) {
      pgn += chess::write_pgn(g);
      pgn += '\n';
    }
    out.add("games.pgn", pgn);
    return;
  }
  synth::TextOptions o;
  o.scenario = synth::parse_scenario(c.scenario);
  o.pairs = c.pairs;
  o.seed = c.seed;
  o.domain = c.domain;
  out.add("corpus.jsonl", serialize_corpus(synth::text_corpus(o)));
}

}  // namespace segdiff::cli
