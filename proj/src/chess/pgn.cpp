#include "segdiff/chess/pgn.hpp"

#include <cctype>
#include <istream>
#include <sstream>

#include "segdiff/error.hpp"

namespace segdiff::chess {

std::optional<std::string> Game::header(const std::string& key) const {
  for (const auto& [k, v] : headers)
    if (k == key) return v;
  return std::nullopt;
}

std::string Game::id() const {
  if (auto v = header("GameId"); v && !v->empty()) return *v;
  return std::to_string(index);
}

bool Game::is_computer(Color c) const {
  auto v = header(c == kWhite ? "WhiteIsComp" : "BlackIsComp");
  if (!v) return false;
  std::string s;
  for (char ch : *v) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s == "yes" || s == "1" || s == "true";
}

Position Game::initial() const {
  if (auto fen = header("FEN")) return Position::from_fen(*fen);
  return Position::start();
}

std::vector<Position> Game::positions() const {
  std::vector<Position> out{initial()};
  for (const auto& m : moves) out.push_back(out.back().play(m));
  return out;
}

namespace {

const char* const kRoster[] = {"Event", "Site", "Date", "Round", "White", "Black", "Result"};

bool is_result(const std::string& t) {
  return t == "1-0" || t == "0-1" || t == "1/2-1/2" || t == "*";
}

class Reader {
 public:
  explicit Reader(const std::string& text) : s_(text) {}

  bool at_end() {
    skip_space();
    return i_ >= s_.size();
  }

  void skip_space() {
    while (i_ < s_.size()) {
      const char c = s_[i_];
      if (c == '%' && (i_ == 0 || s_[i_ - 1] == '\n')) {  // escape line
        skip_line();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++i_;
      } else {
        break;
      }
    }
  }

  void skip_line() {
    while (i_ < s_.size() && s_[i_] != '\n') ++i_;
  }

  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  std::size_t line() const {
    std::size_t n = 1;
    for (std::size_t k = 0; k < i_ && k < s_.size(); ++k) n += s_[k] == '\n';
    return n;
  }

  // Reads `[Key "Value"]`.
  std::pair<std::string, std::string> header(std::size_t game) {
    ++i_;  // '['
    skip_inline();
    std::string key;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
      key += s_[i_++];
    skip_inline();
    if (key.empty() || peek() != '"') fail(game, "malformed header");
    ++i_;
    std::string value;
    for (;;) {
      if (i_ >= s_.size() || s_[i_] == '\n') fail(game, "unterminated header value");
      char c = s_[i_++];
      if (c == '\\' && i_ < s_.size()) c = s_[i_++];
      else if (c == '"') break;
      value += c;
    }
    skip_inline();
    if (peek() != ']') fail(game, "malformed header");
    ++i_;
    return {key, value};
  }

  // Next movetext token; comments, variations and NAGs are consumed.
  std::string token(std::size_t game) {
    for (;;) {
      skip_space();
      if (i_ >= s_.size()) return {};
      const char c = s_[i_];
      if (c == '{') {
        const auto end = s_.find('}', i_);
        if (end == std::string::npos) fail(game, "unterminated comment");
        i_ = end + 1;
      } else if (c == ';') {
        skip_line();
      } else if (c == '(') {
        int depth = 0;
        do {
          if (i_ >= s_.size()) fail(game, "unterminated variation");
          if (s_[i_] == '{') {
            const auto end = s_.find('}', i_);
            if (end == std::string::npos) fail(game, "unterminated comment");
            i_ = end;
          } else if (s_[i_] == '(') {
            ++depth;
          } else if (s_[i_] == ')') {
            --depth;
          }
          ++i_;
        } while (depth > 0);
      } else if (c == ')') {
        fail(game, "unbalanced ')'");
      } else if (c == '$') {
        ++i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      } else if (c == '[') {
        return "[";
      } else {
        std::string t;
        while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) &&
               std::string_view("{}();[$").find(s_[i_]) == std::string_view::npos)
          t += s_[i_++];
        return t;
      }
    }
  }

  [[noreturn]] void fail(std::size_t game, const std::string& why) const {
    throw DataError("pgn", "game " + std::to_string(game) + " (line " + std::to_string(line()) +
                               "): " + why);
  }

 private:
  void skip_inline() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

// Strips move numbers ("12.", "12...", "12.e4") from a token.
std::string strip_number(const std::string& t) {
  std::size_t k = 0;
  while (k < t.size() && std::isdigit(static_cast<unsigned char>(t[k]))) ++k;
  if (k == 0 || k == t.size() || t[k] != '.') return t;
  while (k < t.size() && t[k] == '.') ++k;
  return t.substr(k);
}

}  // namespace

PgnResult parse_pgn_string(const std::string& text, const PgnOptions& options) {
  PgnResult out;
  Reader r(text);
  std::size_t index = 0;
  while (!r.at_end()) {
    Game g;
    g.index = ++index;
    while (!r.at_end() && r.peek() == '[') g.headers.push_back(r.header(index));
    std::string error;
    Position pos = g.initial();
    for (;;) {
      const std::string raw = r.token(index);
      if (raw.empty() || raw == "[") break;
      if (is_result(raw)) {
        g.result = raw;
        break;
      }
      const std::string tok = strip_number(raw);
      if (tok.empty()) continue;
      if (is_result(tok)) {
        g.result = tok;
        break;
      }
      if (!error.empty()) continue;  // keep reading to the end of this game
      const auto legal = pos.legal_moves();
      Move m;
      try {
        m = parse_san(pos, tok, legal);
      } catch (const InvalidArgument& e) {
        error = "ply " + std::to_string(g.moves.size() + 1) + ": illegal move '" + tok + "' (" +
                e.what() + ")";
        continue;
      }
      g.san.push_back(to_san(pos, m));
      g.moves.push_back(m);
      pos = pos.play(m);
    }
    if (g.headers.empty() && g.moves.empty() && error.empty()) continue;
    if (auto res = g.header("Result"); res && g.result == "*" && is_result(*res)) g.result = *res;
    if (error.empty() && options.strict) {
      for (const char* tag : kRoster)
        if (!g.header(tag)) {
          error = std::string("missing mandatory header '") + tag + "'";
          break;
        }
    }
    if (!error.empty()) {
      if (!options.skip_invalid)
        throw DataError("pgn", "game " + std::to_string(index) + ": " + error);
      out.excluded.push_back({index, g.id(), error});
      continue;
    }
    const std::size_t n = g.full_moves();
    if (options.filter_length && (n < options.min_moves || n > options.max_moves)) {
      out.excluded.push_back({index, g.id(),
                              std::to_string(n) + " full moves outside [" +
                                  std::to_string(options.min_moves) + ", " +
                                  std::to_string(options.max_moves) + "]"});
      continue;
    }
    out.games.push_back(std::move(g));
  }
  return out;
}

PgnResult parse_pgn(std::istream& in, const PgnOptions& options) {
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_pgn_string(buf.str(), options);
}

std::string write_pgn(const Game& game) {
  std::string out;
  for (const auto& [k, v] : game.headers) {
    std::string esc;
    for (char c : v) {
      if (c == '"' || c == '\\') esc += '\\';
      esc += c;
    }
    out += "[" + k + " \"" + esc + "\"]\n";
  }
  out += '\n';
  Position pos = game.initial();
  std::string line;
  auto emit = [&](const std::string& t) {
    if (!line.empty() && line.size() + 1 + t.size() > 79) {
      out += line + '\n';
      line.clear();
    }
    if (!line.empty()) line += ' ';
    line += t;
  };
  for (std::size_t i = 0; i < game.moves.size(); ++i) {
    if (pos.side_to_move() == kWhite) emit(std::to_string(pos.fullmove()) + ".");
    else if (i == 0) emit(std::to_string(pos.fullmove()) + "...");
    emit(to_san(pos, game.moves[i]));
    pos = pos.play(game.moves[i]);
  }
  emit(game.result);
  out += line + "\n\n";
  return out;
}

}  // namespace segdiff::chess
