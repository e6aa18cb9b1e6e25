#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "segdiff/corpus.hpp"

namespace testutil {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(SEGDIFF_FIXTURES) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("segdiff-test-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline segdiff::Document doc(std::string id, std::string text, bool human = true,
                             std::string pair = {}) {
  segdiff::Document d;
  d.id = std::move(id);
  d.domain = segdiff::Domain::parse("news");
  d.source = human ? segdiff::Source::human() : segdiff::Source::model("gpt");
  d.text = std::move(text);
  if (!pair.empty()) d.pair_id = std::move(pair);
  return d;
}

// `n` sentences, sentence i having counts[i] words.
inline std::string sentences_with(const std::vector<int>& counts) {
  std::string s;
  int w = 0;
  for (int c : counts) {
    if (!s.empty()) s += ' ';
    for (int i = 0; i < c; ++i) {
      if (i) s += ' ';
      s += "w" + std::to_string(w++ % 97);
    }
    s += '.';
  }
  return s;
}

}  // namespace testutil
