// Collates earlier outputs into summary tables.

#include <filesystem>
#include <map>
#include <set>

#include "common.hpp"
#include "segdiff/error.hpp"

namespace segdiff::cli {

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  bool empty() const { return rows.empty(); }
};

// Rows of `name` from every input directory, in directory order.
Table gather(const std::vector<std::filesystem::path>& dirs, const std::string& name) {
  Table t;
  for (const auto& d : dirs) {
    const auto path = d / name;
    if (!std::filesystem::exists(path)) continue;
    const auto rows = io::parse_csv(io::read_file(path));
    if (rows.empty()) continue;
    if (t.header.empty()) t.header = rows[0];
    else if (t.header != rows[0])
      throw DataError("parse", path.string() + ": header differs from earlier inputs");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size())
        throw DataError("parse", path.string() + ": row " + std::to_string(i + 1) +
                                     " has the wrong number of fields");
      std::map<std::string, std::string> r;
      for (std::size_t k = 0; k < rows[0].size(); ++k) r[rows[0][k]] = rows[i][k];
      t.rows.push_back(std::move(r));
    }
  }
  return t;
}

std::string md_row(const std::vector<std::string>& cells) {
  std::string s = "|";
  for (const auto& c : cells) s += " " + c + " |";
  return s + "\n";
}

std::string md_table(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::string s = md_row(header);
  s += "|";
  for (std::size_t i = 0; i < header.size(); ++i) s += " --- |";
  s += "\n";
  for (const auto& r : rows) s += md_row(r);
  return s + "\n";
}

// Two decimals for display; the CSVs keep full precision.
std::string short_num(const std::string& v) {
  if (v.empty()) return v;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str()) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", d);
  return buf;
}

}  // namespace

void cmd_report(const RunConfig& c, Output& out) {
  std::vector<std::filesystem::path> dirs;
  for (const auto& d : c.inputs) dirs.emplace_back(d);
  if (dirs.empty()) dirs.emplace_back(c.out);

  std::string md = "# segdiff report\n\n";
  bool any = false;

  if (auto t = gather(dirs, "corpus_stats.csv"); !t.empty()) {
    any = true;
    std::vector<std::vector<std::string>> rows;
    for (auto& r : t.rows)
      rows.push_back({r["domain"], r["source"], r["n_texts"], short_num(r["avg_words"]),
                      short_num(r["avg_sentences"]), r["ibc"]});
    md += "## Corpus\n\n" +
          md_table({"dataset", "source", "texts", "avg words", "avg sentences", "I-B-C"}, rows);
  }

  if (auto t = gather(dirs, "segmentation_similarity_summary.csv"); !t.empty()) {
    any = true;
    std::vector<std::vector<std::string>> rows;
    for (auto& r : t.rows)
      rows.push_back({r["dataset"], r["source"], r["reference"] + " vs " + r["other"],
                      r["n_docs"], short_num(r["mean_similarity"])});
    md += "## Segmentation similarity\n\n" +
          md_table({"dataset", "source", "settings", "docs", "mean S"}, rows);
  }

  const auto src = gather(dirs, "compare_source.csv");
  const auto seg = gather(dirs, "compare_segment.csv");
  if (!src.empty() || !seg.empty()) {
    any = true;
    // (dataset, feature, setting) -> column -> verdict
    std::map<std::tuple<std::string, std::string, std::string>, std::map<std::string, std::string>>
        cells;
    for (auto r : src.rows) cells[{r["dataset"], r["feature"], r["setting"]}][r["comparison"]] = r["verdict"];
    for (auto r : seg.rows) cells[{r["dataset"], r["feature"], r["setting"]}]["segment"] = r["verdict"];
    const std::vector<std::string> cols = {"D(I,B)", "D(I,C)", "D(B,C)", "segment"};
    io::CsvWriter csv({"dataset", "feature", "setting", "D(I,B)", "D(I,C)", "D(B,C)", "segment"});
    std::vector<std::vector<std::string>> rows;
    for (auto& [key, m] : cells) {
      std::vector<std::string> row = {std::get<0>(key), std::get<1>(key), std::get<2>(key)};
      for (const auto& col : cols) row.push_back(m.count(col) ? m[col] : "");
      csv.row(row);
      rows.push_back(row);
    }
    out.add("table3.csv", csv.str());
    md += "## Significance tests\n\n" +
          md_table({"dataset", "feature", "setting", "D(I,B)", "D(I,C)", "D(B,C)", "segment"}, rows);
  }

  if (auto t = gather(dirs, "eval.csv"); !t.empty()) {
    any = true;
    std::map<std::pair<std::string, std::string>, std::map<std::string, std::string>> cells;
    for (auto& r : t.rows) {
      std::string cell = short_num(r["f1"]);
      if (!r["f1_change_pct"].empty() && r["strategy"] != "total")
        cell += " (" + short_num(r["f1_change_pct"]) + "%)";
      cell += " / FNR " + short_num(r["fnr"]);
      cells[{r["dataset"], r["detector"]}][r["strategy"]] = cell;
    }
    std::vector<std::vector<std::string>> rows;
    for (auto& [key, m] : cells)
      rows.push_back({key.first, key.second, m["total"], m["voting"], m["body-only"],
                      m["intro+conclusion"]});
    md += "## Detection (F1 / FNR)\n\n" +
          md_table({"dataset", "detector", "total", "voting", "body-only", "intro+conclusion"}, rows);
  }

  if (auto t = gather(dirs, "pair_eval.csv"); !t.empty()) {
    any = true;
    std::vector<std::vector<std::string>> rows;
    for (auto& r : t.rows)
      rows.push_back({r["dataset"], r["detector"], r["n_pairs"], short_num(r["base_accuracy"]),
                      short_num(r["plus_accuracy"])});
    md += "## Pair decisions\n\n" +
          md_table({"dataset", "detector", "pairs", "base", "plus"}, rows);
  }

  if (auto t = gather(dirs, "chess_phase_compare.csv"); !t.empty()) {
    any = true;
    std::vector<std::vector<std::string>> rows;
    for (auto& r : t.rows)
      if (r["feature"] == "mean")
        rows.push_back({r["phase"], short_num(r["jsd"]), short_num(r["jaccard"]), r["human_moves"],
                        r["ai_moves"]});
    md += "## Chess phases\n\n" +
          md_table({"phase", "mean JSD", "Jaccard", "human moves", "ai moves"}, rows);
  }
  if (auto t = gather(dirs, "chess_phase_tests.csv"); !t.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (auto& r : t.rows)
      rows.push_back({r["comparison"], r["n_games"], short_num(r["mean_middle"]),
                      short_num(r["mean_other"]), r["p_adj"], r["verdict"]});
    md += md_table({"comparison", "games", "middle", "other", "p_adj", "verdict"}, rows);
  }

  if (!any) throw DataError("no_inputs", "no result files found in the input directories");
  out.add("report.md", md);
}

}  // namespace segdiff::cli
