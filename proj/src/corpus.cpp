#include "segdiff/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "segdiff/error.hpp"
#include "segdiff/parallel.hpp"
#include "segdiff/segmenter.hpp"
#include "segdiff/text.hpp"

namespace segdiff {

using nlohmann::json;

Domain Domain::parse(const std::string& s) {
  if (s == "news") return {Kind::kNews, {}};
  if (s == "email") return {Kind::kEmail, {}};
  if (s == "essay") return {Kind::kEssay, {}};
  return {Kind::kOther, s};
}

std::string Domain::str() const {
  switch (kind) {
    case Kind::kNews: return "news";
    case Kind::kEmail: return "email";
    case Kind::kEssay: return "essay";
    case Kind::kOther: return name;
  }
  return name;
}

Source Source::parse(const std::string& s) {
  return s == "human" ? human() : model(s);
}

bool Annotations::empty() const {
  return !segments_e && !sentence_embeddings && !token_ppl && !pos_tags && !ner_tags &&
         detector_scores.empty() && extra.empty();
}

namespace {

const std::set<std::string> kDocumentKeys = {"id", "domain", "source", "text", "pair_id",
                                             "annotations"};
const std::set<std::string> kAnnotationKeys = {"segments_e", "sentence_embeddings", "token_ppl",
                                               "pos_tags", "ner_tags", "detector_scores"};
const std::set<std::string> kScopeKeys = {"total", "intro", "body", "conclusion",
                                          "intro+conclusion"};

const json& require(const json& obj, const std::string& key, std::size_t line,
                    const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(line, path + key, "missing required field");
  return *it;
}

std::string get_string(const json& v, std::size_t line, const std::string& field) {
  if (!v.is_string()) throw ParseError(line, field, "expected a string");
  return v.get<std::string>();
}

double get_number(const json& v, std::size_t line, const std::string& field) {
  if (!v.is_number()) throw ParseError(line, field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(line, field, "expected a finite number");
  return d;
}

std::vector<double> get_numbers(const json& v, std::size_t line, const std::string& field) {
  if (!v.is_array()) throw ParseError(line, field, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(get_number(x, line, field));
  return out;
}

std::vector<std::vector<std::string>> get_tag_matrix(const json& v, std::size_t line,
                                                     const std::string& field) {
  if (!v.is_array()) throw ParseError(line, field, "expected an array per sentence");
  std::vector<std::vector<std::string>> out;
  for (const auto& row : v) {
    if (!row.is_array()) throw ParseError(line, field, "expected an array of strings");
    auto& dst = out.emplace_back();
    for (const auto& t : row) dst.push_back(get_string(t, line, field));
  }
  return out;
}

Annotations parse_annotations(const json& a, std::size_t line) {
  if (!a.is_object()) throw ParseError(line, "annotations", "expected an object");
  Annotations out;
  for (auto it = a.begin(); it != a.end(); ++it)
    if (!kAnnotationKeys.count(it.key())) out.extra[it.key()] = it.value();

  if (auto it = a.find("segments_e"); it != a.end()) {
    const std::string f = "annotations.segments_e";
    if (!it->is_object()) throw ParseError(line, f, "expected an object");
    SegmentsE seg;
    if (it->contains("intro_end") || it->contains("body_end")) {
      const auto& ie = require(*it, "intro_end", line, f + ".");
      const auto& be = require(*it, "body_end", line, f + ".");
      if (!ie.is_number_unsigned() || !be.is_number_unsigned())
        throw ParseError(line, f, "sentence indices must be non-negative integers");
      seg.indices = {ie.get<std::size_t>(), be.get<std::size_t>()};
    } else {
      std::array<std::string, 3> texts;
      const char* keys[] = {"intro", "body", "conclusion"};
      for (int k = 0; k < 3; ++k)
        texts[k] = get_string(require(*it, keys[k], line, f + "."), line, f + "." + keys[k]);
      seg.texts = texts;
    }
    out.segments_e = seg;
  }
  if (auto it = a.find("sentence_embeddings"); it != a.end()) {
    const std::string f = "annotations.sentence_embeddings";
    if (!it->is_array()) throw ParseError(line, f, "expected an array of arrays");
    std::vector<std::vector<double>> rows;
    for (const auto& row : *it) rows.push_back(get_numbers(row, line, f));
    for (const auto& r : rows)
      if (r.size() != rows.front().size() || r.empty())
        throw ParseError(line, f, "embeddings must be non-empty and of equal length");
    out.sentence_embeddings = std::move(rows);
  }
  if (auto it = a.find("token_ppl"); it != a.end()) {
    auto v = get_numbers(*it, line, "annotations.token_ppl");
    for (double x : v)
      if (x <= 0.0) throw ParseError(line, "annotations.token_ppl", "perplexities must be > 0");
    out.token_ppl = std::move(v);
  }
  if (auto it = a.find("pos_tags"); it != a.end())
    out.pos_tags = get_tag_matrix(*it, line, "annotations.pos_tags");
  if (auto it = a.find("ner_tags"); it != a.end())
    out.ner_tags = get_tag_matrix(*it, line, "annotations.ner_tags");
  if (auto it = a.find("detector_scores"); it != a.end()) {
    const std::string f = "annotations.detector_scores";
    if (!it->is_object()) throw ParseError(line, f, "expected an object");
    for (auto d = it->begin(); d != it->end(); ++d) {
      if (!d->is_object()) throw ParseError(line, f + "." + d.key(), "expected an object");
      ScopeScores scores;
      for (auto s = d->begin(); s != d->end(); ++s) {
        const std::string sf = f + "." + d.key() + "." + s.key();
        if (!kScopeKeys.count(s.key())) throw ParseError(line, sf, "unknown scope");
        const double v = get_number(*s, line, sf);
        if (v < 0.0 || v > 1.0) throw ParseError(line, sf, "score outside [0, 1]");
        scores[s.key()] = v;
      }
      out.detector_scores[d.key()] = std::move(scores);
    }
  }
  return out;
}

// Annotations that index sentences or tokens must agree with our own split.
void check_alignment(const Document& doc, std::size_t line) {
  const auto& a = doc.annotations;
  if (!a.sentence_embeddings && !a.token_ppl && !a.pos_tags && !a.ner_tags) return;
  const auto sentences = text::split_sentences(doc.text);
  const std::size_t n = sentences.size();
  if (a.sentence_embeddings && a.sentence_embeddings->size() != n)
    throw ParseError(line, "annotations.sentence_embeddings",
                     "has " + std::to_string(a.sentence_embeddings->size()) +
                         " rows but the text splits into " + std::to_string(n) + " sentences");
  if (a.token_ppl && a.token_ppl->size() != sentences.total_words)
    throw ParseError(line, "annotations.token_ppl",
                     "has " + std::to_string(a.token_ppl->size()) +
                         " values but the text has " + std::to_string(sentences.total_words) +
                         " word tokens");
  auto check_tags = [&](const std::vector<std::vector<std::string>>& tags, const char* field) {
    if (tags.size() != n)
      throw ParseError(line, field,
                       "has " + std::to_string(tags.size()) + " sentences, expected " +
                           std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
      if (tags[i].size() != sentences[i].tokens.size())
        throw ParseError(line, field,
                         "sentence " + std::to_string(i) + " has " +
                             std::to_string(tags[i].size()) + " tags, expected " +
                             std::to_string(sentences[i].tokens.size()));
  };
  if (a.pos_tags) check_tags(*a.pos_tags, "annotations.pos_tags");
  if (a.ner_tags) check_tags(*a.ner_tags, "annotations.ner_tags");
}

}  // namespace

Document parse_document(const json& record, std::size_t line) {
  if (!record.is_object()) throw ParseError(line, "<record>", "expected a JSON object");
  Document doc;
  doc.id = get_string(require(record, "id", line, ""), line, "id");
  if (doc.id.empty()) throw ParseError(line, "id", "must not be empty");
  doc.domain = Domain::parse(get_string(require(record, "domain", line, ""), line, "domain"));
  doc.source = Source::parse(get_string(require(record, "source", line, ""), line, "source"));
  doc.text = get_string(require(record, "text", line, ""), line, "text");
  if (doc.text.find_first_not_of(" \t\r\n\f\v") == std::string::npos)
    throw ParseError(line, "text", "must not be blank");
  if (auto it = record.find("pair_id"); it != record.end() && !it->is_null())
    doc.pair_id = get_string(*it, line, "pair_id");
  if (auto it = record.find("annotations"); it != record.end() && !it->is_null())
    doc.annotations = parse_annotations(*it, line);
  for (auto it = record.begin(); it != record.end(); ++it)
    if (!kDocumentKeys.count(it.key())) doc.extra[it.key()] = it.value();
  check_alignment(doc, line);
  return doc;
}

json to_json(const Document& doc) {
  json j = doc.extra;
  j["id"] = doc.id;
  j["domain"] = doc.domain.str();
  j["source"] = doc.source.str();
  j["text"] = doc.text;
  if (doc.pair_id) j["pair_id"] = *doc.pair_id;
  const auto& a = doc.annotations;
  if (!a.empty()) {
    json ann = a.extra;
    if (a.segments_e) {
      if (a.segments_e->indices) {
        ann["segments_e"] = {{"intro_end", a.segments_e->indices->first},
                             {"body_end", a.segments_e->indices->second}};
      } else if (a.segments_e->texts) {
        const auto& t = *a.segments_e->texts;
        ann["segments_e"] = {{"intro", t[0]}, {"body", t[1]}, {"conclusion", t[2]}};
      }
    }
    if (a.sentence_embeddings) ann["sentence_embeddings"] = *a.sentence_embeddings;
    if (a.token_ppl) ann["token_ppl"] = *a.token_ppl;
    if (a.pos_tags) ann["pos_tags"] = *a.pos_tags;
    if (a.ner_tags) ann["ner_tags"] = *a.ner_tags;
    if (!a.detector_scores.empty()) ann["detector_scores"] = a.detector_scores;
    j["annotations"] = ann;
  }
  return j;
}

Corpus parse_corpus(const std::string& contents, const std::string& schema_version) {
  if (schema_version != kCorpusSchemaVersion)
    throw DataError("schema", "unknown schema_version '" + schema_version + "'");
  Corpus out;
  std::set<std::string> ids;
  std::istringstream in(contents);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(lineno, "<record>", std::string("invalid JSON: ") + e.what());
    }
    if (auto it = record.find("schema_version"); it != record.end()) {
      if (!it->is_string() || it->get<std::string>() != schema_version)
        throw ParseError(lineno, "schema_version", "does not match '" + schema_version + "'");
      record.erase("schema_version");
    }
    Document doc = parse_document(record, lineno);
    if (!ids.insert(doc.id).second)
      throw ParseError(lineno, "id", "duplicate id '" + doc.id + "'");
    out.push_back(std::move(doc));
  }
  if (out.empty()) throw DataError("parse", "no records");
  return out;
}

Corpus load_corpus(const std::filesystem::path& path, const std::string& schema_version) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("io", "cannot open corpus file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str(), schema_version);
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& d : corpus) {
    out += to_json(d).dump();
    out += '\n';
  }
  return out;
}

std::string CorpusStatsRow::ibc_label() const {
  return std::to_string(ibc_rounded[0]) + "-" + std::to_string(ibc_rounded[1]) + "-" +
         std::to_string(ibc_rounded[2]);
}

namespace {

// Largest-remainder rounding of percentages to integers summing to 100.
std::array<int, 3> round_to_100(const std::array<double, 3>& pct) {
  std::array<int, 3> out{};
  std::array<double, 3> rem{};
  int sum = 0;
  for (int k = 0; k < 3; ++k) {
    out[k] = static_cast<int>(std::floor(pct[k]));
    rem[k] = pct[k] - out[k];
    sum += out[k];
  }
  while (sum < 100) {
    int best = 0;
    for (int k = 1; k < 3; ++k)
      if (rem[k] > rem[best]) best = k;
    ++out[best];
    rem[best] = -1.0;
    ++sum;
  }
  return out;
}

struct DocCounts {
  bool skipped = false;
  std::string reason;
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::array<std::size_t, 3> segment_words{};
};

}  // namespace

CorpusStats corpus_stats(const Corpus& docs, Setting setting, std::uint64_t seed,
                         unsigned jobs) {
  std::vector<DocCounts> counts(docs.size());
  parallel_for(docs.size(), jobs, [&](std::size_t i) {
    const Document& d = docs[i];
    DocCounts& c = counts[i];
    const auto sentences = text::split_sentences(d.text);
    if (sentences.size() < 3) {
      c.skipped = true;
      c.reason = "fewer than 3 sentences (" + std::to_string(sentences.size()) + ")";
      return;
    }
    try {
      const Segmentation seg = segment_document(d, sentences, setting, seed);
      for (auto s : kSegments) {
        const auto r = seg.range(s);
        for (std::size_t k = r.first; k < r.last; ++k)
          c.segment_words[static_cast<int>(s)] += sentences[k].words;
      }
    } catch (const DataError& e) {
      c.skipped = true;
      c.reason = e.what();
      return;
    }
    c.words = sentences.total_words;
    c.sentences = sentences.size();
  });

  struct Acc {
    std::size_t n = 0, words = 0, sentences = 0;
    std::array<std::size_t, 3> seg{};
  };
  std::map<std::pair<std::string, std::string>, Acc> acc;
  CorpusStats out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& c = counts[i];
    if (c.skipped) {
      out.skipped.push_back({docs[i].id, c.reason});
      continue;
    }
    auto& a = acc[{docs[i].domain.str(), docs[i].source.source_class()}];
    ++a.n;
    a.words += c.words;
    a.sentences += c.sentences;
    for (int k = 0; k < 3; ++k) a.seg[k] += c.segment_words[k];
  }
  for (const auto& [key, a] : acc) {
    CorpusStatsRow row;
    row.domain = key.first;
    row.source_class = key.second;
    row.n_texts = a.n;
    row.avg_words = static_cast<double>(a.words) / static_cast<double>(a.n);
    row.avg_sentences = static_cast<double>(a.sentences) / static_cast<double>(a.n);
    const double mass = static_cast<double>(a.seg[0] + a.seg[1] + a.seg[2]);
    for (int k = 0; k < 3; ++k)
      row.ibc_percent[k] = mass > 0 ? 100.0 * static_cast<double>(a.seg[k]) / mass : 0.0;
    row.ibc_rounded = mass > 0 ? round_to_100(row.ibc_percent) : std::array<int, 3>{0, 0, 0};
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace segdiff
