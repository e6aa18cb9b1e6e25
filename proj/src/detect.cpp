#include "segdiff/detect.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "segdiff/error.hpp"
#include "segdiff/text.hpp"

namespace segdiff {

std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::kTotal: return "total";
    case Scope::kIntro: return "intro";
    case Scope::kBody: return "body";
    case Scope::kConclusion: return "conclusion";
    case Scope::kIntroConclusion: return "intro+conclusion";
  }
  return "?";
}

Scope parse_scope(std::string_view s) {
  for (auto sc : kScopes)
    if (to_string(sc) == s) return sc;
  if (s == "I") return Scope::kIntro;
  if (s == "B") return Scope::kBody;
  if (s == "C") return Scope::kConclusion;
  if (s == "I+C") return Scope::kIntroConclusion;
  throw InvalidArgument("unknown scope '" + std::string(s) + "'");
}

std::vector<DetectorScore> parse_detector_scores(const std::string& contents) {
  std::vector<DetectorScore> out;
  std::istringstream in(contents);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, "<record>", e.what());
    }
    DetectorScore s;
    auto field = [&](const char* key) -> const nlohmann::json& {
      if (!j.contains(key)) throw ParseError(line_no, key, "missing");
      return j.at(key);
    };
    try {
      s.detector = field("detector").get<std::string>();
      s.doc_id = field("id").get<std::string>();
    } catch (const nlohmann::json::type_error&) {
      throw ParseError(line_no, "detector/id", "expected a string");
    }
    try {
      s.scope = parse_scope(field("scope").get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(line_no, "scope", e.what());
    }
    if (!field("score").is_number()) throw ParseError(line_no, "score", "expected a number");
    s.score = j.at("score").get<double>();
    if (!(s.score >= 0.0 && s.score <= 1.0)) throw ParseError(line_no, "score", "outside [0, 1]");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<DetectorScore> load_detector_scores(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("io", "cannot open detector score file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_detector_scores(buf.str());
}

std::vector<DetectorScore> scores_from_corpus(const Corpus& corpus) {
  std::vector<DetectorScore> out;
  for (const auto& d : corpus)
    for (const auto& [detector, scopes] : d.annotations.detector_scores)
      for (const auto& [scope, score] : scopes)
        out.push_back({detector, d.id, parse_scope(scope), score});
  return out;
}

EvalReport evaluate_labels(const std::vector<bool>& predicted, const std::vector<bool>& truth) {
  if (predicted.size() != truth.size()) throw InvalidArgument("evaluate: length mismatch");
  EvalReport r;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (truth[i]) (predicted[i] ? r.counts.tp : r.counts.fn)++;
    else (predicted[i] ? r.counts.fp : r.counts.tn)++;
  }
  const auto& c = r.counts;
  auto ratio = [](std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = ratio(c.tp, c.tp + c.fn);
  r.fnr = ratio(c.fn, c.tp + c.fn);
  r.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  return r;
}

EvalReport evaluate(const std::vector<DetectorScore>& scores,
                    const std::map<std::string, bool>& truth_ai, double threshold) {
  std::vector<bool> pred, truth;
  std::vector<std::string> missing;
  for (const auto& s : scores) {
    auto it = truth_ai.find(s.doc_id);
    if (it == truth_ai.end()) {
      missing.push_back(s.doc_id);
      continue;
    }
    pred.push_back(s.score >= threshold);
    truth.push_back(it->second);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) list += (i ? ", " : "") + missing[i];
    if (missing.size() > 20) list += ", ...";
    throw DataError("missing_truth", std::to_string(missing.size()) +
                                         " scored documents have no truth label: " + list);
  }
  auto r = evaluate_labels(pred, truth);
  if (!scores.empty()) {
    r.detector = scores.front().detector;
    r.scope = std::string(to_string(scores.front().scope));
  }
  return r;
}

bool vote(const std::vector<bool>& labels) {
  if (labels.size() != 3) throw InvalidArgument("vote needs exactly three segment labels");
  return std::count(labels.begin(), labels.end(), true) >= 2;
}

bool vote_scores(const std::vector<double>& scores, double threshold) {
  if (scores.size() != 3) throw InvalidArgument("vote needs exactly three segment scores");
  return (scores[0] + scores[1] + scores[2]) / 3.0 >= threshold;
}

double BuiltinDetector::score(double s) const { return 1.0 / (1.0 + std::exp(-(tau - s) / scale)); }

BuiltinDetector BuiltinDetector::fit(const std::vector<double>& x, const std::vector<bool>& y,
                                     double ridge) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw InvalidArgument("calibration needs matching, non-trivial data");
  const std::size_t n_ai = static_cast<std::size_t>(std::count(y.begin(), y.end(), true));
  if (n_ai == 0 || n_ai == n) throw DataError("calibration", "calibration split needs both classes");
  // Standardise for conditioning, fit logit = b0 + b1 z, map back.
  const double mu = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double var = 0;
  for (double v : x) var += (v - mu) * (v - mu);
  const double sd = std::sqrt(var / static_cast<double>(n));
  if (sd == 0.0) throw DataError("calibration", "all calibration surprisals are equal");
  double b0 = 0, b1 = 0;
  for (int iter = 0; iter < 200; ++iter) {
    double g0 = 0, g1 = -ridge * b1, h00 = 0, h01 = 0, h11 = ridge;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = (x[i] - mu) / sd;
      const double p = 1.0 / (1.0 + std::exp(-(b0 + b1 * z)));
      const double r = (y[i] ? 1.0 : 0.0) - p;
      const double w = p * (1 - p);
      g0 += r;
      g1 += r * z;
      h00 += w;
      h01 += w * z;
      h11 += w * z * z;
    }
    const double det = h00 * h11 - h01 * h01;
    if (det <= 0) break;
    const double d0 = (h11 * g0 - h01 * g1) / det;
    const double d1 = (h00 * g1 - h01 * g0) / det;
    b0 += d0;
    b1 += d1;
    if (std::abs(d0) + std::abs(d1) < 1e-12) break;
  }
  // logit = b0 + b1 (s - mu) / sd = (tau - s) / scale
  const double slope = b1 / sd;
  if (!(slope < 0.0))
    throw DataError("calibration", "AI texts are not more predictable than human texts");
  BuiltinDetector d;
  d.scale = -1.0 / slope;
  d.tau = mu + b0 * d.scale;
  return d;
}

double mean_surprisal(std::string_view text_in, const NgramModel& lm) {
  const auto sentences = text::split_sentences(text_in);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : sentences.sentences) {
    std::vector<std::string> w;
    for (const auto& t : s.tokens)
      if (t.is_word) w.push_back(text::to_lower(t.text));
    for (double v : lm.surprisals(w)) {
      sum += v;
      ++n;
    }
  }
  if (n == 0) throw InvalidArgument("text has no words");
  return sum / static_cast<double>(n);
}

std::map<std::string, std::optional<double>> raw_variation(const DocSegmentValues& doc,
                                                           const std::vector<std::string>& bundle,
                                                           const DeltaOptions& options) {
  std::map<std::string, std::optional<double>> out;
  for (const auto& f : bundle) {
    auto& slot = out[f];
    auto it = doc.features.find(f);
    if (it == doc.features.end() || it->second.size() != 3) continue;
    const auto& v = it->second;
    if (!v[0] || !v[1] || !v[2]) continue;
    double sum = 0.0;
    bool ok = true;
    for (const auto& [x, y] : kSegmentPairs) {
      auto d = delta(*v[static_cast<std::size_t>(x)], *v[static_cast<std::size_t>(y)], options);
      if (!d) {
        ok = false;
        break;
      }
      sum += d->value;
    }
    if (ok) slot = sum / 3.0;
  }
  return out;
}

std::vector<Variation> cross_segment_variation(const std::vector<DocSegmentValues>& docs,
                                               const std::vector<std::string>& bundle,
                                               const DeltaOptions& options) {
  std::vector<std::map<std::string, std::optional<double>>> raw;
  raw.reserve(docs.size());
  for (const auto& d : docs) raw.push_back(raw_variation(d, bundle, options));
  std::map<std::string, std::pair<double, double>> moments;  // mean, population std
  for (const auto& f : bundle) {
    double sum = 0, n = 0;
    for (const auto& r : raw)
      if (r.at(f)) {
        sum += *r.at(f);
        n += 1;
      }
    if (n == 0) continue;
    const double mean = sum / n;
    double ss = 0;
    for (const auto& r : raw)
      if (r.at(f)) ss += (*r.at(f) - mean) * (*r.at(f) - mean);
    moments[f] = {mean, std::sqrt(ss / n)};
  }
  std::vector<Variation> out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    Variation v;
    v.id = docs[i].id;
    double sum = 0;
    std::size_t used = 0;
    for (const auto& f : bundle) {
      const auto& x = raw[i].at(f);
      if (!x) {
        v.dropped.push_back(f);
        continue;
      }
      const auto [mean, sd] = moments.at(f);
      sum += sd > 0 ? (*x - mean) / sd : 0.0;
      ++used;
    }
    if (used == 0) v.value = Unavailable{"every variation feature is unavailable"};
    else v.value = sum / static_cast<double>(used);
    out.push_back(std::move(v));
  }
  return out;
}

int pair_tiebreak(const PairCandidate& a, const PairCandidate& b, TiebreakMode mode,
                  double threshold) {
  const bool la = a.score >= threshold, lb = b.score >= threshold;
  if (la != lb) return la ? 0 : 1;
  if (mode == TiebreakMode::kScore) return b.score > a.score ? 1 : 0;
  return b.variation < a.variation ? 1 : 0;
}

}  // namespace segdiff
