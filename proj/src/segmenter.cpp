#include "segdiff/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "segdiff/error.hpp"
#include "segdiff/rng.hpp"

namespace segdiff {

std::string to_string(Setting s) {
  switch (s) {
    case Setting::kE: return "e";
    case Setting::kC1: return "c1";
    case Setting::kC2: return "c2";
  }
  return "?";
}

Setting parse_setting(std::string_view s) {
  const std::string lower = text::to_lower(s);
  if (lower == "e") return Setting::kE;
  if (lower == "c1") return Setting::kC1;
  if (lower == "c2") return Setting::kC2;
  throw UsageError("unknown segmentation setting '" + std::string(s) + "'");
}

std::string_view short_name(SegmentId s) {
  switch (s) {
    case SegmentId::kIntro: return "I";
    case SegmentId::kBody: return "B";
    case SegmentId::kConclusion: return "C";
  }
  return "?";
}

std::string_view long_name(SegmentId s) {
  switch (s) {
    case SegmentId::kIntro: return "intro";
    case SegmentId::kBody: return "body";
    case SegmentId::kConclusion: return "conclusion";
  }
  return "?";
}

SentenceRange Segmentation::range(SegmentId s) const {
  switch (s) {
    case SegmentId::kIntro: return {0, intro_end};
    case SegmentId::kBody: return body_window ? *body_window : SentenceRange{intro_end, body_end};
    case SegmentId::kConclusion: return {body_end, n_sentences};
  }
  return {};
}

void Segmentation::validate() const {
  if (!(0 < intro_end && intro_end < body_end && body_end < n_sentences))
    throw SegmentationError("boundaries (" + std::to_string(intro_end) + ", " +
                            std::to_string(body_end) + ") invalid for " +
                            std::to_string(n_sentences) + " sentences");
  if (body_window) {
    if (body_window->empty() || body_window->first < intro_end || body_window->last > body_end)
      throw SegmentationError("body window outside the body range");
  }
}

namespace {

std::vector<std::size_t> cumulative_words(const text::SentenceList& s) {
  std::vector<std::size_t> cum(s.size() + 1, 0);
  for (std::size_t i = 0; i < s.size(); ++i) cum[i + 1] = cum[i] + s[i].words;
  return cum;
}

// Index k in [lo, hi] whose cum[k] is nearest to target; ties go to the
// smaller k.
std::size_t nearest(const std::vector<std::size_t>& cum, double target, std::size_t lo,
                    std::size_t hi) {
  std::size_t best = lo;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = lo; k <= hi; ++k) {
    const double d = std::abs(static_cast<double>(cum[k]) - target);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

}  // namespace

Segmentation segment_equal(const text::SentenceList& sentences) {
  const std::size_t n = sentences.size();
  if (n < 3)
    throw SegmentationError("need at least 3 sentences, got " + std::to_string(n));
  const auto cum = cumulative_words(sentences);
  const double total = static_cast<double>(cum[n]);
  const double t1 = total / 3.0;
  const double t2 = 2.0 * total / 3.0;

  std::size_t i = nearest(cum, t1, 1, n - 1);
  std::size_t j = nearest(cum, t2, 1, n - 1);
  if (!(i < j && j <= n - 1)) {
    // The independent choices collided: take the pair minimising the summed
    // distance, earliest pair on ties.
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 1; a + 1 < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const double d = std::abs(static_cast<double>(cum[a]) - t1) +
                         std::abs(static_cast<double>(cum[b]) - t2);
        if (d < best) {
          best = d;
          i = a;
          j = b;
        }
      }
    }
  }
  Segmentation seg{Setting::kC1, i, j, n, std::nullopt};
  seg.validate();
  return seg;
}

Segmentation subsample_body(const text::SentenceList& sentences, const Segmentation& seg_e,
                            std::uint64_t seed) {
  if (seg_e.setting != Setting::kE)
    throw InvalidArgument("subsample_body expects a setting-E segmentation");
  seg_e.validate();
  const auto cum = cumulative_words(sentences);
  const std::size_t n = sentences.size();
  const double intro_words = static_cast<double>(cum[seg_e.intro_end]);
  const double concl_words = static_cast<double>(cum[n] - cum[seg_e.body_end]);
  const double target = (intro_words + concl_words) / 2.0;

  std::vector<SentenceRange> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t a = seg_e.intro_end; a < seg_e.body_end; ++a) {
    for (std::size_t b = a + 1; b <= seg_e.body_end; ++b) {
      const double d = std::abs(static_cast<double>(cum[b] - cum[a]) - target);
      if (d < best_d) {
        best_d = d;
        best.clear();
      }
      if (d == best_d) best.push_back({a, b});
    }
  }
  Rng rng(seed);
  Segmentation out = seg_e;
  out.setting = Setting::kC2;
  out.body_window = best.size() == 1 ? best.front() : best[rng.below(best.size())];
  return out;
}

Segmentation ingest_segmentation(const Document& doc, const text::SentenceList& sentences) {
  const auto& ann = doc.annotations.segments_e;
  if (!ann) throw DataError("missing_annotation", "document '" + doc.id + "' has no segments_e");
  const std::size_t n = sentences.size();
  Segmentation seg{Setting::kE, 0, 0, n, std::nullopt};
  if (ann->indices) {
    seg.intro_end = ann->indices->first;
    seg.body_end = ann->indices->second;
  } else if (ann->texts) {
    std::vector<std::size_t> offsets;
    const std::string norm = text::normalize_whitespace(doc.text, &offsets);
    std::size_t from = 0;
    std::array<std::size_t, 3> ends{};
    for (std::size_t k = 0; k < 3; ++k) {
      const std::string needle = text::normalize_whitespace((*ann->texts)[k]);
      if (needle.empty())
        throw UnalignableError("document '" + doc.id + "': segment " +
                               std::string(long_name(kSegments[k])) + " is empty");
      const std::size_t pos = norm.find(needle, from);
      if (pos == std::string::npos)
        throw UnalignableError("document '" + doc.id + "': " +
                               std::string(long_name(kSegments[k])) +
                               " text not found in document");
      ends[k] = offsets[pos + needle.size() - 1] + 1;
      from = pos;
    }
    auto snap = [&](std::size_t boundary) {
      std::size_t best = 1;
      std::size_t best_d = std::numeric_limits<std::size_t>::max();
      for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t e = sentences[k - 1].end;
        const std::size_t d = e > boundary ? e - boundary : boundary - e;
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      return best;
    };
    seg.intro_end = snap(ends[0]);
    seg.body_end = snap(ends[1]);
  } else {
    throw DataError("missing_annotation", "document '" + doc.id + "': empty segments_e");
  }
  if (!(0 < seg.intro_end && seg.intro_end < seg.body_end && seg.body_end < n))
    throw UnalignableError("document '" + doc.id + "': annotated segment aligns to zero sentences");
  return seg;
}

Segmentation segment_document(const Document& doc, const text::SentenceList& sentences,
                              Setting setting, std::uint64_t seed) {
  switch (setting) {
    case Setting::kC1: return segment_equal(sentences);
    case Setting::kE: return ingest_segmentation(doc, sentences);
    case Setting::kC2:
      return subsample_body(sentences, ingest_segmentation(doc, sentences),
                            derive_seed(seed, doc.id));
  }
  throw InvalidArgument("unknown setting");
}

double boundary_edit_cost(const std::set<std::size_t>& a, const std::set<std::size_t>& b,
                          std::size_t window) {
  const std::vector<std::size_t> av(a.begin(), a.end());
  const std::vector<std::size_t> bv(b.begin(), b.end());
  if (bv.size() > 20) throw InvalidArgument("too many boundaries for exact matching");
  // best[mask] = minimum cost having processed a prefix of `av` with the
  // b-boundaries in `mask` already matched.
  const std::size_t full = std::size_t{1} << bv.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> cur(full, kInf), next(full, kInf);
  cur[0] = 0.0;
  for (std::size_t x : av) {
    std::fill(next.begin(), next.end(), kInf);
    for (std::size_t mask = 0; mask < full; ++mask) {
      if (cur[mask] == kInf) continue;
      next[mask] = std::min(next[mask], cur[mask] + 1.0);  // x unmatched
      for (std::size_t j = 0; j < bv.size(); ++j) {
        if (mask & (std::size_t{1} << j)) continue;
        const std::size_t off = x > bv[j] ? x - bv[j] : bv[j] - x;
        if (off > window) continue;
        const double c = off == 0 ? 0.0 : 0.5;
        auto& slot = next[mask | (std::size_t{1} << j)];
        slot = std::min(slot, cur[mask] + c);
      }
    }
    std::swap(cur, next);
  }
  double best = kInf;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (cur[mask] == kInf) continue;
    const auto unmatched = bv.size() - static_cast<std::size_t>(__builtin_popcountll(mask));
    best = std::min(best, cur[mask] + static_cast<double>(unmatched));
  }
  return best;
}

double boundary_similarity(const std::set<std::size_t>& a, const std::set<std::size_t>& b,
                           std::size_t n_sentences, std::size_t window) {
  if (n_sentences < 2) return 1.0;
  const double potential = static_cast<double>(n_sentences - 1);
  const double s = 1.0 - boundary_edit_cost(a, b, window) / potential;
  return std::clamp(s, 0.0, 1.0);
}

double segmentation_similarity(const Segmentation& a, const Segmentation& b,
                               std::size_t n_sentences, std::size_t window) {
  if (a.n_sentences != n_sentences || b.n_sentences != n_sentences)
    throw InvalidArgument("segmentations refer to different sentence counts (" +
                          std::to_string(a.n_sentences) + ", " + std::to_string(b.n_sentences) +
                          ", expected " + std::to_string(n_sentences) + ")");
  return boundary_similarity(a.boundaries(), b.boundaries(), n_sentences, window);
}

}  // namespace segdiff
