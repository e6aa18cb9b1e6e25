#pragma once

// Introduction / body / conclusion segmentation over sentence indices.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>

#include "segdiff/corpus.hpp"
#include "segdiff/setting.hpp"
#include "segdiff/text.hpp"

namespace segdiff {

struct SentenceRange {
  std::size_t first = 0;  // inclusive
  std::size_t last = 0;   // exclusive
  std::size_t size() const { return last - first; }
  bool empty() const { return last <= first; }
  friend bool operator==(const SentenceRange&, const SentenceRange&) = default;
};

// Sentence-index boundaries. intro = [0, intro_end), body = [intro_end,
// body_end), conclusion = [body_end, n_sentences). Under C2 the body used for
// analysis is `body_window`, which lies inside [intro_end, body_end).
struct Segmentation {
  Setting setting = Setting::kC1;
  std::size_t intro_end = 0;
  std::size_t body_end = 0;
  std::size_t n_sentences = 0;
  std::optional<SentenceRange> body_window;

  SentenceRange range(SegmentId s) const;
  // Boundary positions k meaning "boundary after sentence k" (1-based).
  std::set<std::size_t> boundaries() const { return {intro_end, body_end}; }
  // Throws SegmentationError when the invariants do not hold.
  void validate() const;
  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

// Setting C1. Requires >= 3 sentences.
Segmentation segment_equal(const text::SentenceList& sentences);

// Setting C2: contiguous window of the E-body whose word count is nearest the
// mean of the intro and conclusion word counts; ties broken by `seed`.
Segmentation subsample_body(const text::SentenceList& sentences, const Segmentation& seg_e,
                            std::uint64_t seed);

// Setting E from the document's `segments_e` annotation. Boundaries are
// snapped to the nearest sentence end (ties toward the earlier one).
Segmentation ingest_segmentation(const Document& doc, const text::SentenceList& sentences);

// Dispatches on `setting`; C2 derives its per-document seed from (seed, id).
Segmentation segment_document(const Document& doc, const text::SentenceList& sentences,
                              Setting setting, std::uint64_t seed);

inline constexpr std::size_t kDefaultNearMissWindow = 2;

// Boundary-edit similarity: 1 - cost / (n_sentences - 1) where an unmatched
// boundary costs 1 and a matched pair offset by 1..window costs 0.5.
double segmentation_similarity(const Segmentation& a, const Segmentation& b,
                               std::size_t n_sentences,
                               std::size_t window = kDefaultNearMissWindow);

// Same measure over arbitrary boundary sets.
double boundary_similarity(const std::set<std::size_t>& a, const std::set<std::size_t>& b,
                           std::size_t n_sentences, std::size_t window = kDefaultNearMissWindow);

// Minimum edit cost used by boundary_similarity.
double boundary_edit_cost(const std::set<std::size_t>& a, const std::set<std::size_t>& b,
                          std::size_t window = kDefaultNearMissWindow);

}  // namespace segdiff
