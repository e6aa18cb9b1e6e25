#pragma once

#include <string>
#include <string_view>

namespace segdiff {

// E: ingested annotation; C1: equal word-count thirds; C2: E with the body
// replaced by a window matched to the intro/conclusion length.
enum class Setting { kE, kC1, kC2 };

std::string to_string(Setting s);
Setting parse_setting(std::string_view s);  // "e" | "c1" | "c2", any case

enum class SegmentId { kIntro = 0, kBody = 1, kConclusion = 2 };

inline constexpr SegmentId kSegments[] = {SegmentId::kIntro, SegmentId::kBody,
                                          SegmentId::kConclusion};

// "I", "B", "C"
std::string_view short_name(SegmentId s);
// "intro", "body", "conclusion"
std::string_view long_name(SegmentId s);

}  // namespace segdiff
