#pragma once

#include <span>
#include <string>
#include <string_view>

#include "segdiff/feature_value.hpp"
#include "segdiff/text.hpp"

namespace segdiff {

inline constexpr double kBrunetExponent = 0.165;

// W = N^(V^-a) over word tokens; V counts case-folded types.
Scalar brunet_index(std::span<const std::string> tokens, double a = kBrunetExponent);

// Vowel-group heuristic: adjacent vowels (a e i o u y) form one group, a
// silent final "e" and a silent "-ed"/"-es" ending are dropped; at least 1.
int count_syllables(std::string_view word);

// 206.835 - 1.015 (words / sentences) - 84.6 (syllables / words).
Scalar flesch_reading_ease(const text::SentenceList& sentences);

}  // namespace segdiff
