#pragma once

#include <cstddef>
#include <map>
#include <optional>

#include "rit/dataset.hpp"

namespace rit {

struct CandidateStats {
  std::size_t tree_count = 0;     ///< distinct trees that emitted the pattern
  std::optional<double> prev1;    ///< exact class-1 prevalence, once verified
  std::optional<double> prev0;    ///< exact class-0 prevalence, once verified
};

/// Deduplicated candidate patterns, ordered canonically.
using CandidateSet = std::map<Pattern, CandidateStats>;

}  // namespace rit
