#pragma once

#include <utility>

#include "pisrl/case_base.hpp"
#include "pisrl/rng.hpp"

namespace pisrl {

// Closed per-dimension interval, used for action domains.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

class NoPolicyError : public std::runtime_error {
 public:
  NoPolicyError() : std::runtime_error("case base is empty; no policy action available") {}
};

// Action of the nearest case plus the retrieval record. Counts as a use of
// that case. Throws NoPolicyError on an empty base so the caller can fall
// back to the teacher.
std::pair<Vec, NearestResult> greedy_action(CaseBase& base, const Vec& state);

// Adds independent zero-mean Gaussian noise of the given stddev to every
// action component and clamps the result to the action domain. stddev == 0
// returns the input unchanged and consumes no randomness.
Vec perturb_action(const Vec& action, double stddev, const std::vector<Interval>& domain,
                   Rng& rng);

}  // namespace pisrl
