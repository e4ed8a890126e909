#include "pisrl/exploration.hpp"

#include <algorithm>

namespace pisrl {

std::pair<Vec, NearestResult> greedy_action(CaseBase& base, const Vec& state) {
  const auto hit = base.nearest(state);
  if (!hit) throw NoPolicyError();
  base.record_use(hit->case_index);
  return {base.at(hit->case_index).action, *hit};
}

Vec perturb_action(const Vec& action, double stddev, const std::vector<Interval>& domain,
                   Rng& rng) {
  if (stddev == 0.0) return action;
  Vec out(action.size());
  for (std::size_t i = 0; i < action.size(); ++i) {
    double v = gaussian(rng, action[i], stddev);
    if (i < domain.size()) v = std::clamp(v, domain[i].lo, domain[i].hi);
    out[i] = v;
  }
  return out;
}

}  // namespace pisrl
