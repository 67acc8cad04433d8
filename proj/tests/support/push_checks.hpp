#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>

#include "fora/forward_push.hpp"

namespace fora::testing {

/// Observer that checks sum(reserve) + r_sum == initial_mass after every
/// push, and that the incremental r_sum matches the residue vector.
struct MassChecker {
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst = 0.0;

  PushObserver observer() {
    return [this](const PushState& st, NodeId) { check(st); };
  }

  void check(const PushState& st) {
    const double reserve =
        std::accumulate(st.reserve.begin(), st.reserve.end(), 0.0);
    const double residue =
        std::accumulate(st.residue.begin(), st.residue.end(), 0.0);
    const double gap = std::max(std::abs(reserve + st.r_sum - st.initial_mass),
                                std::abs(residue - st.r_sum));
    worst = std::max(worst, gap);
    ++checks;
    if (gap > 1e-12) ++violations;
  }
};

}  // namespace fora::testing
