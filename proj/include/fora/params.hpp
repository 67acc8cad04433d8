#pragma once

#include <cmath>
#include <string>

#include "fora/errors.hpp"

namespace fora {

/// Accuracy contract of an approximate PPR query: estimates of every value
/// above `delta` are within relative error `epsilon` with probability at
/// least 1 - `p_f`. `alpha` is the per-step termination probability.
class QueryParams {
 public:
  QueryParams(double alpha, double epsilon, double delta, double p_f)
      : alpha_(alpha), epsilon_(epsilon), delta_(delta), p_f_(p_f) {
    auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
    if (!open_unit(alpha_)) throw usage_error("alpha must lie in (0,1)");
    if (!open_unit(epsilon_)) throw usage_error("epsilon must lie in (0,1)");
    if (!(delta_ > 0.0 && delta_ <= 1.0)) {
      throw usage_error("delta must lie in (0,1]");
    }
    if (!open_unit(p_f_)) throw usage_error("p_f must lie in (0,1)");
  }

  /// delta = p_f = 1/n, epsilon = 0.5.
  static QueryParams defaults_for(std::size_t n, double alpha = 0.2) {
    const double inv_n = n > 1 ? 1.0 / static_cast<double>(n) : 0.5;
    return QueryParams(alpha, 0.5, inv_n, inv_n);
  }

  double alpha() const noexcept { return alpha_; }
  double epsilon() const noexcept { return epsilon_; }
  double delta() const noexcept { return delta_; }
  double p_f() const noexcept { return p_f_; }

  QueryParams with_epsilon(double e) const {
    return {alpha_, e, delta_, p_f_};
  }
  QueryParams with_delta(double d) const { return {alpha_, epsilon_, d, p_f_}; }
  QueryParams with_p_f(double p) const { return {alpha_, epsilon_, delta_, p}; }

  /// ln(2/p_f).
  double log_term() const noexcept { return std::log(2.0 / p_f_); }

  /// Random walks needed per unit of residue mass:
  /// (2e/3 + 2) ln(2/p_f) / (e^2 delta).
  double walk_density() const noexcept {
    return (2.0 * epsilon_ / 3.0 + 2.0) * log_term() /
           (epsilon_ * epsilon_ * delta_);
  }

  friend bool operator==(const QueryParams&, const QueryParams&) = default;

 private:
  double alpha_;
  double epsilon_;
  double delta_;
  double p_f_;
};

}  // namespace fora
