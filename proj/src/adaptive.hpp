#pragma once

// Global adaptive subdivision shared by the Gauss-Kronrod and Filon drivers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "flatphase/quad.hpp"

namespace flatphase::detail {

struct PanelEstimate {
  Complex value{};
  double err = 0.0;
  long evals = 0;
  /// Part of `err` attributed to rounding; bisection cannot reduce it.
  double floor = 0.0;
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  PanelEstimate est;
};

inline double tolerance_target(const ToleranceConfig& tol, Complex total) {
  return std::max(tol.abs_tol, tol.rel_tol * std::abs(total));
}

/// Runs bisection on the panel with the largest error until the summed
/// error meets the tolerance or the budget is exhausted. `rule(a, b)`
/// evaluates one panel. `extra` is folded into the total and its error
/// (e.g. an asymptotic tail computed by the caller).
template <class Rule>
QuadratureResult run_adaptive(const std::vector<double>& breakpoints, Rule&& rule,
                              const ToleranceConfig& requested,
                              const QuadratureResult& extra = {}) {
  const ToleranceConfig tol = requested.with_env_cap();
  auto cmp = [](const Panel& x, const Panel& y) { return x.est.err < y.est.err; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
  std::vector<Panel> frozen;

  Complex total = extra.value;
  double total_err = extra.abs_error_estimate;
  long evals = extra.n_evals;

  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    Panel p{breakpoints[i], breakpoints[i + 1], rule(breakpoints[i], breakpoints[i + 1])};
    total += p.est.value;
    total_err += p.est.err;
    evals += p.est.evals;
    heap.push(p);
  }

  int subdivisions = 0;
  // Error held by panels that are already at their rounding floor. Once the
  // rest is small next to it, further bisection cannot help.
  double frozen_err = 0.0;
  while (!heap.empty() && total_err > tolerance_target(tol, total) &&
         total_err - frozen_err > 0.05 * frozen_err &&
         subdivisions < tol.max_subdivisions && evals < tol.max_evals) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double scale = std::max(std::abs(worst.a), std::abs(worst.b));
    if (worst.b - worst.a <= 64 * std::numeric_limits<double>::epsilon() * scale ||
        mid <= worst.a || mid >= worst.b || worst.est.err <= 1.01 * worst.est.floor) {
      frozen.push_back(worst);
      frozen_err += worst.est.err;
      continue;
    }
    Panel left{worst.a, mid, rule(worst.a, mid)};
    Panel right{mid, worst.b, rule(mid, worst.b)};
    total += left.est.value + right.est.value - worst.est.value;
    total_err += left.est.err + right.est.err - worst.est.err;
    evals += left.est.evals + right.est.evals;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }

  while (!heap.empty()) {
    frozen.push_back(heap.top());
    heap.pop();
  }
  // Re-sum in a fixed order so that the result does not depend on the
  // heap's internal layout.
  std::sort(frozen.begin(), frozen.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  QuadratureResult out;
  out.value = extra.value;
  out.abs_error_estimate = extra.abs_error_estimate;
  for (const auto& p : frozen) {
    out.value += p.est.value;
    out.abs_error_estimate += p.est.err;
  }
  out.n_evals = evals;
  out.converged = out.abs_error_estimate <= tolerance_target(tol, out.value);
  return out;
}

PanelEstimate gauss_kronrod_panel(const Integrand& f, double a, double b);
PanelEstimate filon_panel(const Integrand& s, double omega, double a, double b);

}  // namespace flatphase::detail
