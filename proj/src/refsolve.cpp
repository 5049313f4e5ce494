#include "landauer/refsolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "landauer/error.hpp"

namespace landauer {

namespace {

constexpr int kMaxBisections = 200;
constexpr double kRangeTolerance = 1e-10;

// Bisection for a decreasing function f on [lo, hi] with f(lo) >= target >= f(hi).
double bisect_decreasing(const GibbsEntropyCurve& f, double target, double lo, double hi) {
  for (int it = 0; it < kMaxBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Return whichever end is closer in entropy.
  return std::abs(f(lo) - target) <= std::abs(f(hi) - target) ? lo : hi;
}

BetaSolveResult solve_non_negative(const GibbsEntropyCurve& curve, double target,
                                   std::optional<double> warm_start) {
  const double cap = curve.beta_cap();
  BetaSolveResult r;
  r.branch = BetaBranch::NonNegative;

  // beta is ill-conditioned next to the maximally mixed entropy; pin it.
  const double top = curve(0.0);
  if (target >= top) {
    r.beta_R = 0.0;
    r.residual = std::abs(top - target);
    return r;
  }

  double lo = 0.0;
  double hi = 1.0;
  if (warm_start && *warm_start > 0.0 && *warm_start < cap) {
    // Grow a bracket centred on the previous solution.
    const double centre = *warm_start;
    double half = std::max(1e-3, 0.25 * centre);
    for (;;) {
      lo = std::max(0.0, centre - half);
      hi = std::min(cap, centre + half);
      const bool lo_ok = lo == 0.0 || curve(lo) >= target;
      const bool hi_ok = hi == cap || curve(hi) <= target;
      if (lo_ok && hi_ok) break;
      half *= 2.0;
    }
  } else {
    while (hi < cap && curve(hi) >= target) hi *= 2.0;
    hi = std::min(hi, cap);
  }

  const double floor_entropy = curve(cap);
  if (hi >= cap && floor_entropy > target) {
    r.beta_R = cap;
    r.residual = std::abs(floor_entropy - target);
    r.saturated = true;
    return r;
  }
  r.beta_R = bisect_decreasing(curve, target, lo, hi);
  r.residual = std::abs(curve(r.beta_R) - target);
  return r;
}

}  // namespace

GibbsEntropyCurve::GibbsEntropyCurve(std::vector<double> spectrum) : spectrum_(std::move(spectrum)) {
  if (spectrum_.empty()) throw Error(ErrorCode::InvalidParameter, "empty spectrum");
  std::sort(spectrum_.begin(), spectrum_.end());
}

double GibbsEntropyCurve::beta_cap() const noexcept {
  const double s = spread();
  return s > 0.0 ? 1e8 / s : 1e8;
}

double GibbsEntropyCurve::scale() const noexcept {
  return std::max({1.0, std::abs(spectrum_.front()), std::abs(spectrum_.back())});
}

GibbsEntropyCurve GibbsEntropyCurve::mirrored() const {
  std::vector<double> neg(spectrum_.size());
  std::transform(spectrum_.begin(), spectrum_.end(), neg.begin(), [](double e) { return -e; });
  return GibbsEntropyCurve(std::move(neg));
}

double GibbsEntropyCurve::operator()(double beta) const {
  // Shift so every exponent is <= 0; the reference level has weight 1.
  const std::size_t ref = beta >= 0.0 ? 0 : spectrum_.size() - 1;
  const double e_ref = spectrum_[ref];
  double rest = 0.0;
  double mean_excess = 0.0;
  for (std::size_t k = 0; k < spectrum_.size(); ++k) {
    if (k == ref) continue;
    const double x = spectrum_[k] - e_ref;
    const double w = std::exp(-beta * x);
    rest += w;
    mean_excess += w * x;
  }
  const double z = 1.0 + rest;
  return std::log1p(rest) + beta * mean_excess / z;
}

double gibbs_entropy(const ComplexMatrix& h, double beta) {
  if (!std::isfinite(beta)) throw Error(ErrorCode::InvalidParameter, "beta must be finite");
  return GibbsEntropyCurve(eigvalsh(h))(beta);
}

BetaSolveResult solve_beta(const GibbsEntropyCurve& curve, double s_target, BetaBranch branch,
                           std::optional<double> warm_start) {
  const double s_max = std::log(static_cast<double>(curve.dim()));
  if (!std::isfinite(s_target) || s_target < -kRangeTolerance || s_target > s_max + kRangeTolerance) {
    throw Error(ErrorCode::TargetOutOfRange,
                "target entropy " + std::to_string(s_target) + " outside [0, ln d]");
  }
  if (curve.spread() <= 1e-14 * curve.scale()) {
    throw Error(ErrorCode::ConstantEntropy, "Hamiltonian is proportional to the identity");
  }
  const double target = std::clamp(s_target, 0.0, s_max);
  if (branch == BetaBranch::NonNegative) return solve_non_negative(curve, target, warm_start);

  // S(beta; H) == S(-beta; -H): solve the mirrored problem on beta >= 0.
  std::optional<double> mirrored_start;
  if (warm_start) mirrored_start = -warm_start.value();
  BetaSolveResult r = solve_non_negative(curve.mirrored(), target, mirrored_start);
  r.beta_R = -r.beta_R;
  r.branch = BetaBranch::Negative;
  return r;
}

BetaSolveResult solve_beta(const ComplexMatrix& h, double s_target, BetaBranch branch) {
  return solve_beta(GibbsEntropyCurve(eigvalsh(h)), s_target, branch);
}

std::vector<BetaSolveResult> solve_beta_series(const HamiltonianProtocol& h_of_t,
                                               std::span<const EntropySample> entropies,
                                               BetaBranch branch, Execution exec) {
  const auto n = static_cast<std::ptrdiff_t>(entropies.size());
  std::vector<BetaSolveResult> out(entropies.size());

  auto solve_one = [&](std::ptrdiff_t k, std::optional<double> warm) {
    BetaSolveResult r;
    r.branch = branch;
    try {
      const auto& sample = entropies[static_cast<std::size_t>(k)];
      r = solve_beta(GibbsEntropyCurve(eigvalsh(h_of_t(sample.t))), sample.S, branch, warm);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    return r;
  };

  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = solve_one(k, std::nullopt);
    return out;
  }

  std::optional<double> warm;
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    auto& r = out[static_cast<std::size_t>(k)];
    r = solve_one(k, warm);
    if (!r.error && !r.saturated) {
      warm = r.beta_R;
    } else {
      warm.reset();
    }
  }
  return out;
}

}  // namespace landauer
