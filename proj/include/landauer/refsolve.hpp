#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landauer/linalg.hpp"

namespace landauer {

enum class BetaBranch { NonNegative, Negative };

struct BetaSolveResult {
  double beta_R = 0.0;
  /// |S(gibbs(beta_R)) - S_target|
  double residual = 0.0;
  /// Target below the entropy reachable at beta_cap; beta_R == +-beta_cap.
  bool saturated = false;
  BetaBranch branch = BetaBranch::NonNegative;
  /// Set when a per-sample solve inside a series failed; the other fields are
  /// then meaningless.
  std::optional<std::string> error;
};

/// Entropy of e^{-beta H}/Z as a function of beta for a fixed spectrum.
/// Evaluated from shifted Boltzmann weights with log1p so that very small
/// entropies at large |beta| keep their relative precision.
class GibbsEntropyCurve {
 public:
  explicit GibbsEntropyCurve(std::vector<double> spectrum);

  double operator()(double beta) const;
  double spread() const noexcept { return spectrum_.back() - spectrum_.front(); }
  /// 1e8 / spread
  double beta_cap() const noexcept;
  std::size_t dim() const noexcept { return spectrum_.size(); }
  /// max(1, max |lambda|)
  double scale() const noexcept;
  /// Curve of -H, i.e. S(beta; -H) == S(-beta; H).
  GibbsEntropyCurve mirrored() const;

 private:
  std::vector<double> spectrum_;
};

double gibbs_entropy(const ComplexMatrix& h, double beta);

/// Solve S(gibbs(h, beta)) == s_target for beta on the requested branch by
/// bisection. Throws TargetOutOfRange or ConstantEntropy.
BetaSolveResult solve_beta(const ComplexMatrix& h, double s_target,
                           BetaBranch branch = BetaBranch::NonNegative);
BetaSolveResult solve_beta(const GibbsEntropyCurve& curve, double s_target,
                           BetaBranch branch = BetaBranch::NonNegative,
                           std::optional<double> warm_start = std::nullopt);

struct EntropySample {
  double t = 0.0;
  double S = 0.0;
};

using HamiltonianProtocol = std::function<ComplexMatrix(double)>;

enum class Execution { Serial, Parallel };

/// Per-time solves of the instantaneous entropy-matching condition.
///
/// Serial execution warm-starts each solve from the previous beta; parallel
/// execution cold-starts every sample on an OpenMP team. Both bisect down to
/// the same floating-point resolution, so they agree to ~1e-15 relative.
/// A failing sample is reported through BetaSolveResult::error.
std::vector<BetaSolveResult> solve_beta_series(const HamiltonianProtocol& h_of_t,
                                               std::span<const EntropySample> entropies,
                                               BetaBranch branch = BetaBranch::NonNegative,
                                               Execution exec = Execution::Serial);

}  // namespace landauer
