#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crowdpivot/aggregators.hpp"
#include "crowdpivot/core.hpp"

namespace crowdpivot {

inline constexpr std::size_t kWilcoxonExactLimit = 20;
inline constexpr double kSignificanceLevel = 0.1;

struct MethodResult {
  MethodId method;
  // estimate - truth, aligned with the set's trials; estimates are Winsorized
  // first on unit-interval tasks. Empty slot = method failed on that trial.
  std::vector<std::optional<double>> per_trial_error;
  double rmse = 0.0;  // over the trials the method handled
  std::size_t trials_used = 0;
  std::size_t trials_excluded = 0;
};

std::vector<MethodResult> evaluate(const ExperimentSet& set,
                                   const std::vector<MethodId>& methods);

struct OracleResult {
  double psi_o = 0.0;
  double rmse_at_psi_o = 0.0;             // raw pivot(psi_o) estimates
  double rmse_at_psi_o_winsorized = 0.0;  // same, Winsorized on unit tasks
};

/// Least-squares pivot weight over the set, fit with knowledge of the truth:
///   psi_o = sum(gap * (truth - f_bar)) / sum(gap^2).
/// The fit uses raw estimates; Winsorization never enters the regression.
OracleResult oracle_psi(const ExperimentSet& set);

struct WilcoxonResult {
  double p_value = 1.0;
  double w_plus = 0.0;      // rank sum of positive |a|-|b| differences
  std::size_t n = 0;        // pairs left after dropping zero differences
  bool exact = true;        // exact tail vs normal approximation
  bool degenerate = false;  // no nonzero differences
};

/// One-sided paired signed-rank test that a's absolute per-trial errors tend
/// to exceed b's. Zero differences are dropped; ties share midranks. The
/// tail is exact for up to kWilcoxonExactLimit pairs, and a normal
/// approximation with continuity correction beyond.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> errors_a,
                                    std::span<const double> errors_b);

// Pieces of the test, exposed so they can be checked independently.
std::vector<double> midranks(std::span<const double> values);
double signed_rank_exact_tail(std::span<const double> ranks, double w_plus);
double signed_rank_normal_tail(std::span<const double> ranks, double w_plus);

struct SignificanceVsBaselines {
  std::optional<double> p_vs_mean;  // empty when the Mean baseline is absent
  std::optional<double> p_vs_mp;    // empty when the MinimalPivot baseline is absent
};

/// Wilcoxon p-values of each result against the Mean and MinimalPivot
/// baselines found in the same result list (pivot(0)/pivot(1) count as
/// those baselines). A baseline's own entry stays empty.
std::vector<SignificanceVsBaselines> significance_vs_baselines(
    const std::vector<MethodResult>& results);

struct BootstrapCurve {
  std::vector<std::size_t> sizes;
  std::vector<MethodId> methods;
  std::vector<std::vector<double>> mean_rmse;     // [method][size]
  std::vector<std::vector<double>> ratio_to_np;   // [method][size], vs NeutralPivot
  std::vector<std::vector<std::size_t>> skipped;  // [method][size] failed replications
  std::size_t replications = 0;
  std::uint64_t seed = 0;
};

/// Mean per-replication RMSE of each method on crowds resampled to each
/// target size. Judges are resampled with replacement within each trial,
/// (f, g) pairs kept together. Replication b of trial i draws from the
/// substream (seed, i, b), so output is deterministic in the seed and
/// independent of evaluation order. NeutralPivot is always evaluated
/// internally to provide the ratio denominator.
BootstrapCurve bootstrap_curves(const ExperimentSet& set,
                                const std::vector<MethodId>& methods,
                                const std::vector<std::size_t>& sizes,
                                std::size_t replications, std::uint64_t seed);

}  // namespace crowdpivot
