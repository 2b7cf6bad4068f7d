#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "crowdpivot/core.hpp"
#include "crowdpivot/simulator.hpp"

namespace crowdpivot {

/// Symbols of the closed-form expected-squared-error expressions for pivot
/// estimates on a nested-symmetric crowd.
struct TheoryParams {
  double maven_share = 1.0;            // p in [0,1]
  double private_weight = 0.5;         // w in [0,1]
  double m0 = 1.0;                     // prior pseudo-sample size
  double m1 = 1.0;                     // public-signal sample size
  double sigma0 = 1.0;                 // prior standard deviation
  double v0 = 1.0;                     // per-observation variance of X
  double var_delta = 0.0;              // layperson noise variance
  double var_epsilon = 0.0;            // maven estimate noise variance
  double var_gamma = 0.0;              // maven peer-prediction noise variance
  std::optional<std::size_t> judges;   // crowd size J; empty = infinite crowd

  double m() const { return m0 + m1; }

  static TheoryParams from_crowd_spec(const CrowdSpec& spec);
};

void validate(const TheoryParams& params);  // throws ParameterError

/// Infinite-crowd expected squared error of the pivot with weight psi:
///   (1 - (1+psi)pw + psi p^2 w^2)^2 * (m0^2 sigma0^2 + m1 v0) / m^2.
double limiting_mse(double psi, const TheoryParams& params);

/// Finite-crowd expected squared error: the limiting term plus the 1/J
/// contributions of the private signals and the three reporting noises.
/// The private-signal sample size is recovered as l = w*m/(1-w), so w = 1
/// is a singularity here.
double finite_mse(double psi, const TheoryParams& params);

struct PsiInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Pivot weights whose limiting MSE never exceeds the simple mean's for any
/// crowd composition: [0, 2].
PsiInterval dominance_psi_range();

/// P(p*w <= c) for independent uniform p, w on [0,1]: c * (1 - ln c).
/// At c = 2/3 this is the probability that the neutral pivot lands closer to
/// the global posterior expectation than the minimal pivot (0.937); at
/// c = 1/2 the probability that the neutral pivot still under-corrects
/// (0.847).
double prob_pw_below(double c);

struct RegionPoint {
  double p = 0.0;
  double w = 0.0;
  bool inside = false;  // p*w <= 2/3
};

struct RegionGrid {
  std::size_t resolution = 0;  // points per axis, inclusive of both endpoints
  std::vector<RegionPoint> points;
};

RegionGrid dominance_region_grid(std::size_t resolution);

}  // namespace crowdpivot
