#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "crowdpivot/core.hpp"

namespace crowdpivot {

enum class CrowdStructure {
  Symmetric,        // everyone is a maven (p = 1), independent private signals
  Nested,           // informed judges ("experts") share one private signal
  NestedSymmetric,  // mavens with independent private signals plus laypeople
};

/// Generative description of a crowd: who knows what, how strong each signal
/// is, and how noisily judges report. Signals are sample means of
/// observations of the target variable X: the prior counts as m0
/// observations, the public signal as m1, each private signal as l.
struct CrowdSpec {
  std::size_t judges = 100;        // J
  double maven_share = 1.0;        // p, fraction of informed judges
  double m0 = 1.0;                 // prior pseudo-sample size
  double m1 = 1.0;                 // public-signal sample size
  double l = 1.0;                  // private-signal sample size
  double mu0 = 0.0;                // prior mean
  std::optional<double> prior_sd;  // sigma0; defaults to sqrt(v0 / m0)
  double v0 = 1.0;                 // per-observation variance of X
  double sd_delta = 0.0;           // layperson reporting noise
  double sd_epsilon = 0.0;         // maven estimate noise
  double sd_gamma = 0.0;           // maven peer-prediction noise
  CrowdStructure structure = CrowdStructure::NestedSymmetric;

  double m() const { return m0 + m1; }
  double private_weight() const { return l / (l + m()); }  // w
  double sigma0() const { return prior_sd ? *prior_sd : std::sqrt(v0 / m0); }
  std::size_t maven_count() const;  // round(p * J)
};

void validate(const CrowdSpec& spec);  // throws ParameterError

/// Everything drawn before the judges report: the target theta, the public
/// signal s1, the shared information s = (m0*mu0 + m1*s1)/m, and the private
/// signals t (one per maven; a single shared value in the Nested structure).
struct LatentRecord {
  double theta = 0.0;
  double s1 = 0.0;
  double s = 0.0;
  std::vector<double> t;
  std::size_t maven_count = 0;  // actual count after rounding p*J
};

struct DrawnTrial {
  Trial trial;
  LatentRecord latent;
};

/// Draws one synthetic trial. Judges [0, maven_count) are mavens (experts in
/// the Nested structure), the rest laypeople. Reports:
///   layperson:             f_j = g_j = s - delta_j
///   maven (sym. variants): f_j = (1-w)s + w t_j + eps_j
///                          g_j = (1-p w^2)s + p w^2 t_j + p w eps_j + gamma_j
///   expert (Nested):       f_j = (1-w)s + w t + eps_j
///                          g_j = (1-p)s + p[(1-w)s + w t] + p eps_j + gamma_j
/// Draw order: theta, s1, private signals in judge order, then per-judge
/// noise in judge order. Noise draws happen even at zero standard deviation,
/// so the stream layout does not depend on the noise configuration.
/// Identical (spec, seed) yields a bit-identical result.
DrawnTrial draw_trial(const CrowdSpec& spec, std::uint64_t seed);

struct MseEstimate {
  double mse = 0.0;
  double standard_error = 0.0;
  std::size_t replications = 0;
};

/// Monte Carlo estimate of E[(pivot(psi) - theta)^2] with its sample standard
/// error. Replication r draws from the substream mix64(seed, r), so the
/// estimate is reproducible and independent of evaluation order.
MseEstimate simulate_mse(const CrowdSpec& spec, double psi, std::size_t replications,
                         std::uint64_t seed);

}  // namespace crowdpivot
