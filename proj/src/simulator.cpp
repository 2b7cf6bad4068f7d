#include "crowdpivot/simulator.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "crowdpivot/aggregators.hpp"
#include "crowdpivot/rng.hpp"

namespace crowdpivot {

std::size_t CrowdSpec::maven_count() const {
  return static_cast<std::size_t>(std::llround(maven_share * static_cast<double>(judges)));
}

void validate(const CrowdSpec& spec) {
  if (spec.judges < 1) throw ParameterError("crowd needs at least one judge");
  if (!(spec.maven_share >= 0.0 && spec.maven_share <= 1.0)) {
    throw ParameterError("maven share must lie in [0,1]");
  }
  if (!(spec.m0 > 0.0)) throw ParameterError("m0 must be positive");
  if (!(spec.m1 > 0.0)) throw ParameterError("m1 must be positive");
  if (!(spec.l > 0.0)) throw ParameterError("l must be positive");
  if (!std::isfinite(spec.mu0)) throw ParameterError("mu0 must be finite");
  if (!(spec.v0 >= 0.0) || !std::isfinite(spec.v0)) {
    throw ParameterError("v0 must be a nonnegative real");
  }
  if (spec.prior_sd && (!(*spec.prior_sd >= 0.0) || !std::isfinite(*spec.prior_sd))) {
    throw ParameterError("sigma0 must be a nonnegative real");
  }
  for (double sd : {spec.sd_delta, spec.sd_epsilon, spec.sd_gamma}) {
    if (!(sd >= 0.0) || !std::isfinite(sd)) {
      throw ParameterError("noise standard deviations must be nonnegative reals");
    }
  }
  if (spec.structure == CrowdStructure::Symmetric && spec.maven_share != 1.0) {
    throw ParameterError("symmetric structure requires maven share p = 1");
  }
}

DrawnTrial draw_trial(const CrowdSpec& spec, std::uint64_t seed) {
  validate(spec);
  Rng rng(seed);

  const double p = spec.maven_share;
  const double w = spec.private_weight();
  const std::size_t n = spec.judges;
  const std::size_t n_mavens = spec.maven_count();
  const bool nested = spec.structure == CrowdStructure::Nested;

  LatentRecord latent;
  latent.maven_count = n_mavens;
  latent.theta = rng.normal(spec.mu0, spec.sigma0());
  latent.s1 = rng.normal(latent.theta, std::sqrt(spec.v0 / spec.m1));
  latent.s = (spec.m0 * spec.mu0 + spec.m1 * latent.s1) / spec.m();

  const double t_sd = std::sqrt(spec.v0 / spec.l);
  if (nested) {
    if (n_mavens > 0) latent.t.push_back(rng.normal(latent.theta, t_sd));
  } else {
    latent.t.reserve(n_mavens);
    for (std::size_t j = 0; j < n_mavens; ++j) {
      latent.t.push_back(rng.normal(latent.theta, t_sd));
    }
  }

  const double s = latent.s;
  const double pw2 = p * w * w;
  Panel panel;
  panel.f.reserve(n);
  panel.g.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (j < n_mavens) {
      const double eps = spec.sd_epsilon * rng.normal();
      const double gam = spec.sd_gamma * rng.normal();
      if (nested) {
        const double optimal = (1.0 - w) * s + w * latent.t.front();
        panel.f.push_back(optimal + eps);
        panel.g.push_back((1.0 - p) * s + p * optimal + p * eps + gam);
      } else {
        const double t = latent.t[j];
        panel.f.push_back((1.0 - w) * s + w * t + eps);
        panel.g.push_back((1.0 - pw2) * s + pw2 * t + p * w * eps + gam);
      }
    } else {
      const double delta = spec.sd_delta * rng.normal();
      panel.f.push_back(s - delta);
      panel.g.push_back(s - delta);
    }
  }

  Trial trial;
  trial.id = "sim-" + std::to_string(seed);
  trial.panel = std::move(panel);
  trial.truth = latent.theta;
  trial.kind = TaskKind::Continuous;
  return {std::move(trial), std::move(latent)};
}

MseEstimate simulate_mse(const CrowdSpec& spec, double psi, std::size_t replications,
                         std::uint64_t seed) {
  if (!(psi >= 0.0)) throw ParameterError("pivot weight psi must be >= 0");
  if (replications < 2) throw ParameterError("simulate_mse needs at least 2 replications");
  validate(spec);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t r = 0; r < replications; ++r) {
    const DrawnTrial drawn = draw_trial(spec, mix64(seed, r));
    const double err = pivot(psi, summarize(drawn.trial.panel)) - drawn.latent.theta;
    const double sq = err * err;
    sum += sq;
    sum_sq += sq * sq;
  }
  const double n = static_cast<double>(replications);
  const double mse = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mse * mse) / (n - 1.0));
  return {mse, std::sqrt(var / n), replications};
}

}  // namespace crowdpivot
