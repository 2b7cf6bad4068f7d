#include "crowdpivot/theory.hpp"

#include <cmath>
#include <string>

namespace crowdpivot {

namespace {

// (m0^2 sigma0^2 + m1^2 (v0/m1)) / m^2, the variance passed through by the
// shared information; common to the limiting and finite expressions.
double shared_signal_variance(const TheoryParams& tp) {
  const double m = tp.m();
  return (tp.m0 * tp.m0 * tp.sigma0 * tp.sigma0 + tp.m1 * tp.v0) / (m * m);
}

double limiting_coefficient(double psi, double p, double w) {
  const double pw = p * w;
  return 1.0 - (1.0 + psi) * pw + psi * pw * pw;
}

}  // namespace

TheoryParams TheoryParams::from_crowd_spec(const CrowdSpec& spec) {
  TheoryParams tp;
  tp.maven_share = spec.maven_share;
  tp.private_weight = spec.private_weight();
  tp.m0 = spec.m0;
  tp.m1 = spec.m1;
  tp.sigma0 = spec.sigma0();
  tp.v0 = spec.v0;
  tp.var_delta = spec.sd_delta * spec.sd_delta;
  tp.var_epsilon = spec.sd_epsilon * spec.sd_epsilon;
  tp.var_gamma = spec.sd_gamma * spec.sd_gamma;
  tp.judges = spec.judges;
  return tp;
}

void validate(const TheoryParams& tp) {
  if (!(tp.maven_share >= 0.0 && tp.maven_share <= 1.0)) {
    throw ParameterError("maven share must lie in [0,1]");
  }
  if (!(tp.private_weight >= 0.0 && tp.private_weight <= 1.0)) {
    throw ParameterError("private weight must lie in [0,1]");
  }
  if (!(tp.m0 > 0.0)) throw ParameterError("m0 must be positive");
  if (!(tp.m1 > 0.0)) throw ParameterError("m1 must be positive");
  if (!(tp.sigma0 >= 0.0) || !std::isfinite(tp.sigma0)) {
    throw ParameterError("sigma0 must be a nonnegative real");
  }
  if (!(tp.v0 >= 0.0) || !std::isfinite(tp.v0)) {
    throw ParameterError("v0 must be a nonnegative real");
  }
  for (double v : {tp.var_delta, tp.var_epsilon, tp.var_gamma}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ParameterError("noise variances must be nonnegative reals");
    }
  }
  if (tp.judges && *tp.judges < 1) throw ParameterError("crowd size must be positive");
}

double limiting_mse(double psi, const TheoryParams& tp) {
  if (!(psi >= 0.0)) throw ParameterError("pivot weight psi must be >= 0");
  validate(tp);
  const double a = limiting_coefficient(psi, tp.maven_share, tp.private_weight);
  return a * a * shared_signal_variance(tp);
}

double finite_mse(double psi, const TheoryParams& tp) {
  if (!(psi >= 0.0)) throw ParameterError("pivot weight psi must be >= 0");
  validate(tp);
  if (!tp.judges) throw ParameterError("finite_mse needs a finite crowd size");
  const double p = tp.maven_share;
  const double w = tp.private_weight;
  if (w == 1.0) {
    throw SingularityError("finite_mse undefined at w = 1: l = w*m/(1-w) diverges");
  }

  const double n = static_cast<double>(*tp.judges);
  const double a = limiting_coefficient(psi, p, w);
  const double b = (1.0 + psi) - psi * p * w;

  double private_term = 0.0;
  if (w > 0.0) {
    const double l = w * tp.m() / (1.0 - w);
    private_term = p * w * w * b * b * (tp.v0 / l) / n;
  }
  return a * a * shared_signal_variance(tp)       //
         + private_term                           //
         + (1.0 - p) / n * tp.var_delta           //
         + p * b * b / n * tp.var_epsilon         //
         + psi * psi * p / n * tp.var_gamma;
}

PsiInterval dominance_psi_range() { return {0.0, 2.0}; }

double prob_pw_below(double c) {
  if (!(c > 0.0)) throw ParameterError("threshold must be positive, got " + std::to_string(c));
  if (c >= 1.0) return 1.0;
  return c * (1.0 - std::log(c));
}

RegionGrid dominance_region_grid(std::size_t resolution) {
  if (resolution < 2) throw ParameterError("grid resolution must be at least 2");
  RegionGrid grid;
  grid.resolution = resolution;
  grid.points.reserve(resolution * resolution);
  const double step = 1.0 / static_cast<double>(resolution - 1);
  for (std::size_t i = 0; i < resolution; ++i) {
    const double p = static_cast<double>(i) * step;
    for (std::size_t j = 0; j < resolution; ++j) {
      const double w = static_cast<double>(j) * step;
      grid.points.push_back({p, w, p * w <= 2.0 / 3.0});
    }
  }
  return grid;
}

}  // namespace crowdpivot
