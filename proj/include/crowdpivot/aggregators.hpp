#pragma once

#include <span>

#include "crowdpivot/core.hpp"

namespace crowdpivot {

enum class MethodKind {
  Mean,
  Median,
  Trimmed,
  Pivot,
  MinimalPivot,         // Pivot with psi = 1
  NeutralPivot,         // Pivot with psi = 2
  GlobalPosterior,      // f_bar + (1/(p*w)) * (f_bar - g_bar)
  SurprisingOvershoot,  // quantile of f at 1 - (overshoot fraction of g over f_bar)
};

/// A point-estimation method over a Panel. Parameter fields are meaningful
/// only for the kinds that use them; the factories below set them.
struct MethodId {
  MethodKind kind = MethodKind::Mean;
  double trim_fraction = 0.1;   // Trimmed
  double psi = 0.0;             // Pivot
  double maven_share = 1.0;     // GlobalPosterior p
  double private_weight = 1.0;  // GlobalPosterior w

  static MethodId mean() { return MethodId{}; }
  static MethodId median() { return MethodId{MethodKind::Median}; }
  static MethodId trimmed(double fraction) {
    MethodId m{MethodKind::Trimmed};
    m.trim_fraction = fraction;
    return m;
  }
  static MethodId pivot(double psi) {
    MethodId m{MethodKind::Pivot};
    m.psi = psi;
    return m;
  }
  static MethodId mp() { return MethodId{MethodKind::MinimalPivot}; }
  static MethodId np() { return MethodId{MethodKind::NeutralPivot}; }
  static MethodId gpe(double maven_share, double private_weight) {
    MethodId m{MethodKind::GlobalPosterior};
    m.maven_share = maven_share;
    m.private_weight = private_weight;
    return m;
  }
  static MethodId so() { return MethodId{MethodKind::SurprisingOvershoot}; }

  friend bool operator==(const MethodId&, const MethodId&) = default;
};

double mean(std::span<const double> values);
double median(std::span<const double> values);

/// Sorts ascending, removes floor(trim_fraction * n) values from each end,
/// and averages the rest. trim_fraction must lie in [0, 0.5).
double trimmed_mean(double trim_fraction, std::span<const double> values);

/// The pivot family: f_bar + psi * (f_bar - g_bar). psi = 0 is the simple
/// mean, psi = 1 the minimal pivot 2f_bar - g_bar, psi = 2 the neutral pivot
/// 3f_bar - 2g_bar.
double pivot(double psi, const PanelSummary& summary);

/// f_bar + (1/(p*w)) * (f_bar - g_bar), the large-crowd approximation of the
/// global posterior expectation for known crowd composition p and private
/// signal weight w, both in (0,1].
double global_posterior_pivot(double maven_share, double private_weight,
                              const PanelSummary& summary);

/// Quantile-matching estimate: with p_hat the fraction of judges whose peer
/// prediction strictly exceeds f_bar, returns the smallest f value whose
/// empirical CDF (ties at maximal rank) strictly exceeds 1 - p_hat, or
/// max(f) when no value qualifies (p_hat = 0). Always an element of f.
double surprising_overshoot(const Panel& panel);

/// Clamp to [0,1]; applied by evaluation to estimates on unit-interval tasks.
double winsorize_unit(double x);

double aggregate(const MethodId& method, const Panel& panel);

}  // namespace crowdpivot
