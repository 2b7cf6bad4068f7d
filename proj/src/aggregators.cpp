#include "crowdpivot/aggregators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace crowdpivot {

double mean(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean of empty sequence");
  double sum = 0.0;
  for (double x : values) sum += x;
  return sum / static_cast<double>(values.size());
}

double median(std::span<const double> values) {
  if (values.empty()) throw ValidationError("median of empty sequence");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double trimmed_mean(double trim_fraction, std::span<const double> values) {
  if (!(trim_fraction >= 0.0 && trim_fraction < 0.5)) {
    throw ParameterError("trim fraction " + std::to_string(trim_fraction) +
                         " outside [0, 0.5)");
  }
  if (values.empty()) throw ValidationError("trimmed mean of empty sequence");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const auto cut = static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(n)));
  // 2 * floor(t*n) < n for t < 0.5, so the kept range is never empty
  return mean(std::span<const double>(sorted).subspan(cut, n - 2 * cut));
}

double pivot(double psi, const PanelSummary& summary) {
  if (!(psi >= 0.0)) throw ParameterError("pivot weight psi must be >= 0, got " + std::to_string(psi));
  return summary.f_bar + psi * summary.gap;
}

double global_posterior_pivot(double maven_share, double private_weight,
                              const PanelSummary& summary) {
  if (maven_share * private_weight == 0.0) {
    throw SingularityError("global posterior pivot undefined at p*w = 0");
  }
  if (!(maven_share > 0.0 && maven_share <= 1.0) ||
      !(private_weight > 0.0 && private_weight <= 1.0)) {
    throw ParameterError("global posterior pivot requires p and w in (0,1]");
  }
  return summary.f_bar + summary.gap / (maven_share * private_weight);
}

double surprising_overshoot(const Panel& panel) {
  validate_panel(panel);
  const std::size_t n = panel.size();
  const double f_bar = mean(panel.f);

  std::size_t overshoots = 0;
  for (double gj : panel.g) {
    if (gj > f_bar) ++overshoots;  // strict: ties do not count
  }
  const double q = 1.0 - static_cast<double>(overshoots) / static_cast<double>(n);

  std::vector<double> sorted = panel.f;
  std::sort(sorted.begin(), sorted.end());
  std::size_t i = 0;
  while (i < n) {
    std::size_t run_end = i;  // last index of this tie run
    while (run_end + 1 < n && sorted[run_end + 1] == sorted[i]) ++run_end;
    const double cdf = static_cast<double>(run_end + 1) / static_cast<double>(n);
    if (cdf > q) return sorted[i];
    i = run_end + 1;
  }
  return sorted.back();  // q >= 1: empty candidate set, take the maximum
}

double winsorize_unit(double x) {
  if (!std::isfinite(x)) throw ValidationError("winsorize of non-finite value");
  return std::clamp(x, 0.0, 1.0);
}

double aggregate(const MethodId& method, const Panel& panel) {
  validate_panel(panel);
  switch (method.kind) {
    case MethodKind::Mean:
      return mean(panel.f);
    case MethodKind::Median:
      return median(panel.f);
    case MethodKind::Trimmed:
      return trimmed_mean(method.trim_fraction, panel.f);
    case MethodKind::Pivot:
      return pivot(method.psi, summarize(panel));
    case MethodKind::MinimalPivot:
      return pivot(1.0, summarize(panel));
    case MethodKind::NeutralPivot:
      return pivot(2.0, summarize(panel));
    case MethodKind::GlobalPosterior:
      return global_posterior_pivot(method.maven_share, method.private_weight,
                                    summarize(panel));
    case MethodKind::SurprisingOvershoot:
      return surprising_overshoot(panel);
  }
  throw ParameterError("unknown method kind");
}

}  // namespace crowdpivot
