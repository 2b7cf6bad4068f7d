#include "crowdpivot/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "crowdpivot/rng.hpp"

namespace crowdpivot {

namespace {

double rmse_of(const std::vector<double>& errors) {
  if (errors.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum_sq = 0.0;
  for (double e : errors) sum_sq += e * e;
  return std::sqrt(sum_sq / static_cast<double>(errors.size()));
}

bool is_mean_baseline(const MethodId& m) {
  return m.kind == MethodKind::Mean || (m.kind == MethodKind::Pivot && m.psi == 0.0);
}

bool is_mp_baseline(const MethodId& m) {
  return m.kind == MethodKind::MinimalPivot || (m.kind == MethodKind::Pivot && m.psi == 1.0);
}

bool is_np(const MethodId& m) {
  return m.kind == MethodKind::NeutralPivot || (m.kind == MethodKind::Pivot && m.psi == 2.0);
}

Panel resample_judges(const Panel& panel, std::size_t target, Rng& rng) {
  Panel out;
  out.f.reserve(target);
  out.g.reserve(target);
  const std::size_t n = panel.size();
  for (std::size_t k = 0; k < target; ++k) {
    const std::size_t j = rng.below(n);
    out.f.push_back(panel.f[j]);
    out.g.push_back(panel.g[j]);
  }
  return out;
}

}  // namespace

std::vector<MethodResult> evaluate(const ExperimentSet& set,
                                   const std::vector<MethodId>& methods) {
  validate_experiment_set(set);
  if (methods.empty()) throw ParameterError("no methods to evaluate");
  const bool unit = set.kind() == TaskKind::UnitInterval;

  std::vector<MethodResult> results;
  results.reserve(methods.size());
  for (const MethodId& method : methods) {
    MethodResult res;
    res.method = method;
    res.per_trial_error.reserve(set.trials.size());
    std::vector<double> errors;
    for (const Trial& trial : set.trials) {
      try {
        double estimate = aggregate(method, trial.panel);
        if (unit) estimate = winsorize_unit(estimate);
        const double err = estimate - trial.truth;
        res.per_trial_error.push_back(err);
        errors.push_back(err);
      } catch (const Error&) {
        res.per_trial_error.push_back(std::nullopt);
      }
    }
    res.trials_used = errors.size();
    res.trials_excluded = set.trials.size() - errors.size();
    res.rmse = rmse_of(errors);
    results.push_back(std::move(res));
  }
  return results;
}

OracleResult oracle_psi(const ExperimentSet& set) {
  validate_experiment_set(set);
  double numerator = 0.0;
  double denominator = 0.0;
  std::vector<PanelSummary> summaries;
  summaries.reserve(set.trials.size());
  for (const Trial& trial : set.trials) {
    const PanelSummary s = summarize(trial.panel);
    numerator += s.gap * (trial.truth - s.f_bar);
    denominator += s.gap * s.gap;
    summaries.push_back(s);
  }
  if (denominator == 0.0) {
    throw ValidationError("degenerate experiment set: every panel has f_bar == g_bar");
  }

  OracleResult out;
  out.psi_o = numerator / denominator;
  const bool unit = set.kind() == TaskKind::UnitInterval;
  double raw_sq = 0.0;
  double wins_sq = 0.0;
  for (std::size_t i = 0; i < set.trials.size(); ++i) {
    const double estimate = summaries[i].f_bar + out.psi_o * summaries[i].gap;
    const double raw = estimate - set.trials[i].truth;
    const double wins = (unit ? winsorize_unit(estimate) : estimate) - set.trials[i].truth;
    raw_sq += raw * raw;
    wins_sq += wins * wins;
  }
  const double n = static_cast<double>(set.trials.size());
  out.rmse_at_psi_o = std::sqrt(raw_sq / n);
  out.rmse_at_psi_o_winsorized = std::sqrt(wins_sq / n);
  return out;
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + 1 + j + 1);  // average of 1-based ranks
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double signed_rank_exact_tail(std::span<const double> ranks, double w_plus) {
  // Doubled midranks are integers, so the rank-sum distribution lives on a
  // small integer lattice; convolve one Bernoulli(1/2) term per pair.
  long long total = 0;
  std::vector<long long> doubled;
  doubled.reserve(ranks.size());
  for (double r : ranks) {
    doubled.push_back(std::llround(2.0 * r));
    total += doubled.back();
  }
  std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
  count[0] = 1.0;
  std::size_t reach = 0;
  for (long long r2 : doubled) {
    const std::size_t step = static_cast<std::size_t>(r2);
    for (std::size_t s = reach + 1; s-- > 0;) {
      if (count[s] != 0.0) count[s + step] += count[s];
    }
    reach += step;
  }
  const long long threshold = std::llround(2.0 * w_plus);
  double tail = 0.0;
  for (std::size_t s = static_cast<std::size_t>(std::max(threshold, 0LL)); s <= reach; ++s) {
    tail += count[s];
  }
  return tail / std::ldexp(1.0, static_cast<int>(ranks.size()));
}

double signed_rank_normal_tail(std::span<const double> ranks, double w_plus) {
  // Mean sum(r)/2 and variance sum(r^2)/4 of the null rank sum; the variance
  // form absorbs the usual tie correction automatically.
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double r : ranks) {
    sum += r;
    sum_sq += r * r;
  }
  const double mean = 0.5 * sum;
  const double sd = std::sqrt(0.25 * sum_sq);
  const double z = (w_plus - mean - 0.5) / sd;
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> errors_a,
                                    std::span<const double> errors_b) {
  if (errors_a.size() != errors_b.size()) {
    throw ParameterError("signed-rank test needs equal-length paired samples");
  }
  if (errors_a.empty()) throw ParameterError("signed-rank test of empty samples");

  std::vector<double> abs_diff;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < errors_a.size(); ++i) {
    const double d = std::abs(errors_a[i]) - std::abs(errors_b[i]);
    if (d == 0.0) continue;
    abs_diff.push_back(std::abs(d));
    positive.push_back(d > 0.0);
  }

  WilcoxonResult res;
  res.n = abs_diff.size();
  if (abs_diff.empty()) {
    res.degenerate = true;
    res.p_value = 1.0;
    return res;
  }

  const std::vector<double> ranks = midranks(abs_diff);
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (positive[i]) res.w_plus += ranks[i];
  }
  res.exact = res.n <= kWilcoxonExactLimit;
  res.p_value = res.exact ? signed_rank_exact_tail(ranks, res.w_plus)
                          : signed_rank_normal_tail(ranks, res.w_plus);
  return res;
}

std::vector<SignificanceVsBaselines> significance_vs_baselines(
    const std::vector<MethodResult>& results) {
  const MethodResult* mean_base = nullptr;
  const MethodResult* mp_base = nullptr;
  for (const MethodResult& r : results) {
    if (!mean_base && is_mean_baseline(r.method)) mean_base = &r;
    if (!mp_base && is_mp_baseline(r.method)) mp_base = &r;
  }

  auto paired_p = [](const MethodResult& base, const MethodResult& challenger)
      -> std::optional<double> {
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t i = 0; i < base.per_trial_error.size(); ++i) {
      if (base.per_trial_error[i] && challenger.per_trial_error[i]) {
        a.push_back(*base.per_trial_error[i]);
        b.push_back(*challenger.per_trial_error[i]);
      }
    }
    if (a.empty()) return std::nullopt;
    return wilcoxon_signed_rank(a, b).p_value;
  };

  std::vector<SignificanceVsBaselines> out(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const MethodResult& r = results[i];
    if (mean_base && &r != mean_base) out[i].p_vs_mean = paired_p(*mean_base, r);
    if (mp_base && &r != mp_base) out[i].p_vs_mp = paired_p(*mp_base, r);
  }
  return out;
}

BootstrapCurve bootstrap_curves(const ExperimentSet& set,
                                const std::vector<MethodId>& methods,
                                const std::vector<std::size_t>& sizes,
                                std::size_t replications, std::uint64_t seed) {
  validate_experiment_set(set);
  if (methods.empty()) throw ParameterError("no methods to bootstrap");
  if (sizes.empty()) throw ParameterError("no crowd sizes to bootstrap");
  for (std::size_t s : sizes) {
    if (s < 1) throw ParameterError("bootstrap crowd size must be at least 1");
  }
  if (replications < 1) throw ParameterError("bootstrap needs at least one replication");

  // NeutralPivot rides along as the ratio denominator even when not requested.
  std::vector<MethodId> evaluated = methods;
  std::size_t np_index = evaluated.size();
  for (std::size_t i = 0; i < evaluated.size(); ++i) {
    if (is_np(evaluated[i])) {
      np_index = i;
      break;
    }
  }
  if (np_index == evaluated.size()) evaluated.push_back(MethodId::np());

  const bool unit = set.kind() == TaskKind::UnitInterval;
  const std::size_t n_eval = evaluated.size();
  const std::size_t n_trials = set.trials.size();

  BootstrapCurve curve;
  curve.sizes = sizes;
  curve.methods = methods;
  curve.replications = replications;
  curve.seed = seed;
  curve.mean_rmse.assign(methods.size(), std::vector<double>(sizes.size(), 0.0));
  curve.ratio_to_np.assign(methods.size(), std::vector<double>(sizes.size(), 0.0));
  curve.skipped.assign(methods.size(), std::vector<std::size_t>(sizes.size(), 0));

  std::vector<double> rmse_sum(n_eval);
  std::vector<std::size_t> rmse_count(n_eval);
  std::vector<std::size_t> skipped(n_eval);
  std::vector<double> err_sq(n_eval);
  std::vector<std::size_t> err_n(n_eval);
  std::vector<bool> failed(n_eval);

  for (std::size_t si = 0; si < sizes.size(); ++si) {
    std::fill(rmse_sum.begin(), rmse_sum.end(), 0.0);
    std::fill(rmse_count.begin(), rmse_count.end(), 0);
    std::fill(skipped.begin(), skipped.end(), 0);

    for (std::size_t b = 0; b < replications; ++b) {
      std::fill(err_sq.begin(), err_sq.end(), 0.0);
      std::fill(err_n.begin(), err_n.end(), 0);
      std::fill(failed.begin(), failed.end(), false);

      for (std::size_t ti = 0; ti < n_trials; ++ti) {
        Rng rng = Rng::substream(seed, ti, b);
        const Panel resampled = resample_judges(set.trials[ti].panel, sizes[si], rng);
        for (std::size_t mi = 0; mi < n_eval; ++mi) {
          if (failed[mi]) continue;
          try {
            double estimate = aggregate(evaluated[mi], resampled);
            if (unit) estimate = winsorize_unit(estimate);
            const double err = estimate - set.trials[ti].truth;
            err_sq[mi] += err * err;
            ++err_n[mi];
          } catch (const Error&) {
            failed[mi] = true;
          }
        }
      }
      for (std::size_t mi = 0; mi < n_eval; ++mi) {
        if (failed[mi] || err_n[mi] == 0) {
          ++skipped[mi];
        } else {
          rmse_sum[mi] += std::sqrt(err_sq[mi] / static_cast<double>(err_n[mi]));
          ++rmse_count[mi];
        }
      }
    }

    auto mean_rmse_of = [&](std::size_t mi) {
      return rmse_count[mi] > 0 ? rmse_sum[mi] / static_cast<double>(rmse_count[mi])
                                : std::numeric_limits<double>::quiet_NaN();
    };
    const double np_rmse = mean_rmse_of(np_index);
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      curve.mean_rmse[mi][si] = mean_rmse_of(mi);
      curve.ratio_to_np[mi][si] = curve.mean_rmse[mi][si] / np_rmse;
      curve.skipped[mi][si] = skipped[mi];
    }
  }
  return curve;
}

}  // namespace crowdpivot
