#include "crowdpivot/core.hpp"

#include <cmath>

namespace crowdpivot {

namespace {

const double* first_non_finite(const std::vector<double>& xs) {
  for (const double& x : xs) {
    if (!std::isfinite(x)) return &x;
  }
  return nullptr;
}

}  // namespace

TaskKind ExperimentSet::kind() const {
  if (trials.empty()) throw ValidationError("experiment set '" + name + "' has no trials");
  return trials.front().kind;
}

void validate_panel(const Panel& panel) {
  if (panel.f.empty()) throw ValidationError("panel is empty");
  if (panel.f.size() != panel.g.size()) {
    throw ValidationError("panel length mismatch: " + std::to_string(panel.f.size()) +
                          " estimates vs " + std::to_string(panel.g.size()) +
                          " peer estimates");
  }
  if (!panel.judge_ids.empty() && panel.judge_ids.size() != panel.f.size()) {
    throw ValidationError("judge_ids length mismatch: " + std::to_string(panel.judge_ids.size()) +
                          " ids vs " + std::to_string(panel.f.size()) + " judges");
  }
  if (first_non_finite(panel.f)) throw ValidationError("non-finite entry in f");
  if (first_non_finite(panel.g)) throw ValidationError("non-finite entry in g");
}

void validate_trial(const Trial& trial) {
  validate_panel(trial.panel);
  if (!std::isfinite(trial.truth)) {
    throw ValidationError("trial '" + trial.id + "': non-finite truth");
  }
  if (trial.kind == TaskKind::UnitInterval && (trial.truth < 0.0 || trial.truth > 1.0)) {
    throw ValidationError("trial '" + trial.id + "': truth " + std::to_string(trial.truth) +
                          " outside [0,1] for a unit-interval task");
  }
}

void validate_experiment_set(const ExperimentSet& set) {
  if (set.trials.empty()) throw ValidationError("experiment set '" + set.name + "' has no trials");
  const TaskKind kind = set.trials.front().kind;
  for (const Trial& trial : set.trials) {
    validate_trial(trial);
    if (trial.kind != kind) {
      throw ValidationError("experiment set '" + set.name + "': trial '" + trial.id +
                            "' does not share the set's task kind");
    }
  }
}

PanelSummary summarize(const Panel& panel) {
  validate_panel(panel);
  double f_sum = 0.0;
  double g_sum = 0.0;
  for (double x : panel.f) f_sum += x;
  for (double x : panel.g) g_sum += x;
  PanelSummary s;
  s.size = panel.size();
  s.f_bar = f_sum / static_cast<double>(s.size);
  s.g_bar = g_sum / static_cast<double>(s.size);
  s.gap = s.f_bar - s.g_bar;
  return s;
}

}  // namespace crowdpivot
