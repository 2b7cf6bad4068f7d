#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace crowdpivot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input data (empty panels, non-finite entries, out-of-range truth).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Invalid operation parameter (negative pivot weight, bad trim fraction, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A formula was evaluated at a point where it is undefined.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// One question's worth of elicited data. Judge j provides an estimate f[j]
/// of the target quantity and an estimate g[j] of the average estimate of
/// the other judges.
struct Panel {
  std::vector<double> f;
  std::vector<double> g;
  std::vector<std::string> judge_ids;  // optional; empty, or aligned with f/g

  std::size_t size() const { return f.size(); }

  friend bool operator==(const Panel&, const Panel&) = default;
};

struct PanelSummary {
  double f_bar = 0.0;
  double g_bar = 0.0;
  double gap = 0.0;  // f_bar - g_bar
  std::size_t size = 0;
};

enum class TaskKind {
  Continuous,
  UnitInterval,  // probabilistic/binary tasks; truth and final estimates live in [0,1]
};

struct Trial {
  std::string id;
  Panel panel;
  double truth = 0.0;
  TaskKind kind = TaskKind::Continuous;
};

/// A named collection of trials sharing one task kind.
struct ExperimentSet {
  std::string name;
  std::vector<Trial> trials;

  TaskKind kind() const;  // kind shared by the trials; throws on empty set
};

// Throw ValidationError describing the first violation, if any.
void validate_panel(const Panel& panel);
void validate_trial(const Trial& trial);
void validate_experiment_set(const ExperimentSet& set);

PanelSummary summarize(const Panel& panel);

}  // namespace crowdpivot
