#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "crowdpivot/aggregators.hpp"
#include "crowdpivot/core.hpp"
#include "crowdpivot/evaluation.hpp"
#include "crowdpivot/theory.hpp"

namespace crowdpivot {

class ParseError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Method text grammar:
//   mean | median | trimmed:<fraction> | pivot:<psi> | mp | np | so
//   | gpe:p=<p>,w=<w>
// ---------------------------------------------------------------------------
MethodId parse_method(const std::string& text);
std::vector<MethodId> parse_method_list(const std::string& text);  // comma separated
std::string method_text(const MethodId& method);

/// Canonical number formatting for every emitted file: 6 significant digits,
/// so identical inputs always serialize to identical bytes.
std::string format_number(double x);

// ---------------------------------------------------------------------------
// Dataset format: UTF-8 CSV, mandatory header
//   experiment,trial,judge,estimate,peer_estimate,truth,task
// truth and task are constant within a trial; task is "continuous" or
// "unit"; (trial, judge) pairs are unique within an experiment. Rows with an
// empty estimate or peer_estimate drop that judge pair.
// ---------------------------------------------------------------------------
struct LoadReport {
  std::size_t rows = 0;
  std::size_t excluded_judges = 0;
  std::size_t dropped_trials = 0;  // trials left with no judges
  std::vector<std::string> notes;
};

std::vector<ExperimentSet> parse_experiments(std::istream& in, LoadReport* report = nullptr);
std::vector<ExperimentSet> load_experiments(const std::string& path,
                                            LoadReport* report = nullptr);
std::string experiments_csv(const std::vector<ExperimentSet>& sets);
void write_experiments(const std::vector<ExperimentSet>& sets, const std::string& path);

/// Single-panel CSV for the aggregate subcommand: columns estimate and
/// peer_estimate, optional judge. Rows with an empty value drop the pair.
Panel load_panel(const std::string& path);

// ---------------------------------------------------------------------------
// Result serialization
// ---------------------------------------------------------------------------
struct ResultRow {
  std::string experiment;
  MethodId method;
  double rmse = 0.0;
  std::size_t n_trials = 0;
  bool sig_vs_mean = false;  // Wilcoxon vs Mean below the significance level
  bool sig_vs_mp = false;    // Wilcoxon vs MinimalPivot below the level
};

struct OracleRow {
  std::string experiment;
  double psi_o = 0.0;
  double rmse = 0.0;
};

std::string results_csv(const std::vector<ResultRow>& rows);
std::string oracle_csv(const std::vector<OracleRow>& rows);
std::string bootstrap_csv(const std::vector<std::pair<std::string, BootstrapCurve>>& curves);

// ---------------------------------------------------------------------------
// Charts (SVG 1.1)
// ---------------------------------------------------------------------------
std::string svg_line_chart(const BootstrapCurve& curve);
std::string svg_region_chart(const RegionGrid& grid);

void write_file(const std::string& path, const std::string& content);

inline void write_results(const std::vector<ResultRow>& rows, const std::string& path) {
  write_file(path, results_csv(rows));
}
inline void write_svg_chart(const BootstrapCurve& curve, const std::string& path) {
  write_file(path, svg_line_chart(curve));
}
inline void write_svg_chart(const RegionGrid& grid, const std::string& path) {
  write_file(path, svg_region_chart(grid));
}

}  // namespace crowdpivot
