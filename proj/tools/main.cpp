#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "crowdpivot/aggregators.hpp"
#include "crowdpivot/core.hpp"
#include "crowdpivot/evaluation.hpp"
#include "crowdpivot/io.hpp"
#include "crowdpivot/rng.hpp"
#include "crowdpivot/simulator.hpp"
#include "crowdpivot/theory.hpp"

namespace {

using namespace crowdpivot;

constexpr const char* kDefaultMethods = "mean,median,trimmed:0.1,mp,so,np";

void emit(const std::string& content, const std::string& path) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

bool g_verbose = false;

std::vector<ExperimentSet> load_dataset(const std::string& path) {
  LoadReport report;
  std::vector<ExperimentSet> sets = load_experiments(path, &report);
  if (g_verbose) {
    for (const std::string& note : report.notes) {
      std::cerr << "note: " << note << "\n";
    }
  }
  if (report.excluded_judges > 0) {
    std::cerr << "warning: excluded " << report.excluded_judges
              << " judge(s) with missing values\n";
  }
  if (sets.empty()) throw Error("no usable experiments in '" + path + "'");
  return sets;
}

// <stem>_<experiment><ext>, so one --svg flag can serve several experiments
std::string svg_path_for(const std::string& base, const std::string& experiment) {
  const std::size_t dot = base.rfind('.');
  if (dot == std::string::npos || base.find('/', dot) != std::string::npos) {
    return base + "_" + experiment;
  }
  return base.substr(0, dot) + "_" + experiment + base.substr(dot);
}

void run_aggregate(const std::string& input, const std::string& methods_text,
                   const std::string& output) {
  const Panel panel = load_panel(input);
  const std::vector<MethodId> methods = parse_method_list(methods_text);
  std::string out = "method,estimate\n";
  for (const MethodId& method : methods) {
    out += method_text(method) + "," + format_number(aggregate(method, panel)) + "\n";
  }
  emit(out, output);
}

void run_simulate(const CrowdSpec& spec, std::size_t trials, const std::vector<double>& psis,
                  std::size_t replications, std::uint64_t seed, const std::string& output) {
  std::cerr << "# seed=" << seed << "\n";
  if (trials == 0 && psis.empty()) {
    throw Error("simulate: nothing to do, pass --trials and/or --psi");
  }
  if (trials > 0 && !psis.empty() && output.empty()) {
    throw Error("simulate: pass --output for the trials CSV when also requesting --psi");
  }
  if (trials > 0) {
    ExperimentSet set;
    set.name = "sim";
    for (std::size_t i = 0; i < trials; ++i) {
      DrawnTrial drawn = draw_trial(spec, mix64(seed, i));
      drawn.trial.id = "t" + std::to_string(i + 1);
      set.trials.push_back(std::move(drawn.trial));
    }
    emit(experiments_csv({set}), output);
  }
  if (!psis.empty()) {
    std::string out =
        "judges,p,m0,m1,l,mu0,sigma0,v0,sd_delta,sd_epsilon,sd_gamma,structure,psi,mse,se\n";
    const char* structure = spec.structure == CrowdStructure::Symmetric ? "symmetric"
                            : spec.structure == CrowdStructure::Nested  ? "nested"
                                                                        : "nested-symmetric";
    for (double psi : psis) {
      const MseEstimate est = simulate_mse(spec, psi, replications, seed);
      out += std::to_string(spec.judges) + "," + format_number(spec.maven_share) + "," +
             format_number(spec.m0) + "," + format_number(spec.m1) + "," +
             format_number(spec.l) + "," + format_number(spec.mu0) + "," +
             format_number(spec.sigma0()) + "," + format_number(spec.v0) + "," +
             format_number(spec.sd_delta) + "," + format_number(spec.sd_epsilon) + "," +
             format_number(spec.sd_gamma) + "," + structure + "," + format_number(psi) + "," +
             format_number(est.mse) + "," + format_number(est.standard_error) + "\n";
    }
    // trials CSV already claimed --output; MSE rows then go to stdout
    emit(out, trials > 0 ? std::string{} : output);
  }
}

void run_theory_psi_curve(const TheoryParams& params, const std::vector<double>& psis,
                          const std::string& output) {
  const bool finite = params.judges.has_value();
  std::string out = finite ? "psi,limiting_mse,finite_mse\n" : "psi,limiting_mse\n";
  for (double psi : psis) {
    out += format_number(psi) + "," + format_number(limiting_mse(psi, params));
    if (finite) out += "," + format_number(finite_mse(psi, params));
    out += "\n";
  }
  emit(out, output);
}

void run_theory_region(std::size_t resolution, const std::string& output,
                       const std::string& svg) {
  const RegionGrid grid = dominance_region_grid(resolution);
  std::string out = "p,w,inside\n";
  for (const RegionPoint& pt : grid.points) {
    out += format_number(pt.p) + "," + format_number(pt.w) + "," + (pt.inside ? "1" : "0") +
           "\n";
  }
  emit(out, output);
  if (!svg.empty()) write_svg_chart(grid, svg);
}

void run_evaluate(const std::string& input, const std::string& methods_text,
                  const std::string& output) {
  const std::vector<ExperimentSet> sets = load_dataset(input);
  const std::vector<MethodId> methods = parse_method_list(methods_text);
  std::vector<ResultRow> rows;
  for (const ExperimentSet& set : sets) {
    const std::vector<MethodResult> results = evaluate(set, methods);
    const auto marks = significance_vs_baselines(results);
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].trials_excluded > 0) {
        std::cerr << "warning: " << set.name << "/" << method_text(methods[i]) << ": "
                  << results[i].trials_excluded << " trial(s) excluded\n";
      }
      ResultRow row;
      row.experiment = set.name;
      row.method = methods[i];
      row.rmse = results[i].rmse;
      row.n_trials = results[i].trials_used;
      row.sig_vs_mean = marks[i].p_vs_mean && *marks[i].p_vs_mean < kSignificanceLevel;
      row.sig_vs_mp = marks[i].p_vs_mp && *marks[i].p_vs_mp < kSignificanceLevel;
      rows.push_back(row);
    }
  }
  emit(results_csv(rows), output);
}

void run_oracle(const std::string& input, const std::string& output) {
  const std::vector<ExperimentSet> sets = load_dataset(input);
  std::vector<OracleRow> rows;
  for (const ExperimentSet& set : sets) {
    const OracleResult oracle = oracle_psi(set);
    rows.push_back({set.name, oracle.psi_o, oracle.rmse_at_psi_o});
  }
  emit(oracle_csv(rows), output);
}

void run_bootstrap(const std::string& input, const std::string& methods_text,
                   const std::vector<std::size_t>& sizes, std::size_t replications,
                   std::uint64_t seed, const std::string& output, const std::string& svg) {
  std::cerr << "# seed=" << seed << "\n";
  const std::vector<ExperimentSet> sets = load_dataset(input);
  const std::vector<MethodId> methods = parse_method_list(methods_text);
  std::vector<std::pair<std::string, BootstrapCurve>> curves;
  for (const ExperimentSet& set : sets) {
    curves.emplace_back(set.name, bootstrap_curves(set, methods, sizes, replications, seed));
    const BootstrapCurve& curve = curves.back().second;
    for (std::size_t mi = 0; mi < curve.methods.size(); ++mi) {
      for (std::size_t si = 0; si < curve.sizes.size(); ++si) {
        if (curve.skipped[mi][si] > 0) {
          std::cerr << "warning: " << set.name << "/" << method_text(curve.methods[mi])
                    << " size " << curve.sizes[si] << ": " << curve.skipped[mi][si]
                    << " replication(s) skipped\n";
        }
      }
    }
  }
  emit(bootstrap_csv(curves), output);
  if (!svg.empty()) {
    for (const auto& [name, curve] : curves) {
      write_svg_chart(curve, svg_path_for(svg, name));
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crowdpivot: crowd forecast aggregation with shared-information bias correction"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config");
  app.add_flag("-v,--verbose", g_verbose, "print per-trial load notes");

  const std::map<std::string, CrowdStructure> structure_names{
      {"symmetric", CrowdStructure::Symmetric},
      {"nested", CrowdStructure::Nested},
      {"nested-symmetric", CrowdStructure::NestedSymmetric}};

  std::string input;
  std::string output;
  std::string svg;
  std::string methods_text = kDefaultMethods;
  std::uint64_t seed = 1;

  // aggregate
  std::string agg_methods = "mean,mp,np";
  auto* aggregate_cmd = app.add_subcommand("aggregate", "apply methods to one panel CSV");
  aggregate_cmd->configurable();
  {
    aggregate_cmd->add_option("--input", input, "panel CSV: estimate,peer_estimate[,judge]")
        ->required();
    aggregate_cmd->add_option("--methods", agg_methods, "comma-separated method list");
    aggregate_cmd->add_option("--output", output, "output CSV (default stdout)");
  }

  // simulate
  CrowdSpec spec;
  double sigma0_value = 0.0;
  std::size_t sim_trials = 0;
  std::size_t sim_reps = 2000;
  std::vector<double> sim_psis;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "draw synthetic crowds / Monte Carlo pivot MSE");
  simulate_cmd->configurable();
  CLI::Option* sigma0_opt;
  {
    simulate_cmd->add_option("--judges", spec.judges, "crowd size J");
    simulate_cmd->add_option("--p", spec.maven_share, "maven share in [0,1]");
    simulate_cmd->add_option("--m0", spec.m0, "prior pseudo-sample size");
    simulate_cmd->add_option("--m1", spec.m1, "public-signal sample size");
    simulate_cmd->add_option("--l", spec.l, "private-signal sample size");
    simulate_cmd->add_option("--mu0", spec.mu0, "prior mean");
    sigma0_opt = simulate_cmd->add_option("--sigma0", sigma0_value,
                                          "prior sd (default sqrt(v0/m0))");
    simulate_cmd->add_option("--v0", spec.v0, "per-observation variance of X");
    simulate_cmd->add_option("--sd-delta", spec.sd_delta, "layperson noise sd");
    simulate_cmd->add_option("--sd-epsilon", spec.sd_epsilon, "maven estimate noise sd");
    simulate_cmd->add_option("--sd-gamma", spec.sd_gamma, "maven peer noise sd");
    simulate_cmd->add_option("--structure", spec.structure, "information structure")
        ->transform(CLI::CheckedTransformer(structure_names, CLI::ignore_case));
    simulate_cmd->add_option("--trials", sim_trials, "trials to emit as a dataset CSV");
    simulate_cmd->add_option("--psi", sim_psis, "pivot weights for Monte Carlo MSE")
        ->delimiter(',');
    simulate_cmd->add_option("--reps", sim_reps, "Monte Carlo replications");
    simulate_cmd->add_option("--seed", seed, "random seed");
    simulate_cmd->add_option("--output", output, "output CSV (default stdout)");
  }

  // theory
  TheoryParams theory_params;
  std::size_t theory_judges = 0;
  double prob_threshold = 0.0;
  std::vector<double> theory_psis;
  std::size_t grid_resolution = 201;
  CLI::Option* judges_opt = nullptr;
  CLI::Option* prob_opt = nullptr;
  CLI::Option* range_opt = nullptr;
  CLI::Option* psi_opt = nullptr;
  CLI::Option* region_opt = nullptr;
  auto* theory_cmd = app.add_subcommand("theory", "closed-form MSE curves and probabilities");
  theory_cmd->configurable();
  {
    theory_cmd->add_option("--p", theory_params.maven_share, "maven share");
    theory_cmd->add_option("--w", theory_params.private_weight, "private-signal weight");
    theory_cmd->add_option("--m0", theory_params.m0, "prior pseudo-sample size");
    theory_cmd->add_option("--m1", theory_params.m1, "public-signal sample size");
    theory_cmd->add_option("--sigma0", theory_params.sigma0, "prior sd");
    theory_cmd->add_option("--v0", theory_params.v0, "per-observation variance of X");
    theory_cmd->add_option("--var-delta", theory_params.var_delta, "layperson noise variance");
    theory_cmd->add_option("--var-epsilon", theory_params.var_epsilon,
                           "maven estimate noise variance");
    theory_cmd->add_option("--var-gamma", theory_params.var_gamma,
                           "maven peer noise variance");
    judges_opt =
        theory_cmd->add_option("--judges", theory_judges, "finite crowd size for finite_mse");
    prob_opt = theory_cmd->add_option("--prob-pw", prob_threshold,
                                      "print P(p*w <= c) under uniform priors");
    range_opt = theory_cmd->add_flag("--dominance-range",
                                     "print the psi interval that never loses to the mean");
    psi_opt = theory_cmd->add_option("--psi", theory_psis, "pivot weights for an MSE curve CSV")
                  ->delimiter(',');
    region_opt = theory_cmd->add_flag("--region", "emit the p*w <= 2/3 region grid CSV");
    theory_cmd->add_option("--grid-resolution", grid_resolution, "region grid points per axis");
    theory_cmd->add_option("--output", output, "output CSV (default stdout)");
    theory_cmd->add_option("--svg", svg, "also draw the region grid to this SVG");
  }

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "per-experiment RMSE of each method");
  evaluate_cmd->configurable();
  {
    evaluate_cmd->add_option("--input", input, "dataset CSV")->required();
    evaluate_cmd->add_option("--methods", methods_text, "comma-separated method list");
    evaluate_cmd->add_option("--output", output, "results CSV (default stdout)");
  }

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "least-squares pivot weight per experiment");
  oracle_cmd->configurable();
  {
    oracle_cmd->add_option("--input", input, "dataset CSV")->required();
    oracle_cmd->add_option("--output", output, "oracle CSV (default stdout)");
  }

  // bootstrap
  std::vector<std::size_t> sizes{5, 10, 20, 40, 80};
  std::size_t replications = 1000;
  auto* bootstrap_cmd =
      app.add_subcommand("bootstrap", "mean RMSE over resampled crowds of each size");
  bootstrap_cmd->configurable();
  {
    bootstrap_cmd->add_option("--input", input, "dataset CSV")->required();
    bootstrap_cmd->add_option("--methods", methods_text, "comma-separated method list");
    bootstrap_cmd->add_option("--sizes", sizes, "crowd sizes")->delimiter(',');
    bootstrap_cmd->add_option("--boot", replications, "bootstrap replications per size");
    bootstrap_cmd->add_option("--seed", seed, "random seed");
    bootstrap_cmd->add_option("--output", output, "bootstrap CSV (default stdout)");
    bootstrap_cmd->add_option("--svg", svg, "line chart path (one per experiment)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  // dispatch exactly once, no matter how often the subcommand was named
  // (command line and config file sections both count as appearances)
  try {
    if (app.got_subcommand(aggregate_cmd)) {
      run_aggregate(input, agg_methods, output);
    } else if (app.got_subcommand(simulate_cmd)) {
      if (sigma0_opt->count() > 0) spec.prior_sd = sigma0_value;
      run_simulate(spec, sim_trials, sim_psis, sim_reps, seed, output);
    } else if (app.got_subcommand(theory_cmd)) {
      bool did_something = false;
      if (judges_opt->count() > 0) theory_params.judges = theory_judges;
      if (prob_opt->count() > 0) {
        std::cout << format_number(prob_pw_below(prob_threshold)) << "\n";
        did_something = true;
      }
      if (range_opt->count() > 0) {
        const PsiInterval range = dominance_psi_range();
        std::cout << format_number(range.lo) << " " << format_number(range.hi) << "\n";
        did_something = true;
      }
      if (psi_opt->count() > 0) {
        run_theory_psi_curve(theory_params, theory_psis, output);
        did_something = true;
      }
      if (region_opt->count() > 0) {
        run_theory_region(grid_resolution, output, svg);
        did_something = true;
      }
      if (!did_something) {
        throw Error("theory: pass one of --prob-pw, --dominance-range, --psi, --region");
      }
    } else if (app.got_subcommand(evaluate_cmd)) {
      run_evaluate(input, methods_text, output);
    } else if (app.got_subcommand(oracle_cmd)) {
      run_oracle(input, output);
    } else if (app.got_subcommand(bootstrap_cmd)) {
      run_bootstrap(input, methods_text, sizes, replications, seed, output, svg);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
