#include "crowdpivot/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace crowdpivot {

namespace {

constexpr const char* kDatasetHeader =
    "experiment,trial,judge,estimate,peer_estimate,truth,task";

std::vector<std::string> split_csv_line(const std::string& line, std::size_t row) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"' && cell.empty()) {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw ParseError("row " + std::to_string(row) + ": unterminated quote");
  cells.push_back(std::move(cell));
  return cells;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

double parse_double_cell(const std::string& cell, const char* what, std::size_t row) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("row " + std::to_string(row) + ": non-numeric " + what + " '" + cell + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError("row " + std::to_string(row) + ": non-finite " + what + " '" + cell + "'");
  }
  return value;
}

double parse_double_text(const std::string& text, const std::string& context) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ParseError("bad number '" + text + "' in " + context);
  }
  return value;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

struct TrialBuilder {
  std::string id;
  Panel panel;
  double truth = 0.0;
  TaskKind kind = TaskKind::Continuous;
  std::map<std::string, bool> judges_seen;
  std::size_t excluded = 0;
};

struct ExperimentBuilder {
  std::string name;
  std::vector<TrialBuilder> trials;
  std::map<std::string, std::size_t> trial_index;
};

}  // namespace

// ---------------------------------------------------------------------------
// Method grammar
// ---------------------------------------------------------------------------

MethodId parse_method(const std::string& text) {
  if (text == "mean") return MethodId::mean();
  if (text == "median") return MethodId::median();
  if (text == "mp") return MethodId::mp();
  if (text == "np") return MethodId::np();
  if (text == "so") return MethodId::so();
  if (text.rfind("trimmed:", 0) == 0) {
    const double fraction = parse_double_text(text.substr(8), "method '" + text + "'");
    if (!(fraction >= 0.0 && fraction < 0.5)) {
      throw ParseError("trim fraction must lie in [0, 0.5) in method '" + text + "'");
    }
    return MethodId::trimmed(fraction);
  }
  if (text.rfind("pivot:", 0) == 0) {
    const double psi = parse_double_text(text.substr(6), "method '" + text + "'");
    if (!(psi >= 0.0)) throw ParseError("pivot weight must be >= 0 in method '" + text + "'");
    return MethodId::pivot(psi);
  }
  if (text.rfind("gpe:", 0) == 0) {
    const std::string args = text.substr(4);
    const std::size_t comma = args.find(',');
    if (args.rfind("p=", 0) != 0 || comma == std::string::npos ||
        args.compare(comma + 1, 2, "w=") != 0) {
      throw ParseError("expected gpe:p=<p>,w=<w>, got '" + text + "'");
    }
    const double p = parse_double_text(args.substr(2, comma - 2), "method '" + text + "'");
    const double w = parse_double_text(args.substr(comma + 3), "method '" + text + "'");
    if (!(p > 0.0 && p <= 1.0) || !(w > 0.0 && w <= 1.0)) {
      throw ParseError("gpe parameters must lie in (0,1] in method '" + text + "'");
    }
    return MethodId::gpe(p, w);
  }
  throw ParseError("unknown method '" + text + "'");
}

std::vector<MethodId> parse_method_list(const std::string& text) {
  std::vector<std::string> tokens;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    // "w=..." re-attaches to a preceding gpe token: its grammar contains a comma
    if (token.rfind("w=", 0) == 0 && !tokens.empty() && tokens.back().rfind("gpe:", 0) == 0) {
      tokens.back() += "," + token;
    } else {
      tokens.push_back(token);
    }
  }
  if (tokens.empty()) throw ParseError("empty method list");
  std::vector<MethodId> methods;
  methods.reserve(tokens.size());
  for (const std::string& t : tokens) methods.push_back(parse_method(t));
  return methods;
}

std::string method_text(const MethodId& m) {
  switch (m.kind) {
    case MethodKind::Mean:
      return "mean";
    case MethodKind::Median:
      return "median";
    case MethodKind::Trimmed:
      return "trimmed:" + format_number(m.trim_fraction);
    case MethodKind::Pivot:
      return "pivot:" + format_number(m.psi);
    case MethodKind::MinimalPivot:
      return "mp";
    case MethodKind::NeutralPivot:
      return "np";
    case MethodKind::GlobalPosterior:
      return "gpe:p=" + format_number(m.maven_share) +
             ",w=" + format_number(m.private_weight);
    case MethodKind::SurprisingOvershoot:
      return "so";
  }
  throw ParameterError("unknown method kind");
}

std::string format_number(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Dataset loading
// ---------------------------------------------------------------------------

std::vector<ExperimentSet> parse_experiments(std::istream& in, LoadReport* report) {
  LoadReport local;
  LoadReport& rep = report ? *report : local;

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input: missing header row");
  line = strip_cr(line);

  const std::vector<std::string> header = split_csv_line(line, 1);
  const std::vector<std::string> expected = {"experiment", "trial",  "judge", "estimate",
                                             "peer_estimate", "truth", "task"};
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!column.emplace(header[i], i).second) {
      throw ParseError("malformed header: duplicate column '" + header[i] + "'");
    }
  }
  if (header.size() != expected.size()) {
    throw ParseError(std::string("malformed header: expected columns ") + kDatasetHeader);
  }
  for (const std::string& name : expected) {
    if (!column.count(name)) {
      throw ParseError("malformed header: missing column '" + name + "'");
    }
  }

  const std::size_t c_exp = column["experiment"];
  const std::size_t c_trial = column["trial"];
  const std::size_t c_judge = column["judge"];
  const std::size_t c_estimate = column["estimate"];
  const std::size_t c_peer = column["peer_estimate"];
  const std::size_t c_truth = column["truth"];
  const std::size_t c_task = column["task"];

  std::vector<ExperimentBuilder> experiments;
  std::map<std::string, std::size_t> experiment_index;

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line, row);
    if (cells.size() != expected.size()) {
      throw ParseError("row " + std::to_string(row) + ": expected " +
                       std::to_string(expected.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    const std::string& experiment = cells[c_exp];
    const std::string& trial_id = cells[c_trial];
    const std::string& judge = cells[c_judge];
    const std::string& estimate_cell = cells[c_estimate];
    const std::string& peer_cell = cells[c_peer];
    const double truth = parse_double_cell(cells[c_truth], "truth", row);
    const std::string& task = cells[c_task];

    TaskKind kind;
    if (task == "continuous") kind = TaskKind::Continuous;
    else if (task == "unit") kind = TaskKind::UnitInterval;
    else throw ParseError("row " + std::to_string(row) + ": unknown task '" + task + "'");

    auto [eit, fresh_exp] = experiment_index.emplace(experiment, experiments.size());
    if (fresh_exp) experiments.push_back(ExperimentBuilder{experiment, {}, {}});
    ExperimentBuilder& exp = experiments[eit->second];

    auto [tit, fresh_trial] = exp.trial_index.emplace(trial_id, exp.trials.size());
    if (fresh_trial) {
      TrialBuilder tb;
      tb.id = trial_id;
      tb.truth = truth;
      tb.kind = kind;
      exp.trials.push_back(std::move(tb));
    }
    TrialBuilder& tb = exp.trials[tit->second];
    if (!fresh_trial) {
      if (tb.truth != truth) {
        throw ParseError("row " + std::to_string(row) + ": trial '" + trial_id +
                         "' has inconsistent truth (" + format_number(tb.truth) + " vs " +
                         format_number(truth) + ")");
      }
      if (tb.kind != kind) {
        throw ParseError("row " + std::to_string(row) + ": trial '" + trial_id +
                         "' has inconsistent task");
      }
    }
    if (!tb.judges_seen.emplace(judge, true).second) {
      throw ParseError("row " + std::to_string(row) + ": duplicate judge '" + judge +
                       "' in trial '" + trial_id + "'");
    }

    ++rep.rows;
    if (estimate_cell.empty() || peer_cell.empty()) {
      ++rep.excluded_judges;
      ++tb.excluded;
      continue;
    }
    tb.panel.f.push_back(parse_double_cell(estimate_cell, "estimate", row));
    tb.panel.g.push_back(parse_double_cell(peer_cell, "peer_estimate", row));
    tb.panel.judge_ids.push_back(judge);
  }

  std::vector<ExperimentSet> sets;
  sets.reserve(experiments.size());
  for (ExperimentBuilder& exp : experiments) {
    ExperimentSet set;
    set.name = exp.name;
    for (TrialBuilder& tb : exp.trials) {
      if (tb.excluded > 0) {
        rep.notes.push_back("trial '" + tb.id + "': excluded " + std::to_string(tb.excluded) +
                            " judge(s) with missing values");
      }
      if (tb.panel.f.empty()) {
        ++rep.dropped_trials;
        rep.notes.push_back("trial '" + tb.id + "': dropped, no complete judges left");
        continue;
      }
      Trial trial;
      trial.id = tb.id;
      trial.panel = std::move(tb.panel);
      trial.truth = tb.truth;
      trial.kind = tb.kind;
      try {
        validate_trial(trial);
      } catch (const ValidationError& e) {
        throw ParseError(std::string(e.what()) + " (experiment '" + exp.name + "')");
      }
      set.trials.push_back(std::move(trial));
    }
    if (set.trials.empty()) {
      rep.notes.push_back("experiment '" + exp.name + "': dropped, no usable trials");
      continue;
    }
    const TaskKind kind = set.trials.front().kind;
    for (const Trial& t : set.trials) {
      if (t.kind != kind) {
        throw ParseError("experiment '" + exp.name + "' mixes task kinds (trial '" + t.id +
                         "')");
      }
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

std::vector<ExperimentSet> load_experiments(const std::string& path, LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_experiments(in, report);
}

Panel load_panel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input: missing header row");
  const std::vector<std::string> header = split_csv_line(strip_cr(line), 1);
  std::size_t estimate_col = header.size();
  std::size_t peer_col = header.size();
  std::size_t judge_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "estimate") estimate_col = i;
    else if (header[i] == "peer_estimate") peer_col = i;
    else if (header[i] == "judge") judge_col = i;
    else throw ParseError("malformed header: unexpected column '" + header[i] + "'");
  }
  if (estimate_col == header.size() || peer_col == header.size()) {
    throw ParseError("malformed header: need estimate and peer_estimate columns");
  }

  Panel panel;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line, row);
    if (cells.size() != header.size()) {
      throw ParseError("row " + std::to_string(row) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    if (cells[estimate_col].empty() || cells[peer_col].empty()) continue;
    panel.f.push_back(parse_double_cell(cells[estimate_col], "estimate", row));
    panel.g.push_back(parse_double_cell(cells[peer_col], "peer_estimate", row));
    if (judge_col != header.size()) panel.judge_ids.push_back(cells[judge_col]);
  }
  if (panel.f.empty()) throw ParseError("panel file has no complete judge rows");
  return panel;
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

std::string experiments_csv(const std::vector<ExperimentSet>& sets) {
  std::string out = std::string(kDatasetHeader) + "\n";
  for (const ExperimentSet& set : sets) {
    for (const Trial& trial : set.trials) {
      const char* task = trial.kind == TaskKind::UnitInterval ? "unit" : "continuous";
      for (std::size_t j = 0; j < trial.panel.size(); ++j) {
        const std::string judge = trial.panel.judge_ids.empty()
                                      ? "j" + std::to_string(j + 1)
                                      : trial.panel.judge_ids[j];
        out += csv_escape(set.name);
        out += ',';
        out += csv_escape(trial.id);
        out += ',';
        out += csv_escape(judge);
        out += ',';
        out += format_number(trial.panel.f[j]);
        out += ',';
        out += format_number(trial.panel.g[j]);
        out += ',';
        out += format_number(trial.truth);
        out += ',';
        out += task;
        out += '\n';
      }
    }
  }
  return out;
}

void write_experiments(const std::vector<ExperimentSet>& sets, const std::string& path) {
  write_file(path, experiments_csv(sets));
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out = "experiment,method,rmse,n_trials,sig_vs_mean,sig_vs_mp\n";
  for (const ResultRow& r : rows) {
    out += csv_escape(r.experiment);
    out += ',';
    out += csv_escape(method_text(r.method));
    out += ',';
    out += format_number(r.rmse);
    out += ',';
    out += std::to_string(r.n_trials);
    out += ',';
    out += r.sig_vs_mean ? "*" : "";
    out += ',';
    out += r.sig_vs_mp ? "+" : "";
    out += '\n';
  }
  return out;
}

std::string oracle_csv(const std::vector<OracleRow>& rows) {
  std::string out = "experiment,psi_o,rmse\n";
  for (const OracleRow& r : rows) {
    out += csv_escape(r.experiment);
    out += ',';
    out += format_number(r.psi_o);
    out += ',';
    out += format_number(r.rmse);
    out += '\n';
  }
  return out;
}

std::string bootstrap_csv(const std::vector<std::pair<std::string, BootstrapCurve>>& curves) {
  std::string out = "experiment,method,size,mean_rmse,ratio_to_np\n";
  for (const auto& [experiment, curve] : curves) {
    for (std::size_t mi = 0; mi < curve.methods.size(); ++mi) {
      for (std::size_t si = 0; si < curve.sizes.size(); ++si) {
        out += csv_escape(experiment);
        out += ',';
        out += csv_escape(method_text(curve.methods[mi]));
        out += ',';
        out += std::to_string(curve.sizes[si]);
        out += ',';
        out += format_number(curve.mean_rmse[mi][si]);
        out += ',';
        out += format_number(curve.ratio_to_np[mi][si]);
        out += '\n';
      }
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace crowdpivot
