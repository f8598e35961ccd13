#include "blockpole/io.hpp"
#include "blockpole/util.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace blockpole;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<int>> parse_partition_flag(const std::string& text) {
  std::vector<std::vector<int>> cells;
  for (const auto& cell_text : split(text, '|')) {
    std::vector<int> cell;
    for (const auto& tok : split(cell_text, ',')) {
      try {
        size_t used = 0;
        cell.push_back(std::stoi(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw_input("design",
                    "partition flag must look like \"0,1,2|3,4,5\" (got '" + text +
                        "')");
      }
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

Vec parse_reference_flag(const std::string& text, int p) {
  const auto toks = split(text, ',');
  if (static_cast<int>(toks.size()) != p)
    throw_input("simulate", "reference flag must list " + std::to_string(p) +
                                " comma-separated values");
  Vec r(p);
  for (int i = 0; i < p; ++i) {
    try {
      size_t used = 0;
      r(i) = std::stod(toks[static_cast<size_t>(i)], &used);
      if (used != toks[static_cast<size_t>(i)].size())
        throw std::invalid_argument(toks[static_cast<size_t>(i)]);
    } catch (const std::exception&) {
      throw_input("simulate", "reference flag holds a non-numeric value ('" +
                                  toks[static_cast<size_t>(i)] + "')");
    }
  }
  return r;
}

struct DesignArgs {
  std::string system_path;
  std::string form;
  std::string side = "right";
  std::string partition;
  std::string out = "gains.json";
};

int run_design(const DesignArgs& a) {
  SystemDocument doc = load_system(a.system_path);
  if (!doc.has_spectrum)
    throw_input("design", "document has no field 'spectrum'");

  SolventForm form;
  if (!a.form.empty())
    form = solvent_form_from_string(a.form);
  else if (doc.has_form)
    form = doc.form;
  else
    throw_input("design",
                "no solvent form given (use --form or the document's 'form' field)");

  Side side;
  if (a.side == "right")
    side = Side::Right;
  else if (a.side == "left")
    side = Side::Left;
  else
    throw_input("design", "unknown side '" + a.side + "' (allowed: right, left)");

  std::vector<std::vector<int>> partition = doc.partition;
  if (!a.partition.empty()) partition = parse_partition_flag(a.partition);

  TwoDofGains gains = design_2dof(doc.sys, doc.spectrum, form, side, partition);
  FeedforwardReport ff = feedforward_exists(doc.sys, gains.K_FB);
  std::cout << render_design_report(gains, ff);
  save_gains(a.out, gains.K_FB, gains.K_FF, to_string(gains.form),
             gains.placement_error);
  std::cout << "gains written to " << a.out << "\n";
  return 0;
}

struct AnalyzeArgs {
  std::string system_path;
  std::string gains_path;
  std::string perturbation_path;
};

int run_analyze(const AnalyzeArgs& a) {
  SystemDocument doc = load_system(a.system_path);
  GainsDocument gains = load_gains(a.gains_path);
  Mat da;
  bool has_da = false;
  if (!a.perturbation_path.empty()) {
    da = load_perturbation(a.perturbation_path);
    has_da = true;
  } else if (doc.has_perturbation) {
    da = doc.perturbation;
    has_da = true;
  }
  AnalysisBundle bundle =
      analyze_loop(doc.sys, gains.K_FB, gains.K_FF, has_da ? &da : nullptr);
  std::cout << render_analysis_report(bundle);
  return 0;
}

struct SimulateArgs {
  std::string system_path;
  std::string gains_path;
  std::string perturbation_path;
  std::string reference;
  double horizon = 3.0;
  double dt = 1e-3;
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  SystemDocument doc = load_system(a.system_path);
  GainsDocument gains = load_gains(a.gains_path);
  Vec r = Vec::Ones(doc.sys.p());
  if (!a.reference.empty()) r = parse_reference_flag(a.reference, doc.sys.p());
  Mat da;
  bool has_da = false;
  if (!a.perturbation_path.empty()) {
    da = load_perturbation(a.perturbation_path);
    has_da = true;
  }
  Trajectory traj = step_response(doc.sys, gains.K_FB, gains.K_FF, r, a.horizon,
                                  a.dt, has_da ? &da : nullptr);
  if (!a.out.empty()) {
    save_trajectory_csv(a.out, traj);
    std::cout << "trajectory written to " << a.out << "\n";
  }
  if (traj.diverged) std::cout << "warning: trajectory diverged and was truncated\n";
  std::vector<std::string> names = doc.output_labels;
  std::cout << render_specs_report(traj, names);
  return 0;
}

struct CaseStudyArgs {
  std::string form = "all";
  bool replay = false;
  std::string out = "case-study";
  double horizon = 3.0;
  double dt = 1e-3;
};

int run_case_study(const CaseStudyArgs& a) {
  bool all = a.form == "all";
  SolventForm only = SolventForm::Diagonal;
  if (!all) {
    try {
      only = solvent_form_from_string(a.form);
    } catch (const Error&) {
      throw_input("case-study", "unknown form '" + a.form +
                                    "' (allowed: diagonal, controller, observer, all)");
    }
  }

  CaseStudyReport rep = case_study(a.replay, a.horizon, a.dt);
  if (!all) {
    std::vector<FormReport> kept;
    for (auto& f : rep.forms)
      if (f.form == only) kept.push_back(std::move(f));
    rep.forms = std::move(kept);
  }

  std::filesystem::create_directories(a.out);
  const std::string report = render_case_study_report(rep);
  std::cout << report;
  {
    std::ofstream out_file(a.out + "/report.txt", std::ios::binary);
    if (!out_file) throw_input("case-study", "cannot write '" + a.out + "/report.txt'");
    out_file << report;
  }
  for (const auto& f : rep.forms) {
    const std::string tag = to_string(f.form);
    save_gains(a.out + "/gains_" + tag + ".json", f.K_FB, f.K_FF, tag,
               f.replayed ? -1.0 : f.placement_error);
    if (f.traj_ok)
      save_trajectory_csv(a.out + "/trajectory_" + tag + ".csv", f.traj);
  }
  std::cout << "report bundle written to " << a.out << "/\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-DOF block-pole-placement design, robustness analysis, and simulation"};
  app.require_subcommand(1);

  DesignArgs design_args;
  CLI::App* design = app.add_subcommand(
      "design", "synthesize feedback and feedforward gains for a system document");
  design->add_option("system", design_args.system_path, "system JSON document")
      ->required();
  design->add_option("--form", design_args.form,
                     "solvent form: diagonal, controller, observer");
  design->add_option("--side", design_args.side, "solvent side: right or left");
  design->add_option("--partition", design_args.partition,
                     "spectrum partition, e.g. \"0,1,2|3,4,5\"");
  design->add_option("--out", design_args.out, "gains output path");

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "robustness report for a system with stored gains");
  analyze->add_option("system", analyze_args.system_path, "system JSON document")
      ->required();
  analyze->add_option("--gains", analyze_args.gains_path, "gains JSON document")
      ->required();
  analyze->add_option("--perturbation", analyze_args.perturbation_path,
                      "perturbation JSON document");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "closed-loop step response and time specifications");
  simulate->add_option("system", sim_args.system_path, "system JSON document")
      ->required();
  simulate->add_option("--gains", sim_args.gains_path, "gains JSON document")
      ->required();
  simulate->add_option("--perturbation", sim_args.perturbation_path,
                       "perturbation JSON document");
  simulate->add_option("--r", sim_args.reference,
                       "reference step, comma separated (default: all ones)");
  simulate->add_option("--horizon", sim_args.horizon, "simulation length in seconds");
  simulate->add_option("--dt", sim_args.dt, "sample step in seconds");
  simulate->add_option("--out", sim_args.out, "trajectory CSV output path");

  CaseStudyArgs cs_args;
  CLI::App* cs = app.add_subcommand(
      "case-study", "built-in missile benchmark across the three solvent forms");
  cs->add_option("--form", cs_args.form,
                 "diagonal, controller, observer, or all (default all)");
  cs->add_flag("--replay", cs_args.replay,
               "use the stored reference gains instead of synthesizing");
  cs->add_option("--out", cs_args.out, "output directory");
  cs->add_option("--horizon", cs_args.horizon, "simulation length in seconds");
  cs->add_option("--dt", cs_args.dt, "sample step in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (design->parsed()) return run_design(design_args);
    if (analyze->parsed()) return run_analyze(analyze_args);
    if (simulate->parsed()) return run_simulate(sim_args);
    if (cs->parsed()) return run_case_study(cs_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == Error::Kind::Input ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
