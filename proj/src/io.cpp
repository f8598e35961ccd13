#include "blockpole/io.hpp"

#include "blockpole/util.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace blockpole {

namespace {

using nlohmann::ordered_json;

constexpr const char* kLawOurs = "u = K_FF*r - K_FB*x";
constexpr const char* kLawFlipped = "u = -K_FF*r - K_FB*x";

ordered_json parse_text(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw_input("document", std::string("not valid JSON: ") + e.what());
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_input("document", "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Mat json_matrix(const ordered_json& j, const std::string& name) {
  if (!j.is_array() || j.empty())
    throw_input("document", "field '" + name + "' must be a non-empty array of rows");
  if (!j[0].is_array() || j[0].empty())
    throw_input("document", "field '" + name + "' must hold rows of numbers");
  const auto rows = j.size();
  const auto cols = j[0].size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw_input("document", "field '" + name + "' has ragged rows");
    for (size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number())
        throw_input("document", "field '" + name + "' holds a non-numeric entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          j[r][c].get<double>();
    }
  }
  return m;
}

ordered_json matrix_json(const Mat& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

CVec json_spectrum(const ordered_json& j) {
  if (!j.is_array() || j.empty())
    throw_input("document", "field 'spectrum' must be a non-empty array");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (e.is_number()) {
      v(static_cast<Eigen::Index>(i)) = Complex(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      v(static_cast<Eigen::Index>(i)) = Complex(e[0].get<double>(), e[1].get<double>());
    } else {
      throw_input("document",
                  "field 'spectrum' entries must be numbers or [re, im] pairs");
    }
  }
  return v;
}

std::string complex12(const Complex& z) {
  std::string s = fmt12(z.real());
  if (z.imag() > 0)
    s += "+" + fmt12(z.imag()) + "i";
  else if (z.imag() < 0)
    s += "-" + fmt12(-z.imag()) + "i";
  return s;
}

std::string pad(const std::string& s, size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

void append_matrix(std::ostringstream& os, const std::string& label, const Mat& m) {
  os << label << " (" << m.rows() << "x" << m.cols() << "):\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << " ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << " " << fmt12(m(r, c));
    os << "\n";
  }
}

std::vector<int> spectrum_print_order(const CVec& v) {
  std::vector<int> idx(static_cast<size_t>(v.size()));
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (v(a).real() != v(b).real()) return v(a).real() < v(b).real();
    return v(a).imag() > v(b).imag();
  });
  return idx;
}

const char* form_label(SolventForm f) { return to_string(f); }

}  // namespace

SystemDocument parse_system(const std::string& json_text) {
  ordered_json j = parse_text(json_text);
  if (!j.is_object()) throw_input("document", "system document must be a JSON object");
  for (const char* field : {"A", "B", "C"})
    if (!j.contains(field))
      throw_input("document", std::string("missing field '") + field + "'");

  SystemDocument doc;
  doc.sys.A = json_matrix(j["A"], "A");
  doc.sys.B = json_matrix(j["B"], "B");
  doc.sys.C = json_matrix(j["C"], "C");
  if (j.contains("D"))
    doc.sys.D = json_matrix(j["D"], "D");
  else
    doc.sys.D = Mat::Zero(doc.sys.C.rows(), doc.sys.B.cols());
  doc.sys.validate();

  if (j.contains("labels") && j["labels"].is_object()) {
    auto read_labels = [&](const char* key, std::vector<std::string>* out,
                           int expected) {
      if (!j["labels"].contains(key)) return;
      const auto& arr = j["labels"][key];
      if (!arr.is_array() || static_cast<int>(arr.size()) != expected)
        throw_input("document", std::string("labels field '") + key + "' must list " +
                                    std::to_string(expected) + " names");
      for (const auto& e : arr) {
        if (!e.is_string())
          throw_input("document", std::string("labels field '") + key +
                                      "' must hold strings");
        out->push_back(e.get<std::string>());
      }
    };
    read_labels("states", &doc.state_labels, doc.sys.n());
    read_labels("inputs", &doc.input_labels, doc.sys.m());
    read_labels("outputs", &doc.output_labels, doc.sys.p());
  }
  if (j.contains("spectrum")) {
    doc.spectrum = json_spectrum(j["spectrum"]);
    if (!conjugate_closed(doc.spectrum))
      throw_input("document", "field 'spectrum' is not closed under conjugation");
    doc.has_spectrum = true;
  }
  if (j.contains("partition")) {
    const auto& jp = j["partition"];
    if (!jp.is_array())
      throw_input("document", "field 'partition' must be an array of index cells");
    for (const auto& cell : jp) {
      if (!cell.is_array())
        throw_input("document", "field 'partition' cells must be arrays of indices");
      std::vector<int> c;
      for (const auto& e : cell) {
        if (!e.is_number_integer())
          throw_input("document", "field 'partition' indices must be integers");
        c.push_back(e.get<int>());
      }
      doc.partition.push_back(std::move(c));
    }
  }
  if (j.contains("form")) {
    if (!j["form"].is_string())
      throw_input("document", "field 'form' must be a string");
    doc.form = solvent_form_from_string(j["form"].get<std::string>());
    doc.has_form = true;
  }
  if (j.contains("perturbation")) {
    doc.perturbation = json_matrix(j["perturbation"], "perturbation");
    if (doc.perturbation.rows() != doc.sys.n() ||
        doc.perturbation.cols() != doc.sys.n())
      throw_input("document", "field 'perturbation' must be n x n");
    doc.has_perturbation = true;
  }
  return doc;
}

SystemDocument load_system(const std::string& path) {
  return parse_system(slurp(path));
}

GainsDocument parse_gains(const std::string& json_text) {
  ordered_json j = parse_text(json_text);
  if (!j.is_object()) throw_input("document", "gains document must be a JSON object");
  for (const char* field : {"K_FB", "K_FF"})
    if (!j.contains(field))
      throw_input("document", std::string("missing field '") + field + "'");
  GainsDocument doc;
  doc.K_FB = json_matrix(j["K_FB"], "K_FB");
  doc.K_FF = json_matrix(j["K_FF"], "K_FF");
  if (j.contains("control_law")) {
    if (!j["control_law"].is_string())
      throw_input("document", "field 'control_law' must be a string");
    const std::string law = j["control_law"].get<std::string>();
    if (law == kLawFlipped)
      doc.K_FF = -doc.K_FF;
    else if (law != kLawOurs)
      throw_input("document", "unrecognized control law '" + law + "' (expected '" +
                                  kLawOurs + "' or '" + kLawFlipped + "')");
  }
  if (j.contains("form")) {
    if (!j["form"].is_string())
      throw_input("document", "field 'form' must be a string");
    doc.form = solvent_form_from_string(j["form"].get<std::string>());
    doc.has_form = true;
  }
  return doc;
}

GainsDocument load_gains(const std::string& path) { return parse_gains(slurp(path)); }

std::string gains_to_json(const Mat& k_fb, const Mat& k_ff,
                          const std::string& form_name, double placement_error) {
  ordered_json j;
  j["control_law"] = kLawOurs;
  if (!form_name.empty()) j["form"] = form_name;
  if (placement_error >= 0.0) j["placement_error"] = placement_error;
  j["K_FB"] = matrix_json(k_fb);
  j["K_FF"] = matrix_json(k_ff);
  return j.dump(2) + "\n";
}

void save_gains(const std::string& path, const Mat& k_fb, const Mat& k_ff,
                const std::string& form_name, double placement_error) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_input("document", "cannot write '" + path + "'");
  out << gains_to_json(k_fb, k_ff, form_name, placement_error);
}

Mat parse_perturbation(const std::string& json_text) {
  ordered_json j = parse_text(json_text);
  if (j.is_array()) return json_matrix(j, "dA");
  if (j.is_object()) {
    for (const char* key : {"dA", "perturbation"})
      if (j.contains(key)) return json_matrix(j[key], key);
    throw_input("document", "missing field 'dA'");
  }
  throw_input("document", "perturbation document must be a matrix or {\"dA\": ...}");
}

Mat load_perturbation(const std::string& path) {
  return parse_perturbation(slurp(path));
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const auto n = traj.states.cols();
  const auto p = traj.outputs.cols();
  const auto m = traj.inputs.cols();
  os << "time";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i + 1;
  for (Eigen::Index i = 0; i < p; ++i) os << ",y" << i + 1;
  for (Eigen::Index i = 0; i < m; ++i) os << ",u" << i + 1;
  os << "\n";
  for (Eigen::Index k = 0; k < traj.times.size(); ++k) {
    os << fmt12(traj.times(k));
    for (Eigen::Index i = 0; i < n; ++i) os << "," << fmt12(traj.states(k, i));
    for (Eigen::Index i = 0; i < p; ++i) os << "," << fmt12(traj.outputs(k, i));
    for (Eigen::Index i = 0; i < m; ++i) os << "," << fmt12(traj.inputs(k, i));
    os << "\n";
  }
}

void save_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_input("document", "cannot write '" + path + "'");
  write_trajectory_csv(out, traj);
}

AnalysisBundle analyze_loop(const StateSpace& sys, const Mat& k_fb, const Mat& k_ff,
                            const Mat* da) {
  sys.validate();
  if (k_fb.rows() != sys.m() || k_fb.cols() != sys.n())
    throw_input("analyze", "feedback gain must be m x n");
  if (k_ff.rows() != sys.m() || k_ff.cols() != sys.p())
    throw_input("analyze", "feedforward gain must be m x p");
  if (da && (da->rows() != sys.n() || da->cols() != sys.n()))
    throw_input("analyze", "perturbation must be n x n");

  AnalysisBundle b;
  b.kfb_norms = matrix_norms(k_fb);
  b.kff_norms = matrix_norms(k_ff);
  const Mat acl = sys.A - sys.B * k_fb;
  b.sens = eigen_sensitivities(acl);
  b.stable = true;
  for (int i = 0; i < b.sens.eigenvalues.size(); ++i)
    if (b.sens.eigenvalues(i).real() >= 0) b.stable = false;
  b.stab = stability_measures(acl, /*require_stable=*/false);
  if (da) {
    b.has_perturbation = true;
    b.da_norm2 = matrix_norms(*da).two;
    b.shift = perturbed_spectrum(acl, *da);
    b.terr = tracking_error(sys, k_fb, k_ff, *da, Vec::Ones(sys.p()));
  }
  return b;
}

std::string render_design_report(const TwoDofGains& gains,
                                 const FeedforwardReport& ff) {
  std::ostringstream os;
  os << "two-degree-of-freedom design (u = K_FF*r - K_FB*x)\n";
  os << "form: " << form_label(gains.form) << "   solvent side: "
     << to_string(gains.side) << "\n";
  os << "partition:";
  for (const auto& cell : gains.partition) {
    os << " {";
    for (size_t i = 0; i < cell.size(); ++i) os << (i ? "," : "") << cell[i];
    os << "}";
  }
  os << "\n";
  os << "placement verified: worst eigenvalue deviation "
     << fmt(gains.placement_error, 4) << " (tolerance 1e-06)\n";
  os << "closed-loop spectrum:\n";
  for (int i : spectrum_print_order(gains.designed_spectrum))
    os << "  " << complex12(gains.designed_spectrum(i)) << "\n";
  if (ff.exists)
    os << "feedforward: exact tracking (DC gain rank " << ff.rank << " of "
       << ff.required << ")\n";
  else
    os << "feedforward: least-squares only (DC gain rank " << ff.rank << " of "
       << ff.required << ")\n";
  append_matrix(os, "K_FB", gains.K_FB);
  append_matrix(os, "K_FF", gains.K_FF);
  return os.str();
}

std::string render_analysis_report(const AnalysisBundle& b) {
  std::ostringstream os;
  os << "closed-loop analysis (u = K_FF*r - K_FB*x)\n\n";
  os << "gain norms:\n";
  os << "  matrix  " << pad("norm-1", 20) << pad("norm-2", 20) << pad("norm-inf", 20)
     << "frobenius\n";
  os << "  K_FB    " << pad(fmt12(b.kfb_norms.one), 20) << pad(fmt12(b.kfb_norms.two), 20)
     << pad(fmt12(b.kfb_norms.infinity), 20) << fmt12(b.kfb_norms.frobenius) << "\n";
  os << "  K_FF    " << pad(fmt12(b.kff_norms.one), 20) << pad(fmt12(b.kff_norms.two), 20)
     << pad(fmt12(b.kff_norms.infinity), 20) << fmt12(b.kff_norms.frobenius) << "\n\n";

  if (!b.stable)
    os << "warning: closed loop is unstable; the measures below are formal\n\n";
  os << "eigenvalue sensitivities (cond(V) = " << fmt12(b.sens.condV)
     << ", ||V||_2 = " << fmt12(b.sens.normV) << "):\n";
  os << "  " << pad("eigenvalue", 34) << "sensitivity\n";
  for (int i : spectrum_print_order(b.sens.eigenvalues))
    os << "  " << pad(complex12(b.sens.eigenvalues(i)), 34) << fmt12(b.sens.s(i))
       << "\n";
  os << "\nstability measures:\n";
  os << "  m1 = " << fmt12(b.stab.m1) << "   (at omega = "
     << fmt12(b.stab.m1_argmin_omega) << ")\n";
  os << "  m2 = " << fmt12(b.stab.m2) << "\n";
  os << "  m3 = " << fmt12(b.stab.m3) << "\n";

  if (b.has_perturbation) {
    os << "\nperturbation study (||dA||_2 = " << fmt12(b.da_norm2) << "):\n";
    os << "  " << pad("eigenvalue", 34) << pad("perturbed", 34)
       << "relative change\n";
    for (int i : spectrum_print_order(b.shift.old_values))
      os << "  " << pad(complex12(b.shift.old_values(i)), 34)
         << pad(complex12(b.shift.new_values(i)), 34)
         << fmt12(b.shift.relative_changes(i)) << "\n";
    os << "steady-state tracking error (r = ones):\n";
    os << "  exact:";
    for (int i = 0; i < b.terr.exact.size(); ++i) os << " " << fmt12(b.terr.exact(i));
    os << "\n  first-order:";
    for (int i = 0; i < b.terr.first_order.size(); ++i)
      os << " " << fmt12(b.terr.first_order(i));
    os << "\n  norm bound: " << fmt12(b.terr.bound) << "\n";
  }
  return os.str();
}

std::string render_specs_report(const Trajectory& traj,
                                const std::vector<std::string>& output_names) {
  std::ostringstream os;
  os << "time specifications (2% band):\n";
  os << "  " << pad("output", 10) << pad("final", 20) << pad("overshoot%", 20)
     << pad("undershoot%", 20) << pad("settling", 20) << "rise\n";
  for (int j = 0; j < traj.outputs.cols(); ++j) {
    const std::string name = j < static_cast<int>(output_names.size())
                                 ? output_names[static_cast<size_t>(j)]
                                 : "y" + std::to_string(j + 1);
    try {
      TimeSpecs s = time_specs(traj, j);
      os << "  " << pad(name, 10) << pad(fmt12(s.final_value), 20)
         << pad(s.overshoot_defined ? fmt12(s.percent_overshoot) : "--", 20)
         << pad(s.undershoot_defined ? fmt12(s.percent_undershoot) : "--", 20)
         << pad(fmt12(s.settling_time), 20) << fmt12(s.rise_time);
      if (s.relative_to_reference) os << "   (relative to reference)";
      os << "\n";
    } catch (const Error& e) {
      os << "  " << pad(name, 10) << "undefined: " << e.what() << "\n";
    }
  }
  return os.str();
}

std::string render_case_study_report(const CaseStudyReport& rep) {
  std::ostringstream os;
  os << "case study: bank-to-turn missile autopilot, block pole placement\n";
  os << "mode: " << (rep.forms.empty() || !rep.forms[0].replayed
                         ? "synthesized gains"
                         : "replayed reference gains")
     << "\n";
  os << "desired spectrum:";
  for (int i : spectrum_print_order(rep.targets))
    os << " " << complex12(rep.targets(i));
  os << "\nreference step: r = (1, 1, 1)\n\n";

  os << "placement:\n";
  for (const auto& f : rep.forms)
    os << "  " << pad(form_label(f.form), 12) << "worst eigenvalue deviation "
       << fmt(f.placement_error, 4) << (f.stable ? "" : "   [unstable]") << "\n";
  os << "\n";

  os << "gains magnitude:\n";
  os << "  " << pad("matrix", 8) << pad("form", 12) << pad("norm-1", 20)
     << pad("norm-2", 20) << pad("norm-inf", 20) << "frobenius\n";
  for (const char* which : {"K_FB", "K_FF"}) {
    for (const auto& f : rep.forms) {
      const NormReport& nr =
          std::string(which) == "K_FB" ? f.kfb_norms : f.kff_norms;
      os << "  " << pad(which, 8) << pad(form_label(f.form), 12)
         << pad(fmt12(nr.one), 20) << pad(fmt12(nr.two), 20)
         << pad(fmt12(nr.infinity), 20) << fmt12(nr.frobenius) << "\n";
    }
  }
  os << "\n";

  os << "time specifications (2% band):\n";
  const char* outs[] = {"alpha", "beta", "phi"};
  os << "  " << pad("output", 8) << pad("form", 12) << pad("undershoot%", 20)
     << pad("overshoot%", 20) << pad("settling", 20) << "rise\n";
  for (int j = 0; j < 3; ++j) {
    for (const auto& f : rep.forms) {
      os << "  " << pad(outs[j], 8) << pad(form_label(f.form), 12);
      if (f.specs_ok.size() > static_cast<size_t>(j) &&
          f.specs_ok[static_cast<size_t>(j)]) {
        const TimeSpecs& s = f.specs[static_cast<size_t>(j)];
        os << pad(s.undershoot_defined ? fmt12(s.percent_undershoot) : "--", 20)
           << pad(s.overshoot_defined ? fmt12(s.percent_overshoot) : "--", 20)
           << pad(fmt12(s.settling_time), 20) << fmt12(s.rise_time) << "\n";
      } else {
        os << "unavailable (see notes)\n";
      }
    }
  }
  os << "\n";

  os << "eigenvalue sensitivities:\n";
  for (const auto& f : rep.forms) {
    os << "  " << pad(form_label(f.form), 12);
    if (f.sens_ok) {
      os << "cond(V) = " << fmt12(f.sens.condV) << ", s =";
      for (int i : spectrum_print_order(f.sens.eigenvalues))
        os << " " << fmt12(f.sens.s(i));
      os << "\n";
    } else {
      os << "unavailable (see notes)\n";
    }
  }
  os << "\n";

  os << "stability measures:\n";
  os << "  " << pad("form", 12) << pad("m1", 20) << pad("m2", 20) << "m3\n";
  for (const auto& f : rep.forms) {
    os << "  " << pad(form_label(f.form), 12);
    if (f.stab_ok)
      os << pad(fmt12(f.stab.m1), 20) << pad(fmt12(f.stab.m2), 20)
         << fmt12(f.stab.m3) << "\n";
    else
      os << "unavailable (see notes)\n";
  }
  os << "\n";

  os << "eigenvalue change under the stored perturbation (||dA||_2 = "
     << fmt12(matrix_norms(rep.perturbation).two) << "):\n";
  for (const auto& f : rep.forms) {
    os << "  " << pad(form_label(f.form), 12);
    if (f.shift_ok) {
      os << "relative changes:";
      for (int i : spectrum_print_order(f.shift.old_values))
        os << " " << fmt12(f.shift.relative_changes(i));
      os << "\n";
    } else {
      os << "unavailable (see notes)\n";
    }
  }
  os << "\n";

  os << "steady-state tracking error under the perturbation (r = ones):\n";
  for (const auto& f : rep.forms) {
    os << "  " << pad(form_label(f.form), 12);
    if (f.terr_ok) {
      for (int i = 0; i < f.terr.exact.size(); ++i)
        os << " " << fmt12(f.terr.exact(i));
      os << "\n";
    } else {
      os << "unavailable (see notes)\n";
    }
  }
  os << "\n";

  bool any_notes = false;
  for (const auto& f : rep.forms) any_notes = any_notes || !f.notes.empty();
  if (any_notes) {
    os << "notes:\n";
    for (const auto& f : rep.forms)
      for (const auto& note : f.notes)
        os << "  " << pad(form_label(f.form), 12) << note << "\n";
    os << "\n";
  }

  if (rep.forms.size() > 1) {
    os << "comparison summary:\n";
    auto pick = [&](auto key, bool smallest) -> std::string {
      const FormReport* best = nullptr;
      double best_v = 0.0;
      for (const auto& f : rep.forms) {
        double v;
        if (!key(f, &v)) continue;
        if (!best || (smallest ? v < best_v : v > best_v)) {
          best = &f;
          best_v = v;
        }
      }
      return best ? form_label(best->form) : "n/a";
    };
    os << "  smallest feedback-gain magnitude: "
       << pick([](const FormReport& f, double* v) { *v = f.kfb_norms.two; return true; },
               true)
       << "\n";
    os << "  lowest peak eigenvalue sensitivity: "
       << pick(
              [](const FormReport& f, double* v) {
                if (!f.sens_ok) return false;
                *v = f.sens.s.maxCoeff();
                return true;
              },
              true)
       << "\n";
    os << "  largest stability measure m3: "
       << pick(
              [](const FormReport& f, double* v) {
                if (!f.stab_ok) return false;
                *v = f.stab.m3;
                return true;
              },
              false)
       << "\n";
    os << "  smallest worst-case eigenvalue drift: "
       << pick(
              [](const FormReport& f, double* v) {
                if (!f.shift_ok) return false;
                *v = f.shift.relative_changes.maxCoeff();
                return true;
              },
              true)
       << "\n";
    os << "  smallest tracking-error norm: "
       << pick(
              [](const FormReport& f, double* v) {
                if (!f.terr_ok) return false;
                *v = f.terr.exact.norm();
                return true;
              },
              true)
       << "\n";
  }
  return os.str();
}

}  // namespace blockpole
