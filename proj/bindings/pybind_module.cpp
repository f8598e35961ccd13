// Python bindings for the block-pole toolkit.  Thin glue only: every entry
// point delegates to the C++ library and returns plain numpy/dict values.

#include <pybind11/pybind11.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>
#include <pybind11/complex.h>

#include "blockpole/matpoly.hpp"
#include "blockpole/statespace.hpp"
#include "blockpole/synthesis.hpp"
#include "blockpole/robustness.hpp"
#include "blockpole/simulate.hpp"
#include "blockpole/missile.hpp"
#include "blockpole/io.hpp"

namespace py = pybind11;
using namespace blockpole;

namespace {

StateSpace make_system(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
  StateSpace sys;
  sys.A = a;
  sys.B = b;
  sys.C = c;
  if (d.size() == 0)
    sys.D = Mat::Zero(c.rows(), b.cols());
  else
    sys.D = d;
  sys.validate();
  return sys;
}

py::dict gains_dict(const TwoDofGains& g) {
  py::dict out;
  out["K_FB"] = g.K_FB;
  out["K_FF"] = g.K_FF;
  out["form"] = to_string(g.form);
  out["side"] = to_string(g.side);
  out["placement_error"] = g.placement_error;
  out["spectrum"] = g.designed_spectrum;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Block pole placement core (C++)";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      if (e.kind() == Error::Kind::Input)
        PyErr_SetString(PyExc_ValueError, e.what());
      else
        PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  mod.def(
      "latent_roots",
      [](const std::vector<Mat>& tail) {
        return latent_roots(MatrixPoly::monic(tail));
      },
      py::arg("coeffs"),
      "Latent roots of the monic matrix polynomial with the given tail "
      "coefficients [A_1, ..., A_l].");

  mod.def(
      "design_2dof",
      [](const Mat& a, const Mat& b, const Mat& c, const Mat& d,
         const CVec& spectrum, const std::string& form, const std::string& side,
         const std::vector<std::vector<int>>& partition) {
        StateSpace sys = make_system(a, b, c, d);
        Side sd;
        if (side == "right")
          sd = Side::Right;
        else if (side == "left")
          sd = Side::Left;
        else
          throw_input("design", "side must be 'right' or 'left'");
        TwoDofGains g = design_2dof(sys, spectrum, solvent_form_from_string(form),
                                    sd, partition);
        return gains_dict(g);
      },
      py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D"),
      py::arg("spectrum"), py::arg("form") = "diagonal",
      py::arg("side") = "right",
      py::arg("partition") = std::vector<std::vector<int>>{});

  mod.def(
      "matrix_norms",
      [](const Mat& m) {
        NormReport r = matrix_norms(m);
        py::dict out;
        out["one"] = r.one;
        out["two"] = r.two;
        out["infinity"] = r.infinity;
        out["frobenius"] = r.frobenius;
        return out;
      },
      py::arg("M"));

  mod.def(
      "eigen_sensitivities",
      [](const Mat& a) {
        SensitivityReport r = eigen_sensitivities(a);
        py::dict out;
        out["eigenvalues"] = r.eigenvalues;
        out["s"] = r.s;
        out["cond_V"] = r.condV;
        out["norm_V"] = r.normV;
        return out;
      },
      py::arg("A"));

  mod.def(
      "stability_measures",
      [](const Mat& a, bool require_stable) {
        StabilityMeasures r = stability_measures(a, require_stable);
        py::dict out;
        out["m1"] = r.m1;
        out["m2"] = r.m2;
        out["m3"] = r.m3;
        out["m1_argmin_omega"] = r.m1_argmin_omega;
        return out;
      },
      py::arg("A"), py::arg("require_stable") = true);

  mod.def(
      "perturbed_spectrum",
      [](const Mat& a, const Mat& da) {
        SpectrumShift r = perturbed_spectrum(a, da);
        py::dict out;
        out["old"] = r.old_values;
        out["new"] = r.new_values;
        out["relative_changes"] = r.relative_changes;
        return out;
      },
      py::arg("A"), py::arg("dA"));

  mod.def(
      "tracking_error",
      [](const Mat& a, const Mat& b, const Mat& c, const Mat& d,
         const Mat& k_fb, const Mat& k_ff, const Mat& da, const Vec& r) {
        StateSpace sys = make_system(a, b, c, d);
        TrackingError t = tracking_error(sys, k_fb, k_ff, da, r);
        py::dict out;
        out["exact"] = t.exact;
        out["first_order"] = t.first_order;
        out["bound"] = t.bound;
        return out;
      },
      py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D"), py::arg("K_FB"),
      py::arg("K_FF"), py::arg("dA"), py::arg("r"));

  mod.def(
      "step_response",
      [](const Mat& a, const Mat& b, const Mat& c, const Mat& d,
         const Mat& k_fb, const Mat& k_ff, const Vec& r, double horizon,
         double dt) {
        StateSpace sys = make_system(a, b, c, d);
        Trajectory tr = step_response(sys, k_fb, k_ff, r, horizon, dt);
        py::dict out;
        out["t"] = tr.times;
        out["x"] = tr.states;
        out["y"] = tr.outputs;
        out["u"] = tr.inputs;
        out["diverged"] = tr.diverged;
        return out;
      },
      py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D"), py::arg("K_FB"),
      py::arg("K_FF"), py::arg("r"), py::arg("horizon") = 3.0,
      py::arg("dt") = 1e-3);

  mod.def(
      "time_specs",
      [](const Vec& times, const Mat& outputs, const Vec& reference,
         int output_index) {
        Trajectory tr;
        tr.times = times;
        tr.outputs = outputs;
        tr.reference = reference;
        tr.dt = times.size() > 1 ? times(1) - times(0) : 0.0;
        TimeSpecs s = time_specs(tr, output_index);
        py::dict out;
        out["percent_overshoot"] =
            s.overshoot_defined ? py::cast(s.percent_overshoot) : py::none();
        out["percent_undershoot"] =
            s.undershoot_defined ? py::cast(s.percent_undershoot) : py::none();
        out["settling_time"] = s.settling_time;
        out["rise_time"] = s.rise_time;
        out["final_value"] = s.final_value;
        out["relative_to_reference"] = s.relative_to_reference;
        return out;
      },
      py::arg("t"), py::arg("y"), py::arg("r"), py::arg("output_index"));

  mod.def(
      "missile_model",
      []() {
        StateSpace sys = builtin_linear_model();
        py::dict out;
        out["A"] = sys.A;
        out["B"] = sys.B;
        out["C"] = sys.C;
        out["D"] = sys.D;
        out["spectrum"] = desired_poles();
        return out;
      },
      "Bank-to-turn autopilot design model (tabulated digits) and its target "
      "spectrum.");

  mod.def(
      "missile_linearize",
      []() {
        StateSpace sys = linearize(MissileParams::have_dash_ii(),
                                   AeroTables::have_dash_ii());
        py::dict out;
        out["A"] = sys.A;
        out["B"] = sys.B;
        out["C"] = sys.C;
        out["D"] = sys.D;
        return out;
      },
      "Finite-difference linearization of the nonlinear airframe about trim.");

  mod.def(
      "reference_gains",
      [](const std::string& form) {
        ReferenceGains g = reference_gains(solvent_form_from_string(form));
        py::dict out;
        out["K_FB"] = g.K_FB;
        out["K_FF"] = g.K_FF;
        return out;
      },
      py::arg("form"),
      "Published gain set for the case study, feedforward sign adjusted to "
      "u = K_FF*r - K_FB*x.");

  mod.def("reference_perturbation", []() { return reference_perturbation(); });
}
