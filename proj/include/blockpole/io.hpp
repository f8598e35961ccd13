#pragma once

#include "blockpole/missile.hpp"
#include "blockpole/robustness.hpp"
#include "blockpole/simulate.hpp"
#include "blockpole/statespace.hpp"
#include "blockpole/synthesis.hpp"
#include "blockpole/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace blockpole {

// One system definition as carried in a JSON document: the matrices plus the
// optional design inputs (spectrum, partition, form) and a perturbation.
struct SystemDocument {
  StateSpace sys;
  std::vector<std::string> state_labels;
  std::vector<std::string> input_labels;
  std::vector<std::string> output_labels;
  bool has_spectrum = false;
  CVec spectrum;
  std::vector<std::vector<int>> partition;
  bool has_form = false;
  SolventForm form = SolventForm::Diagonal;
  bool has_perturbation = false;
  Mat perturbation;
};

// Gain pair normalized to the convention u = K_FF r - K_FB x. Documents that
// declare the opposite feedforward sign are flipped on load.
struct GainsDocument {
  Mat K_FB;
  Mat K_FF;
  bool has_form = false;
  SolventForm form = SolventForm::Diagonal;
};

SystemDocument parse_system(const std::string& json_text);
SystemDocument load_system(const std::string& path);

GainsDocument parse_gains(const std::string& json_text);
GainsDocument load_gains(const std::string& path);
std::string gains_to_json(const Mat& k_fb, const Mat& k_ff,
                          const std::string& form_name = "",
                          double placement_error = -1.0);
void save_gains(const std::string& path, const Mat& k_fb, const Mat& k_ff,
                const std::string& form_name = "", double placement_error = -1.0);

Mat parse_perturbation(const std::string& json_text);
Mat load_perturbation(const std::string& path);

// Header: time,x1..xn,y1..yp,u1..um; 12 significant digits throughout.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void save_trajectory_csv(const std::string& path, const Trajectory& traj);

// Everything cmd-analyze reports about one closed loop.
struct AnalysisBundle {
  NormReport kfb_norms;
  NormReport kff_norms;
  bool stable = false;
  SensitivityReport sens;
  StabilityMeasures stab;
  bool has_perturbation = false;
  double da_norm2 = 0.0;
  SpectrumShift shift;
  TrackingError terr;
};
AnalysisBundle analyze_loop(const StateSpace& sys, const Mat& k_fb, const Mat& k_ff,
                            const Mat* da);

std::string render_design_report(const TwoDofGains& gains,
                                 const FeedforwardReport& ff);
std::string render_analysis_report(const AnalysisBundle& bundle);
std::string render_specs_report(const Trajectory& traj,
                                const std::vector<std::string>& output_names);
std::string render_case_study_report(const CaseStudyReport& rep);

}  // namespace blockpole
