#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "blockpole/io.hpp"
#include "blockpole/missile.hpp"
#include "blockpole/synthesis.hpp"
#include "blockpole/util.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <string>

using namespace blockpole;

namespace {

std::string data_path(const std::string& rel) {
  return std::string(BLOCKPOLE_DATA_DIR) + "/" + rel;
}

bool same_matrix(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return ((a - b).cwiseAbs().maxCoeff() == 0.0);
}

void expect_input_error(const std::string& text, const std::string& needle) {
  try {
    (void)parse_system(text);
    FAIL_CHECK("expected a parse failure for: " << needle);
  } catch (const Error& e) {
    CHECK(e.kind() == Error::Kind::Input);
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("system documents parse with defaults") {
  const std::string text = R"({
    "A": [[0, 1], [-2, -3]],
    "B": [[0], [1]],
    "C": [[1, 0]]
  })";
  SystemDocument doc = parse_system(text);
  CHECK(doc.sys.n() == 2);
  CHECK(doc.sys.m() == 1);
  CHECK(doc.sys.p() == 1);
  CHECK(doc.sys.A(1, 0) == -2.0);
  // Omitted D zero-fills to p x m.
  CHECK(doc.sys.D.rows() == 1);
  CHECK(doc.sys.D.cols() == 1);
  CHECK(doc.sys.D(0, 0) == 0.0);
  CHECK_FALSE(doc.has_spectrum);
  CHECK_FALSE(doc.has_form);
  CHECK_FALSE(doc.has_perturbation);
  CHECK(doc.partition.empty());
}

TEST_CASE("system documents reject malformed input") {
  expect_input_error("this is not json", "not valid JSON");
  expect_input_error("[1, 2, 3]", "must be a JSON object");
  expect_input_error(R"({"A": [[1]], "C": [[1]]})", "missing field 'B'");
  expect_input_error(R"({"A": [[1, 2], [3]], "B": [[1], [1]], "C": [[1, 0]]})",
                     "ragged rows");
  expect_input_error(
      R"({"A": [[1, "x"], [3, 4]], "B": [[1], [1]], "C": [[1, 0]]})",
      "non-numeric");
  // A complex desired pole without its conjugate partner.
  expect_input_error(R"({
    "A": [[0, 1], [-2, -3]], "B": [[0], [1]], "C": [[1, 0]],
    "spectrum": [[-1, 2], [-3, 0]]
  })",
                     "closed under conjugation");
  expect_input_error(R"({
    "A": [[0, 1], [-2, -3]], "B": [[0], [1]], "C": [[1, 0]],
    "labels": {"states": ["only-one"]}
  })",
                     "must list 2 names");
  expect_input_error(R"({
    "A": [[0, 1], [-2, -3]], "B": [[0], [1]], "C": [[1, 0]],
    "form": "pentagonal"
  })",
                     "pentagonal");
  expect_input_error(R"({
    "A": [[0, 1], [-2, -3]], "B": [[0], [1]], "C": [[1, 0]],
    "perturbation": [[1]]
  })",
                     "must be n x n");
}

TEST_CASE("the bundled missile document carries the full design request") {
  SystemDocument doc = load_system(data_path("missile_system.json"));
  CHECK(doc.sys.n() == 6);
  CHECK(doc.sys.m() == 3);
  CHECK(doc.sys.p() == 3);
  CHECK(doc.state_labels.size() == 6);
  CHECK(doc.state_labels[5] == "phi");
  CHECK(doc.input_labels[0] == "elevator");

  REQUIRE(doc.has_spectrum);
  REQUIRE(doc.spectrum.size() == 6);
  CHECK(conjugate_closed(doc.spectrum));
  CHECK(doc.spectrum(0) == Complex(-4.9, 7.35));

  REQUIRE(doc.partition.size() == 2);
  CHECK(doc.partition[0] == std::vector<int>{0, 1, 2});
  CHECK(doc.partition[1] == std::vector<int>{3, 4, 5});
  CHECK(doc.has_form);
  CHECK(doc.form == SolventForm::Diagonal);

  REQUIRE(doc.has_perturbation);
  CHECK(same_matrix(doc.perturbation, reference_perturbation()));

  // It matches the built-in model bit for bit.
  StateSpace builtin = builtin_linear_model();
  CHECK(same_matrix(doc.sys.A, builtin.A));
  CHECK(same_matrix(doc.sys.B, builtin.B));
  CHECK(same_matrix(doc.sys.C, builtin.C));
  CHECK(same_matrix(doc.sys.D, builtin.D));
}

TEST_CASE("gains serialize and read back without losing a bit") {
  std::mt19937 rng(0x10C1u);
  for (int iter = 0; iter < 5; ++iter) {
    Mat k_fb = testutil::random_matrix(rng, 3, 6, 50.0);
    Mat k_ff = testutil::random_matrix(rng, 3, 3, 50.0);
    const std::string text = gains_to_json(k_fb, k_ff, "diagonal", 1.25e-9);
    GainsDocument doc = parse_gains(text);
    CHECK(same_matrix(doc.K_FB, k_fb));
    CHECK(same_matrix(doc.K_FF, k_ff));
    CHECK(doc.has_form);
    CHECK(doc.form == SolventForm::Diagonal);
  }
}

TEST_CASE("gain documents normalize the control-law sign") {
  const std::string base = R"({"K_FB": [[2, 0], [0, 2]], "K_FF": [[3, 0], [0, 3]])";
  GainsDocument plain = parse_gains(base + "}");
  CHECK(plain.K_FF(0, 0) == 3.0);

  GainsDocument ours =
      parse_gains(base + R"(, "control_law": "u = K_FF*r - K_FB*x"})");
  CHECK(ours.K_FF(0, 0) == 3.0);

  GainsDocument flipped =
      parse_gains(base + R"(, "control_law": "u = -K_FF*r - K_FB*x"})");
  CHECK(flipped.K_FF(0, 0) == -3.0);
  CHECK(flipped.K_FB(0, 0) == 2.0);  // feedback sign is untouched

  try {
    (void)parse_gains(base + R"(, "control_law": "u = K*x"})");
    FAIL_CHECK("unknown control law accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == Error::Kind::Input);
    CHECK(std::string(e.what()).find("u = K_FF*r - K_FB*x") != std::string::npos);
  }
}

TEST_CASE("bundled gain fixtures agree with the compiled-in tables") {
  const struct {
    const char* file;
    SolventForm form;
  } cases[] = {
      {"fixtures/reference_gains_diagonal.json", SolventForm::Diagonal},
      {"fixtures/reference_gains_controller.json", SolventForm::Controller},
      {"fixtures/reference_gains_observer.json", SolventForm::Observer},
  };
  for (const auto& c : cases) {
    GainsDocument doc = load_gains(data_path(c.file));
    ReferenceGains ref = reference_gains(c.form);
    CHECK(doc.has_form);
    CHECK(doc.form == c.form);
    CHECK(same_matrix(doc.K_FB, ref.K_FB));
    CHECK(same_matrix(doc.K_FF, ref.K_FF));
  }
  Mat da = load_perturbation(data_path("fixtures/reference_perturbation.json"));
  CHECK(same_matrix(da, reference_perturbation()));
}

TEST_CASE("perturbation documents accept both layouts") {
  Mat bare = parse_perturbation("[[0.5, 0], [0, 0.5]]");
  CHECK(bare(0, 0) == 0.5);
  Mat wrapped = parse_perturbation(R"({"dA": [[0.5, 0], [0, 0.5]]})");
  CHECK(same_matrix(bare, wrapped));
  try {
    (void)parse_perturbation(R"({"delta": [[1]]})");
    FAIL_CHECK("missing dA accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == Error::Kind::Input);
  }
}

TEST_CASE("trajectory CSV layout") {
  StateSpace sys;
  sys.A = Mat::Constant(1, 1, -1.0);
  sys.B = Mat::Identity(1, 1);
  sys.C = Mat::Identity(1, 1);
  sys.D = Mat::Zero(1, 1);
  Mat k_fb = Mat::Zero(1, 1);
  Mat k_ff = Mat::Identity(1, 1);
  Vec r = Vec::Constant(1, 1.0);
  Trajectory traj = step_response(sys, k_fb, k_ff, r, 0.01, 1e-3);

  std::ostringstream os;
  write_trajectory_csv(os, traj);
  const std::string text = os.str();

  std::istringstream is(text);
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "time,x1,y1,u1");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == traj.times.size());
  // 12 significant digits survive: the third sample time is 2e-3 exactly as
  // fmt12 renders it.
  CHECK(text.find(fmt12(traj.times(2))) != std::string::npos);
  CHECK(fmt12(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("analysis bundles carry every section") {
  StateSpace sys = builtin_linear_model();
  SystemDocument doc = load_system(data_path("missile_system.json"));
  TwoDofGains g = design_2dof(sys, doc.spectrum, SolventForm::Diagonal,
                              Side::Right, doc.partition);
  Mat da = reference_perturbation();

  AnalysisBundle bundle = analyze_loop(sys, g.K_FB, g.K_FF, &da);
  CHECK(bundle.stable);
  CHECK(bundle.kfb_norms.two > 10.0);
  CHECK(bundle.kff_norms.two > 10.0);
  CHECK(bundle.sens.s.size() == 6);
  CHECK(bundle.stab.m1 > 0.0);
  CHECK(bundle.has_perturbation);
  CHECK(bundle.da_norm2 == doctest::Approx(0.102530).epsilon(1e-3));
  CHECK(bundle.shift.new_values.size() == 6);
  CHECK(bundle.terr.exact.size() == 3);

  AnalysisBundle dry = analyze_loop(sys, g.K_FB, g.K_FF, nullptr);
  CHECK_FALSE(dry.has_perturbation);
  CHECK(dry.stable);

  try {
    (void)analyze_loop(sys, Mat::Zero(2, 2), g.K_FF, nullptr);
    FAIL_CHECK("mis-shaped feedback gain accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == Error::Kind::Input);
  }
}

TEST_CASE("reports repeat byte for byte") {
  StateSpace sys = builtin_linear_model();
  SystemDocument doc = load_system(data_path("missile_system.json"));
  Mat da = reference_perturbation();

  auto build = [&]() {
    TwoDofGains g = design_2dof(sys, doc.spectrum, SolventForm::Diagonal,
                                Side::Right, doc.partition);
    FeedforwardReport ff = feedforward_exists(sys, g.K_FB);
    AnalysisBundle bundle = analyze_loop(sys, g.K_FB, g.K_FF, &da);
    return render_design_report(g, ff) + "\n" + render_analysis_report(bundle);
  };
  const std::string first = build();
  const std::string second = build();
  CHECK(first == second);
  CHECK(first.find("placement verified") != std::string::npos);
  CHECK(first.find("K_FB") != std::string::npos);
  CHECK(first.find("stability measures") != std::string::npos);
}

TEST_CASE("spec and case-study reports name their sections") {
  StateSpace sys = builtin_linear_model();
  SystemDocument doc = load_system(data_path("missile_system.json"));
  TwoDofGains g = design_2dof(sys, doc.spectrum, SolventForm::Diagonal,
                              Side::Right, doc.partition);
  Vec r = Vec::Ones(3);
  Trajectory traj = step_response(sys, g.K_FB, g.K_FF, r, 3.0, 1e-3);
  std::string specs = render_specs_report(traj, {"alpha", "beta", "phi"});
  CHECK(specs.find("alpha") != std::string::npos);
  CHECK(specs.find("settling") != std::string::npos);

  CaseStudyReport rep = case_study(true);
  std::string text = render_case_study_report(rep);
  CHECK(text.find("diagonal") != std::string::npos);
  CHECK(text.find("controller") != std::string::npos);
  CHECK(text.find("observer") != std::string::npos);
  CHECK(render_case_study_report(rep) == text);
}
