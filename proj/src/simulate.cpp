#include "blockpole/simulate.hpp"

#include "blockpole/util.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

namespace blockpole {

Trajectory step_response(const StateSpace& sys, const Mat& k_fb, const Mat& k_ff,
                         const Vec& r, double horizon, double dt, const Mat* da,
                         const Vec* x0) {
  sys.validate();
  const int n = sys.n();
  if (k_fb.rows() != sys.m() || k_fb.cols() != n)
    throw_input("simulate", "feedback gain must be m x n");
  if (k_ff.rows() != sys.m() || k_ff.cols() != sys.p())
    throw_input("simulate", "feedforward gain must be m x p");
  if (r.size() != sys.p())
    throw_input("simulate", "reference must have one entry per output");
  if (!(dt > 0.0)) throw_input("simulate", "step size must be positive");
  if (!(horizon >= dt)) throw_input("simulate", "horizon must cover at least one step");
  if (da && (da->rows() != n || da->cols() != n))
    throw_input("simulate", "perturbation must be n x n");
  if (x0 && x0->size() != n)
    throw_input("simulate", "initial state must have n entries");

  Mat acl = sys.A - sys.B * k_fb;
  if (da) acl += *da;
  const Vec u_ff = k_ff * r;
  const Vec forcing = sys.B * u_ff;

  // Hold the forcing exactly: augment it as a frozen state and exponentiate.
  Mat aug = Mat::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = acl * dt;
  aug.topRightCorner(n, 1) = forcing * dt;
  Mat e = aug.exp();
  const Mat phi = e.topLeftCorner(n, n);
  const Vec gamma = e.topRightCorner(n, 1);

  const int steps = static_cast<int>(std::llround(horizon / dt));

  Trajectory out;
  out.dt = dt;
  out.reference = r;
  out.times = Vec(steps + 1);
  out.states = Mat(steps + 1, n);
  out.outputs = Mat(steps + 1, sys.p());
  out.inputs = Mat(steps + 1, sys.m());

  Vec x = x0 ? *x0 : Vec::Zero(n);
  int kept = 0;
  for (int k = 0; k <= steps; ++k) {
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e12) {
      out.diverged = true;
      break;
    }
    out.times(k) = k * dt;
    out.states.row(k) = x.transpose();
    const Vec u = u_ff - k_fb * x;
    out.inputs.row(k) = u.transpose();
    out.outputs.row(k) = (sys.C * x + sys.D * u).transpose();
    kept = k + 1;
    if (k < steps) x = phi * x + gamma;
  }
  if (kept <= steps) {
    out.times.conservativeResize(kept);
    out.states.conservativeResize(kept, Eigen::NoChange);
    out.outputs.conservativeResize(kept, Eigen::NoChange);
    out.inputs.conservativeResize(kept, Eigen::NoChange);
  }
  return out;
}

TimeSpecs time_specs(const Trajectory& traj, int output_index) {
  if (traj.diverged)
    throw_input("time-specs", "trajectory diverged; figures are undefined");
  const int N = static_cast<int>(traj.times.size());
  if (N < 10) throw_input("time-specs", "trajectory too short");
  if (output_index < 0 || output_index >= traj.outputs.cols())
    throw_input("time-specs", "output index out of range");

  const Vec y = traj.outputs.col(output_index);
  const double r_target =
      traj.reference.size() > output_index ? traj.reference(output_index) : 0.0;

  const int tail = std::max(1, N / 50);  // last 2%
  const double y_f = y.tail(tail).mean();

  TimeSpecs spec;
  spec.final_value = y_f;

  double denom = std::abs(y_f);
  double sgn = y_f >= 0 ? 1.0 : -1.0;
  // A final value far below the response scale cannot carry percent figures;
  // fall back to the reference magnitude.
  const double scale = std::max(y.cwiseAbs().maxCoeff(), std::abs(r_target));
  if (denom <= 1e-9 + 1e-4 * scale) {
    if (std::abs(r_target) > 0.0) {
      denom = std::abs(r_target);
      sgn = r_target >= 0 ? 1.0 : -1.0;
      spec.relative_to_reference = true;
    } else {
      throw_input("time-specs",
                  "response settles at zero with a zero reference; figures are "
                  "undefined");
    }
  }

  // Normalized response, heading to +1.
  Vec z = y * (sgn / denom);
  const double z_f = y_f * (sgn / denom);

  // Settled-horizon precondition over the last tenth.
  const int guard_from = N - std::max(1, N / 10);
  for (int k = guard_from; k < N; ++k)
    if (std::abs(z(k) - z_f) > 0.02)
      throw_input("time-specs",
                  "response has not settled within the horizon; extend the "
                  "simulation");

  const double dt = traj.dt;
  auto cross_time = [&](int k, double level) {
    const double z0 = z(k), z1 = z(k + 1);
    if (z1 == z0) return traj.times(k + 1);
    return traj.times(k) + (level - z0) / (z1 - z0) * dt;
  };

  const double z_max = z.maxCoeff();
  const double z_min = z.minCoeff();
  if (z_max - z_f > 1e-6) {
    spec.overshoot_defined = true;
    spec.percent_overshoot = (z_max - z_f) * 100.0;
  }
  if (-z_min > 1e-6) {
    spec.undershoot_defined = true;
    spec.percent_undershoot = -z_min * 100.0;
  }

  // Settling: last excursion out of the 2% band, interpolated back to the edge.
  int last_out = -1;
  for (int k = 0; k < N; ++k)
    if (std::abs(z(k) - z_f) > 0.02) last_out = k;
  if (last_out < 0) {
    spec.settling_time = 0.0;
  } else {
    const double edge = z(last_out) > z_f ? z_f + 0.02 : z_f - 0.02;
    spec.settling_time = cross_time(last_out, edge);
  }

  // Rise: first 10% and 90% crossings. A signal already at or past a level at
  // t0 has trivially crossed it (covers constant trajectories).
  auto first_cross = [&](double level) {
    if (z(0) >= level) return traj.times(0);
    for (int k = 0; k + 1 < N; ++k)
      if (z(k) < level && z(k + 1) >= level) return cross_time(k, level);
    throw_input("time-specs", "response never reaches 90% of its final value");
    return 0.0;  // unreachable
  };
  const double t90 = first_cross(0.9 * z_f);
  double t10 = traj.times(0);
  if (z(0) < 0.1 * z_f) {
    for (int k = 0; k + 1 < N; ++k)
      if (z(k) < 0.1 * z_f && z(k + 1) >= 0.1 * z_f) {
        t10 = cross_time(k, 0.1 * z_f);
        break;
      }
  }
  spec.rise_time = t90 - t10;
  return spec;
}

}  // namespace blockpole
