#pragma once

#include "eeuav/scenario.hpp"

#include <vector>

namespace eeuav {

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Discrete boundary data for the state-space problem: interior slot count N,
/// slot length, optional boundary states (present = constrained mode) and the
/// speed/acceleration caps.
struct DiscreteBoundary {
  int interior_count = 0;  // N
  double dt = 0.0;
  std::optional<Vec2> start_pos, final_pos;
  std::optional<Vec2> start_vel, final_vel;
  double max_speed = 0.0;
  double max_accel = 0.0;

  bool constrained() const { return start_pos.has_value(); }
};

/// Per-slot coefficients of the concave rate lower bound
///   B sum_n [alpha[n] - beta[n] (|q[n]|^2 - |q_ref[n]|^2)],
/// expanded at a reference trajectory. Index i holds slot n = i+1.
struct BoundCoefficients {
  std::vector<double> alpha;  // bit/s/Hz offsets
  std::vector<double> beta;   // 1/m^2 slopes, > 0
};

/// Parametric convex subproblem
///   maximize  rate_weight * Rlb(q) - lambda * D(v, a, tau)
/// over {q, v, a, tau} subject to the linear dynamics, boundary conditions,
/// norm caps, tau >= speed_floor and the linearized speed constraint
/// psi(v[n]) >= tau_n^2, where
///   D = sum_n [c1 |v[n]|^3 + c2/tau_n + (c2/g^2)|a[n]|^2/tau_n] + kinetic_term.
/// (lambda, rate_weight) = (lam, 1) is one fractional-programming step;
/// (0, 1) maximizes the rate bound alone; (1, 0) minimizes energy.
struct ConvexSubproblem {
  DiscreteBoundary boundary;
  AircraftParams aircraft;
  double bandwidth_hz = 0.0;
  BoundCoefficients rate_bound;
  std::vector<Vec2> pos_expansion;  // slots 0..N+1
  std::vector<Vec2> vel_expansion;  // slots 0..N+1
  double lambda = 0.0;
  double rate_weight = 1.0;
  double kinetic_term = 0.0;  // DeltaK/dt, constant in constrained mode
  double speed_floor = 0.1;   // m/s
};

struct KKTReport {
  double stationarity = 0.0;        // |grad f + A' nu + sum mu_i grad h_i|_inf, scaled
  double equality_residual = 0.0;   // |A x - b|_inf, scaled
  double max_violation = 0.0;       // max_i h_i(x)^+ over inequality constraints
  double complementarity = 0.0;     // max_i |mu_i h_i(x)|, scaled
  double min_dual = 0.0;            // most negative inequality multiplier

  double worst() const;
};

struct InnerSolution {
  // full slot arrays 0..N+1; boundary slots carry the imposed states in
  // constrained mode and a constant-velocity extension otherwise
  std::vector<Vec2> pos, vel, acc;
  std::vector<double> slack;  // tau, slots 1..N

  double objective = 0.0;         // rate_weight * Rlb - lambda * D
  double rate_bound_value = 0.0;  // Rlb at the solution, bit/s slot-sum
  double denominator = 0.0;       // D at the solution (kinetic_term included)

  int newton_iterations = 0;
  bool converged = false;
  KKTReport kkt;

  // duals in the original problem scaling; ineq order: v-caps (n=1..N),
  // a-caps (n=0..N or 1..N), tau floors, psi constraints
  std::vector<double> duals_eq;
  std::vector<double> duals_ineq;

  // residual norm after each accepted Newton step, with the barrier stage
  std::vector<std::pair<int, double>> residual_history;
};

/// Interior-point (log-barrier Newton) solve of the subproblem to the given
/// scaled residual tolerance. Throws SolverError on infeasible boundary data
/// or line-search collapse; an exhausted iteration budget with loose residuals
/// is reported through converged=false and the KKT report.
InnerSolution solve_subproblem(const ConvexSubproblem& sub, double tol);

/// Recompute the KKT residual report for a candidate point with the duals
/// carried in `sol` (pass zero duals to measure raw objective stationarity).
KKTReport check_kkt(const ConvexSubproblem& sub, const InnerSolution& sol);

}  // namespace eeuav
