#pragma once

#include "eeuav/convex_inner.hpp"
#include "eeuav/scenario.hpp"

#include <cstdint>
#include <vector>

namespace eeuav {

/// Expansion point of one sequential-convex iteration: positions and
/// velocities over all slots 0..N+1 (interior entries drive the bounds).
struct LocalPoint {
  std::vector<Vec2> pos;
  std::vector<Vec2> vel;

  int interior_count() const { return static_cast<int>(pos.size()) - 2; }
};

/// Map continuous constraints onto the discrete grid: N = round(T/dt) - 1
/// interior slots, boundary states on slots 0 and N+1.
DiscreteBoundary discretize_constraints(const TrajectoryConstraints& constraints, double dt);

struct RateBound {
  double value_bps = 0.0;  // bit/s summed over interior slots
  BoundCoefficients coeffs;
};

/// Concave lower bound on the slot-sum rate, expanded at the local point.
/// Equals the exact rate at the expansion point with identical gradient.
RateBound rate_lower_bound(const std::vector<Vec2>& pos_interior, const LocalPoint& at,
                           const LinkParams& link);

/// Linear global under-estimator of |v|^2 expanded at v_ref:
/// |v_ref|^2 + 2 v_ref . (v - v_ref).
double speed_lower_bound(const Vec2& v, const Vec2& v_ref);

enum class Objective { kEnergyEfficiency, kRate, kEnergy };
enum class FractionalMethod { kDinkelbach, kBisection };

struct SCOOptions {
  Objective objective = Objective::kEnergyEfficiency;
  FractionalMethod method = FractionalMethod::kDinkelbach;
  double outer_tol = 1e-4;
  int max_outer_iters = 100;
  double inner_tol = 1e-8;
  double fractional_tol = 1e-6;
  double speed_floor = 0.1;  // m/s; keeps c2/tau finite (model validity floor)
};

/// One outer iterate: the solved trajectory, its slack profile and the
/// objective ladder (surrogate bound vs energy-upper-bound vs exact EE).
struct SCOIterate {
  int iteration = 0;
  DiscreteTrajectory trajectory;
  std::vector<double> slack;    // tau, slots 1..N
  double ee_lb_bpj = 0.0;       // optimal value of the convexified fraction
  double ee_ub_bpj = 0.0;       // EE of the trajectory with upper-bounded energy
  double ee_exact_bpj = 0.0;    // EE of the trajectory with the exact energy model
  double objective_value = 0.0; // mode objective (ee_lb, rate-bound sum, or energy J)
  double kkt_residual = 0.0;
  int inner_iterations = 0;
  double wall_time_s = 0.0;
};

struct SCORun {
  std::vector<SCOIterate> iterates;
  bool converged = false;
  std::string message;

  const SCOIterate& final() const { return iterates.back(); }
};

struct P22Result {
  DiscreteTrajectory trajectory;
  std::vector<double> slack;
  double ee_lb_bpj = 0.0;
  double rate_bound_bps = 0.0;
  double denominator = 0.0;
  double kkt_residual = 0.0;
  int inner_iterations = 0;
  int fractional_iterations = 0;
};

/// Solve the convexified fractional problem at one local point via Dinkelbach
/// iteration or bisection on the fractional parameter. The certificate is
/// |Rlb - lambda* D| <= fractional_tol * D.
P22Result solve_p22(const LocalPoint& at, const DiscreteBoundary& boundary,
                    const LinkParams& link, const AircraftParams& aircraft,
                    const SCOOptions& opts);

/// Sequential convex optimization: iterate solve_p22 (or the single convex
/// solve for the rate/energy objectives), re-expanding the bounds at each
/// solution. The surrogate objective is monotone across iterations; the loop
/// stops on relative gain below outer_tol or on the iteration cap.
SCORun run_sco(const LocalPoint& init, const DiscreteBoundary& boundary,
               const LinkParams& link, const AircraftParams& aircraft, const SCOOptions& opts);

/// Named entry points for the three objectives.
SCORun run_algorithm1(const LocalPoint& init, const DiscreteBoundary& boundary,
                      const LinkParams& link, const AircraftParams& aircraft, SCOOptions opts);
SCORun run_constrained_ratemax(const LocalPoint& init, const DiscreteBoundary& boundary,
                               const LinkParams& link, const AircraftParams& aircraft,
                               SCOOptions opts);
SCORun run_constrained_energymin(const LocalPoint& init, const DiscreteBoundary& boundary,
                                 const LinkParams& link, const AircraftParams& aircraft,
                                 SCOOptions opts);

/// Initializations. The local point seeds the first expansion only; it need
/// not satisfy the boundary conditions itself.
LocalPoint circular_init(const LinkParams& link, const AircraftParams& aircraft,
                         const DiscreteBoundary& boundary);
LocalPoint direct_path_init(const DiscreteBoundary& boundary);
/// Smooth seeded path through random waypoints, speeds clipped to
/// [5, max_speed].
LocalPoint random_smooth_init(const DiscreteBoundary& boundary, std::uint64_t seed);

}  // namespace eeuav
