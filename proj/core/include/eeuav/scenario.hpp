#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eeuav {

using Vec2 = Eigen::Vector2d;

/// Raised on config parse failures and parameter invariant violations.
/// The message names the offending field.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

/// Fixed-wing propulsion constants. c1 multiplies V^3 (parasitic power),
/// c2 divides V (induced power).
struct AircraftParams {
  double c1 = 0.0;       // kg/m
  double c2 = 0.0;       // kg m^3 / s^4
  double mass = 0.0;     // kg, airframe plus payload
  double gravity = 9.8;  // m/s^2

  void validate() const;
};

/// Link budget. gamma0 is the reference SNR at 1 m; it may be given
/// directly or derived from the (beta0, P_tx, sigma2) triplet.
struct LinkParams {
  double bandwidth_hz = 0.0;
  double gamma0 = 0.0;     // linear, m^2-referenced
  double altitude_m = 0.0;

  // retained when the config used the triplet form, so serialization
  // round-trips the original representation
  struct LinkBudget {
    double beta0;
    double tx_power_w;
    double noise_power_w;
  };
  std::optional<LinkBudget> budget;

  static LinkParams from_gamma0(double bandwidth_hz, double gamma0, double altitude_m);
  static LinkParams from_budget(double bandwidth_hz, double beta0, double tx_power_w,
                                double noise_power_w, double altitude_m);
  void validate() const;
};

/// Trajectory constraint set: boundary states (optional as a group; absent
/// means the boundary constraints are dropped), speed/acceleration caps and
/// the mission horizon.
struct TrajectoryConstraints {
  std::optional<Vec2> start_pos, final_pos;  // m
  std::optional<Vec2> start_vel, final_vel;  // m/s
  double max_speed = 0.0;                    // m/s
  double max_accel = 0.0;                    // m/s^2
  double horizon_s = 0.0;

  bool has_boundaries() const { return start_pos.has_value(); }
  void validate() const;
};

struct SolverSettings {
  double dt = 0.5;               // s
  double outer_tol = 1e-4;       // relative gain threshold for the outer loop
  double inner_tol = 1e-8;       // scaled KKT residual of the convex solver
  double fractional_tol = 1e-6;  // Dinkelbach/bisection certificate
  int max_outer_iters = 100;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Scenario {
  AircraftParams aircraft;
  LinkParams link;
  TrajectoryConstraints constraints;
  SolverSettings solver;
};

/// Discrete state-space trajectory over N+2 slots (0..N+1), slot spacing dt.
/// Slots 1..N are the interior used for rate/energy sums; slots 0 and N+1
/// carry the boundary states.
struct DiscreteTrajectory {
  double dt = 0.0;
  std::vector<Vec2> pos;  // m
  std::vector<Vec2> vel;  // m/s
  std::vector<Vec2> acc;  // m/s^2
  double feasibility_tol = 1e-6;

  int slot_count() const { return static_cast<int>(pos.size()); }
  int interior_count() const { return slot_count() - 2; }
  double interior_duration() const { return interior_count() * dt; }

  /// Largest residual of q[n+1]=q[n]+v[n]dt+a[n]dt^2/2 and v[n+1]=v[n]+a[n]dt.
  double max_dynamics_residual() const;
  bool dynamics_consistent() const { return max_dynamics_residual() <= feasibility_tol; }

  void validate() const;  // shape and dt checks only
};

/// Slot-averaged performance of a trajectory. Averages run over the interior
/// slots 1..N. A zero interior speed makes the propulsion power unbounded;
/// that case is reported through divergent_power (avg_power set to +inf,
/// energy efficiency set to 0) rather than through NaN arithmetic.
struct DesignMetrics {
  double avg_speed_mps = 0.0;
  double avg_accel_mps2 = 0.0;
  double avg_rate_bps = 0.0;
  double avg_power_w = 0.0;
  double energy_efficiency_bpj = 0.0;
  double total_bits = 0.0;
  double total_energy_j = 0.0;
  bool divergent_power = false;
  bool thrust_reversal = false;
};

/// Parse and validate a JSON scenario. Derives gamma0 when the link block
/// uses the (beta0, P_tx_w, sigma2_w) form.
Scenario load_scenario(const std::string& config_text);
Scenario load_scenario_file(const std::string& path);

/// Serialize back to JSON. Round-trips every parameter value exactly.
std::string save_scenario(const Scenario& scenario);

/// Evaluate rate/power/energy-efficiency metrics of a dynamics-consistent
/// trajectory under the given link and propulsion models.
DesignMetrics metrics(const DiscreteTrajectory& traj, const LinkParams& link,
                      const AircraftParams& aircraft);

}  // namespace eeuav
