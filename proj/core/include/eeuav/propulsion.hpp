#pragma once

#include "eeuav/scenario.hpp"

namespace eeuav {

/// Speeds below this are treated as zero: the induced-power term c2/V makes
/// the required power unbounded, so such states are flagged divergent.
inline constexpr double kSpeedGuard = 1e-6;  // m/s

/// Acceleration split along/normal to the velocity.
struct AccelDecomposition {
  double tangential;   // m/s^2, signed (negative = decelerating)
  double centripetal;  // m/s^2, >= 0
};

/// Decompose an acceleration into tangential and centripetal parts relative
/// to the velocity direction. Undefined at zero speed (throws).
AccelDecomposition decompose_accel(const Vec2& vel, const Vec2& accel);

struct PowerResult {
  double watts;
  /// Set when the thrust term goes negative (abrupt deceleration requiring
  /// reverse thrust). The magnitude is still reported, but the energy model
  /// does not cover this regime; optimizers must treat it as invalid.
  bool thrust_reversal;
};

/// Instantaneous propulsion power for velocity v and acceleration a:
/// |c1 |v|^3 + (c2/|v|)(1 + a_perp^2/g^2) + m a.v|.
PowerResult power_required(const Vec2& vel, const Vec2& accel, const AircraftParams& aircraft);

/// Steady straight-and-level flight power c1 V^3 + c2 / V.
double slf_power(double speed, const AircraftParams& aircraft);

struct EnergyResult {
  double total_j = 0.0;
  double kinetic_j = 0.0;  // boundary-only term m/2 (|v[N+1]|^2 - |v[0]|^2)
  bool divergent = false;  // some interior slot at (near) zero speed
  bool thrust_reversal = false;
};

/// Propulsion energy of a discrete trajectory:
///   dt * sum_{n=1..N} [c1 |v|^3 + (c2/|v|)(1 + a_perp^2 / g^2)] + kinetic_j.
/// The tangential-acceleration work integrates exactly into the kinetic term,
/// which depends on the boundary speeds only.
EnergyResult trajectory_energy(const DiscreteTrajectory& traj, const AircraftParams& aircraft);

/// Convex upper bound on trajectory_energy: a_perp^2 replaced by |a|^2.
/// Tight (exact) whenever a.v = 0 at every interior slot.
EnergyResult trajectory_energy_ub(const DiscreteTrajectory& traj, const AircraftParams& aircraft);

}  // namespace eeuav
