#include "eeuav/propulsion.hpp"

#include <cmath>

namespace eeuav {

AccelDecomposition decompose_accel(const Vec2& vel, const Vec2& accel) {
  const double speed = vel.norm();
  if (speed <= kSpeedGuard) {
    throw std::domain_error("decompose_accel: undefined at zero speed");
  }
  const double tangential = accel.dot(vel) / speed;
  const double perp_sq = accel.squaredNorm() - tangential * tangential;
  return {tangential, std::sqrt(std::max(0.0, perp_sq))};
}

PowerResult power_required(const Vec2& vel, const Vec2& accel, const AircraftParams& aircraft) {
  const double speed = vel.norm();
  if (speed <= kSpeedGuard) {
    throw std::domain_error("power_required: power diverges at zero speed");
  }
  const AccelDecomposition d = decompose_accel(vel, accel);
  const double g2 = aircraft.gravity * aircraft.gravity;
  const double thrust_power = aircraft.c1 * speed * speed * speed +
                              aircraft.c2 / speed * (1.0 + d.centripetal * d.centripetal / g2) +
                              aircraft.mass * accel.dot(vel);
  return {std::abs(thrust_power), thrust_power < 0.0};
}

double slf_power(double speed, const AircraftParams& aircraft) {
  if (speed <= 0.0) throw std::domain_error("slf_power: speed must be positive");
  return aircraft.c1 * speed * speed * speed + aircraft.c2 / speed;
}

namespace {

EnergyResult integrate_energy(const DiscreteTrajectory& traj, const AircraftParams& aircraft,
                              bool full_accel_norm) {
  traj.validate();
  EnergyResult result;
  const double g2 = aircraft.gravity * aircraft.gravity;
  const int n_interior = traj.interior_count();

  double drag_work = 0.0;
  for (int n = 1; n <= n_interior; ++n) {
    const double speed = traj.vel[n].norm();
    if (speed <= kSpeedGuard) {
      result.divergent = true;
      result.total_j = std::numeric_limits<double>::infinity();
      return result;
    }
    double turn_sq;  // squared acceleration that loads the wings
    if (full_accel_norm) {
      turn_sq = traj.acc[n].squaredNorm();
    } else {
      const double tang = traj.acc[n].dot(traj.vel[n]) / speed;
      turn_sq = std::max(0.0, traj.acc[n].squaredNorm() - tang * tang);
    }
    drag_work += aircraft.c1 * speed * speed * speed +
                 aircraft.c2 / speed * (1.0 + turn_sq / g2);
    // thrust reversal check uses the exact instantaneous model
    const double inner = aircraft.c1 * speed * speed * speed +
                         aircraft.c2 / speed *
                             (1.0 + (traj.acc[n].squaredNorm() -
                                     std::pow(traj.acc[n].dot(traj.vel[n]) / speed, 2)) /
                                        g2) +
                         aircraft.mass * traj.acc[n].dot(traj.vel[n]);
    if (inner < 0.0) result.thrust_reversal = true;
  }

  const int last = traj.slot_count() - 1;
  result.kinetic_j =
      0.5 * aircraft.mass * (traj.vel[last].squaredNorm() - traj.vel[0].squaredNorm());
  result.total_j = traj.dt * drag_work + result.kinetic_j;
  return result;
}

}  // namespace

EnergyResult trajectory_energy(const DiscreteTrajectory& traj, const AircraftParams& aircraft) {
  return integrate_energy(traj, aircraft, /*full_accel_norm=*/false);
}

EnergyResult trajectory_energy_ub(const DiscreteTrajectory& traj, const AircraftParams& aircraft) {
  return integrate_energy(traj, aircraft, /*full_accel_norm=*/true);
}

}  // namespace eeuav
