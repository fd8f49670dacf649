#include "eeuav/analytic.hpp"

#include "eeuav/comm.hpp"
#include "eeuav/propulsion.hpp"

#include <cmath>

namespace eeuav {

namespace {
constexpr double kPowerShapeConst = 1.7547654187700634;  // 3^(-3/4) + 3^(1/4)
}

double energy_min_speed(const AircraftParams& aircraft) {
  aircraft.validate();
  return std::pow(aircraft.c2 / (3.0 * aircraft.c1), 0.25);
}

double min_slf_power(const AircraftParams& aircraft) {
  aircraft.validate();
  return kPowerShapeConst * std::pow(aircraft.c1, 0.25) * std::pow(aircraft.c2, 0.75);
}

double drag_min_speed(const AircraftParams& aircraft) {
  aircraft.validate();
  return std::pow(aircraft.c2 / aircraft.c1, 0.25);
}

namespace {

double effective_c1(double radius_m, const AircraftParams& ac) {
  const double g2r2 = ac.gravity * ac.gravity * radius_m * radius_m;
  return ac.c1 + ac.c2 / g2r2;
}

}  // namespace

double circular_speed(double radius_m, const AircraftParams& aircraft) {
  if (radius_m <= 0.0) throw std::domain_error("circular_speed: radius must be positive");
  return std::pow(aircraft.c2 / (3.0 * effective_c1(radius_m, aircraft)), 0.25);
}

double circular_power(double radius_m, const AircraftParams& aircraft) {
  if (radius_m <= 0.0) throw std::domain_error("circular_power: radius must be positive");
  return kPowerShapeConst * std::pow(aircraft.c2, 0.75) *
         std::pow(effective_c1(radius_m, aircraft), 0.25);
}

namespace {

// eta(z) = ln(1 + gamma0/(H^2+z)) / (c1 + c2/(g^2 z))^(1/4), z = r^2
double circular_ee_shape(double z, const LinkParams& link, const AircraftParams& ac) {
  const double h2 = link.altitude_m * link.altitude_m;
  const double g2 = ac.gravity * ac.gravity;
  return std::log1p(link.gamma0 / (h2 + z)) / std::pow(ac.c1 + ac.c2 / (g2 * z), 0.25);
}

}  // namespace

CircularDesign optimize_circular(const LinkParams& link, const AircraftParams& aircraft,
                                 double rel_tol) {
  link.validate();
  aircraft.validate();
  if (!(rel_tol > 0.0)) throw std::domain_error("optimize_circular: rel_tol must be positive");

  // coarse log-grid pass brackets the maximizer; eta -> 0 at both ends
  const double lz_lo = std::log(1e-2), lz_hi = std::log(1e8);
  const int grid = 241;
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i < grid; ++i) {
    const double lz = lz_lo + (lz_hi - lz_lo) * i / (grid - 1);
    const double val = circular_ee_shape(std::exp(lz), link, aircraft);
    if (val > best_val) {
      best_val = val;
      best = i;
    }
  }
  const double step = (lz_hi - lz_lo) / (grid - 1);
  double lo = lz_lo + step * std::max(0, best - 1);
  double hi = lz_lo + step * std::min(grid - 1, best + 1);

  // golden-section on log z
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = circular_ee_shape(std::exp(x1), link, aircraft);
  double f2 = circular_ee_shape(std::exp(x2), link, aircraft);
  while (hi - lo > rel_tol) {  // interval in log z == relative interval in z
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = circular_ee_shape(std::exp(x2), link, aircraft);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = circular_ee_shape(std::exp(x1), link, aircraft);
    }
  }
  const double z_opt = std::exp(0.5 * (lo + hi));

  CircularDesign design;
  design.radius_m = std::sqrt(z_opt);
  design.speed_mps = circular_speed(design.radius_m, aircraft);
  design.avg_power_w = circular_power(design.radius_m, aircraft);
  design.avg_rate_bps = instantaneous_rate(Vec2(design.radius_m, 0.0), link);
  design.energy_efficiency_bpj = design.avg_rate_bps / design.avg_power_w;
  return design;
}

double low_snr_radius(const LinkParams& link, const AircraftParams& aircraft) {
  link.validate();
  aircraft.validate();
  const double g2 = aircraft.gravity * aircraft.gravity;
  const double h2 = link.altitude_m * link.altitude_m;
  const double z = 3.0 * aircraft.c2 / (8.0 * aircraft.c1 * g2) *
                   (std::sqrt(1.0 + 16.0 * h2 * aircraft.c1 * g2 / (9.0 * aircraft.c2)) - 1.0);
  return std::sqrt(z);
}

DesignMetrics straight_em_design(const LinkParams& link, const AircraftParams& aircraft,
                                 double horizon_s) {
  if (horizon_s <= 0.0) throw std::domain_error("straight_em_design: horizon must be positive");
  DesignMetrics m;
  m.avg_speed_mps = energy_min_speed(aircraft);
  m.avg_accel_mps2 = 0.0;
  m.total_bits = straight_flight_throughput(m.avg_speed_mps, horizon_s, link);
  m.avg_rate_bps = m.total_bits / horizon_s;
  m.avg_power_w = min_slf_power(aircraft);
  m.total_energy_j = m.avg_power_w * horizon_s;
  m.energy_efficiency_bpj = m.total_bits / m.total_energy_j;
  return m;
}

DesignMetrics hover_design(const LinkParams& link, double horizon_s) {
  if (horizon_s <= 0.0) throw std::domain_error("hover_design: horizon must be positive");
  DesignMetrics m;
  m.avg_rate_bps = instantaneous_rate(Vec2::Zero(), link);
  m.total_bits = m.avg_rate_bps * horizon_s;
  m.divergent_power = true;
  m.avg_power_w = std::numeric_limits<double>::infinity();
  m.total_energy_j = std::numeric_limits<double>::infinity();
  m.energy_efficiency_bpj = 0.0;
  return m;
}

DiscreteTrajectory make_circular_trajectory(double radius_m, double speed_mps, double dt,
                                            double horizon_s) {
  if (radius_m <= 0.0 || speed_mps <= 0.0 || dt <= 0.0 || horizon_s <= 0.0) {
    throw std::domain_error("make_circular_trajectory: all arguments must be positive");
  }
  const int n_interior = static_cast<int>(std::lround(horizon_s / dt)) - 1;
  if (n_interior < 1) throw std::domain_error("make_circular_trajectory: horizon too short for dt");

  // per-slot turn angle placing the vertices exactly on the radius:
  // chord 2 r sin(phi/2) must equal dt V cos(phi/2)
  const double phi = 2.0 * std::atan2(dt * speed_mps, 2.0 * radius_m);

  DiscreteTrajectory traj;
  traj.dt = dt;
  const int slots = n_interior + 2;
  traj.pos.resize(slots);
  traj.vel.resize(slots);
  traj.acc.resize(slots);
  for (int n = 0; n < slots; ++n) {
    const double theta = phi * n;
    traj.pos[n] = radius_m * Vec2(std::cos(theta), std::sin(theta));
    traj.vel[n] = speed_mps * Vec2(-std::sin(theta), std::cos(theta));
  }
  for (int n = 0; n + 1 < slots; ++n) {
    traj.acc[n] = (traj.vel[n + 1] - traj.vel[n]) / dt;
  }
  // last slot keeps the same turn rate
  const double theta_next = phi * slots;
  traj.acc[slots - 1] =
      (speed_mps * Vec2(-std::sin(theta_next), std::cos(theta_next)) - traj.vel[slots - 1]) / dt;
  return traj;
}

DiscreteTrajectory make_straight_trajectory(double speed_mps, double dt, double horizon_s) {
  if (speed_mps <= 0.0 || dt <= 0.0 || horizon_s <= 0.0) {
    throw std::domain_error("make_straight_trajectory: all arguments must be positive");
  }
  const int n_interior = static_cast<int>(std::lround(horizon_s / dt)) - 1;
  if (n_interior < 1) throw std::domain_error("make_straight_trajectory: horizon too short for dt");

  DiscreteTrajectory traj;
  traj.dt = dt;
  const int slots = n_interior + 2;
  traj.pos.resize(slots);
  traj.vel.resize(slots, Vec2(speed_mps, 0.0));
  traj.acc.resize(slots, Vec2::Zero());
  const double center = 0.5 * (slots - 1);
  for (int n = 0; n < slots; ++n) {
    traj.pos[n] = Vec2(speed_mps * dt * (n - center), 0.0);
  }
  return traj;
}

}  // namespace eeuav
