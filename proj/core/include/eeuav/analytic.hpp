#pragma once

#include "eeuav/scenario.hpp"

namespace eeuav {

/// Minimizer of slf_power: (c2 / 3 c1)^(1/4).
double energy_min_speed(const AircraftParams& aircraft);

/// slf_power at the energy-minimum speed: (3^(-3/4) + 3^(1/4)) c1^(1/4) c2^(3/4).
double min_slf_power(const AircraftParams& aircraft);

/// Speed minimizing drag (not power): (c2 / c1)^(1/4).
double drag_min_speed(const AircraftParams& aircraft);

/// Power-optimal speed for steady level turning on a circle of the given
/// radius: (c2 / (3 (c1 + c2/(g^2 r^2))))^(1/4).
double circular_speed(double radius_m, const AircraftParams& aircraft);

/// Power of the circle at its optimal speed, a univariate function of r:
/// (3^(-3/4) + 3^(1/4)) c2^(3/4) (c1 + c2/(g^2 r^2))^(1/4).
double circular_power(double radius_m, const AircraftParams& aircraft);

struct CircularDesign {
  double radius_m = 0.0;
  double speed_mps = 0.0;
  double energy_efficiency_bpj = 0.0;
  double avg_rate_bps = 0.0;
  double avg_power_w = 0.0;
};

/// Jointly optimize radius and speed of terminal-centered circular flight for
/// energy efficiency. Reduces to maximizing
///   eta(z) = ln(1 + gamma0/(H^2+z)) / (c1 + c2/(g^2 z))^(1/4),  z = r^2,
/// solved by a coarse log-grid bracket followed by golden-section search.
CircularDesign optimize_circular(const LinkParams& link, const AircraftParams& aircraft,
                                 double rel_tol = 1e-9);

/// Closed-form radius maximizing the low-SNR linearization of eta
/// (valid regime gamma0 << H^2):
///   z* = 3 c2 / (8 c1 g^2) [sqrt(1 + 16 H^2 c1 g^2 / (9 c2)) - 1],  r* = sqrt(z*).
double low_snr_radius(const LinkParams& link, const AircraftParams& aircraft);

/// Straight level flight at the energy-minimum speed, path symmetric about
/// the terminal; metrics from the closed forms.
DesignMetrics straight_em_design(const LinkParams& link, const AircraftParams& aircraft,
                                 double horizon_s);

/// Stationary hovering above the terminal: best rate, unbounded propulsion
/// power, zero energy efficiency.
DesignMetrics hover_design(const LinkParams& link, double horizon_s);

/// Materialize a constant-speed circle around the origin as a discrete
/// trajectory (vertices exactly on the radius, per-slot dynamics exact).
DiscreteTrajectory make_circular_trajectory(double radius_m, double speed_mps, double dt,
                                            double horizon_s);

/// Materialize straight level flight along the x axis through the origin,
/// interior slots symmetric about it.
DiscreteTrajectory make_straight_trajectory(double speed_mps, double dt, double horizon_s);

}  // namespace eeuav
