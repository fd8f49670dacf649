#pragma once

#include "eeuav/sco.hpp"

#include <iosfwd>
#include <string>

namespace eeuav {

/// Shortest decimal form that round-trips the double exactly.
std::string format_double(double value);

/// Write one row per slot with the mandatory header
/// n,t_s,x_m,y_m,vx_mps,vy_mps,ax_mps2,ay_mps2,rate_bps,power_w.
/// Values are emitted in round-trip precision, so identical trajectories
/// produce byte-identical files.
void write_trajectory_csv(std::ostream& out, const DiscreteTrajectory& traj,
                          const LinkParams& link, const AircraftParams& aircraft);
void write_trajectory_csv_file(const std::string& path, const DiscreteTrajectory& traj,
                               const LinkParams& link, const AircraftParams& aircraft);

/// Parse a trajectory CSV back into states (rate/power columns are ignored).
DiscreteTrajectory read_trajectory_csv(std::istream& in);
DiscreteTrajectory read_trajectory_csv_file(const std::string& path);

/// Iteration log: iter,ee_lb,ee_exact,kkt_residual,inner_iters,wall_time_s.
void write_iteration_log_csv(std::ostream& out, const SCORun& run);
void write_iteration_log_csv_file(const std::string& path, const SCORun& run);

}  // namespace eeuav
