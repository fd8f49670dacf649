#include "eeuav/comm.hpp"

#include <cmath>

namespace eeuav {

double rate_per_hz(const Vec2& pos, const LinkParams& link) {
  const double dist_sq = link.altitude_m * link.altitude_m + pos.squaredNorm();
  return kLog2E * std::log1p(link.gamma0 / dist_sq);
}

double instantaneous_rate(const Vec2& pos, const LinkParams& link) {
  return link.bandwidth_hz * rate_per_hz(pos, link);
}

double trajectory_throughput(const DiscreteTrajectory& traj, const LinkParams& link) {
  traj.validate();
  double rate_sum = 0.0;
  for (int n = 1; n <= traj.interior_count(); ++n) {
    rate_sum += rate_per_hz(traj.pos[n], link);
  }
  return traj.dt * link.bandwidth_hz * rate_sum;
}

double rate_antiderivative(double z, const LinkParams& link) {
  const double h = link.altitude_m;
  const double root = std::sqrt(h * h + link.gamma0);
  return z * std::log1p(link.gamma0 / (h * h + z * z)) +
         2.0 * root * std::atan(z / root) - 2.0 * h * std::atan(z / h);
}

double straight_flight_throughput(double speed, double duration_s, const LinkParams& link) {
  if (speed <= 0.0) throw std::domain_error("straight_flight_throughput: speed must be positive");
  if (duration_s <= 0.0) {
    throw std::domain_error("straight_flight_throughput: duration must be positive");
  }
  const double half = 0.5 * speed * duration_s;
  return link.bandwidth_hz * kLog2E / speed *
         (rate_antiderivative(half, link) - rate_antiderivative(-half, link));
}

double straight_flight_throughput_limit(double speed, const LinkParams& link) {
  if (speed <= 0.0) throw std::domain_error("speed must be positive");
  const double h = link.altitude_m;
  return 2.0 * M_PI * link.bandwidth_hz * kLog2E / speed *
         (std::sqrt(h * h + link.gamma0) - h);
}

}  // namespace eeuav
