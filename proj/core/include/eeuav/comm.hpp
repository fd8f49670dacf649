#pragma once

#include "eeuav/scenario.hpp"

namespace eeuav {

/// log2(e); spectral rates are computed as log2e * ln(1+x) so that the rate
/// and its concave lower bound share constants bit-for-bit.
inline constexpr double kLog2E = 1.4426950408889634074;

/// Spectral rate log2(1 + gamma0 / (H^2 + |q|^2)) in bit/s/Hz.
double rate_per_hz(const Vec2& pos, const LinkParams& link);

/// Instantaneous link rate B * rate_per_hz, bit/s.
double instantaneous_rate(const Vec2& pos, const LinkParams& link);

/// Total bits over the interior slots: dt * sum_{n=1..N} R(q[n]).
double trajectory_throughput(const DiscreteTrajectory& traj, const LinkParams& link);

/// Antiderivative of ln(1 + gamma0/(H^2 + z^2)) used by the straight-flight
/// closed form:
///   F(z) = z ln(1+gamma0/(H^2+z^2)) + 2 sqrt(H^2+gamma0) atan(z/sqrt(H^2+gamma0))
///          - 2 H atan(z/H).
double rate_antiderivative(double z, const LinkParams& link);

/// Closed-form throughput (bits) of level flight at constant speed along a
/// straight line symmetric about the terminal: (B/ln2) [F(VT/2)-F(-VT/2)] / V.
double straight_flight_throughput(double speed, double duration_s, const LinkParams& link);

/// Limit of straight_flight_throughput as the duration grows:
/// 2 pi B / (ln2 V) (sqrt(H^2+gamma0) - H). Finite, so the energy efficiency
/// of straight flight vanishes for long horizons.
double straight_flight_throughput_limit(double speed, const LinkParams& link);

}  // namespace eeuav
