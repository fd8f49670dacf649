#include "eeuav/scenario.hpp"

#include "eeuav/comm.hpp"
#include "eeuav/propulsion.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace eeuav {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ScenarioError(msg); }

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    fail(std::string(field) + " must be positive and finite, got " + std::to_string(value));
  }
}

}  // namespace

void AircraftParams::validate() const {
  require_positive(c1, "aircraft.c1");
  require_positive(c2, "aircraft.c2");
  require_positive(mass, "aircraft.m");
  require_positive(gravity, "aircraft.g");
}

LinkParams LinkParams::from_gamma0(double bandwidth_hz, double gamma0, double altitude_m) {
  LinkParams lp;
  lp.bandwidth_hz = bandwidth_hz;
  lp.gamma0 = gamma0;
  lp.altitude_m = altitude_m;
  lp.validate();
  return lp;
}

LinkParams LinkParams::from_budget(double bandwidth_hz, double beta0, double tx_power_w,
                                   double noise_power_w, double altitude_m) {
  require_positive(beta0, "link.beta0");
  require_positive(tx_power_w, "link.P_tx_w");
  require_positive(noise_power_w, "link.sigma2_w");
  LinkParams lp;
  lp.bandwidth_hz = bandwidth_hz;
  lp.gamma0 = beta0 * tx_power_w / noise_power_w;
  lp.altitude_m = altitude_m;
  lp.budget = LinkBudget{beta0, tx_power_w, noise_power_w};
  lp.validate();
  return lp;
}

void LinkParams::validate() const {
  require_positive(bandwidth_hz, "link.B_hz");
  if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) fail("link.gamma0 must be non-negative");
  require_positive(altitude_m, "link.H_m");
}

void TrajectoryConstraints::validate() const {
  require_positive(max_speed, "constraints.Vmax");
  require_positive(max_accel, "constraints.amax");
  require_positive(horizon_s, "constraints.T");
  const int given = int(start_pos.has_value()) + int(final_pos.has_value()) +
                    int(start_vel.has_value()) + int(final_vel.has_value());
  if (given != 0 && given != 4) {
    fail("constraints: q0, qF, v0, vF must be given together or omitted together");
  }
  if (given == 4) {
    if (start_vel->norm() > max_speed) fail("constraints.v0 exceeds Vmax");
    if (final_vel->norm() > max_speed) fail("constraints.vF exceeds Vmax");
    const double dist = (*final_pos - *start_pos).norm();
    if (dist > max_speed * horizon_s) {
      std::ostringstream os;
      os << "constraints: qF unreachable, |qF-q0| = " << dist << " m > Vmax*T = "
         << max_speed * horizon_s << " m";
      fail(os.str());
    }
  }
}

void SolverSettings::validate() const {
  require_positive(dt, "solver.dt");
  require_positive(outer_tol, "solver.tolerances.outer");
  require_positive(inner_tol, "solver.tolerances.inner");
  require_positive(fractional_tol, "solver.tolerances.fractional");
  if (max_outer_iters < 1) fail("solver.max_iters must be >= 1");
}

void DiscreteTrajectory::validate() const {
  if (pos.size() != vel.size() || pos.size() != acc.size()) {
    fail("trajectory: pos/vel/acc lengths differ");
  }
  if (slot_count() < 3) fail("trajectory: need at least one interior slot");
  require_positive(dt, "trajectory.dt");
}

double DiscreteTrajectory::max_dynamics_residual() const {
  double worst = 0.0;
  for (int n = 0; n + 1 < slot_count(); ++n) {
    const Vec2 rp = pos[n + 1] - pos[n] - vel[n] * dt - 0.5 * dt * dt * acc[n];
    const Vec2 rv = vel[n + 1] - vel[n] - acc[n] * dt;
    worst = std::max({worst, rp.norm(), rv.norm()});
  }
  return worst;
}

namespace {

double get_number(const json& j, const char* block, const char* key) {
  if (!j.contains(key)) fail(std::string(block) + "." + key + " missing");
  const auto& v = j.at(key);
  if (!v.is_number()) fail(std::string(block) + "." + key + " must be a number");
  return v.get<double>();
}

Vec2 get_vec2(const json& j, const char* block, const char* key) {
  if (!j.contains(key)) fail(std::string(block) + "." + key + " missing");
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(std::string(block) + "." + key + " must be a 2-element number array");
  }
  return Vec2(v[0].get<double>(), v[1].get<double>());
}

}  // namespace

Scenario load_scenario(const std::string& config_text) {
  json root;
  try {
    root = json::parse(config_text);
  } catch (const json::parse_error& e) {
    fail(std::string("config parse error: ") + e.what());
  }

  Scenario sc;
  if (!root.contains("aircraft")) fail("aircraft block missing");
  const json& ac = root.at("aircraft");
  sc.aircraft.c1 = get_number(ac, "aircraft", "c1");
  sc.aircraft.c2 = get_number(ac, "aircraft", "c2");
  sc.aircraft.mass = get_number(ac, "aircraft", "m");
  sc.aircraft.gravity = get_number(ac, "aircraft", "g");
  sc.aircraft.validate();

  if (!root.contains("link")) fail("link block missing");
  const json& lk = root.at("link");
  const double bhz = get_number(lk, "link", "B_hz");
  const double hm = get_number(lk, "link", "H_m");
  if (lk.contains("gamma0")) {
    sc.link = LinkParams::from_gamma0(bhz, get_number(lk, "link", "gamma0"), hm);
  } else if (lk.contains("beta0")) {
    sc.link = LinkParams::from_budget(bhz, get_number(lk, "link", "beta0"),
                                      get_number(lk, "link", "P_tx_w"),
                                      get_number(lk, "link", "sigma2_w"), hm);
  } else {
    fail("link: give gamma0 or the beta0/P_tx_w/sigma2_w triplet");
  }

  if (!root.contains("constraints")) fail("constraints block missing");
  const json& cn = root.at("constraints");
  sc.constraints.max_speed = get_number(cn, "constraints", "Vmax");
  sc.constraints.max_accel = get_number(cn, "constraints", "amax");
  sc.constraints.horizon_s = get_number(cn, "constraints", "T");
  if (cn.contains("q0") || cn.contains("qF") || cn.contains("v0") || cn.contains("vF")) {
    sc.constraints.start_pos = get_vec2(cn, "constraints", "q0");
    sc.constraints.final_pos = get_vec2(cn, "constraints", "qF");
    sc.constraints.start_vel = get_vec2(cn, "constraints", "v0");
    sc.constraints.final_vel = get_vec2(cn, "constraints", "vF");
  }
  sc.constraints.validate();

  if (!root.contains("solver")) fail("solver block missing");
  const json& sv = root.at("solver");
  sc.solver.dt = get_number(sv, "solver", "dt");
  if (sv.contains("max_iters")) sc.solver.max_outer_iters = sv.at("max_iters").get<int>();
  if (sv.contains("seed")) sc.solver.seed = sv.at("seed").get<std::uint64_t>();
  if (sv.contains("tolerances")) {
    const json& tl = sv.at("tolerances");
    if (tl.contains("outer")) sc.solver.outer_tol = tl.at("outer").get<double>();
    if (tl.contains("inner")) sc.solver.inner_tol = tl.at("inner").get<double>();
    if (tl.contains("fractional")) sc.solver.fractional_tol = tl.at("fractional").get<double>();
  }
  sc.solver.validate();
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string save_scenario(const Scenario& sc) {
  json root;
  root["aircraft"] = {{"c1", sc.aircraft.c1},
                      {"c2", sc.aircraft.c2},
                      {"m", sc.aircraft.mass},
                      {"g", sc.aircraft.gravity}};
  json lk = {{"B_hz", sc.link.bandwidth_hz}, {"H_m", sc.link.altitude_m}};
  if (sc.link.budget) {
    lk["beta0"] = sc.link.budget->beta0;
    lk["P_tx_w"] = sc.link.budget->tx_power_w;
    lk["sigma2_w"] = sc.link.budget->noise_power_w;
  } else {
    lk["gamma0"] = sc.link.gamma0;
  }
  root["link"] = lk;
  json cn = {{"Vmax", sc.constraints.max_speed},
             {"amax", sc.constraints.max_accel},
             {"T", sc.constraints.horizon_s}};
  if (sc.constraints.has_boundaries()) {
    cn["q0"] = {sc.constraints.start_pos->x(), sc.constraints.start_pos->y()};
    cn["qF"] = {sc.constraints.final_pos->x(), sc.constraints.final_pos->y()};
    cn["v0"] = {sc.constraints.start_vel->x(), sc.constraints.start_vel->y()};
    cn["vF"] = {sc.constraints.final_vel->x(), sc.constraints.final_vel->y()};
  }
  root["constraints"] = cn;
  root["solver"] = {{"dt", sc.solver.dt},
                    {"max_iters", sc.solver.max_outer_iters},
                    {"seed", sc.solver.seed},
                    {"tolerances",
                     {{"outer", sc.solver.outer_tol},
                      {"inner", sc.solver.inner_tol},
                      {"fractional", sc.solver.fractional_tol}}}};
  return root.dump(2);
}

DesignMetrics metrics(const DiscreteTrajectory& traj, const LinkParams& link,
                      const AircraftParams& aircraft) {
  traj.validate();
  const int n_interior = traj.interior_count();

  DesignMetrics m;
  double speed_sum = 0.0, accel_sum = 0.0;
  for (int n = 1; n <= n_interior; ++n) {
    speed_sum += traj.vel[n].norm();
    accel_sum += traj.acc[n].norm();
  }
  m.avg_speed_mps = speed_sum / n_interior;
  m.avg_accel_mps2 = accel_sum / n_interior;

  m.total_bits = trajectory_throughput(traj, link);
  m.avg_rate_bps = m.total_bits / traj.interior_duration();

  const EnergyResult energy = trajectory_energy(traj, aircraft);
  m.thrust_reversal = energy.thrust_reversal;
  if (energy.divergent) {
    m.divergent_power = true;
    m.avg_power_w = std::numeric_limits<double>::infinity();
    m.total_energy_j = std::numeric_limits<double>::infinity();
    m.energy_efficiency_bpj = 0.0;
    return m;
  }
  m.total_energy_j = energy.total_j;
  m.avg_power_w = energy.total_j / traj.interior_duration();
  m.energy_efficiency_bpj = m.total_bits / m.total_energy_j;
  return m;
}

}  // namespace eeuav
