#include "eeuav/convex_inner.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eeuav {

using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

double KKTReport::worst() const {
  return std::max({stationarity, equality_residual, max_violation, complementarity,
                   std::max(0.0, -min_dual)});
}

namespace {

// Variable layout: [a0 (constrained only)] then per slot n=1..N a block of
// q(2), v(2), a(2), tau(1). Boundary-slot states are not decision variables;
// they enter through the equality right-hand sides.
struct Layout {
  int N = 0;
  bool constrained = false;
  int nvar = 0;
  int neq = 0;

  int q(int n) const { return base(n); }
  int v(int n) const { return base(n) + 2; }
  int a(int n) const { return n == 0 ? 0 : base(n) + 4; }
  int tau(int n) const { return base(n) + 6; }

 private:
  int base(int n) const { return (constrained ? 2 : 0) + (n - 1) * 7; }
};

Layout make_layout(const ConvexSubproblem& sub) {
  Layout lay;
  lay.N = sub.boundary.interior_count;
  lay.constrained = sub.boundary.constrained();
  lay.nvar = 7 * lay.N + (lay.constrained ? 2 : 0);
  lay.neq = lay.constrained ? 4 * (lay.N + 1) : 4 * (lay.N - 1);
  return lay;
}

class InnerSolver {
 public:
  InnerSolver(const ConvexSubproblem& sub, double tol)
      : sub_(sub), lay_(make_layout(sub)), tol_(tol) {
    const int N = lay_.N;
    if (N < 1) throw SolverError("subproblem needs at least one interior slot");
    if (static_cast<int>(sub.rate_bound.alpha.size()) != N ||
        static_cast<int>(sub.rate_bound.beta.size()) != N) {
      throw SolverError("rate bound coefficient count does not match slot count");
    }
    if (static_cast<int>(sub.pos_expansion.size()) != N + 2 ||
        static_cast<int>(sub.vel_expansion.size()) != N + 2) {
      throw SolverError("expansion point must cover all slots");
    }
    dt_ = sub.boundary.dt;
    c1_ = sub.aircraft.c1;
    c2_ = sub.aircraft.c2;
    c2g2_ = sub.aircraft.c2 / (sub.aircraft.gravity * sub.aircraft.gravity);
    vmax2_ = sub.boundary.max_speed * sub.boundary.max_speed;
    amax2_ = sub.boundary.max_accel * sub.boundary.max_accel;
    floor_ = sub.speed_floor;
    Bbeta_.resize(N);
    rate_const_ = 0.0;
    for (int i = 0; i < N; ++i) {
      Bbeta_[i] = sub.bandwidth_hz * sub.rate_bound.beta[i];
      rate_const_ += sub.bandwidth_hz * sub.rate_bound.alpha[i] +
                     Bbeta_[i] * sub.pos_expansion[i + 1].squaredNorm();
    }
    m_ineq_ = N /*vcap*/ + (lay_.constrained ? N + 1 : N) /*acap*/ + N /*floor*/ + N /*psi*/;
    check_boundary_feasible();
    build_equalities();
  }

  InnerSolution run(const InnerSolution* warm);

  KKTReport kkt_report(const VectorXd& x, const VectorXd& nu_orig,
                       const std::vector<double>& mu) const;
  VectorXd pack(const InnerSolution& sol) const;
  int ineq_count() const { return m_ineq_; }

 private:
  void check_boundary_feasible() const {
    if (!lay_.constrained) return;
    const auto& b = sub_.boundary;
    const double horizon = (lay_.N + 1) * dt_;
    const double dist = (*b.final_pos - *b.start_pos).norm();
    if (dist > b.max_speed * horizon * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "infeasible boundary data: |qF-q0| = " << dist << " m exceeds Vmax*T = "
         << b.max_speed * horizon << " m";
      throw SolverError(os.str());
    }
    if (b.start_vel->norm() > b.max_speed * (1.0 + 1e-9) ||
        b.final_vel->norm() > b.max_speed * (1.0 + 1e-9)) {
      throw SolverError("infeasible boundary data: boundary speed exceeds Vmax");
    }
  }

  void build_equalities() {
    const int N = lay_.N;
    const double h = dt_, h2 = 0.5 * dt_ * dt_;
    b_ = VectorXd::Zero(lay_.neq);
    auto add = [&](int row, int col, double val) { a_trip_.emplace_back(row, col, val); };
    int row = 0;
    auto pos_row = [&](int qn_next, int qn, int vn, int an) {
      // q[n+1] - q[n] - dt v[n] - dt^2/2 a[n], with absent terms folded into b
      for (int k = 0; k < 2; ++k) {
        if (qn_next >= 0) add(row, qn_next + k, 1.0);
        if (qn >= 0) add(row, qn + k, -1.0);
        if (vn >= 0) add(row, vn + k, -h);
        if (an >= 0) add(row, an + k, -h2);
        ++row;
      }
    };
    auto vel_row = [&](int vn_next, int vn, int an) {
      for (int k = 0; k < 2; ++k) {
        if (vn_next >= 0) add(row, vn_next + k, 1.0);
        if (vn >= 0) add(row, vn + k, -1.0);
        if (an >= 0) add(row, an + k, -h);
        ++row;
      }
    };
    if (lay_.constrained) {
      const auto& bd = sub_.boundary;
      // slot 0 -> 1: q/v[0] are data
      int r0 = row;
      pos_row(lay_.q(1), -1, -1, lay_.a(0));
      b_.segment<2>(r0) = *bd.start_pos + h * (*bd.start_vel);
      r0 = row;
      vel_row(lay_.v(1), -1, lay_.a(0));
      b_.segment<2>(r0) = *bd.start_vel;
      for (int n = 1; n <= N - 1; ++n) {
        pos_row(lay_.q(n + 1), lay_.q(n), lay_.v(n), lay_.a(n));
        vel_row(lay_.v(n + 1), lay_.v(n), lay_.a(n));
      }
      // slot N -> N+1: moved to the left-hand side with flipped signs
      r0 = row;
      for (int k = 0; k < 2; ++k) {
        add(row, lay_.q(N) + k, 1.0);
        add(row, lay_.v(N) + k, h);
        add(row, lay_.a(N) + k, h2);
        ++row;
      }
      b_.segment<2>(r0) = *bd.final_pos;
      r0 = row;
      for (int k = 0; k < 2; ++k) {
        add(row, lay_.v(N) + k, 1.0);
        add(row, lay_.a(N) + k, h);
        ++row;
      }
      b_.segment<2>(r0) = *bd.final_vel;
    } else {
      for (int n = 1; n <= N - 1; ++n) {
        pos_row(lay_.q(n + 1), lay_.q(n), lay_.v(n), lay_.a(n));
        vel_row(lay_.v(n + 1), lay_.v(n), lay_.a(n));
      }
    }
    A_ = SpMat(lay_.neq, lay_.nvar);
    A_.setFromTriplets(a_trip_.begin(), a_trip_.end());
    A_.makeCompressed();
  }

  Vec2 getv2(const VectorXd& x, int off) const { return Vec2(x[off], x[off + 1]); }

  // objective value and gradient (t-free)
  void eval_objective(const VectorXd& x, double& F, double& Rlb, double& D,
                      VectorXd* grad) const {
    const int N = lay_.N;
    const double lam = sub_.lambda, w = sub_.rate_weight;
    if (grad) grad->setZero(lay_.nvar);
    double quad = 0.0, den = sub_.kinetic_term;
    for (int n = 1; n <= N; ++n) {
      const Vec2 q = getv2(x, lay_.q(n));
      const Vec2 v = getv2(x, lay_.v(n));
      const Vec2 a = getv2(x, lay_.a(n));
      const double tau = x[lay_.tau(n)];
      const double bb = Bbeta_[n - 1];
      const double speed = v.norm();
      quad += bb * q.squaredNorm();
      den += c1_ * speed * speed * speed + c2_ / tau + c2g2_ * a.squaredNorm() / tau;
      if (grad) {
        grad->segment<2>(lay_.q(n)) += 2.0 * w * bb * q;
        grad->segment<2>(lay_.v(n)) += lam * 3.0 * c1_ * speed * v;
        grad->segment<2>(lay_.a(n)) += lam * 2.0 * c2g2_ / tau * a;
        (*grad)[lay_.tau(n)] += -lam * (c2_ + c2g2_ * a.squaredNorm()) / (tau * tau);
      }
    }
    Rlb = rate_const_ - quad;
    D = den;
    F = lam * D - w * Rlb;
  }

  // barrier slacks; returns the smallest (<=0 means out of domain)
  double min_slack(const VectorXd& x) const {
    double worst = std::numeric_limits<double>::infinity();
    const int N = lay_.N;
    for (int n = 1; n <= N; ++n) {
      const Vec2 v = getv2(x, lay_.v(n));
      const Vec2 a = getv2(x, lay_.a(n));
      const double tau = x[lay_.tau(n)];
      const Vec2 vj = sub_.vel_expansion[n];
      worst = std::min(worst, vmax2_ - v.squaredNorm());
      worst = std::min(worst, amax2_ - a.squaredNorm());
      worst = std::min(worst, tau - floor_);
      worst = std::min(worst, 2.0 * vj.dot(v) - vj.squaredNorm() - tau * tau);
    }
    if (lay_.constrained) {
      worst = std::min(worst, amax2_ - getv2(x, lay_.a(0)).squaredNorm());
    }
    return worst;
  }

  void eval_barrier_grad(const VectorXd& x, VectorXd& grad) const {
    grad.setZero(lay_.nvar);
    const int N = lay_.N;
    for (int n = 1; n <= N; ++n) {
      const Vec2 v = getv2(x, lay_.v(n));
      const Vec2 a = getv2(x, lay_.a(n));
      const double tau = x[lay_.tau(n)];
      const Vec2 vj = sub_.vel_expansion[n];
      const double sv = vmax2_ - v.squaredNorm();
      const double sa = amax2_ - a.squaredNorm();
      const double sf = tau - floor_;
      const double sp = 2.0 * vj.dot(v) - vj.squaredNorm() - tau * tau;
      grad.segment<2>(lay_.v(n)) += 2.0 / sv * v - 2.0 / sp * vj;
      grad.segment<2>(lay_.a(n)) += 2.0 / sa * a;
      grad[lay_.tau(n)] += -1.0 / sf + 2.0 * tau / sp;
    }
    if (lay_.constrained) {
      const Vec2 a0 = getv2(x, lay_.a(0));
      grad.segment<2>(lay_.a(0)) += 2.0 / (amax2_ - a0.squaredNorm()) * a0;
    }
  }

  // KKT matrix [t HF + Hphi + reg, A'; A, 0]
  void assemble(const VectorXd& x, double t, std::vector<Triplet>& trip) const {
    trip.clear();
    const int N = lay_.N;
    const double lam = sub_.lambda, w = sub_.rate_weight;
    auto push_block = [&](int off, const Eigen::Ref<const Eigen::MatrixXd>& blk) {
      const int k = static_cast<int>(blk.rows());
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          double val = blk(i, j);
          if (i == j) val += 1e-10 * (1.0 + std::abs(val));
          trip.emplace_back(off + i, off + j, val);
        }
      }
    };
    for (int n = 1; n <= N; ++n) {
      const Vec2 q = getv2(x, lay_.q(n));
      const Vec2 v = getv2(x, lay_.v(n));
      const Vec2 a = getv2(x, lay_.a(n));
      const double tau = x[lay_.tau(n)];
      const Vec2 vj = sub_.vel_expansion[n];
      const double sv = vmax2_ - v.squaredNorm();
      const double sa = amax2_ - a.squaredNorm();
      const double sf = tau - floor_;
      const double sp = 2.0 * vj.dot(v) - vj.squaredNorm() - tau * tau;
      const double speed = v.norm();

      Eigen::Matrix<double, 7, 7> blk = Eigen::Matrix<double, 7, 7>::Zero();
      // q
      blk(0, 0) = blk(1, 1) = t * w * 2.0 * Bbeta_[n - 1];
      // v: objective cube + speed cap + psi
      Eigen::Matrix2d hv = t * lam * 3.0 * c1_ *
                           (speed * Eigen::Matrix2d::Identity() +
                            (speed > 1e-12 ? (v * v.transpose() / speed).eval()
                                           : Eigen::Matrix2d::Zero().eval()));
      hv += 2.0 / sv * Eigen::Matrix2d::Identity() + 4.0 / (sv * sv) * v * v.transpose();
      hv += 4.0 / (sp * sp) * vj * vj.transpose();
      blk.block<2, 2>(2, 2) = hv;
      // a: objective quad-over-linear + accel cap
      Eigen::Matrix2d ha =
          (t * lam * 2.0 * c2g2_ / tau + 2.0 / sa) * Eigen::Matrix2d::Identity() +
          4.0 / (sa * sa) * a * a.transpose();
      blk.block<2, 2>(4, 4) = ha;
      // tau
      blk(6, 6) = t * lam * 2.0 * (c2_ + c2g2_ * a.squaredNorm()) / (tau * tau * tau) +
                  1.0 / (sf * sf) + 2.0 / sp + 4.0 * tau * tau / (sp * sp);
      // v-tau (psi), a-tau (objective)
      const Vec2 vtau = -4.0 * tau / (sp * sp) * vj;
      const Vec2 atau = -t * lam * 2.0 * c2g2_ / (tau * tau) * a;
      blk.block<2, 1>(2, 6) = vtau;
      blk.block<1, 2>(6, 2) = vtau.transpose();
      blk.block<2, 1>(4, 6) = atau;
      blk.block<1, 2>(6, 4) = atau.transpose();
      push_block(lay_.q(n), blk.topLeftCorner<2, 2>());
      push_block(lay_.v(n), Eigen::MatrixXd(blk.block<5, 5>(2, 2)));
    }
    if (lay_.constrained) {
      const Vec2 a0 = getv2(x, lay_.a(0));
      const double sa = amax2_ - a0.squaredNorm();
      Eigen::Matrix2d h0 =
          2.0 / sa * Eigen::Matrix2d::Identity() + 4.0 / (sa * sa) * a0 * a0.transpose();
      push_block(lay_.a(0), h0);
    }
    for (const auto& e : a_trip_) {
      trip.emplace_back(lay_.nvar + e.row(), e.col(), e.value());
      trip.emplace_back(e.col(), lay_.nvar + e.row(), e.value());
    }
  }

  // largest step keeping every barrier slack positive
  double max_step(const VectorXd& x, const VectorXd& dx) const {
    double smax = std::numeric_limits<double>::infinity();
    // s of a s^2 + b s + c = 0 (c < 0): first positive root
    auto root = [](double a, double b, double c) {
      if (a <= 0.0 && b <= 0.0) return std::numeric_limits<double>::infinity();
      if (std::abs(a) < 1e-300) return b > 0.0 ? -c / b : std::numeric_limits<double>::infinity();
      const double disc = b * b - 4.0 * a * c;
      if (a < 0.0) {
        // concave: crosses zero going up only at the larger root
        const double r = (-b - std::sqrt(std::max(0.0, disc))) / (2.0 * a);
        return r > 0.0 ? r : std::numeric_limits<double>::infinity();
      }
      if (disc < 0.0) return std::numeric_limits<double>::infinity();
      const double r = (-b + std::sqrt(disc)) / (2.0 * a);
      return r > 0.0 ? r : std::numeric_limits<double>::infinity();
    };
    const int N = lay_.N;
    auto cap_step = [&](const Vec2& y, const Vec2& dy, double cap2) {
      return root(dy.squaredNorm(), 2.0 * y.dot(dy), y.squaredNorm() - cap2);
    };
    for (int n = 1; n <= N; ++n) {
      const Vec2 v = getv2(x, lay_.v(n)), dv = getv2(dx, lay_.v(n));
      const Vec2 a = getv2(x, lay_.a(n)), da = getv2(dx, lay_.a(n));
      const double tau = x[lay_.tau(n)], dtau = dx[lay_.tau(n)];
      const Vec2 vj = sub_.vel_expansion[n];
      smax = std::min(smax, cap_step(v, dv, vmax2_));
      smax = std::min(smax, cap_step(a, da, amax2_));
      if (dtau < 0.0) smax = std::min(smax, (floor_ - tau) / dtau);
      // psi - tau^2 > 0: -(dtau^2) s^2 + (2 vj.dv - 2 tau dtau) s + slack > 0
      const double sp = 2.0 * vj.dot(v) - vj.squaredNorm() - tau * tau;
      smax = std::min(smax, root(dtau * dtau, -(2.0 * vj.dot(dv) - 2.0 * tau * dtau), -sp));
    }
    if (lay_.constrained) {
      smax = std::min(smax, cap_step(getv2(x, lay_.a(0)), getv2(dx, lay_.a(0)), amax2_));
    }
    return smax;
  }

  VectorXd initial_point() const {
    const int N = lay_.N;
    VectorXd x = VectorXd::Zero(lay_.nvar);
    const double vcap = std::sqrt(vmax2_);
    for (int n = 1; n <= N; ++n) {
      const Vec2 vj = sub_.vel_expansion[n];
      Vec2 v = vj;
      if (v.norm() > 0.98 * vcap) v *= 0.98 * vcap / v.norm();
      const double psi = 2.0 * vj.dot(v) - vj.squaredNorm();
      if (psi <= floor_ * floor_ * 1.5) {
        throw SolverError("expansion point speed too close to the floor at slot " +
                          std::to_string(n));
      }
      x.segment<2>(lay_.q(n)) = sub_.pos_expansion[n];
      x.segment<2>(lay_.v(n)) = v;
      x[lay_.tau(n)] = std::max(1.2 * floor_, 0.7 * std::sqrt(psi));
    }
    return x;
  }

  InnerSolution finish(const VectorXd& x, const VectorXd& nu, double t, bool clean,
                       int iters, std::vector<std::pair<int, double>> history) const;

  const ConvexSubproblem& sub_;
  Layout lay_;
  double tol_;
  double dt_ = 0, c1_ = 0, c2_ = 0, c2g2_ = 0, vmax2_ = 0, amax2_ = 0, floor_ = 0;
  double rate_const_ = 0;
  std::vector<double> Bbeta_;
  int m_ineq_ = 0;
  std::vector<Triplet> a_trip_;
  SpMat A_;
  VectorXd b_;
};

InnerSolution InnerSolver::run(const InnerSolution* warm) {
  VectorXd x = initial_point();
  if (warm != nullptr) {
    const VectorXd xw = pack(*warm);
    const VectorXd blended = 0.85 * xw + 0.15 * x;
    // blending two domain points stays in the (convex) domain, but guard anyway
    VectorXd cand = blended;
    if (min_slack(cand) > 0.0) x = cand;
  }
  VectorXd nu = VectorXd::Zero(lay_.neq);

  double F0, Rlb0, D0;
  eval_objective(x, F0, Rlb0, D0, nullptr);
  const double scale_obj =
      std::max({1.0, sub_.rate_weight * std::abs(Rlb0), sub_.lambda * std::abs(D0)});
  const double eps_p = 1e-10 * (1.0 + b_.lpNorm<Eigen::Infinity>());
  const double t_final = m_ineq_ / (tol_ * scale_obj);
  double t = m_ineq_ / ((warm ? 0.01 : 0.05) * scale_obj);
  t = std::min(t, t_final);
  const double mu = 30.0;

  Eigen::SparseLU<SpMat> lu;
  SpMat K(lay_.nvar + lay_.neq, lay_.nvar + lay_.neq);
  std::vector<Triplet> trip;
  bool pattern_done = false;

  std::vector<std::pair<int, double>> history;
  VectorXd gradF(lay_.nvar), gradPhi(lay_.nvar);
  int total_iters = 0;
  bool clean = true;
  int stage = 0;
  while (true) {
    bool centered = false;
    for (int it = 0; it < 100; ++it) {
      double F, Rlb, D;
      eval_objective(x, F, Rlb, D, &gradF);
      eval_barrier_grad(x, gradPhi);
      VectorXd rd = t * gradF + gradPhi + A_.transpose() * nu;
      VectorXd rp = A_ * x - b_;
      const double rd_inf = rd.lpNorm<Eigen::Infinity>();
      const double rp_inf = rp.lpNorm<Eigen::Infinity>();
      const double grad_ref = std::max(
          {1.0, (t * gradF).lpNorm<Eigen::Infinity>(), gradPhi.lpNorm<Eigen::Infinity>()});
      if (rp_inf <= eps_p && rd_inf <= 5e-9 * grad_ref) {
        centered = true;
        break;
      }

      assemble(x, t, trip);
      K.setFromTriplets(trip.begin(), trip.end());
      if (!pattern_done) {
        lu.analyzePattern(K);
        pattern_done = true;
      }
      lu.factorize(K);
      if (lu.info() != Eigen::Success) throw SolverError("KKT factorization failed");
      VectorXd rhs(lay_.nvar + lay_.neq);
      rhs.head(lay_.nvar) = -rd;
      rhs.tail(lay_.neq) = -rp;
      const VectorXd step = lu.solve(rhs);
      const VectorXd dx = step.head(lay_.nvar);
      const VectorXd dnu = step.tail(lay_.neq);

      double s = std::min(1.0, 0.99 * max_step(x, dx));
      const double rho0 = std::sqrt(rd.squaredNorm() + rp.squaredNorm());
      bool accepted = false;
      while (s > 1e-13) {
        VectorXd xn = x + s * dx;
        if (min_slack(xn) > 0.0) {
          VectorXd nun = nu + s * dnu;
          double Fn, Rn, Dn;
          eval_objective(xn, Fn, Rn, Dn, &gradF);
          eval_barrier_grad(xn, gradPhi);
          const VectorXd rdn = t * gradF + gradPhi + A_.transpose() * nun;
          const VectorXd rpn = A_ * xn - b_;
          const double rho = std::sqrt(rdn.squaredNorm() + rpn.squaredNorm());
          if (rho <= (1.0 - 0.01 * s) * rho0) {
            x = xn;
            nu = nun;
            history.emplace_back(stage, rho);
            accepted = true;
            break;
          }
        }
        s *= 0.5;
      }
      ++total_iters;
      if (!accepted) {
        if (rho0 <= 1e-6 * t * scale_obj) {
          centered = true;  // stuck at numerical precision, close enough
          break;
        }
        throw SolverError("inner solver line search failed at stage " + std::to_string(stage) +
                          ", residual " + std::to_string(rho0));
      }
      if (it == 99) clean = false;
    }
    if (!centered) clean = false;
    if (m_ineq_ / t <= tol_ * scale_obj * (1.0 + 1e-12)) break;
    t = std::min(t * mu, t_final);
    ++stage;
    if (stage > 60) {
      clean = false;
      break;
    }
  }

  return finish(x, nu, t, clean, total_iters, std::move(history));
}

InnerSolution InnerSolver::finish(const VectorXd& x, const VectorXd& nu, double t, bool clean,
                                  int iters, std::vector<std::pair<int, double>> history) const {
  const int N = lay_.N;
  InnerSolution sol;
  sol.pos.resize(N + 2);
  sol.vel.resize(N + 2);
  sol.acc.assign(N + 2, Vec2::Zero());
  sol.slack.resize(N);
  for (int n = 1; n <= N; ++n) {
    sol.pos[n] = getv2(x, lay_.q(n));
    sol.vel[n] = getv2(x, lay_.v(n));
    sol.acc[n] = getv2(x, lay_.a(n));
    sol.slack[n - 1] = x[lay_.tau(n)];
  }
  if (lay_.constrained) {
    const auto& bd = sub_.boundary;
    sol.pos[0] = *bd.start_pos;
    sol.vel[0] = *bd.start_vel;
    sol.acc[0] = getv2(x, lay_.a(0));
    sol.pos[N + 1] = *bd.final_pos;
    sol.vel[N + 1] = *bd.final_vel;
  } else {
    // constant-velocity extension keeps the dynamics recursion exact
    sol.vel[0] = sol.vel[1];
    sol.pos[0] = sol.pos[1] - dt_ * sol.vel[1];
    sol.vel[N + 1] = sol.vel[N] + dt_ * sol.acc[N];
    sol.pos[N + 1] = sol.pos[N] + dt_ * sol.vel[N] + 0.5 * dt_ * dt_ * sol.acc[N];
  }

  double F, Rlb, D;
  eval_objective(x, F, Rlb, D, nullptr);
  sol.objective = -F;
  sol.rate_bound_value = Rlb;
  sol.denominator = D;
  sol.newton_iterations = iters;
  sol.residual_history = std::move(history);

  sol.duals_eq.assign(nu.data(), nu.data() + nu.size());
  for (double& d : sol.duals_eq) d /= t;
  sol.duals_ineq.clear();
  sol.duals_ineq.reserve(m_ineq_);
  auto push_dual = [&](double slack) { sol.duals_ineq.push_back(1.0 / (t * slack)); };
  for (int n = 1; n <= N; ++n) {
    push_dual(vmax2_ - getv2(x, lay_.v(n)).squaredNorm());
  }
  if (lay_.constrained) push_dual(amax2_ - getv2(x, lay_.a(0)).squaredNorm());
  for (int n = 1; n <= N; ++n) {
    push_dual(amax2_ - getv2(x, lay_.a(n)).squaredNorm());
  }
  for (int n = 1; n <= N; ++n) push_dual(x[lay_.tau(n)] - floor_);
  for (int n = 1; n <= N; ++n) {
    const Vec2 v = getv2(x, lay_.v(n));
    const Vec2 vj = sub_.vel_expansion[n];
    push_dual(2.0 * vj.dot(v) - vj.squaredNorm() - x[lay_.tau(n)] * x[lay_.tau(n)]);
  }

  VectorXd nu_orig = nu / t;
  sol.kkt = kkt_report(x, nu_orig, sol.duals_ineq);
  sol.converged = clean && sol.kkt.worst() <= 100.0 * tol_;
  return sol;
}

KKTReport InnerSolver::kkt_report(const VectorXd& x, const VectorXd& nu_orig,
                                  const std::vector<double>& mu) const {
  const int N = lay_.N;
  KKTReport rep;
  double F, Rlb, D;
  VectorXd gradF(lay_.nvar);
  eval_objective(x, F, Rlb, D, &gradF);
  const double scale_obj =
      std::max({1.0, sub_.rate_weight * std::abs(Rlb), sub_.lambda * std::abs(D)});

  VectorXd stat = gradF + A_.transpose() * nu_orig;
  int k = 0;
  double max_viol = 0.0, max_comp = 0.0, min_dual = std::numeric_limits<double>::infinity();
  auto account = [&](double h, auto add_grad) {
    const double m = mu[k++];
    min_dual = std::min(min_dual, m);
    max_viol = std::max(max_viol, h);
    max_comp = std::max(max_comp, std::abs(m * h));
    add_grad(m);
  };
  for (int n = 1; n <= N; ++n) {
    const Vec2 v = getv2(x, lay_.v(n));
    account(v.squaredNorm() - vmax2_,
            [&](double m) { stat.segment<2>(lay_.v(n)) += m * 2.0 * v; });
  }
  if (lay_.constrained) {
    const Vec2 a0 = getv2(x, lay_.a(0));
    account(a0.squaredNorm() - amax2_,
            [&](double m) { stat.segment<2>(lay_.a(0)) += m * 2.0 * a0; });
  }
  for (int n = 1; n <= N; ++n) {
    const Vec2 a = getv2(x, lay_.a(n));
    account(a.squaredNorm() - amax2_,
            [&](double m) { stat.segment<2>(lay_.a(n)) += m * 2.0 * a; });
  }
  for (int n = 1; n <= N; ++n) {
    account(floor_ - x[lay_.tau(n)], [&](double m) { stat[lay_.tau(n)] -= m; });
  }
  for (int n = 1; n <= N; ++n) {
    const Vec2 v = getv2(x, lay_.v(n));
    const Vec2 vj = sub_.vel_expansion[n];
    const double tau = x[lay_.tau(n)];
    account(tau * tau - (2.0 * vj.dot(v) - vj.squaredNorm()), [&](double m) {
      stat.segment<2>(lay_.v(n)) -= m * 2.0 * vj;
      stat[lay_.tau(n)] += m * 2.0 * tau;
    });
  }

  rep.stationarity = stat.lpNorm<Eigen::Infinity>() /
                     std::max(1.0, gradF.lpNorm<Eigen::Infinity>());
  rep.equality_residual =
      (A_ * x - b_).lpNorm<Eigen::Infinity>() / (1.0 + b_.lpNorm<Eigen::Infinity>());
  rep.max_violation = max_viol;
  rep.complementarity = max_comp / scale_obj;
  rep.min_dual = min_dual;
  return rep;
}

VectorXd InnerSolver::pack(const InnerSolution& sol) const {
  VectorXd x = VectorXd::Zero(lay_.nvar);
  const int N = lay_.N;
  for (int n = 1; n <= N; ++n) {
    x.segment<2>(lay_.q(n)) = sol.pos[n];
    x.segment<2>(lay_.v(n)) = sol.vel[n];
    x.segment<2>(lay_.a(n)) = sol.acc[n];
    x[lay_.tau(n)] = sol.slack[n - 1];
  }
  if (lay_.constrained) x.segment<2>(lay_.a(0)) = sol.acc[0];
  return x;
}

}  // namespace

InnerSolution solve_subproblem(const ConvexSubproblem& sub, double tol,
                               const InnerSolution* warm_start) {
  InnerSolver solver(sub, tol);
  return solver.run(warm_start);
}

InnerSolution solve_subproblem(const ConvexSubproblem& sub, double tol) {
  return solve_subproblem(sub, tol, nullptr);
}

KKTReport check_kkt(const ConvexSubproblem& sub, const InnerSolution& sol) {
  InnerSolver solver(sub, 1e-8);
  if (static_cast<int>(sol.duals_ineq.size()) != solver.ineq_count() ||
      sol.duals_eq.size() != sol.duals_eq.size()) {
    throw SolverError("check_kkt: dual variable count mismatch");
  }
  Eigen::Map<const VectorXd> nu(sol.duals_eq.data(), sol.duals_eq.size());
  return solver.kkt_report(solver.pack(sol), nu, sol.duals_ineq);
}

}  // namespace eeuav
