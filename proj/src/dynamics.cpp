#include "snake/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>

namespace snake {

namespace {

Twistd mul(const Mat6& M, const Twistd& V) { return Twistd(Vec6(M * V.coeffs())); }

// a + s·b, fieldwise
TwistField axpy(const TwistField& a, double s, const TwistField& b) {
  TwistField out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
  return out;
}

// Θ̇ for g = g₀ exp(Θ) given g⁻¹ġ = W, truncated after the Θ² term.
Twistd dexp_inv(const Twistd& theta, const Twistd& W) {
  const Twistd tw = bracket(theta, W);
  return W + 0.5 * tw + (1.0 / 12.0) * bracket(theta, tw);
}

bool finite(const TwistField& f) {
  return std::all_of(f.begin(), f.end(), [](const Twistd& v) { return v.allFinite(); });
}

void require_finite(const SimState& s) {
  const bool poses_ok =
      std::all_of(s.g.begin(), s.g.end(), [](const Posed& g) { return g.allFinite(); });
  if (!finite(s.W) || !finite(s.xi) || !poses_ok || !std::isfinite(s.control_work)) {
    throw NonFiniteState("non-finite state at t = " + std::to_string(s.t) +
                         "; the time step probably exceeds the stability limit");
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (dt && !(*dt > 0.0 && std::isfinite(*dt))) {
    throw std::invalid_argument("solver: dt must be positive");
  }
  if (!(cfl_number > 0.0 && cfl_number <= 1.0)) {
    throw std::invalid_argument("solver: cfl_number must lie in (0, 1]");
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("solver: t_end must be finite and non-negative");
  }
  if (output_stride == 0) throw std::invalid_argument("solver: output_stride must be >= 1");
}

RodSystem::RodSystem(Grid grid, RodProperties props, StiffnessLaw law, ControlLaw control,
                     WrenchForm form)
    : grid_(grid),
      props_(std::move(props)),
      law_(std::move(law)),
      control_(std::move(control)),
      form_(form) {
  props_.validate(grid_);
  if (law_.size() != grid_.size()) {
    throw std::invalid_argument("rod system: stiffness law does not match the grid");
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    A_.push_back(inertia_matrix(i, props_));
    A_inv_.push_back(A_.back().inverse());
  }
}

TwistField rhs_xi(const TwistField& W, const TwistField& xi, const Grid& grid) {
  const std::size_t n = grid.size();
  const double h2 = 2.0 * grid.dz();
  TwistField d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = (W[i + 1] - W[i - 1]) / h2 + bracket(xi[i], W[i]);
  }
  return d;
}

TwistField rhs_xi(const SimState& s, const Grid& grid) { return rhs_xi(s.W, s.xi, grid); }

double control_power(double t, const TwistField& xi, const TwistField& xi_dot,
                     const RodSystem& sys) {
  if (!sys.control().active()) return 0.0;
  const Grid& grid = sys.grid();
  double p = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const Twistd u = sys.control()(t, i, xi, xi_dot);
    p -= grid.weight(i) * klein(mul(sys.A(i), u), xi_dot[i]);
  }
  return p;
}

Derivatives derivatives(double t, const TwistField& W, const TwistField& xi,
                        const RodSystem& sys) {
  const Grid& grid = sys.grid();
  const StiffnessLaw& law = sys.law();
  const std::size_t n = grid.size();
  Derivatives d;
  d.xi = rhs_xi(W, xi, grid);

  TwistField u;
  if (sys.control().active()) {
    u.resize(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = sys.control()(t, i, xi, d.xi);
  }

  d.W.resize(n);
  if (sys.form() == WrenchForm::Conservative) {
    TwistField M(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      M[i] = mul(law.K(i), xi[i]);
      if (!u.empty()) M[i] += mul(sys.A(i), u[i]);
    }
    const TwistField DM = sbp_derivative(M, grid);
    for (std::size_t i = 0; i < n; ++i) {
      const Twistd AW = mul(sys.A(i), W[i]);
      d.W[i] = mul(sys.A_inv(i), bracket(AW, W[i]) + DM[i] + bracket(xi[i], M[i]));
    }
  } else {
    TwistField L(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      L[i] = apply_H(i, xi[i], law);
      if (!u.empty()) L[i] += u[i];
    }
    const TwistField DL = sbp_derivative(L, grid);
    for (std::size_t i = 0; i < n; ++i) {
      const Twistd AW = mul(sys.A(i), W[i]);
      d.W[i] = mul(sys.A_inv(i), bracket(AW, W[i]) + bracket(xi[i], mul(sys.A(i), L[i]))) +
               DL[i];
    }
  }

  for (std::size_t i = 1; i + 1 < n && !u.empty(); ++i) {
    d.power -= grid.weight(i) * klein(mul(sys.A(i), u[i]), d.xi[i]);
  }
  return d;
}

TwistField rhs_W(const SimState& s, const RodSystem& sys) {
  return derivatives(s.t, s.W, s.xi, sys).W;
}

namespace {

SimState step_rk4(const SimState& s, double dt, const RodSystem& sys) {
  const std::size_t n = sys.grid().size();
  const Derivatives k1 = derivatives(s.t, s.W, s.xi, sys);
  const TwistField W2 = axpy(s.W, 0.5 * dt, k1.W);
  const Derivatives k2 = derivatives(s.t + 0.5 * dt, W2, axpy(s.xi, 0.5 * dt, k1.xi), sys);
  const TwistField W3 = axpy(s.W, 0.5 * dt, k2.W);
  const Derivatives k3 = derivatives(s.t + 0.5 * dt, W3, axpy(s.xi, 0.5 * dt, k2.xi), sys);
  const TwistField W4 = axpy(s.W, dt, k3.W);
  const Derivatives k4 = derivatives(s.t + dt, W4, axpy(s.xi, dt, k3.xi), sys);

  SimState out;
  out.t = s.t + dt;
  out.W.resize(n);
  out.xi.resize(n);
  out.g.resize(n);
  const double c = dt / 6.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.W[i] = s.W[i] + c * (k1.W[i] + 2.0 * k2.W[i] + 2.0 * k3.W[i] + k4.W[i]);
    out.xi[i] = s.xi[i] + c * (k1.xi[i] + 2.0 * k2.xi[i] + 2.0 * k3.xi[i] + k4.xi[i]);

    const Twistd q1 = s.W[i];
    const Twistd q2 = dexp_inv(0.5 * dt * q1, W2[i]);
    const Twistd q3 = dexp_inv(0.5 * dt * q2, W3[i]);
    const Twistd q4 = dexp_inv(dt * q3, W4[i]);
    out.g[i] = compose(s.g[i], exp_se3(c * (q1 + 2.0 * q2 + 2.0 * q3 + q4)));
  }
  out.control_work = s.control_work + c * (k1.power + 2.0 * k2.power + 2.0 * k3.power + k4.power);
  return out;
}

double field_max_diff(const TwistField& a, const TwistField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, (a[i].coeffs() - b[i].coeffs()).lpNorm<Eigen::Infinity>());
  }
  return m;
}

double field_max(const TwistField& a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, v.coeffs().lpNorm<Eigen::Infinity>());
  return m;
}

SimState step_midpoint(const SimState& s, double dt, const RodSystem& sys) {
  const std::size_t n = sys.grid().size();
  TwistField W1 = s.W, xi1 = s.xi;
  TwistField Wm, xim;
  double power = 0.0;
  constexpr int kMaxIterations = 100;
  // Converged at 1e-14 relative, or once the correction has stopped shrinking
  // below 1e-12 relative (rounding floor of the stage evaluation). The
  // corrections alternate in size, so compare with the one two iterations back.
  double prev[2] = {HUGE_VAL, HUGE_VAL};
  bool converged = false;
  for (int it = 0; it < kMaxIterations && !converged; ++it) {
    Wm = axpy(s.W, 0.5, axpy(W1, -1.0, s.W));
    xim = axpy(s.xi, 0.5, axpy(xi1, -1.0, s.xi));
    const Derivatives d = derivatives(s.t + 0.5 * dt, Wm, xim, sys);
    const TwistField W_next = axpy(s.W, dt, d.W);
    const TwistField xi_next = axpy(s.xi, dt, d.xi);
    const double change = std::max(field_max_diff(W_next, W1), field_max_diff(xi_next, xi1));
    const double scale = std::max({1.0, field_max(W_next), field_max(xi_next)});
    W1 = W_next;
    xi1 = xi_next;
    power = d.power;
    if (!std::isfinite(change)) break;
    converged = change <= 1e-14 * scale ||
                (change <= 1e-12 * scale && change >= prev[1]);
    prev[1] = prev[0];
    prev[0] = change;
  }
  if (!converged) {
    throw NonFiniteState("implicit midpoint iteration did not converge at t = " +
                         std::to_string(s.t) + "; reduce dt");
  }
  Wm = axpy(s.W, 0.5, axpy(W1, -1.0, s.W));
  SimState out;
  out.t = s.t + dt;
  out.W = std::move(W1);
  out.xi = std::move(xi1);
  out.g.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.g[i] = compose(s.g[i], exp_se3(dt * Wm[i]));
  out.control_work = s.control_work + dt * power;
  return out;
}

}  // namespace

SimState step(const SimState& s, double dt, const RodSystem& sys, Scheme scheme) {
  SimState out = scheme == Scheme::RK4 ? step_rk4(s, dt, sys) : step_midpoint(s, dt, sys);
  require_finite(out);
  return out;
}

double cfl_dt(const RodProperties& props, const StiffnessLaw& law, const Grid& grid,
              double cfl_number) {
  if (!(cfl_number > 0.0 && cfl_number <= 1.0)) {
    throw std::invalid_argument("cfl_number must lie in (0, 1]");
  }
  const Mat6 J = klein_matrix<double>();
  double lambda_max = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Mat6 JK = J * law.K(i);
    const Mat6 JA = J * inertia_matrix(i, props);
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat6> es(0.5 * (JK + JK.transpose()),
                                                      0.5 * (JA + JA.transpose()),
                                                      Eigen::EigenvaluesOnly);
    lambda_max = std::max(lambda_max, es.eigenvalues().maxCoeff());
  }
  return cfl_number * grid.dz() / std::sqrt(lambda_max);
}

double resolve_dt(const SolverConfig& cfg, const RodSystem& sys) {
  cfg.validate();
  if (cfg.dt) return *cfg.dt;
  const double bound = cfl_dt(sys.props(), sys.law(), sys.grid(), cfg.cfl_number);
  if (cfg.t_end == 0.0) return bound;
  return cfg.t_end / std::ceil(cfg.t_end / bound);
}

double total_energy(const SimState& s, const RodSystem& sys) {
  return kinetic_energy(s.W, sys.props(), sys.grid()) +
         elastic_energy(s.xi, sys.law(), sys.props(), sys.grid());
}

Twistd spatial_momentum(const SimState& s, const RodProperties& props, const Grid& grid) {
  Twistd m;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    m += grid.weight(i) * adjoint(s.g[i], inertia_A(i, s.W[i], props));
  }
  return m;
}

PoseField reconstruct_from_midpoints(const Posed& base, const TwistField& mid, const Grid& grid) {
  if (mid.size() + 1 != grid.size()) {
    throw std::invalid_argument("reconstruct: need one strain per cell");
  }
  PoseField g(grid.size());
  g[0] = base;
  for (std::size_t i = 0; i < mid.size(); ++i) g[i + 1] = compose(g[i], exp_se3(grid.dz() * mid[i]));
  return g;
}

PoseField reconstruct_poses(const SimState& s, const Grid& grid) {
  TwistField mid(grid.size() - 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) mid[i] = 0.5 * (s.xi[i] + s.xi[i + 1]);
  return reconstruct_from_midpoints(s.base_pose(), mid, grid);
}

std::vector<Vec3> apply_configuration(const PoseField& g, const RodProperties& props,
                                      ActionConvention convention) {
  std::vector<Vec3> p(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    p[i] = convention == ActionConvention::Inverse ? act(inverse(g[i]), props.p0[i])
                                                        : act(g[i], props.p0[i]);
  }
  return p;
}

SimState initial_state(const PoseField& g0, const TwistField& W0, const Grid& grid) {
  if (g0.size() != grid.size() || W0.size() != grid.size()) {
    throw std::invalid_argument("initial state: fields must have one entry per node");
  }
  SimState s;
  s.g = g0;
  s.W = W0;
  s.xi = strain(g0, grid);
  apply_free_free(s.xi);
  return s;
}

void check_invariants(const SimState& s, const Grid& grid) {
  const std::size_t n = grid.size();
  if (s.g.size() != n || s.W.size() != n || s.xi.size() != n) {
    throw InvariantViolation("state fields do not match the grid");
  }
  if (!s.xi.front().isZero() || !s.xi.back().isZero()) {
    throw InvariantViolation("boundary strain is nonzero at t = " + std::to_string(s.t) +
                             " (free-free ends require xi = 0 at both end nodes)");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!s.W[i].allFinite() || !s.xi[i].allFinite() || !s.g[i].allFinite()) {
      throw InvariantViolation("non-finite value at node " + std::to_string(i));
    }
  }
}

SimState simulate(SimState s, const RodSystem& sys, const SolverConfig& cfg,
                  const Observer& observe) {
  const double dt = resolve_dt(cfg, sys);
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / dt));
  const double t0 = s.t;
  if (observe) observe(0, s);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    s = step(s, dt, sys, cfg.scheme);
    s.t = t0 + double(k) * dt;
    if (observe && (k % cfg.output_stride == 0 || k == n_steps)) observe(k, s);
  }
  return s;
}

}  // namespace snake
