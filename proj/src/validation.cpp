#include "snake/validation.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace snake {

namespace {

using Mat4 = Eigen::Matrix4d;

Mat4 hat4(const Twistd& V) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = hat(V.angular());
  m.topRightCorner<3, 1>() = V.linear();
  return m;
}

Twistd vee4(const Mat4& m) {
  return Twistd(Vec3(m(2, 1), m(0, 2), m(1, 0)), Vec3(m.topRightCorner<3, 1>()));
}

// Matrix exponential by scaling and squaring of the Taylor series.
Mat4 expm(const Mat4& X) {
  int s = 0;
  double nrm = X.lpNorm<1>();
  while (nrm > 0.25) {
    nrm *= 0.5;
    ++s;
  }
  const Mat4 Y = X / std::ldexp(1.0, s);
  Mat4 term = Mat4::Identity(), sum = Mat4::Identity();
  for (int k = 1; k < 30; ++k) {
    term = term * Y / double(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

Posed from4(const Mat4& m) {
  return Posed(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
}

double normal(std::mt19937_64& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

Mat3 random_spd(std::mt19937_64& rng) {
  Mat3 B;
  for (int i = 0; i < 9; ++i) B(i) = normal(rng);
  return B * B.transpose() + 0.1 * Mat3::Identity();
}

RodProperties single_node(double mass, const Mat3& inertia, const Vec3& p0) {
  RodProperties p;
  p.mass = {mass};
  p.inertia = {inertia};
  p.p0 = {p0};
  return p;
}

// Brute-force Gram matrix of the kinetic inner product.
Mat6 gram(double mass, const Mat3& inertia, const Vec3& p0) {
  Mat6 G;
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      const Twistd Ea = Twistd::Unit(a), Eb = Twistd::Unit(b);
      const Vec3 va = Ea.angular().cross(p0) + Ea.linear();
      const Vec3 vb = Eb.angular().cross(p0) + Eb.linear();
      G(a, b) = mass * va.dot(vb) + Vec3(Ea.angular()).dot(inertia * Eb.angular());
    }
  }
  return G;
}

CheckResult worst(std::string name, double bound) { return CheckResult{std::move(name), 0.0, bound}; }

void track(CheckResult& r, double residual) {
  r.residual = std::isfinite(residual) ? std::max(r.residual, residual)
                                       : std::numeric_limits<double>::infinity();
}

}  // namespace

Posed random_pose(std::mt19937_64& rng) {
  const Vec3 w(normal(rng), normal(rng), normal(rng));
  const Vec3 u(normal(rng), normal(rng), normal(rng));
  return Posed(exp_se3(Twistd(w, Vec3::Zero())).rotation(), u);
}

Twistd random_twist(std::mt19937_64& rng) {
  Vec6 c;
  for (int k = 0; k < 6; ++k) c[k] = normal(rng);
  return Twistd(c);
}

// ---------------------------------------------------------------------------
// Action
// ---------------------------------------------------------------------------

Trajectory record(SimState s, const RodSystem& sys, double dt, std::size_t n_steps,
                  Scheme scheme) {
  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(n_steps + 1);
  const double t0 = s.t;
  traj.states.push_back(s);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    s = step(s, dt, sys, scheme);
    s.t = t0 + double(k) * dt;
    traj.states.push_back(s);
  }
  return traj;
}

double discrete_action(const Trajectory& traj, const RodProperties& props,
                       const StiffnessLaw& law, const Grid& grid) {
  const std::size_t n = traj.states.size();
  double S = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const SimState& s = traj.states[k];
    const double w = (k == 0 || k + 1 == n) ? 0.5 * traj.dt : traj.dt;
    S += w * (kinetic_energy(s.W, props, grid) - elastic_energy(s.xi, law, props, grid));
  }
  return S;
}

double pose_action(const std::vector<PoseField>& g, double dt, const RodProperties& props,
                   const StiffnessLaw& law, const Grid& grid) {
  const std::size_t n = g.size();
  if (n < 2) throw std::invalid_argument("pose_action: need at least two time samples");
  double S = 0.0;
  TwistField W(grid.size());
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      W[i] = log_se3(compose(inverse(g[k][i]), g[k + 1][i])) / dt;
    }
    S += dt * kinetic_energy(W, props, grid);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (k == 0 || k + 1 == n) ? 0.5 * dt : dt;
    S -= w * elastic_energy(strain(g[k], grid), law, props, grid);
  }
  return S;
}

double action_variation(const Trajectory& traj, const Perturbation& Z, double epsilon,
                        const RodProperties& props, const StiffnessLaw& law, const Grid& grid) {
  if (!(epsilon >= 1e-8 && epsilon <= 1e-3)) {
    throw std::invalid_argument("action_variation: epsilon must lie in [1e-8, 1e-3]");
  }
  const std::size_t n = traj.states.size();
  const double t0 = traj.states.front().t;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (Z(t0, grid.z(i)).norm() > 1e-12 || Z(traj.states.back().t, grid.z(i)).norm() > 1e-12) {
      throw std::invalid_argument("action_variation: Z must vanish at the end times");
    }
  }
  std::vector<PoseField> plus(n), minus(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SimState& s = traj.states[k];
    plus[k].resize(grid.size());
    minus[k].resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Twistd z = Z(s.t, grid.z(i));
      plus[k][i] = compose(s.g[i], exp_se3(epsilon * z));
      minus[k][i] = compose(s.g[i], exp_se3(-epsilon * z));
    }
  }
  return (pose_action(plus, traj.dt, props, law, grid) -
          pose_action(minus, traj.dt, props, law, grid)) /
         (2.0 * epsilon);
}

Perturbation random_perturbation(std::mt19937_64& rng, double T, double L) {
  std::array<Twistd, 3> c;
  for (auto& v : c) v = random_twist(rng);
  return [c, T, L](double t, double z) {
    const double s = std::sin(std::numbers::pi * t / T);
    const double x = z / L;
    return (s * s) * (c[0] + x * c[1] + (x * x) * c[2]);
  };
}

// ---------------------------------------------------------------------------
// Single-body oracles
// ---------------------------------------------------------------------------

Mat6 rigid_inertia(double mass, const Mat3& inertia, const Vec3& p0) {
  return klein_matrix<double>() * gram(mass, inertia, p0);
}

RigidTrajectory euler_arnold_rigid(const Twistd& W0, const Mat6& A, double t_end, double dt,
                                   const Posed& g0) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("euler_arnold_rigid: bad times");
  const auto lu = A.partialPivLu();
  const auto velocity = [&lu](const Vec6& M) { return Twistd(Vec6(lu.solve(M))); };
  const auto f = [&velocity](const Vec6& M, const Mat4& G, Vec6& dM, Mat4& dG) {
    const Twistd W = velocity(M);
    dM = bracket(Twistd(M), W).coeffs();
    dG = G * hat4(W);
  };

  const auto n = static_cast<std::size_t>(std::llround(t_end / dt));
  RigidTrajectory out;
  Vec6 M = A * W0.coeffs();
  Mat4 G = g0.matrix();
  out.t.push_back(0.0);
  out.W.push_back(W0);
  out.g.push_back(g0);
  for (std::size_t k = 1; k <= n; ++k) {
    Vec6 m1, m2, m3, m4;
    Mat4 G1, G2, G3, G4;
    f(M, G, m1, G1);
    f(M + 0.5 * dt * m1, G + 0.5 * dt * G1, m2, G2);
    f(M + 0.5 * dt * m2, G + 0.5 * dt * G2, m3, G3);
    f(M + dt * m3, G + dt * G3, m4, G4);
    M += dt / 6.0 * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
    G += dt / 6.0 * (G1 + 2.0 * G2 + 2.0 * G3 + G4);
    out.t.push_back(double(k) * dt);
    out.W.push_back(velocity(M));
    out.g.push_back(from4(G));
  }
  return out;
}

ConnectionResidual connection_identity_check(const Twistd& V, const Twistd& W, const Twistd& U,
                                             double mass, const Mat3& inertia, const Vec3& p0) {
  const Mat6 G = gram(mass, inertia, p0);
  const auto Ginv = G.partialPivLu();
  const auto g = [&G](const Twistd& a, const Twistd& b) {
    return a.coeffs().dot(G * b.coeffs());
  };
  // metric adjoint of ad_X applied to Y
  const auto adstar = [&](const Twistd& X, const Twistd& Y) {
    return Twistd(Vec6(Ginv.solve(ad_matrix(X).transpose() * (G * Y.coeffs()))));
  };

  const double k1 = g(bracket(V, W), U);
  const double k2 = g(W, bracket(V, U));
  const double k3 = g(V, bracket(W, U));
  const double koszul = 0.5 * (k1 - k2 - k3);
  const double scale = 0.5 * (std::abs(k1) + std::abs(k2) + std::abs(k3)) +
                       std::numeric_limits<double>::min();

  const Twistd a = adstar(V, W), b = adstar(W, V);
  const Twistd standard = 0.5 * (bracket(V, W) - a - b);
  const Twistd printed = 0.5 * bracket(V, W) - a - b;
  const Twistd standard_swapped = 0.5 * (bracket(W, V) - b - a);

  const RodProperties one = single_node(mass, inertia, p0);
  const Twistd via_A = inertia_A_inv(0, bracket(inertia_A(0, W, one), V), one);

  ConnectionResidual r;
  r.standard = std::abs(g(standard, U) - koszul) / scale;
  r.printed = std::abs(g(printed, U) - koszul) / scale;
  r.torsion = (standard - standard_swapped - bracket(V, W)).norm() /
              (bracket(V, W).norm() + a.norm() + b.norm() + std::numeric_limits<double>::min());
  r.dual = (via_A - a).norm() / (a.norm() + std::numeric_limits<double>::min());
  return r;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

std::vector<CheckResult> algebra_suite(const AlgebraOps& ops, std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  CheckResult ad_inv = worst("klein_ad_invariance", 1e-12);
  CheckResult skew = worst("bracket_klein_skew", 1e-12);
  CheckResult jacobi = worst("jacobi_identity", 1e-12);
  CheckResult duality = worst("inertia_klein_duality", 1e-12);
  CheckResult commutator = worst("bracket_matrix_commutator", 1e-12);
  CheckResult conj = worst("adjoint_matrix_conjugation", 1e-12);
  CheckResult exp = worst("exp_matrix_series", 1e-12);

  for (int c = 0; c < cases; ++c) {
    const Posed h = random_pose(rng);
    const Twistd U = random_twist(rng), V = random_twist(rng), W = random_twist(rng);

    const Twistd AV = ops.adjoint(h, V), AW = ops.adjoint(h, W);
    track(ad_inv, std::abs(ops.klein(AV, AW) - ops.klein(V, W)) /
                      (AV.norm() * AW.norm() + V.norm() * W.norm()));

    track(skew, std::abs(ops.klein(ops.bracket(U, V), W) + ops.klein(V, ops.bracket(U, W))) /
                    (U.norm() * V.norm() * W.norm()));

    const Twistd jac = ops.bracket(U, ops.bracket(V, W)) + ops.bracket(V, ops.bracket(W, U)) +
                       ops.bracket(W, ops.bracket(U, V));
    track(jacobi, jac.norm() / (U.norm() * V.norm() * W.norm()));

    const double m = uniform(rng, 0.1, 10.0);
    const Mat3 I = random_spd(rng);
    const Vec3 p(normal(rng), normal(rng), normal(rng));
    const RodProperties one = single_node(m, I, p);
    const double lhs = ops.klein(inertia_A(0, V, one), W);
    const Vec3 Vp = V.angular().cross(p) + V.linear();
    const Vec3 Wp = W.angular().cross(p) + W.linear();
    const double t1 = m * Vp.dot(Wp);
    const double t2 = Vec3(V.angular()).dot(I * W.angular());
    track(duality, std::abs(lhs - (t1 + t2)) /
                       (m * Vp.norm() * Wp.norm() + I.norm() * V.angular().norm() *
                                                        W.angular().norm()));

    const Mat4 Vh = hat4(V), Wh = hat4(W);
    track(commutator,
          (ops.bracket(V, W) - vee4(Vh * Wh - Wh * Vh)).norm() / (V.norm() * W.norm()));

    const Mat4 H = h.matrix();
    const Mat4 Hinv = inverse(h).matrix();
    track(conj, (AV - vee4(H * Vh * Hinv)).norm() /
                    (V.norm() * (1.0 + h.translation().norm())));

    const Twistd X = 0.7 * V;
    const Mat4 E = ops.exp(X).matrix();
    track(exp, (E - expm(hat4(X))).norm() / E.norm());
  }
  return {ad_inv, skew, jacobi, duality, commutator, conj, exp};
}

std::vector<CheckResult> connection_suite(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  CheckResult standard = worst("koszul_standard_form", 1e-10);
  CheckResult printed = worst("koszul_unhalved_form (informational)",
                              std::numeric_limits<double>::infinity());
  CheckResult torsion = worst("connection_torsion_free", 1e-10);
  CheckResult dual = worst("coadjoint_via_inertia", 1e-10);
  for (int c = 0; c < cases; ++c) {
    const Twistd V = random_twist(rng), W = random_twist(rng), U = random_twist(rng);
    const double m = uniform(rng, 0.1, 10.0);
    const Mat3 I = random_spd(rng);
    const Vec3 p(normal(rng), normal(rng), normal(rng));
    const ConnectionResidual r = connection_identity_check(V, W, U, m, I, p);
    track(standard, r.standard);
    track(printed, r.printed);
    track(torsion, r.torsion);
    track(dual, r.dual);
  }
  return {standard, printed, torsion, dual};
}

std::vector<CheckResult> rigid_suite() {
  std::vector<CheckResult> out;
  const Mat3 I = Vec3(0.2, 0.3, 0.5).asDiagonal();

  {
    const Mat6 A = rigid_inertia(2.0, I, Vec3::Zero());
    const Twistd W0(Vec3(0.0, 0.0, 1.3), Vec3::Zero());
    const RigidTrajectory r = euler_arnold_rigid(W0, A, 2.0, 1e-3);
    CheckResult c = worst("rigid_principal_axis_steady", 1e-12);
    for (const auto& W : r.W) track(c, (W - W0).norm() / W0.norm());
    out.push_back(c);
  }
  {
    const Mat6 A = rigid_inertia(2.0, I, Vec3(0.1, -0.2, 0.3));
    const Twistd W0(Vec3::Zero(), Vec3(0.4, -0.1, 0.2));
    const RigidTrajectory r = euler_arnold_rigid(W0, A, 2.0, 1e-3);
    CheckResult c = worst("rigid_translation_steady", 1e-12);
    for (const auto& W : r.W) track(c, (W - W0).norm() / W0.norm());
    out.push_back(c);
  }
  {
    const Mat6 A = rigid_inertia(2.0, I, Vec3(0.1, -0.2, 0.3));
    const Twistd W0(Vec3(0.7, -0.4, 1.1), Vec3(0.3, 0.2, -0.5));
    const RigidTrajectory r = euler_arnold_rigid(W0, A, 10.0, 1e-3);
    const auto momentum = [&](std::size_t k) {
      return adjoint(r.g[k], Twistd(Vec6(A * r.W[k].coeffs())));
    };
    const Twistd P0 = momentum(0);
    const double C0 = klein(Twistd(Vec6(A * W0.coeffs())), Twistd(Vec6(A * W0.coeffs())));
    CheckResult drift = worst("rigid_spatial_momentum_drift", 1e-8);
    CheckResult casimir = worst("rigid_klein_casimir_drift", 1e-10);
    for (std::size_t k = 0; k < r.W.size(); ++k) {
      track(drift, (momentum(k) - P0).norm() / P0.norm());
      const Twistd M(Vec6(A * r.W[k].coeffs()));
      track(casimir, std::abs(klein(M, M) - C0) / std::abs(C0));
    }
    out.push_back(drift);
    out.push_back(casimir);
  }
  {
    // Rod with sections referenced at their own origin: A is uniform, so a uniform
    // velocity is a rigid motion of the whole rod.
    const Grid grid(9, 1.0);
    const RodProperties props = uniform_properties(2.0, I, ReferenceCurve::Origin, grid);
    const StiffnessLaw law =
        StiffnessLaw::uniform(SectionStiffness{1, 1, 1, 10, 10, 10}, props, grid);
    const RodSystem sys(grid, props, law);
    const Twistd W0(Vec3(0.7, -0.4, 1.1), Vec3(0.3, 0.2, -0.5));
    const double dt = 1e-3;
    SimState s = initial_state(PoseField(grid.size()), TwistField(grid.size(), W0), grid);
    const RigidTrajectory r =
        euler_arnold_rigid(W0, rigid_inertia(2.0, I, Vec3::Zero()), 1.0, dt);
    CheckResult match = worst("rod_matches_rigid_oracle", 1e-9);
    CheckResult xi = worst("rod_rigid_strain", 1e-10);
    for (std::size_t k = 1; k < r.W.size(); ++k) {
      s = step(s, dt, sys);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        track(match, (s.W[i] - r.W[k]).norm() / r.W[k].norm());
        track(xi, s.xi[i].norm());
      }
    }
    out.push_back(match);
    out.push_back(xi);
  }
  return out;
}

namespace {

struct DeskRod {
  Grid grid;
  RodProperties props;
  StiffnessLaw law;
};

DeskRod desk_rod(std::size_t n) {
  const Grid grid(n, 1.0);
  RodProperties props = cylinder_properties(0.05, std::vector<double>(n, 1000.0), grid);
  StiffnessLaw law = StiffnessLaw::uniform(cylinder_stiffness(1e6, 1e6 / 3.0, 0.05), props, grid);
  return {grid, std::move(props), std::move(law)};
}

PoseField smooth_pose_field(std::mt19937_64& rng, const Grid& grid, double scale) {
  std::array<Twistd, 3> c;
  for (auto& v : c) v = scale * random_twist(rng);
  PoseField g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.z(i) / grid.length();
    g[i] = exp_se3(c[0] + x * c[1] + (x * x) * c[2]);
  }
  return g;
}

TwistField smooth_twist_field(std::mt19937_64& rng, const Grid& grid) {
  std::array<Twistd, 3> c;
  for (auto& v : c) v = random_twist(rng);
  TwistField Z(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.z(i) / grid.length();
    Z[i] = c[0] + x * c[1] + (x * x) * c[2];
  }
  return Z;
}

double elastic_of(const PoseField& g, const DeskRod& r) {
  return elastic_energy(strain(g, r.grid), r.law, r.props, r.grid);
}

}  // namespace

std::vector<CheckResult> elasticity_suite(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  const DeskRod rod = desk_rod(17);
  CheckResult fd = worst("dU_vs_finite_difference", 1e-4);
  CheckResult forms = worst("dU_sbp_vs_integrated_by_parts", 1e-10);
  constexpr double eps = 1e-6;
  for (int c = 0; c < cases; ++c) {
    const PoseField g = smooth_pose_field(rng, rod.grid, 0.5);
    const TwistField Z = smooth_twist_field(rng, rod.grid);
    PoseField gp(g), gm(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      gp[i] = compose(g[i], exp_se3(eps * Z[i]));
      gm[i] = compose(g[i], exp_se3(-eps * Z[i]));
    }
    const double numeric = (elastic_of(gp, rod) - elastic_of(gm, rod)) / (2.0 * eps);
    const double analytic = dU(g, Z, rod.law, rod.props, rod.grid);
    track(fd, std::abs(analytic - numeric) / std::max(std::abs(analytic), 1e-300));

    const TwistField xi = strain(g, rod.grid);
    const double sbp = dU_sbp(xi, Z, rod.law, rod.props, rod.grid);
    const double by_parts = dU_by_parts(xi, Z, rod.law, rod.props, rod.grid);
    track(forms, std::abs(sbp - by_parts) / std::max(std::abs(sbp), 1e-300));
  }
  return {fd, forms};
}

StationarityStudy stationarity_study(std::uint64_t seed, int perturbations) {
  const auto initial = [](const Grid& grid) {
    TwistField W(grid.size());
    const Twistd shape(Vec3(0.4, -0.3, 0.2), Vec3(0.02, 0.01, -0.01));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      W[i] = std::cos(std::numbers::pi * grid.z(i) / grid.length()) * shape;
    }
    return initial_state(PoseField(grid.size()), W, grid);
  };

  const DeskRod coarse = desk_rod(17), fine = desk_rod(33);
  const RodSystem coarse_sys(coarse.grid, coarse.props, coarse.law);
  const RodSystem fine_sys(fine.grid, fine.props, fine.law);
  const double dt = cfl_dt(coarse.props, coarse.law, coarse.grid, 0.5);
  const Trajectory tc = record(initial(coarse.grid), coarse_sys, dt, 200);
  const Trajectory tf = record(initial(fine.grid), fine_sys, 0.5 * dt, 400);
  const double T = tc.duration();

  Trajectory bad = tc;
  const Twistd kink(Vec3(0.3, -0.2, 0.5), Vec3(0.01, 0.02, -0.01));
  for (auto& s : bad.states) {
    const double bump = std::sin(std::numbers::pi * s.t / T);
    for (std::size_t i = 0; i < coarse.grid.size(); ++i) {
      const double shape = std::cos(std::numbers::pi * coarse.grid.z(i));
      s.g[i] = compose(s.g[i], exp_se3((0.05 * bump * bump * shape) * kink));
    }
  }

  std::mt19937_64 rng(seed);
  constexpr double eps = 1e-5;
  StationarityStudy r;
  r.perturbations = perturbations;
  for (int j = 0; j < perturbations; ++j) {
    const Perturbation Z = random_perturbation(rng, T, 1.0);
    const double c = action_variation(tc, Z, eps, coarse.props, coarse.law, coarse.grid);
    const double f = action_variation(tf, Z, eps, fine.props, fine.law, fine.grid);
    const double b = action_variation(bad, Z, eps, coarse.props, coarse.law, coarse.grid);
    r.coarse += c * c;
    r.refined += f * f;
    r.corrupted += b * b;
  }
  r.coarse = std::sqrt(r.coarse / perturbations);
  r.refined = std::sqrt(r.refined / perturbations);
  r.corrupted = std::sqrt(r.corrupted / perturbations);
  return r;
}

std::vector<CheckResult> stationarity_suite(std::uint64_t seed) {
  const StationarityStudy s = stationarity_study(seed);
  return {
      {"action_variation_coarse_vs_refined", s.coarse / s.refined, 10.0},
      {"action_variation_refinement_gain_inverse", s.refined / s.coarse, 1.0 / 3.5},
      {"corrupted_trajectory_detected_inverse", 10.0 * s.refined / s.corrupted, 1.0},
  };
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"algebra", "connection", "rigid", "elasticity",
                                                 "stationarity"};
  return names;
}

std::vector<CheckResult> run_suites(const std::string& name) {
  if (name.empty()) {
    std::vector<CheckResult> all;
    for (const auto& n : suite_names()) {
      auto r = run_suites(n);
      all.insert(all.end(), r.begin(), r.end());
    }
    return all;
  }
  if (name == "algebra") return algebra_suite();
  if (name == "connection") return connection_suite();
  if (name == "rigid") return rigid_suite();
  if (name == "elasticity") return elasticity_suite();
  if (name == "stationarity") return stationarity_suite();
  std::string known;
  for (const auto& n : suite_names()) known += " " + n;
  throw std::invalid_argument("unknown verification suite '" + name + "'; known suites:" + known);
}

}  // namespace snake
