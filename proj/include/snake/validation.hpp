#pragma once

#include "snake/dynamics.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace snake {

/// Uniformly sampled solver states.
struct Trajectory {
  double dt = 0.0;
  std::vector<SimState> states;

  double duration() const { return dt * double(states.size() - 1); }
};

/// n_steps steps of size dt from s, keeping every state.
Trajectory record(SimState s, const RodSystem& sys, double dt, std::size_t n_steps,
                  Scheme scheme = Scheme::RK4);

/// Trapezoidal time quadrature of kinetic(W_k) − elastic(ξ_k) on the stored fields.
double discrete_action(const Trajectory& traj, const RodProperties& props,
                       const StiffnessLaw& law, const Grid& grid);

/// Action of a pose history alone: kinetic energy of log(g_k⁻¹ g_{k+1})/dt on each
/// time interval, elastic energy of strain(g_k) by the trapezoidal rule in time.
double pose_action(const std::vector<PoseField>& g, double dt, const RodProperties& props,
                   const StiffnessLaw& law, const Grid& grid);

/// Z(t, z): a left-trivialized variation.
using Perturbation = std::function<Twistd(double t, double z)>;

/// (S[g exp(εZ)] − S[g exp(−εZ)]) / 2ε with S = pose_action. Z must vanish at the
/// first and last sample times; ε must lie in [1e-8, 1e-3].
double action_variation(const Trajectory& traj, const Perturbation& Z, double epsilon,
                        const RodProperties& props, const StiffnessLaw& law, const Grid& grid);

/// sin²(πt/T)·Σ_{p≤2} c_p (z/L)^p with standard normal coefficient twists.
Perturbation random_perturbation(std::mt19937_64& rng, double T, double L);

/// Single-body inertia operator from the brute-force Gram matrix of the
/// kinetic inner product: A = J·G with G_ab = ⟨e_a, e_b⟩.
Mat6 rigid_inertia(double mass, const Mat3& inertia, const Vec3& p0);

struct RigidTrajectory {
  std::vector<double> t;
  std::vector<Twistd> W;
  std::vector<Posed> g;
};

/// Ṁ = [M, W], M = A W, with ġ = g Ŵ integrated as a 4×4 matrix; classical RK4.
RigidTrajectory euler_arnold_rigid(const Twistd& W0, const Mat6& A, double t_end, double dt,
                                   const Posed& g0 = Posed::Identity());

struct ConnectionResidual {
  double standard = 0.0;  // ½([V,W] − ad*_V W − ad*_W V) against the Koszul formula
  double printed = 0.0;   // ½[V,W] − ad*_V W − ad*_W V against the Koszul formula
  double torsion = 0.0;   // ∇_V W − ∇_W V − [V,W] for the standard form
  double dual = 0.0;      // A⁻¹[A W, V] against G⁻¹ ad_Vᵀ G W
};

/// Relative residuals of the left-invariant connection at the single-body level.
ConnectionResidual connection_identity_check(const Twistd& V, const Twistd& W, const Twistd& U,
                                             double mass, const Mat3& inertia, const Vec3& p0);

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double bound = 0.0;

  bool pass() const { return residual <= bound; }
};

/// The kernel primitives exercised by the algebra suite. Replacing one lets a
/// test confirm that the suite notices a broken primitive.
struct AlgebraOps {
  std::function<Twistd(const Twistd&, const Twistd&)> bracket = [](const Twistd& a,
                                                                    const Twistd& b) {
    return snake::bracket(a, b);
  };
  std::function<Twistd(const Posed&, const Twistd&)> adjoint = [](const Posed& g,
                                                                  const Twistd& V) {
    return snake::adjoint(g, V);
  };
  std::function<double(const Twistd&, const Twistd&)> klein = [](const Twistd& a,
                                                                 const Twistd& b) {
    return snake::klein(a, b);
  };
  std::function<Posed(const Twistd&)> exp = [](const Twistd& V) { return exp_se3(V); };
};

Posed random_pose(std::mt19937_64& rng);
Twistd random_twist(std::mt19937_64& rng);

std::vector<CheckResult> algebra_suite(const AlgebraOps& ops = {}, std::uint64_t seed = 1,
                                       int cases = 1000);
std::vector<CheckResult> connection_suite(std::uint64_t seed = 2, int cases = 200);
std::vector<CheckResult> rigid_suite();
std::vector<CheckResult> elasticity_suite(std::uint64_t seed = 3, int cases = 100);
std::vector<CheckResult> stationarity_suite(std::uint64_t seed = 4);

/// Action variation on a 17-node, 200-step solver run, on the run refined by two
/// in both Δz and dt, and on a corrupted copy of the coarse run. Each value is the
/// root mean square over the same random perturbations.
struct StationarityStudy {
  double coarse = 0.0;
  double refined = 0.0;
  double corrupted = 0.0;
  int perturbations = 0;
};
StationarityStudy stationarity_study(std::uint64_t seed = 4, int perturbations = 20);

/// Suite names accepted by run_suites.
const std::vector<std::string>& suite_names();

/// Runs the named suite, or every suite for an empty name. Throws
/// std::invalid_argument for an unknown name.
std::vector<CheckResult> run_suites(const std::string& name);

}  // namespace snake
