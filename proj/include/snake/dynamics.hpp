#pragma once

#include "snake/actuation.hpp"
#include "snake/elasticity.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace snake {

/// NaN or Inf appeared in the state, usually a CFL violation.
class NonFiniteState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state invariant (zero boundary strain, finiteness) does not hold.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scheme { RK4, Midpoint };

/// How the internal wrench enters the velocity equation.
///
/// Conservative: Ẇ = A⁻¹([AW, W] + ∂_z M + [ξ, M]) with M = A Λ the total wrench.
/// Literal:      Ẇ = A⁻¹[AW, W] + ∂_z Λ + A⁻¹[ξ, A Λ].
/// Both coincide when A does not depend on z. Only the conservative form keeps
/// the discrete energy balance exact when it does.
enum class WrenchForm { Conservative, Literal };

/// Which way a section pose places its reference point.
enum class ActionConvention {
  Inverse,  // p = g⁻¹(p0)
  Direct,        // p = g(p0)
};

struct SolverConfig {
  std::optional<double> dt;  // empty: derived from the CFL bound
  double cfl_number = 0.5;
  double t_end = 0.0;
  std::size_t output_stride = 1;
  Scheme scheme = Scheme::RK4;

  void validate() const;
};

/// Poses g are tracked alongside (W, ξ); g.front() is the base pose.
struct SimState {
  double t = 0.0;
  PoseField g;
  TwistField W;
  TwistField xi;
  double control_work = 0.0;  // ∫ control_power dt

  const Posed& base_pose() const { return g.front(); }
};

/// Immutable rod: grid, inertia, stiffness and control, with A and A⁻¹ cached
/// per node.
class RodSystem {
 public:
  RodSystem(Grid grid, RodProperties props, StiffnessLaw law, ControlLaw control = {},
            WrenchForm form = WrenchForm::Conservative);

  const Grid& grid() const { return grid_; }
  const RodProperties& props() const { return props_; }
  const StiffnessLaw& law() const { return law_; }
  const ControlLaw& control() const { return control_; }
  WrenchForm form() const { return form_; }
  const Mat6& A(std::size_t i) const { return A_[i]; }
  const Mat6& A_inv(std::size_t i) const { return A_inv_[i]; }

 private:
  Grid grid_;
  RodProperties props_;
  StiffnessLaw law_;
  ControlLaw control_;
  WrenchForm form_;
  std::vector<Mat6> A_, A_inv_;
};

/// Time derivatives of the evolved quantities at one instant.
struct Derivatives {
  TwistField W;
  TwistField xi;
  double power = 0.0;
};

/// ξ̇_i = (W_{i+1} − W_{i−1})/2Δz + [ξ_i, W_i] inside, 0 at the end nodes.
TwistField rhs_xi(const TwistField& W, const TwistField& xi, const Grid& grid);
TwistField rhs_xi(const SimState& s, const Grid& grid);

/// Ẇ with the total wrench zeroed at the ends and odd ghost values outside.
TwistField rhs_W(const SimState& s, const RodSystem& sys);

Derivatives derivatives(double t, const TwistField& W, const TwistField& xi,
                        const RodSystem& sys);

/// Work rate of the control: dE/dt = −Σ w_i 𝔨(A_i u_i, ξ̇_i) over interior nodes.
double control_power(double t, const TwistField& xi, const TwistField& xi_dot,
                     const RodSystem& sys);

/// One step. RK4 advances poses with the Munthe-Kaas variant of the same
/// tableau; midpoint solves the implicit stage by fixed-point iteration.
/// Throws NonFiniteState.
SimState step(const SimState& s, double dt, const RodSystem& sys, Scheme scheme = Scheme::RK4);

/// cfl·Δz / c_max with c_max² the largest eigenvalue of A_i⁻¹K_i over nodes.
double cfl_dt(const RodProperties& props, const StiffnessLaw& law, const Grid& grid,
              double cfl_number);
double resolve_dt(const SolverConfig& cfg, const RodSystem& sys);

double total_energy(const SimState& s, const RodSystem& sys);

/// Σ w_i Ad_{g_i}(A_i W_i).
Twistd spatial_momentum(const SimState& s, const RodProperties& props, const Grid& grid);

/// g_0 = base pose, g_{i+1} = g_i exp(Δz ξ_{i+1/2}) with ξ_{i+1/2} the average
/// of the two node strains.
PoseField reconstruct_poses(const SimState& s, const Grid& grid);
PoseField reconstruct_from_midpoints(const Posed& base, const TwistField& mid, const Grid& grid);

std::vector<Vec3> apply_configuration(const PoseField& g, const RodProperties& props,
                                      ActionConvention convention = ActionConvention::Inverse);

/// t = 0, ξ = strain(g0) with zero end values.
SimState initial_state(const PoseField& g0, const TwistField& W0, const Grid& grid);

/// Throws InvariantViolation when an end strain is nonzero or a value is not finite.
void check_invariants(const SimState& s, const Grid& grid);

using Observer = std::function<void(std::size_t step, const SimState& s)>;

/// Advances to cfg.t_end with round(t_end/dt) steps, calling the observer at
/// step 0, every output_stride steps, and at the final step.
SimState simulate(SimState s, const RodSystem& sys, const SolverConfig& cfg,
                  const Observer& observe = {});

}  // namespace snake
