#pragma once

#include "snake/elasticity.hpp"

#include <functional>
#include <stdexcept>
#include <string>

namespace snake {

/// A control law returned a non-finite wrench.
class ControlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Active contribution u to the internal wrench, in the same coordinates as ℋ(ξ).
///
/// The local contract sees (t, i, ξ_i, ξ̇_i); the field contract additionally
/// sees the whole (ξ, ξ̇) fields for non-local feedback. A default-constructed
/// law is inactive and is never evaluated, so passive runs take the exact
/// same floating-point path as runs without any control.
class ControlLaw {
 public:
  using Local = std::function<Twistd(double t, std::size_t i, const Twistd& xi,
                                     const Twistd& xi_dot)>;
  using Field = std::function<Twistd(double t, std::size_t i, const TwistField& xi,
                                     const TwistField& xi_dot)>;

  ControlLaw() = default;
  static ControlLaw local(Local fn, std::string name);
  static ControlLaw field(Field fn, std::string name);

  bool active() const { return bool(local_) || bool(field_); }
  const std::string& name() const { return name_; }

  /// u at node i. Throws ControlError on non-finite output.
  Twistd operator()(double t, std::size_t i, const TwistField& xi,
                    const TwistField& xi_dot) const;

 private:
  Local local_;
  Field field_;
  std::string name_ = "none";
};

/// Travelling wave u(t, z) = amplitude·sin(ω t − k z + phase) in one twist
/// coordinate (0..2 angular, 3..5 linear).
struct CpgParams {
  double amplitude = 0.0;   // N·m (angular components) or N (linear)
  double omega = 0.0;       // rad/s
  double wavenumber = 0.0;  // rad/m
  int component = 0;        // bending about e₁
  double phase = 0.0;

  void validate() const;
};

/// Zero amplitude yields an inactive law.
ControlLaw cpg_law(const CpgParams& params, const Grid& grid);

/// ℋ(ξ_i) + u_i.
Twistd total_wrench(double t, std::size_t i, const TwistField& xi, const TwistField& xi_dot,
                    const StiffnessLaw& law, const ControlLaw& control);

}  // namespace snake
