#include "snake/actuation.hpp"

#include <cmath>
#include <utility>

namespace snake {

ControlLaw ControlLaw::local(Local fn, std::string name) {
  ControlLaw c;
  c.local_ = std::move(fn);
  c.name_ = std::move(name);
  return c;
}

ControlLaw ControlLaw::field(Field fn, std::string name) {
  ControlLaw c;
  c.field_ = std::move(fn);
  c.name_ = std::move(name);
  return c;
}

Twistd ControlLaw::operator()(double t, std::size_t i, const TwistField& xi,
                              const TwistField& xi_dot) const {
  Twistd u;
  if (local_) {
    u = local_(t, i, xi[i], xi_dot[i]);
  } else if (field_) {
    u = field_(t, i, xi, xi_dot);
  }
  if (!u.allFinite()) {
    throw ControlError("control law '" + name_ + "' returned a non-finite wrench at node " +
                       std::to_string(i) + ", t = " + std::to_string(t));
  }
  return u;
}

void CpgParams::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("cpg: amplitude must be finite and non-negative");
  }
  if (!std::isfinite(omega) || !std::isfinite(wavenumber) || !std::isfinite(phase)) {
    throw std::invalid_argument("cpg: omega, wavenumber and phase must be finite");
  }
  if (component < 0 || component > 5) {
    throw std::invalid_argument("cpg: component must be in 0..5");
  }
}

ControlLaw cpg_law(const CpgParams& p, const Grid& grid) {
  p.validate();
  if (p.amplitude == 0.0) return {};
  return ControlLaw::local(
      [p, grid](double t, std::size_t i, const Twistd&, const Twistd&) {
        Twistd u;
        u.coeffs()[p.component] =
            p.amplitude * std::sin(p.omega * t - p.wavenumber * grid.z(i) + p.phase);
        return u;
      },
      "cpg");
}

Twistd total_wrench(double t, std::size_t i, const TwistField& xi, const TwistField& xi_dot,
                    const StiffnessLaw& law, const ControlLaw& control) {
  Twistd lambda = apply_H(i, xi[i], law);
  if (control.active()) lambda += control(t, i, xi, xi_dot);
  return lambda;
}

}  // namespace snake
