#pragma once

#include "snake/se3.hpp"

#include <cstddef>
#include <vector>

namespace snake {

using TwistField = std::vector<Twistd>;
using PoseField = std::vector<Posed>;

/// Uniform grid z_i = i·Δz on [0, L].
class Grid {
 public:
  Grid(std::size_t n_nodes, double length);

  std::size_t size() const { return n_; }
  double length() const { return length_; }
  double dz() const { return dz_; }
  double z(std::size_t i) const { return double(i) * dz_; }

  /// Trapezoidal quadrature weight of node i.
  double weight(std::size_t i) const {
    return (i == 0 || i + 1 == n_) ? 0.5 * dz_ : dz_;
  }

  bool operator==(const Grid& o) const { return n_ == o.n_ && length_ == o.length_; }

 private:
  std::size_t n_;
  double length_;
  double dz_;
};

enum class ReferenceCurve {
  Straight,  // p0(z) = (0, 0, z)
  Origin,    // p0(z) = 0: every section is referenced at its own frame origin
};

enum class MassCoefficient {
  Area,   // m = π R² ρ0
  DoubleArea,  // m = 2 π R² ρ0
};

std::vector<Vec3> reference_curve(ReferenceCurve kind, const Grid& grid);

/// Per-node mass line density, section inertia and reference curve.
struct RodProperties {
  std::vector<double> mass;
  std::vector<Mat3> inertia;
  std::vector<Vec3> p0;

  std::size_t size() const { return mass.size(); }

  /// Throws std::invalid_argument when a node violates m > 0, I = Iᵀ ≻ 0, or the
  /// arrays disagree with the grid.
  void validate(const Grid& grid) const;
};

/// Uniform properties along the rod.
RodProperties uniform_properties(double mass, const Mat3& inertia,
                                 ReferenceCurve curve, const Grid& grid);

/// Circular cross-section of radius R with density profile rho0 (one value per
/// node): m = c·πR²ρ0 with c = 1 (Area) or 2 (DoubleArea), and
/// I = diag(πR⁴ρ0/4, πR⁴ρ0/4, πR⁴ρ0/2).
RodProperties cylinder_properties(double radius, const std::vector<double>& rho0,
                                  const Grid& grid,
                                  MassCoefficient coefficient = MassCoefficient::Area,
                                  ReferenceCurve curve = ReferenceCurve::Straight);

double total_mass(const RodProperties& props, const Grid& grid);

/// ⟨V, W⟩_z at node i: m·V(p0)·W(p0) + ω_V·I ω_W.
double inner_z(std::size_t i, const Twistd& V, const Twistd& W, const RodProperties& props);

/// ≪V, W≫_e by trapezoidal quadrature of inner_z.
double metric_e(const TwistField& V, const TwistField& W, const RodProperties& props,
                const Grid& grid);

double kinetic_energy(const TwistField& W, const RodProperties& props, const Grid& grid);

/// 𝔎(V, W) by trapezoidal quadrature of the pointwise Klein form.
double klein_field(const TwistField& V, const TwistField& W, const Grid& grid);

/// Inertia operator at node i, defined by 𝔨(A V, W) = ⟨V, W⟩_z for all W:
/// ω_A = m·V(p0) and A(V)(p0) = I ω_V.
Twistd inertia_A(std::size_t i, const Twistd& V, const RodProperties& props);

Twistd inertia_A_inv(std::size_t i, const Twistd& M, const RodProperties& props);

/// A at node i as a 6×6 matrix in (ω, v) coordinates.
Mat6 inertia_matrix(std::size_t i, const RodProperties& props);

/// Ad of the pure translation by c, as a 6×6 matrix.
Mat6 translation_adjoint(const Vec3& c);

}  // namespace snake
