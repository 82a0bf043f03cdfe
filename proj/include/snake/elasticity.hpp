#pragma once

#include "snake/rod_model.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace snake {

/// Strain field could not be formed because neighbouring sections are rotated by
/// (nearly) π relative to each other.
class MeshTooCoarse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Section stiffness in the (ω, v) basis at the section reference point:
/// bending EI₁, EI₂ (N·m²), torsion GJ (N·m²), shear GA₁, GA₂ (N), stretch EA (N).
struct SectionStiffness {
  double EI1 = 0, EI2 = 0, GJ = 0, GA1 = 0, GA2 = 0, EA = 0;

  Vec6 diagonal() const { return (Vec6() << EI1, EI2, GJ, GA1, GA2, EA).finished(); }
};

/// Isotropic circular section of radius R.
SectionStiffness cylinder_stiffness(double youngs_modulus, double shear_modulus, double radius);

/// Linear elastic law. Per node, K_i = A_i∘ℋ_i maps a strain twist to its
/// momentum-like wrench, and H_i = A_i⁻¹ K_i is the stiffness operator ℋ.
///
/// Invariants checked on construction: 𝔨(K V, W) = 𝔨(K W, V) and 𝔨(K V, V) > 0,
/// i.e. ℋ is symmetric positive definite with respect to the metric.
class StiffnessLaw {
 public:
  /// Section matrices are expressed at the section reference point and
  /// transported to p0_i: K_i = Ad_{T(p0_i)} K Ad_{T(p0_i)}⁻¹.
  static StiffnessLaw from_section_matrices(const std::vector<Mat6>& K_section,
                                            const RodProperties& props, const Grid& grid);

  /// Diagonal shortcut: K = J·diag(EI₁, EI₂, GJ, GA₁, GA₂, EA), so that
  /// 𝔨(K ξ, ξ) = ξᵀ diag(...) ξ at the section.
  static StiffnessLaw diagonal(const std::vector<SectionStiffness>& per_node,
                               const RodProperties& props, const Grid& grid);
  static StiffnessLaw uniform(const SectionStiffness& s, const RodProperties& props,
                              const Grid& grid);

  std::size_t size() const { return K_.size(); }
  const Mat6& K(std::size_t i) const { return K_[i]; }
  const Mat6& H(std::size_t i) const { return H_[i]; }

 private:
  std::vector<Mat6> K_;
  std::vector<Mat6> H_;
};

/// Section matrix of the diagonal shortcut.
Mat6 section_matrix(const SectionStiffness& s);

/// ξ at cell midpoints: log(g_i⁻¹ g_{i+1}) / Δz. Throws MeshTooCoarse near a π
/// relative rotation.
TwistField strain_midpoints(const PoseField& g, const Grid& grid);

/// Node strain: interior nodes average the two adjacent midpoints, end nodes take
/// the single adjacent one.
TwistField strain(const PoseField& g, const Grid& grid);
TwistField midpoints_to_nodes(const TwistField& mid);

/// Free-free ends: ℋ(ξ) = 0 at z ∈ {0, L}, i.e. ξ = 0 there.
void apply_free_free(TwistField& xi);

Twistd apply_H(std::size_t i, const Twistd& xi, const StiffnessLaw& law);

/// U = ½≪ℋ ξ, ξ≫_e.
double elastic_energy(const TwistField& xi, const StiffnessLaw& law,
                      const RodProperties& props, const Grid& grid);

/// Exact differential of U(g) = elastic_energy(strain(g)) along the left
/// variation g_i → g_i exp(ε Z_i): the discrete counterpart of
/// dU = ≪∂_z Z + [ξ, Z], ℋξ≫_e with the group-difference of Z in place of
/// ∂_z Z + [ξ, Z].
double dU(const PoseField& g, const TwistField& Z, const StiffnessLaw& law,
          const RodProperties& props, const Grid& grid);

/// ≪D Z + [ξ, Z], ℋξ≫_e with D the summation-by-parts difference operator
/// (central inside, one-sided at the ends) and trapezoidal quadrature.
double dU_sbp(const TwistField& xi, const TwistField& Z, const StiffnessLaw& law,
                const RodProperties& props, const Grid& grid);

/// Integrated-by-parts form: ≪A⁻¹[Aℋξ, ξ], Z≫_e − 𝔎(D(Aℋξ), Z) + 𝔨(Aℋξ, Z)|₀^L.
/// Equal to dU_sbp to rounding for the same D and quadrature.
double dU_by_parts(const TwistField& xi, const TwistField& Z, const StiffnessLaw& law,
                    const RodProperties& props, const Grid& grid);

/// Summation-by-parts first derivative: central inside, one-sided at the ends.
TwistField sbp_derivative(const TwistField& f, const Grid& grid);

}  // namespace snake
