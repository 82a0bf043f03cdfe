#include "snake/elasticity.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <string>

namespace snake {

SectionStiffness cylinder_stiffness(double E, double G, double R) {
  constexpr double pi = std::numbers::pi;
  const double area = pi * R * R;
  const double I = pi * R * R * R * R / 4.0;
  return SectionStiffness{E * I, E * I, G * 2.0 * I, G * area, G * area, E * area};
}

Mat6 section_matrix(const SectionStiffness& s) {
  return klein_matrix<double>() * s.diagonal().asDiagonal();
}

namespace {

void check_law(const Mat6& K, std::size_t i) {
  const Mat6 S = klein_matrix<double>() * K;  // 𝔨(K V, W) = Vᵀ Sᵀ W
  const std::string at = " at node " + std::to_string(i);
  if (!K.allFinite()) throw std::invalid_argument("stiffness law: non-finite entries" + at);
  if ((S - S.transpose()).norm() > 1e-10 * std::max(1.0, S.norm())) {
    throw std::invalid_argument(
        "stiffness law: not symmetric with respect to the metric" + at);
  }
  Eigen::SelfAdjointEigenSolver<Mat6> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0)) {
    throw std::invalid_argument(
        "stiffness law: not positive definite with respect to the metric" + at);
  }
}

}  // namespace

StiffnessLaw StiffnessLaw::from_section_matrices(const std::vector<Mat6>& K_section,
                                                 const RodProperties& props,
                                                 const Grid& grid) {
  props.validate(grid);
  if (K_section.size() != grid.size()) {
    throw std::invalid_argument("stiffness law: need one matrix per node");
  }
  StiffnessLaw law;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    check_law(K_section[i], i);
    const Mat6 T = translation_adjoint(props.p0[i]);
    const Mat6 Tinv = translation_adjoint(-props.p0[i]);
    const Mat6 K = T * K_section[i] * Tinv;
    law.K_.push_back(K);
    law.H_.push_back(inertia_matrix(i, props).partialPivLu().solve(K));
  }
  return law;
}

StiffnessLaw StiffnessLaw::diagonal(const std::vector<SectionStiffness>& per_node,
                                    const RodProperties& props, const Grid& grid) {
  std::vector<Mat6> K;
  K.reserve(per_node.size());
  for (const auto& s : per_node) K.push_back(section_matrix(s));
  return from_section_matrices(K, props, grid);
}

StiffnessLaw StiffnessLaw::uniform(const SectionStiffness& s, const RodProperties& props,
                                   const Grid& grid) {
  return diagonal(std::vector<SectionStiffness>(grid.size(), s), props, grid);
}

TwistField strain_midpoints(const PoseField& g, const Grid& grid) {
  if (g.size() != grid.size()) throw std::invalid_argument("strain: pose field size mismatch");
  TwistField mid(grid.size() - 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    try {
      mid[i] = log_se3(compose(inverse(g[i]), g[i + 1])) / grid.dz();
    } catch (const SingularInput&) {
      throw MeshTooCoarse("strain: sections " + std::to_string(i) + " and " +
                          std::to_string(i + 1) +
                          " are rotated by nearly pi relative to each other; refine the mesh");
    }
  }
  return mid;
}

TwistField midpoints_to_nodes(const TwistField& mid) {
  const std::size_t n = mid.size() + 1;
  TwistField out(n);
  out[0] = mid.front();
  out[n - 1] = mid.back();
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = 0.5 * (mid[i - 1] + mid[i]);
  return out;
}

TwistField strain(const PoseField& g, const Grid& grid) {
  return midpoints_to_nodes(strain_midpoints(g, grid));
}

void apply_free_free(TwistField& xi) {
  xi.front() = Twistd::Zero();
  xi.back() = Twistd::Zero();
}

Twistd apply_H(std::size_t i, const Twistd& xi, const StiffnessLaw& law) {
  return Twistd(Vec6(law.H(i) * xi.coeffs()));
}

double elastic_energy(const TwistField& xi, const StiffnessLaw& law,
                      const RodProperties& props, const Grid& grid) {
  TwistField Hxi(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) Hxi[i] = apply_H(i, xi[i], law);
  return 0.5 * metric_e(Hxi, xi, props, grid);
}

double dU(const PoseField& g, const TwistField& Z, const StiffnessLaw& law,
          const RodProperties& props, const Grid& grid) {
  const std::size_t n = grid.size();
  if (Z.size() != n) throw std::invalid_argument("dU: variation field size mismatch");
  TwistField dmid(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const Posed rel = compose(inverse(g[j]), g[j + 1]);
    Twistd X;
    try {
      X = log_se3(rel);
    } catch (const SingularInput&) {
      throw MeshTooCoarse("dU: relative rotation near pi between nodes " + std::to_string(j) +
                          " and " + std::to_string(j + 1));
    }
    const Twistd Y = Z[j + 1] - adjoint(inverse(rel), Z[j]);
    dmid[j] = Twistd(Vec6(right_jacobian(X).partialPivLu().solve(Y.coeffs()))) / grid.dz();
  }
  const TwistField dxi = midpoints_to_nodes(dmid);
  const TwistField xi = strain(g, grid);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += grid.weight(i) * inner_z(i, apply_H(i, xi[i], law), dxi[i], props);
  }
  return s;
}

TwistField sbp_derivative(const TwistField& f, const Grid& grid) {
  const std::size_t n = f.size();
  const double h = grid.dz();
  TwistField d(n);
  d[0] = (f[1] - f[0]) / h;
  d[n - 1] = (f[n - 1] - f[n - 2]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  return d;
}

double dU_sbp(const TwistField& xi, const TwistField& Z, const StiffnessLaw& law,
                const RodProperties& props, const Grid& grid) {
  const TwistField dZ = sbp_derivative(Z, grid);
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Twistd variation = dZ[i] + bracket(xi[i], Z[i]);
    s += grid.weight(i) * inner_z(i, variation, apply_H(i, xi[i], law), props);
  }
  return s;
}

double dU_by_parts(const TwistField& xi, const TwistField& Z, const StiffnessLaw& law,
                    const RodProperties& props, const Grid& grid) {
  const std::size_t n = grid.size();
  TwistField wrench(n);  // A ℋ ξ
  for (std::size_t i = 0; i < n; ++i) wrench[i] = inertia_A(i, apply_H(i, xi[i], law), props);
  const TwistField dwrench = sbp_derivative(wrench, grid);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Twistd coadjoint = inertia_A_inv(i, bracket(wrench[i], xi[i]), props);
    s += grid.weight(i) * (inner_z(i, coadjoint, Z[i], props) - klein(dwrench[i], Z[i]));
  }
  s += klein(wrench[n - 1], Z[n - 1]) - klein(wrench[0], Z[0]);
  return s;
}

}  // namespace snake
