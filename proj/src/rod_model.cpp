#include "snake/rod_model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace snake {

Grid::Grid(std::size_t n_nodes, double length) : n_(n_nodes), length_(length) {
  if (n_nodes < 3) {
    throw std::invalid_argument("grid needs at least 3 nodes, got " + std::to_string(n_nodes));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("rod length must be positive and finite");
  }
  dz_ = length / double(n_nodes - 1);
}

std::vector<Vec3> reference_curve(ReferenceCurve kind, const Grid& grid) {
  std::vector<Vec3> p(grid.size(), Vec3::Zero());
  if (kind == ReferenceCurve::Straight) {
    for (std::size_t i = 0; i < grid.size(); ++i) p[i] = Vec3(0.0, 0.0, grid.z(i));
  }
  return p;
}

void RodProperties::validate(const Grid& grid) const {
  const std::size_t n = grid.size();
  if (mass.size() != n || inertia.size() != n || p0.size() != n) {
    throw std::invalid_argument("rod properties: per-node arrays must have " +
                                std::to_string(n) + " entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string at = " at node " + std::to_string(i);
    if (!(mass[i] > 0.0) || !std::isfinite(mass[i])) {
      throw std::invalid_argument("rod properties: mass density must be positive" + at);
    }
    const Mat3& I = inertia[i];
    if (!I.allFinite() || !p0[i].allFinite()) {
      throw std::invalid_argument("rod properties: non-finite inertia or reference point" + at);
    }
    if ((I - I.transpose()).norm() > 1e-12 * std::max(1.0, I.norm())) {
      throw std::invalid_argument("rod properties: inertia tensor is not symmetric" + at);
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(I, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > 0.0)) {
      throw std::invalid_argument("rod properties: inertia tensor is not positive definite" + at);
    }
  }
}

RodProperties uniform_properties(double mass, const Mat3& inertia, ReferenceCurve curve,
                                 const Grid& grid) {
  RodProperties props;
  props.mass.assign(grid.size(), mass);
  props.inertia.assign(grid.size(), inertia);
  props.p0 = reference_curve(curve, grid);
  props.validate(grid);
  return props;
}

RodProperties cylinder_properties(double radius, const std::vector<double>& rho0,
                                  const Grid& grid, MassCoefficient coefficient,
                                  ReferenceCurve curve) {
  if (!(radius > 0.0)) throw std::invalid_argument("cylinder radius must be positive");
  if (rho0.size() != grid.size()) {
    throw std::invalid_argument("density profile must have one value per node");
  }
  constexpr double pi = std::numbers::pi;
  const double c = coefficient == MassCoefficient::DoubleArea ? 2.0 : 1.0;
  const double r2 = radius * radius;
  RodProperties props;
  props.p0 = reference_curve(curve, grid);
  for (double rho : rho0) {
    props.mass.push_back(c * pi * r2 * rho);
    const double j = pi * r2 * r2 * rho;
    props.inertia.push_back(Vec3(j / 4.0, j / 4.0, j / 2.0).asDiagonal());
  }
  props.validate(grid);
  return props;
}

double total_mass(const RodProperties& props, const Grid& grid) {
  double m = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) m += grid.weight(i) * props.mass[i];
  return m;
}

double inner_z(std::size_t i, const Twistd& V, const Twistd& W, const RodProperties& props) {
  const Vec3& p = props.p0[i];
  return props.mass[i] * V.at(p).dot(W.at(p)) +
         V.angular().dot(props.inertia[i] * W.angular());
}

double metric_e(const TwistField& V, const TwistField& W, const RodProperties& props,
                const Grid& grid) {
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += grid.weight(i) * inner_z(i, V[i], W[i], props);
  return s;
}

double kinetic_energy(const TwistField& W, const RodProperties& props, const Grid& grid) {
  return 0.5 * metric_e(W, W, props, grid);
}

double klein_field(const TwistField& V, const TwistField& W, const Grid& grid) {
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += grid.weight(i) * klein(V[i], W[i]);
  return s;
}

Twistd inertia_A(std::size_t i, const Twistd& V, const RodProperties& props) {
  const Vec3& p = props.p0[i];
  const Vec3 momentum = props.mass[i] * V.at(p);
  return Twistd(momentum, props.inertia[i] * V.angular() - momentum.cross(p));
}

Twistd inertia_A_inv(std::size_t i, const Twistd& M, const RodProperties& props) {
  const Vec3& p = props.p0[i];
  const Vec3 nu = M.angular() / props.mass[i];
  const Vec3 w = props.inertia[i].ldlt().solve(M.linear() + M.angular().cross(p));
  return Twistd(w, nu - w.cross(p));
}

Mat6 inertia_matrix(std::size_t i, const RodProperties& props) {
  Mat6 A;
  for (int k = 0; k < 6; ++k) A.col(k) = inertia_A(i, Twistd::Unit(k), props).coeffs();
  return A;
}

Mat6 translation_adjoint(const Vec3& c) {
  return adjoint_matrix(Posed::Translation(c));
}

}  // namespace snake
