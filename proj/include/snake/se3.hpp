#pragma once

// Pointwise SE(3) / se(3) kernel.
//
// Conventions
// -----------
// Twist coordinates are ordered (angular, linear) = (ω, v). A twist V is the
// matrix
//
//   [ hat(ω)  v ]
//   [   0     0 ]
//
// and acts on a point p as the velocity field V(p) = ω × p + v.
// A pose g = (R, u) acts affinely as g(x) = R x + u.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace snake {

template <typename Scalar> using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Vector6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar> using Matrix6 = Eigen::Matrix<Scalar, 6, 6>;

using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;
using Vec6 = Vector6<double>;
using Mat6 = Matrix6<double>;

namespace tol {
inline constexpr double kSkew = 1e-10;        // vee / Maurer–Cartan skewness check
inline constexpr double kRotation = 1e-10;    // RᵀR = I, det R = 1
inline constexpr double kSmallAngle = 1e-2;   // Taylor branch for exp/log coefficients
inline constexpr double kLogMargin = 1e-6;    // log rejects angles above π − margin
}  // namespace tol

/// Raised when a pointwise operation is asked to evaluate at a singular input.
class SingularInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Twist
// ---------------------------------------------------------------------------

/// Element of se(3), stored as the coefficient vector (ω, v).
template <typename Scalar>
class Twist {
 public:
  using Coeffs = Vector6<Scalar>;

  Twist() : c_(Coeffs::Zero()) {}
  Twist(const Vector3<Scalar>& angular, const Vector3<Scalar>& linear) {
    c_ << angular, linear;
  }
  explicit Twist(const Coeffs& c) : c_(c) {}

  static Twist Zero() { return Twist(); }
  static Twist Unit(Eigen::Index k) { return Twist(Coeffs::Unit(k)); }

  auto angular() { return c_.template head<3>(); }
  auto angular() const { return c_.template head<3>(); }
  auto linear() { return c_.template tail<3>(); }
  auto linear() const { return c_.template tail<3>(); }

  Coeffs& coeffs() { return c_; }
  const Coeffs& coeffs() const { return c_; }
  Scalar operator[](Eigen::Index k) const { return c_[k]; }
  Scalar& operator[](Eigen::Index k) { return c_[k]; }

  Scalar norm() const { return c_.norm(); }
  bool allFinite() const { return c_.allFinite(); }
  bool isZero() const { return (c_.array() == Scalar(0)).all(); }

  Twist& operator+=(const Twist& o) { c_ += o.c_; return *this; }
  Twist& operator-=(const Twist& o) { c_ -= o.c_; return *this; }
  Twist& operator*=(Scalar s) { c_ *= s; return *this; }

  friend Twist operator+(Twist a, const Twist& b) { return a += b; }
  friend Twist operator-(Twist a, const Twist& b) { return a -= b; }
  friend Twist operator-(const Twist& a) { return Twist(Coeffs(-a.c_)); }
  friend Twist operator*(Twist a, Scalar s) { return a *= s; }
  friend Twist operator*(Scalar s, Twist a) { return a *= s; }
  friend Twist operator/(Twist a, Scalar s) { return a *= Scalar(1) / s; }
  friend bool operator==(const Twist& a, const Twist& b) { return a.c_ == b.c_; }

  template <typename Other>
  Twist<Other> cast() const { return Twist<Other>(c_.template cast<Other>()); }

  /// Velocity of the point p under this twist: ω × p + v.
  Vector3<Scalar> at(const Vector3<Scalar>& p) const {
    return angular().cross(p) + linear();
  }

 private:
  Coeffs c_;
};

// ---------------------------------------------------------------------------
// Pose
// ---------------------------------------------------------------------------

/// Element of SE(3): rotation R and translation u.
template <typename Scalar>
class Pose {
 public:
  Pose() : R_(Matrix3<Scalar>::Identity()), u_(Vector3<Scalar>::Zero()) {}
  Pose(const Matrix3<Scalar>& R, const Vector3<Scalar>& u) : R_(R), u_(u) {}

  static Pose Identity() { return Pose(); }
  static Pose Translation(const Vector3<Scalar>& u) {
    return Pose(Matrix3<Scalar>::Identity(), u);
  }
  static Pose Rotation(const Matrix3<Scalar>& R) {
    return Pose(R, Vector3<Scalar>::Zero());
  }

  const Matrix3<Scalar>& rotation() const { return R_; }
  Matrix3<Scalar>& rotation() { return R_; }
  const Vector3<Scalar>& translation() const { return u_; }
  Vector3<Scalar>& translation() { return u_; }

  Eigen::Matrix<Scalar, 4, 4> matrix() const {
    Eigen::Matrix<Scalar, 4, 4> m = Eigen::Matrix<Scalar, 4, 4>::Identity();
    m.template topLeftCorner<3, 3>() = R_;
    m.template topRightCorner<3, 1>() = u_;
    return m;
  }

  bool allFinite() const { return R_.allFinite() && u_.allFinite(); }

 private:
  Matrix3<Scalar> R_;
  Vector3<Scalar> u_;
};

using Twistd = Twist<double>;
using Posed = Pose<double>;

// ---------------------------------------------------------------------------
// so(3) <-> R³
// ---------------------------------------------------------------------------

/// Skew matrix with hat(ω) x = ω × x.
template <typename Derived>
Matrix3<typename Derived::Scalar> hat(const Eigen::MatrixBase<Derived>& w) {
  using S = typename Derived::Scalar;
  Matrix3<S> m;
  // clang-format off
  m << S(0), -w(2),  w(1),
        w(2), S(0), -w(0),
       -w(1),  w(0), S(0);
  // clang-format on
  return m;
}

/// Inverse of hat. Throws std::invalid_argument on non-skew input.
template <typename Derived>
Vector3<typename Derived::Scalar> vee(const Eigen::MatrixBase<Derived>& A,
                                      double tolerance = tol::kSkew) {
  using std::abs;
  const auto sym = (A + A.transpose()).norm();
  if (!(abs(double(sym)) <= tolerance)) {
    throw std::invalid_argument("vee: matrix is not skew-symmetric (|A + Aᵀ| = " +
                                std::to_string(double(sym)) + ")");
  }
  return Vector3<typename Derived::Scalar>(A(2, 1), A(0, 2), A(1, 0));
}

template <typename Scalar>
bool is_rotation(const Matrix3<Scalar>& R, double tolerance = tol::kRotation) {
  using std::abs;
  const double orth = double((R.transpose() * R - Matrix3<Scalar>::Identity()).norm());
  const double det = double(R.determinant());
  return orth <= tolerance && abs(det - 1.0) <= tolerance;
}

template <typename Scalar>
bool is_valid(const Pose<Scalar>& g, double tolerance = tol::kRotation) {
  return g.allFinite() && is_rotation(g.rotation(), tolerance);
}

// ---------------------------------------------------------------------------
// Group operations
// ---------------------------------------------------------------------------

template <typename Scalar>
Pose<Scalar> compose(const Pose<Scalar>& a, const Pose<Scalar>& b) {
  return Pose<Scalar>(a.rotation() * b.rotation(),
                      a.translation() + a.rotation() * b.translation());
}

template <typename Scalar>
Pose<Scalar> inverse(const Pose<Scalar>& g) {
  Matrix3<Scalar> Rt = g.rotation().transpose();
  return Pose<Scalar>(Rt, -(Rt * g.translation()));
}

template <typename Scalar>
Pose<Scalar> operator*(const Pose<Scalar>& a, const Pose<Scalar>& b) {
  return compose(a, b);
}

template <typename Scalar>
Vector3<Scalar> act(const Pose<Scalar>& g, const Vector3<Scalar>& x) {
  return g.rotation() * x + g.translation();
}

/// Ad_g V = (R ω, R v + u × R ω).
template <typename Scalar>
Twist<Scalar> adjoint(const Pose<Scalar>& g, const Twist<Scalar>& V) {
  const Vector3<Scalar> w = g.rotation() * V.angular();
  return Twist<Scalar>(w, g.rotation() * V.linear() + g.translation().cross(w));
}

/// Ad_g as a 6×6 matrix in (ω, v) coordinates.
template <typename Scalar>
Matrix6<Scalar> adjoint_matrix(const Pose<Scalar>& g) {
  Matrix6<Scalar> m = Matrix6<Scalar>::Zero();
  m.template topLeftCorner<3, 3>() = g.rotation();
  m.template bottomRightCorner<3, 3>() = g.rotation();
  m.template bottomLeftCorner<3, 3>() = hat(g.translation()) * g.rotation();
  return m;
}

// ---------------------------------------------------------------------------
// Algebra operations
// ---------------------------------------------------------------------------

/// [V, W] = (ω_V × ω_W, ω_V × w − ω_W × v).
template <typename Scalar>
Twist<Scalar> bracket(const Twist<Scalar>& V, const Twist<Scalar>& W) {
  return Twist<Scalar>(V.angular().cross(W.angular()),
                       V.angular().cross(W.linear()) - W.angular().cross(V.linear()));
}

/// ad_V as a 6×6 matrix: ad_V W = [V, W].
template <typename Scalar>
Matrix6<Scalar> ad_matrix(const Twist<Scalar>& V) {
  Matrix6<Scalar> m = Matrix6<Scalar>::Zero();
  const Matrix3<Scalar> w = hat(V.angular());
  m.template topLeftCorner<3, 3>() = w;
  m.template bottomRightCorner<3, 3>() = w;
  m.template bottomLeftCorner<3, 3>() = hat(V.linear());
  return m;
}

/// Klein form 𝔨(V, W) = v·ω_W + w·ω_V. Symmetric, indefinite, Ad-invariant.
template <typename Scalar>
Scalar klein(const Twist<Scalar>& V, const Twist<Scalar>& W) {
  return V.linear().dot(W.angular()) + W.linear().dot(V.angular());
}

/// Gram matrix of the Klein form: 𝔨(V, W) = Vᵀ J W.
template <typename Scalar = double>
Matrix6<Scalar> klein_matrix() {
  Matrix6<Scalar> J = Matrix6<Scalar>::Zero();
  J.template topRightCorner<3, 3>().setIdentity();
  J.template bottomLeftCorner<3, 3>().setIdentity();
  return J;
}

/// Left Maurer–Cartan form at g applied to the tangent vector (Ṙ, u̇):
/// (vee(RᵀṘ), Rᵀu̇).
template <typename Scalar>
Twist<Scalar> maurer_cartan(const Pose<Scalar>& g, const Matrix3<Scalar>& Rdot,
                            const Vector3<Scalar>& udot, double tolerance = 1e-8) {
  const Matrix3<Scalar> Rt = g.rotation().transpose();
  return Twist<Scalar>(vee(Rt * Rdot, tolerance), Rt * udot);
}

// ---------------------------------------------------------------------------
// exp / log
// ---------------------------------------------------------------------------

namespace detail {

// Coefficients of the Rodrigues-type series
//   a = sin θ / θ,  b = (1 − cos θ) / θ²,  c = (θ − sin θ) / θ³.
template <typename Scalar>
void rodrigues_coefficients(Scalar theta2, Scalar& a, Scalar& b, Scalar& c) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const Scalar theta = sqrt(theta2);
  if (theta < Scalar(tol::kSmallAngle)) {
    // truncated after θ⁶; the next term is below 1e-16 relative at the cutoff
    const Scalar t4 = theta2 * theta2, t6 = t4 * theta2;
    a = Scalar(1) - theta2 / Scalar(6) + t4 / Scalar(120) - t6 / Scalar(5040);
    b = Scalar(0.5) - theta2 / Scalar(24) + t4 / Scalar(720) - t6 / Scalar(40320);
    c = Scalar(1) / Scalar(6) - theta2 / Scalar(120) + t4 / Scalar(5040) - t6 / Scalar(362880);
  } else {
    const Scalar s = sin(theta);
    a = s / theta;
    b = (Scalar(1) - cos(theta)) / theta2;
    c = (theta - s) / (theta2 * theta);
  }
}

}  // namespace detail

template <typename Scalar>
Pose<Scalar> exp_se3(const Twist<Scalar>& V) {
  const Vector3<Scalar> w = V.angular();
  Scalar a, b, c;
  detail::rodrigues_coefficients(w.squaredNorm(), a, b, c);
  const Matrix3<Scalar> W = hat(w);
  const Matrix3<Scalar> W2 = W * W;
  const Matrix3<Scalar> I = Matrix3<Scalar>::Identity();
  const Matrix3<Scalar> R = I + a * W + b * W2;
  const Matrix3<Scalar> Vm = I + b * W + c * W2;
  return Pose<Scalar>(R, Vm * V.linear());
}

/// Rotation angle of R in [0, π].
template <typename Scalar>
Scalar rotation_angle(const Matrix3<Scalar>& R) {
  using std::atan2;
  const Vector3<Scalar> s(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  return atan2(Scalar(0.5) * s.norm(), Scalar(0.5) * (R.trace() - Scalar(1)));
}

/// Principal logarithm. Throws SingularInput when the rotation angle is within
/// tol::kLogMargin of π.
template <typename Scalar>
Twist<Scalar> log_se3(const Pose<Scalar>& g) {
  using std::cos;
  using std::sin;
  const Matrix3<Scalar>& R = g.rotation();
  const Scalar theta = rotation_angle(R);
  if (double(theta) > std::numbers::pi - tol::kLogMargin) {
    throw SingularInput("log_se3: rotation angle " + std::to_string(double(theta)) +
                        " is too close to pi");
  }
  const Vector3<Scalar> s(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  const Scalar theta2 = theta * theta;
  Scalar half_theta_over_sin, d;
  if (theta < Scalar(tol::kSmallAngle)) {
    const Scalar t4 = theta2 * theta2, t6 = t4 * theta2;
    half_theta_over_sin = Scalar(0.5) + theta2 / Scalar(12) + Scalar(7) * t4 / Scalar(720) +
                          Scalar(31) * t6 / Scalar(30240);
    d = Scalar(1) / Scalar(12) + theta2 / Scalar(720) + t4 / Scalar(30240) + t6 / Scalar(1209600);
  } else {
    const Scalar st = sin(theta);
    const Scalar half = Scalar(0.5) * theta;
    half_theta_over_sin = half / st;
    d = (Scalar(1) - half * cos(half) / sin(half)) / theta2;
  }
  const Vector3<Scalar> w = half_theta_over_sin * s;
  const Matrix3<Scalar> W = hat(w);
  const Matrix3<Scalar> Vinv = Matrix3<Scalar>::Identity() - Scalar(0.5) * W + d * W * W;
  return Twist<Scalar>(w, Vinv * g.translation());
}

/// Right Jacobian of exp: d/dε exp(X + εY)|₀ = exp(X) · (J_r(X) Y)^,
/// J_r(X) = Σ_k (−ad_X)^k / (k+1)!.
template <typename Scalar>
Matrix6<Scalar> right_jacobian(const Twist<Scalar>& X) {
  const Matrix6<Scalar> mad = -ad_matrix(X);
  Matrix6<Scalar> term = Matrix6<Scalar>::Identity();
  Matrix6<Scalar> sum = term;
  for (int k = 1; k < 60; ++k) {
    term = (mad * term) / Scalar(k + 1);
    sum += term;
    if (double(term.template lpNorm<Eigen::Infinity>()) < 1e-18) break;
  }
  return sum;
}

}  // namespace snake
