#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "drzero/core.hpp"

namespace drzero {

/// Closed interval of the real line, possibly unbounded.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval all() { return Interval{}; }
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/// A set of (sub)gradients. One-dimensional sets are closed intervals
/// (possibly empty, degenerate, or unbounded); higher dimensions support
/// singletons, origin-centered balls and the whole space. That is enough to
/// represent every set the built-in families produce.
class SubdiffSet {
 public:
  enum class Kind { Empty, Point, Interval1D, Ball, FullSpace };

  static SubdiffSet empty() { return SubdiffSet(Kind::Empty); }
  static SubdiffSet point(Vector g) {
    SubdiffSet s(Kind::Point);
    s.point_ = std::move(g);
    return s;
  }
  static SubdiffSet point1(double g) {
    Vector v(1);
    v(0) = g;
    return point(std::move(v));
  }
  static SubdiffSet interval(double lo, double hi) {
    SubdiffSet s(Kind::Interval1D);
    s.lo_ = lo;
    s.hi_ = hi;
    return s;
  }
  static SubdiffSet ball(int dim, double radius) {
    SubdiffSet s(Kind::Ball);
    s.dim_ = dim;
    s.radius_ = radius;
    return s;
  }
  static SubdiffSet full(int dim) {
    SubdiffSet s(Kind::FullSpace);
    s.dim_ = dim;
    return s;
  }

  Kind kind() const { return kind_; }
  bool is_empty() const { return kind_ == Kind::Empty; }
  bool is_singleton() const {
    return kind_ == Kind::Point || (kind_ == Kind::Interval1D && lo_ == hi_);
  }

  /// The unique element of a singleton set.
  Vector singleton_value() const;

  double interval_lo() const { return lo_; }
  double interval_hi() const { return hi_; }

  bool contains_zero(double tol = 0.0) const;

  /// Distance from `target` to the affine image {base + scale * g : g in set}.
  /// Empty sets give +infinity.
  double affine_distance(const Vector& target, const Vector& base, double scale) const;

 private:
  explicit SubdiffSet(Kind k) : kind_(k) {}
  Kind kind_;
  double lo_ = 0.0, hi_ = 0.0;
  double radius_ = 0.0;
  int dim_ = 1;
  Vector point_;
};

enum class Family {
  Linear,              // f(x) = alpha*x - beta
  Exponential,         // f(x) = alpha*exp(x) - beta
  PowerNorm,           // f(x) = alpha*|x|^p on R^n
  SignedPower,         // f(x) = alpha*|x|^p*sgn(x) on R
  Circle,              // f(x) = alpha - beta*sqrt(1 - x^2), the lower arc of
                       // the ellipse x^2 + ((rho-alpha)/beta)^2 = 1
  PiecewiseNonconvex,  // f(x) = x^p for x >= 0, x for x < 0 (p > 1)
  PiecewiseConvex,     // f(x) = -1 for x <= 0, x^2/2 - 1 for x > 0
  Custom,
};

std::string family_name(Family f);

/// Hooks for user-supplied targets. `eval` and `subdiff` are mandatory,
/// derivatives optional. No numerical subdifferential estimation is attempted
/// on the user's behalf.
struct CustomFunction {
  int dimension = 1;
  Interval domain = Interval::all();
  std::function<double(const Vector&)> eval;
  std::function<SubdiffSet(const Vector&)> subdiff;
  std::function<Vector(const Vector&)> grad;   // optional
  std::function<Matrix(const Vector&)> hess;   // optional
  std::vector<Vector> zeros;                   // optional
};

/// A zero-finding target: the function f, its derivatives and symmetric
/// subdifferential, its domain, known zeros, and (for the built-in catalogue)
/// the closed-form convex antiderivative F used by the Lyapunov machinery.
///
/// Values are immutable after construction; every method is const and
/// thread-safe.
class FunctionModel {
 public:
  static FunctionModel linear(double alpha, double beta);
  static FunctionModel exponential(double alpha, double beta);
  static FunctionModel power_norm(double alpha, double p, int dimension);
  static FunctionModel signed_power(double alpha, double p);
  static FunctionModel circle(double alpha, double beta);
  static FunctionModel piecewise_nonconvex(double p);
  static FunctionModel piecewise_convex();
  static FunctionModel custom(CustomFunction fn);

  /// Parse from a JSON object such as {"family":"exponential","alpha":0.1,
  /// "beta":1.0}. Unknown fields are rejected.
  static FunctionModel from_json(const nlohmann::json& spec);
  nlohmann::json to_json() const;

  Family family() const { return family_; }
  int dimension() const { return dim_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double power() const { return power_; }

  /// Domain of f, applied per coordinate.
  Interval domain() const { return domain_; }
  bool in_domain(const Vector& x, double tol = 0.0) const;

  double evaluate(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Matrix hessian(const Vector& x) const;

  bool differentiable_at(const Vector& x) const;
  bool twice_differentiable_at(const Vector& x) const;
  bool locally_lipschitz_at(const Vector& x) const;

  /// Symmetric subdifferential (lower and upper limiting subdifferentials
  /// combined). At smooth points this is the gradient singleton.
  SubdiffSet symmetric_subdifferential(const Vector& x) const;
  /// Lower limiting subdifferential (interval hull at kinks).
  SubdiffSet lower_subdifferential(const Vector& x) const;
  /// Upper limiting subdifferential (interval hull at kinks).
  SubdiffSet upper_subdifferential(const Vector& x) const;
  /// The gradient set used by the projection certificate. Differs from
  /// symmetric_subdifferential only at non-smooth points where the reported
  /// representation is conventional (e.g. PowerNorm at 0 with p <= 1).
  SubdiffSet certificate_subdifferential(const Vector& x) const;

  std::vector<Vector> known_zeros() const;

  // Lyapunov antiderivative F with F' = f/f' (closed form, built-ins only).
  bool has_lyapunov_potential() const;
  /// True when x lies in the set D on which F is convex and finite.
  bool in_lyapunov_domain(const Vector& x) const;
  std::string lyapunov_domain_description() const;
  double lyapunov_potential(const Vector& x) const;
  Vector lyapunov_potential_gradient(const Vector& x) const;

  // Scalar fast paths for dimension-1 models (used by the projection search).
  double value1(double x) const;
  double grad1(double x) const;
  double hess1(double x) const;

  /// Abscissas where f is not differentiable (within the domain interior).
  std::vector<double> kink_points() const;

 private:
  FunctionModel() = default;
  void require_dim(const Vector& x) const;

  Family family_ = Family::Custom;
  int dim_ = 1;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double power_ = 0.0;
  Interval domain_ = Interval::all();
  CustomFunction custom_;
};

}  // namespace drzero
