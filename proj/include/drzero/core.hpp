#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace drzero {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class for all library errors. `code()` is a stable identifier used
/// for machine-readable error reporting on the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error("DomainError", w) {}
};
struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& w) : Error("Unsupported", w) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& w) : Error("ValidationError", w) {}
};
struct SearchFailureError : Error {
  explicit SearchFailureError(const std::string& w) : Error("SearchFailure", w) {}
};
struct SingularUpdateError : Error {
  explicit SingularUpdateError(const std::string& w) : Error("SingularUpdate", w) {}
};
struct SingularJacobianError : Error {
  explicit SingularJacobianError(const std::string& w) : Error("SingularJacobian", w) {}
};
struct DerivativeSingularError : Error {
  explicit DerivativeSingularError(const std::string& w) : Error("DerivativeSingular", w) {}
};
struct InsufficientTailError : Error {
  explicit InsufficientTailError(const std::string& w) : Error("InsufficientTail", w) {}
};

/// A point z = (x, rho) of the product space X x R, with X = R^n.
struct ProductPoint {
  Vector x;
  double rho = 0.0;

  ProductPoint() : x(Vector::Zero(1)) {}
  ProductPoint(Vector x_in, double rho_in) : x(std::move(x_in)), rho(rho_in) {}

  /// Convenience constructor for the one-dimensional case.
  static ProductPoint scalar(double x_value, double rho_value) {
    Vector v(1);
    v(0) = x_value;
    return ProductPoint(std::move(v), rho_value);
  }

  int dimension() const { return static_cast<int>(x.size()); }

  bool all_finite() const {
    if (!std::isfinite(rho)) return false;
    return x.allFinite();
  }
};

/// Euclidean norm on the product space, sqrt(|x|^2 + rho^2).
inline double product_norm(const ProductPoint& z) {
  return std::sqrt(z.x.squaredNorm() + z.rho * z.rho);
}

inline double product_distance(const ProductPoint& a, const ProductPoint& b) {
  return std::sqrt((a.x - b.x).squaredNorm() + (a.rho - b.rho) * (a.rho - b.rho));
}

/// Projector onto the hyperplane X x {0}: (x, rho) -> (x, 0).
inline ProductPoint project_zero_level(const ProductPoint& z) {
  return ProductPoint(z.x, 0.0);
}

/// Reflector across X x {0}: (x, rho) -> (x, -rho).
inline ProductPoint reflect_zero_level(const ProductPoint& z) {
  return ProductPoint(z.x, -z.rho);
}

/// Shared numeric knobs. All tolerances are strictly positive.
struct NumericConfig {
  double step_tolerance = 1e-9;
  double residual_tolerance = 1e-9;
  int max_iterations = 1000;
  int projection_grid_points = 4097;
  double projection_refine_tolerance = 1e-12;

  void validate() const {
    if (!(step_tolerance > 0.0)) throw ValidationError("step_tolerance must be > 0");
    if (!(residual_tolerance > 0.0)) throw ValidationError("residual_tolerance must be > 0");
    if (max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
    if (projection_grid_points < 3) throw ValidationError("projection_grid_points must be >= 3");
    if (!(projection_refine_tolerance > 0.0))
      throw ValidationError("projection_refine_tolerance must be > 0");
  }
};

/// Iterates with norm beyond this are treated as divergent.
inline constexpr double kDivergenceGuard = 1e12;

}  // namespace drzero
