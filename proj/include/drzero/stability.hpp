#pragma once

#include <optional>

#include "drzero/core.hpp"
#include "drzero/dr_engine.hpp"
#include "drzero/function_model.hpp"

namespace drzero {

/// Jacobian of the DR inverse at zbar:
///   [ I + rho * hess f(x)   grad f(x) ]
///   [ -grad f(x)^T          1         ]
Matrix dr_inverse_jacobian(const FunctionModel& m, const ProductPoint& zbar);

/// (M + u v^T)^{-1} via the rank-one update formula. Throws SingularUpdate
/// when |1 + v^T M^{-1} u| <= 1e-14.
Matrix sherman_morrison_inverse(const Matrix& M, const Vector& u, const Vector& v);

/// Local stability analysis at an (approximately) fixed point.
struct StabilityReport {
  ProductPoint point;
  Matrix jacobian_T_inverse;
  bool jacobian_nonsingular = false;
  bool psd_condition_holds = false;       // rho * hess f(x) >= 0 up to -1e-10
  double modulus = 0.0;                   // spectral norm of the inverse Jacobian
  std::optional<double> predicted_q_rate; // only for n = 1, rho = 0, f'(x) != 0
};

StabilityReport stability_report(const FunctionModel& m, const ProductPoint& zbar);

}  // namespace drzero
