#include "drzero/stability.hpp"

#include <cmath>

namespace drzero {

Matrix dr_inverse_jacobian(const FunctionModel& m, const ProductPoint& zbar) {
  if (zbar.dimension() != m.dimension())
    throw ValidationError("dr_inverse_jacobian: dimension mismatch");
  if (!m.twice_differentiable_at(zbar.x))
    throw UnsupportedError("dr_inverse_jacobian: f is not twice differentiable here");
  const int n = m.dimension();
  const Vector g = m.gradient(zbar.x);
  const Matrix H = m.hessian(zbar.x);

  Matrix J(n + 1, n + 1);
  J.topLeftCorner(n, n) = Matrix::Identity(n, n) + zbar.rho * H;
  J.topRightCorner(n, 1) = g;
  J.bottomLeftCorner(1, n) = -g.transpose();
  J(n, n) = 1.0;
  return J;
}

Matrix sherman_morrison_inverse(const Matrix& M, const Vector& u, const Vector& v) {
  if (M.rows() != M.cols()) throw ValidationError("sherman_morrison: M must be square");
  if (u.size() != M.rows() || v.size() != M.rows())
    throw ValidationError("sherman_morrison: vector dimensions do not match M");
  Eigen::FullPivLU<Matrix> lu(M);
  if (!lu.isInvertible()) throw ValidationError("sherman_morrison: M is singular");
  const Matrix Minv = lu.inverse();
  const double denom = 1.0 + v.dot(Minv * u);
  if (std::fabs(denom) <= 1e-14)
    throw SingularUpdateError("sherman_morrison: 1 + v^T M^{-1} u vanishes");
  return Minv - (Minv * u) * (v.transpose() * Minv) / denom;
}

StabilityReport stability_report(const FunctionModel& m, const ProductPoint& zbar) {
  StabilityReport r;
  r.point = zbar;
  r.jacobian_T_inverse = dr_inverse_jacobian(m, zbar);
  const Matrix& J = r.jacobian_T_inverse;

  // Conditioning via the symmetric eigenvalues of J^T J.
  Eigen::SelfAdjointEigenSolver<Matrix> jtj(J.transpose() * J);
  const double smin = std::sqrt(std::max(0.0, jtj.eigenvalues().minCoeff()));
  const double smax = std::sqrt(std::max(0.0, jtj.eigenvalues().maxCoeff()));
  if (!(smin > 1e-12 * smax))
    throw SingularJacobianError("stability_report: Jacobian of the DR inverse is singular");
  r.jacobian_nonsingular = true;

  const Matrix M = J.inverse();
  Eigen::SelfAdjointEigenSolver<Matrix> mtm(M.transpose() * M);
  r.modulus = std::sqrt(std::max(0.0, mtm.eigenvalues().maxCoeff()));

  const Matrix S = zbar.rho * m.hessian(zbar.x);
  Eigen::SelfAdjointEigenSolver<Matrix> sev(0.5 * (S + S.transpose()));
  r.psd_condition_holds = sev.eigenvalues().minCoeff() >= -1e-10;

  if (m.dimension() == 1 && std::fabs(zbar.rho) <= 1e-10) {
    const double fp = m.gradient(zbar.x)(0);
    if (std::fabs(fp) > 1e-10) r.predicted_q_rate = r.modulus;
  }
  return r;
}

}  // namespace drzero
