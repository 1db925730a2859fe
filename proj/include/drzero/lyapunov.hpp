#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drzero/core.hpp"
#include "drzero/dr_engine.hpp"
#include "drzero/function_model.hpp"

namespace drzero {

/// V(x, rho) = F(x) + rho^2 / 2 for the family's closed-form antiderivative F.
double lyapunov_value(const FunctionModel& m, const ProductPoint& z);

/// Sampled verification of the three requirements on F: the derivative
/// identity F' * f' = f on D, coercivity (level-boundedness) of F, and
/// continuity of F at the zeros of f inside D.
struct PotentialAssumptionReport {
  bool derivative_identity = false;
  bool coercive = false;
  bool continuous_at_zeros = false;
  int samples = 0;
  bool all() const { return derivative_identity && coercive && continuous_at_zeros; }
};

PotentialAssumptionReport check_assumption_V(const FunctionModel& m, int sample_count,
                                             std::uint64_t seed);

enum class CertificateVerdict { Certified, DecreaseOnly, Violated };

std::string certificate_verdict_name(CertificateVerdict v);

/// Per-step Lyapunov diagnostics along a DR trajectory. Step n covers the
/// pair (z_n, z_{n+1}); margins and residuals at steps leaving D are recorded
/// but excluded from the verdict.
struct LyapunovCertificate {
  std::vector<double> decrease_margins;        // V(z_n)-V(z_{n+1}) - (rho_n-rho_{n+1})^2/2
  std::vector<double> orthogonality_residuals; // |<(F'(x_{n+1}), rho_{n+1}), z_n - z_{n+1}>|
  std::vector<bool> in_domain;                 // x_n in D, per iterate
  int first_stable_index = -1;                 // first n with x_k in D for all k >= n
  CertificateVerdict verdict = CertificateVerdict::Violated;
};

LyapunovCertificate check_trajectory(const FunctionModel& m, const Trajectory& t);

}  // namespace drzero
