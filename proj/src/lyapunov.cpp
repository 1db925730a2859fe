#include "drzero/lyapunov.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace drzero {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string certificate_verdict_name(CertificateVerdict v) {
  switch (v) {
    case CertificateVerdict::Certified: return "certified";
    case CertificateVerdict::DecreaseOnly: return "decrease_only";
    case CertificateVerdict::Violated: return "violated";
  }
  return "unknown";
}

double lyapunov_value(const FunctionModel& m, const ProductPoint& z) {
  return m.lyapunov_potential(z.x) + 0.5 * z.rho * z.rho;
}

namespace {

// Draw a point of the antiderivative domain D, away from its singular edges.
Vector sample_domain_point(const FunctionModel& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (m.family()) {
    case Family::Circle: {
      const double mag = 1e-3 + unit(rng) * (1.0 - 2e-3 - 1e-3);
      Vector v(1);
      v(0) = unit(rng) < 0.5 ? -mag : mag;
      return v;
    }
    case Family::PiecewiseConvex: {
      Vector v(1);
      v(0) = 1e-3 + unit(rng) * 8.0;
      return v;
    }
    default: {
      Vector v(m.dimension());
      for (int i = 0; i < m.dimension(); ++i) v(i) = -8.0 + 16.0 * unit(rng);
      // keep clear of the kink/origin where derivatives may not exist
      if (v.norm() < 1e-3) v(0) += 0.5;
      return v;
    }
  }
}

bool probe_coercive(const FunctionModel& m) {
  const auto zeros = m.known_zeros();
  double fmax_at_zero = -std::numeric_limits<double>::infinity();
  for (const auto& z : zeros)
    if (m.in_lyapunov_domain(z)) fmax_at_zero = std::max(fmax_at_zero, m.lyapunov_potential(z));

  auto value1_at = [&](double v) {
    Vector x = Vector::Zero(m.dimension());
    x(0) = v;
    return m.lyapunov_potential(x);
  };

  switch (m.family()) {
    case Family::Circle: {
      // D is bounded, so level sets are automatically bounded; the log
      // barrier at 0 must still grow monotonically.
      const double a = value1_at(1e-1), b = value1_at(1e-2), c = value1_at(1e-3);
      return a < b && b < c;
    }
    case Family::PiecewiseConvex: {
      const double b1 = value1_at(1e-1), b2 = value1_at(1e-2), b3 = value1_at(1e-3);
      double prev = fmax_at_zero;
      for (double R : {10.0, 100.0, 1000.0}) {
        const double v = value1_at(R);
        if (!(v > prev)) return false;
        prev = v;
      }
      return b1 < b2 && b2 < b3;
    }
    default: {
      double prev = fmax_at_zero;
      for (double R : {10.0, 100.0, 1000.0}) {
        const double v = std::min(value1_at(R), value1_at(-R));
        if (!(v > prev)) return false;
        prev = v;
      }
      return true;
    }
  }
}

}  // namespace

PotentialAssumptionReport check_assumption_V(const FunctionModel& m, int sample_count,
                                             std::uint64_t seed) {
  if (!m.has_lyapunov_potential())
    throw UnsupportedError("check_assumption_V: no closed-form antiderivative");
  PotentialAssumptionReport rep;
  rep.samples = sample_count;
  std::mt19937_64 rng(seed);

  // (a) F' f' = f on D (n-dimensional form: grad F = f grad f / |grad f|^2).
  bool identity_ok = true;
  for (int s = 0; s < sample_count; ++s) {
    const Vector x = sample_domain_point(m, rng);
    if (!m.differentiable_at(x)) continue;
    const double fx = m.evaluate(x);
    const Vector g = m.gradient(x);
    const Vector Fg = m.lyapunov_potential_gradient(x);
    if (m.dimension() == 1) {
      if (std::fabs(Fg(0) * g(0) - fx) > 1e-7 * (1.0 + std::fabs(fx))) identity_ok = false;
    } else {
      const double gn2 = g.squaredNorm();
      if (gn2 == 0.0) continue;
      if ((Fg - (fx / gn2) * g).norm() > 1e-7 * (1.0 + std::fabs(fx))) identity_ok = false;
    }
  }
  rep.derivative_identity = identity_ok;

  // (b) coercivity / level-boundedness of F on D.
  rep.coercive = probe_coercive(m);

  // (c) continuity of F at the zeros of f inside D.
  bool cont_ok = true;
  for (const auto& z : m.known_zeros()) {
    if (!m.in_lyapunov_domain(z)) continue;
    const double Fz = m.lyapunov_potential(z);
    if (!std::isfinite(Fz)) {
      cont_ok = false;
      continue;
    }
    const double slope = m.lyapunov_potential_gradient(z).norm();
    for (double h : {1e-4, -1e-4}) {
      Vector xh = z;
      xh(0) += h;
      if (!m.in_lyapunov_domain(xh)) continue;
      if (std::fabs(m.lyapunov_potential(xh) - Fz) > 10.0 * std::fabs(h) * (1.0 + slope) + 1e-12)
        cont_ok = false;
    }
  }
  rep.continuous_at_zeros = cont_ok;
  return rep;
}

LyapunovCertificate check_trajectory(const FunctionModel& m, const Trajectory& t) {
  if (!m.has_lyapunov_potential())
    throw UnsupportedError("check_trajectory: no closed-form antiderivative");
  LyapunovCertificate cert;
  const int count = static_cast<int>(t.iterates.size());
  cert.in_domain.resize(count);
  for (int i = 0; i < count; ++i)
    cert.in_domain[i] = m.in_domain(t.iterates[i].x, 1e-12) && m.in_lyapunov_domain(t.iterates[i].x);

  cert.first_stable_index = -1;
  for (int i = count - 1; i >= 0; --i) {
    if (!cert.in_domain[i]) break;
    cert.first_stable_index = i;
  }

  const int steps = t.steps();
  cert.decrease_margins.assign(steps, kNaN);
  cert.orthogonality_residuals.assign(steps, kNaN);

  bool decrease_ok = true;
  bool orthogonality_ok = true;
  for (int n = 0; n < steps; ++n) {
    if (!cert.in_domain[n] || !cert.in_domain[n + 1]) continue;
    const ProductPoint& z0 = t.iterates[n];
    const ProductPoint& z1 = t.iterates[n + 1];
    const double drho = z0.rho - z1.rho;
    const double margin =
        lyapunov_value(m, z0) - lyapunov_value(m, z1) - 0.5 * drho * drho;
    cert.decrease_margins[n] = margin;

    // F'(x) = f(x)/f'(x) vanishes at zeros of f, so the closed-form gradient
    // realizes the zero-subgradient branch automatically.
    const Vector Fg = m.lyapunov_potential_gradient(z1.x);
    const double residual = std::fabs(Fg.dot(z0.x - z1.x) + z1.rho * drho);
    cert.orthogonality_residuals[n] = residual;

    if (cert.first_stable_index >= 0 && n >= cert.first_stable_index) {
      if (!(margin >= -1e-9)) decrease_ok = false;
      if (!(residual <= 1e-6 * (1.0 + t.step_norms[n]))) orthogonality_ok = false;
    }
  }

  if (!decrease_ok)
    cert.verdict = CertificateVerdict::Violated;
  else if (!orthogonality_ok)
    cert.verdict = CertificateVerdict::DecreaseOnly;
  else
    cert.verdict = CertificateVerdict::Certified;
  return cert;
}

}  // namespace drzero
