#include "drzero/function_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace drzero {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// |x|^p with integer powers short-circuited; pow() dominates the projection
// scan cost otherwise.
double abs_pow(double x, double p) {
  const double a = std::fabs(x);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  if (p == 3.0) return a * a * a;
  if (p == 1.0 / 3.0) return std::cbrt(a);
  if (p == 0.5) return std::sqrt(a);
  return std::pow(a, p);
}

}  // namespace

Vector SubdiffSet::singleton_value() const {
  if (kind_ == Kind::Point) return point_;
  if (kind_ == Kind::Interval1D && lo_ == hi_) {
    Vector v(1);
    v(0) = lo_;
    return v;
  }
  throw Error("Internal", "singleton_value on a non-singleton set");
}

bool SubdiffSet::contains_zero(double tol) const {
  switch (kind_) {
    case Kind::Empty: return false;
    case Kind::Point: return point_.norm() <= tol;
    case Kind::Interval1D: return lo_ <= tol && hi_ >= -tol;
    case Kind::Ball: return true;
    case Kind::FullSpace: return true;
  }
  return false;
}

double SubdiffSet::affine_distance(const Vector& target, const Vector& base,
                                   double scale) const {
  switch (kind_) {
    case Kind::Empty:
      return kInf;
    case Kind::Point:
      return (target - base - scale * point_).norm();
    case Kind::Interval1D: {
      double a = scale * lo_;
      double b = scale * hi_;
      if (a > b) std::swap(a, b);
      const double t = target(0) - base(0);
      if (t < a) return std::isinf(a) ? 0.0 : a - t;
      if (t > b) return std::isinf(b) ? 0.0 : t - b;
      return 0.0;
    }
    case Kind::Ball: {
      const double d = (target - base).norm();
      return std::max(0.0, d - std::fabs(scale) * radius_);
    }
    case Kind::FullSpace:
      return 0.0;
  }
  return kInf;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Linear: return "linear";
    case Family::Exponential: return "exponential";
    case Family::PowerNorm: return "power_norm";
    case Family::SignedPower: return "signed_power";
    case Family::Circle: return "circle";
    case Family::PiecewiseNonconvex: return "piecewise_nonconvex";
    case Family::PiecewiseConvex: return "piecewise_convex";
    case Family::Custom: return "custom";
  }
  return "unknown";
}

FunctionModel FunctionModel::linear(double alpha, double beta) {
  if (alpha == 0.0) throw ValidationError("linear: alpha must be nonzero");
  FunctionModel m;
  m.family_ = Family::Linear;
  m.alpha_ = alpha;
  m.beta_ = beta;
  return m;
}

FunctionModel FunctionModel::exponential(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw ValidationError("exponential: alpha and beta must be positive");
  FunctionModel m;
  m.family_ = Family::Exponential;
  m.alpha_ = alpha;
  m.beta_ = beta;
  return m;
}

FunctionModel FunctionModel::power_norm(double alpha, double p, int dimension) {
  if (alpha == 0.0) throw ValidationError("power_norm: alpha must be nonzero");
  if (!(p > 0.0)) throw ValidationError("power_norm: p must be positive");
  if (dimension < 1) throw ValidationError("power_norm: dimension must be >= 1");
  FunctionModel m;
  m.family_ = Family::PowerNorm;
  m.alpha_ = alpha;
  m.power_ = p;
  m.dim_ = dimension;
  return m;
}

FunctionModel FunctionModel::signed_power(double alpha, double p) {
  if (alpha == 0.0) throw ValidationError("signed_power: alpha must be nonzero");
  if (!(p > 0.0)) throw ValidationError("signed_power: p must be positive");
  FunctionModel m;
  m.family_ = Family::SignedPower;
  m.alpha_ = alpha;
  m.power_ = p;
  return m;
}

FunctionModel FunctionModel::circle(double alpha, double beta) {
  if (!(beta > 0.0)) throw ValidationError("circle: beta must be positive");
  if (!(alpha > 0.0) || !(alpha < beta)) throw ValidationError("circle: need 0 < alpha < beta");
  FunctionModel m;
  m.family_ = Family::Circle;
  m.alpha_ = alpha;
  m.beta_ = beta;
  m.domain_ = Interval{-1.0, 1.0};
  return m;
}

FunctionModel FunctionModel::piecewise_nonconvex(double p) {
  if (!(p > 1.0)) throw ValidationError("piecewise_nonconvex: p must be > 1");
  FunctionModel m;
  m.family_ = Family::PiecewiseNonconvex;
  m.power_ = p;
  return m;
}

FunctionModel FunctionModel::piecewise_convex() {
  FunctionModel m;
  m.family_ = Family::PiecewiseConvex;
  return m;
}

FunctionModel FunctionModel::custom(CustomFunction fn) {
  if (!fn.eval) throw ValidationError("custom: eval is required");
  if (!fn.subdiff) throw ValidationError("custom: subdiff is required");
  if (fn.dimension < 1) throw ValidationError("custom: dimension must be >= 1");
  FunctionModel m;
  m.family_ = Family::Custom;
  m.dim_ = fn.dimension;
  m.domain_ = fn.domain;
  m.custom_ = std::move(fn);
  return m;
}

FunctionModel FunctionModel::from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) throw ValidationError("family spec must be a JSON object");
  if (!spec.contains("family") || !spec["family"].is_string())
    throw ValidationError("family spec needs a string field 'family'");
  const std::string fam = spec["family"].get<std::string>();

  auto check_keys = [&](std::initializer_list<const char*> allowed) {
    for (auto it = spec.begin(); it != spec.end(); ++it) {
      if (it.key() == "family") continue;
      bool ok = false;
      for (const char* k : allowed)
        if (it.key() == k) ok = true;
      if (!ok) throw ValidationError("unknown field '" + it.key() + "' for family " + fam);
    }
    for (const char* k : allowed)
      if (!spec.contains(k)) throw ValidationError(std::string("missing field '") + k +
                                                   "' for family " + fam);
  };
  auto num = [&](const char* k) {
    if (!spec[k].is_number()) throw ValidationError(std::string("field '") + k + "' must be numeric");
    return spec[k].get<double>();
  };

  if (fam == "linear") {
    check_keys({"alpha", "beta"});
    return linear(num("alpha"), num("beta"));
  }
  if (fam == "exponential") {
    check_keys({"alpha", "beta"});
    return exponential(num("alpha"), num("beta"));
  }
  if (fam == "power_norm") {
    check_keys({"alpha", "p", "n"});
    if (!spec["n"].is_number_integer()) throw ValidationError("field 'n' must be an integer");
    return power_norm(num("alpha"), num("p"), spec["n"].get<int>());
  }
  if (fam == "signed_power") {
    check_keys({"alpha", "p"});
    return signed_power(num("alpha"), num("p"));
  }
  if (fam == "circle") {
    check_keys({"alpha", "beta"});
    return circle(num("alpha"), num("beta"));
  }
  if (fam == "piecewise_nonconvex") {
    check_keys({"p"});
    return piecewise_nonconvex(num("p"));
  }
  if (fam == "piecewise_convex") {
    check_keys({});
    return piecewise_convex();
  }
  throw ValidationError("unknown family '" + fam + "'");
}

nlohmann::json FunctionModel::to_json() const {
  nlohmann::json j;
  j["family"] = family_name(family_);
  switch (family_) {
    case Family::Linear:
    case Family::Exponential:
    case Family::Circle:
      j["alpha"] = alpha_;
      j["beta"] = beta_;
      break;
    case Family::PowerNorm:
      j["alpha"] = alpha_;
      j["p"] = power_;
      j["n"] = dim_;
      break;
    case Family::SignedPower:
      j["alpha"] = alpha_;
      j["p"] = power_;
      break;
    case Family::PiecewiseNonconvex:
      j["p"] = power_;
      break;
    case Family::PiecewiseConvex:
    case Family::Custom:
      break;
  }
  return j;
}

void FunctionModel::require_dim(const Vector& x) const {
  if (static_cast<int>(x.size()) != dim_) {
    std::ostringstream os;
    os << "point has dimension " << x.size() << ", model expects " << dim_;
    throw ValidationError(os.str());
  }
}

bool FunctionModel::in_domain(const Vector& x, double tol) const {
  require_dim(x);
  for (int i = 0; i < dim_; ++i)
    if (!domain_.contains(x(i), tol)) return false;
  return true;
}

double FunctionModel::value1(double x) const {
  switch (family_) {
    case Family::Linear:
      return alpha_ * x - beta_;
    case Family::Exponential:
      return alpha_ * std::exp(x) - beta_;
    case Family::PowerNorm:
      return alpha_ * abs_pow(x, power_);
    case Family::SignedPower:
      return alpha_ * abs_pow(x, power_) * sgn(x);
    case Family::Circle: {
      if (std::fabs(x) > 1.0 + 1e-12) throw DomainError("circle: |x| > 1");
      const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
      return alpha_ - beta_ * s;
    }
    case Family::PiecewiseNonconvex:
      return x >= 0.0 ? abs_pow(x, power_) : x;
    case Family::PiecewiseConvex:
      return x <= 0.0 ? -1.0 : 0.5 * x * x - 1.0;
    case Family::Custom: {
      Vector v(1);
      v(0) = x;
      return custom_.eval(v);
    }
  }
  throw Error("Internal", "value1: unhandled family");
}

double FunctionModel::grad1(double x) const {
  switch (family_) {
    case Family::Linear:
      return alpha_;
    case Family::Exponential:
      return alpha_ * std::exp(x);
    case Family::PowerNorm:
      if (x == 0.0) {
        if (power_ > 1.0) return 0.0;
        throw UnsupportedError("power_norm: gradient undefined at 0 for p <= 1");
      }
      return alpha_ * power_ * abs_pow(x, power_ - 1.0) * sgn(x);
    case Family::SignedPower:
      if (x == 0.0) {
        if (power_ > 1.0) return 0.0;
        if (power_ == 1.0) return alpha_;
        throw UnsupportedError("signed_power: derivative undefined at 0 for p < 1");
      }
      return alpha_ * power_ * abs_pow(x, power_ - 1.0);
    case Family::Circle: {
      if (std::fabs(x) >= 1.0) throw UnsupportedError("circle: derivative undefined at |x| = 1");
      return beta_ * x / std::sqrt(1.0 - x * x);
    }
    case Family::PiecewiseNonconvex:
      if (x == 0.0) throw UnsupportedError("piecewise_nonconvex: kink at 0");
      return x > 0.0 ? power_ * abs_pow(x, power_ - 1.0) : 1.0;
    case Family::PiecewiseConvex:
      return x <= 0.0 ? 0.0 : x;
    case Family::Custom: {
      if (!custom_.grad) throw UnsupportedError("custom: no gradient supplied");
      Vector v(1);
      v(0) = x;
      return custom_.grad(v)(0);
    }
  }
  throw Error("Internal", "grad1: unhandled family");
}

double FunctionModel::hess1(double x) const {
  switch (family_) {
    case Family::Linear:
      return 0.0;
    case Family::Exponential:
      return alpha_ * std::exp(x);
    case Family::PowerNorm:
      if (x == 0.0) {
        if (power_ == 2.0) return 2.0 * alpha_;
        if (power_ > 2.0) return 0.0;
        throw UnsupportedError("power_norm: second derivative undefined at 0");
      }
      return alpha_ * power_ * (power_ - 1.0) * abs_pow(x, power_ - 2.0);
    case Family::SignedPower:
      if (x == 0.0) {
        if (power_ == 1.0 || power_ > 2.0) return 0.0;
        throw UnsupportedError("signed_power: second derivative undefined at 0");
      }
      return alpha_ * power_ * (power_ - 1.0) * abs_pow(x, power_ - 2.0) * sgn(x);
    case Family::Circle: {
      if (std::fabs(x) >= 1.0) throw UnsupportedError("circle: derivative undefined at |x| = 1");
      const double s2 = 1.0 - x * x;
      return beta_ / (s2 * std::sqrt(s2));
    }
    case Family::PiecewiseNonconvex:
      if (x == 0.0) throw UnsupportedError("piecewise_nonconvex: kink at 0");
      return x > 0.0 ? power_ * (power_ - 1.0) * abs_pow(x, power_ - 2.0) : 0.0;
    case Family::PiecewiseConvex:
      if (x == 0.0) throw UnsupportedError("piecewise_convex: curvature jump at 0");
      return x < 0.0 ? 0.0 : 1.0;
    case Family::Custom: {
      if (!custom_.hess) throw UnsupportedError("custom: no hessian supplied");
      Vector v(1);
      v(0) = x;
      return custom_.hess(v)(0, 0);
    }
  }
  throw Error("Internal", "hess1: unhandled family");
}

double FunctionModel::evaluate(const Vector& x) const {
  require_dim(x);
  if (!in_domain(x, 1e-12)) throw DomainError("evaluate: point outside dom f");
  if (family_ == Family::PowerNorm) return alpha_ * std::pow(x.norm(), power_);
  if (family_ == Family::Custom) return custom_.eval(x);
  return value1(x(0));
}

Vector FunctionModel::gradient(const Vector& x) const {
  require_dim(x);
  if (!in_domain(x, 1e-12)) throw DomainError("gradient: point outside dom f");
  if (family_ == Family::PowerNorm && dim_ > 1) {
    const double r = x.norm();
    if (r == 0.0) {
      if (power_ > 1.0) return Vector::Zero(dim_);
      throw UnsupportedError("power_norm: gradient undefined at 0 for p <= 1");
    }
    return alpha_ * power_ * std::pow(r, power_ - 2.0) * x;
  }
  if (family_ == Family::Custom && dim_ > 1) {
    if (!custom_.grad) throw UnsupportedError("custom: no gradient supplied");
    return custom_.grad(x);
  }
  Vector g(1);
  g(0) = grad1(x(0));
  return g;
}

Matrix FunctionModel::hessian(const Vector& x) const {
  require_dim(x);
  if (!in_domain(x, 1e-12)) throw DomainError("hessian: point outside dom f");
  if (family_ == Family::PowerNorm && dim_ > 1) {
    const double r = x.norm();
    if (r == 0.0) {
      if (power_ == 2.0) return 2.0 * alpha_ * Matrix::Identity(dim_, dim_);
      if (power_ > 2.0) return Matrix::Zero(dim_, dim_);
      throw UnsupportedError("power_norm: hessian undefined at 0");
    }
    const double c = alpha_ * power_ * std::pow(r, power_ - 2.0);
    return c * Matrix::Identity(dim_, dim_) +
           (alpha_ * power_ * (power_ - 2.0) * std::pow(r, power_ - 4.0)) * (x * x.transpose());
  }
  if (family_ == Family::Custom && dim_ > 1) {
    if (!custom_.hess) throw UnsupportedError("custom: no hessian supplied");
    return custom_.hess(x);
  }
  Matrix h(1, 1);
  h(0, 0) = hess1(x(0));
  return h;
}

bool FunctionModel::differentiable_at(const Vector& x) const {
  require_dim(x);
  switch (family_) {
    case Family::Linear:
    case Family::Exponential:
    case Family::PiecewiseConvex:
      return true;
    case Family::PowerNorm:
      return x.norm() > 0.0 || power_ > 1.0;
    case Family::SignedPower:
      return x(0) != 0.0 || power_ >= 1.0;
    case Family::Circle:
      return std::fabs(x(0)) < 1.0;
    case Family::PiecewiseNonconvex:
      return x(0) != 0.0;
    case Family::Custom:
      return static_cast<bool>(custom_.grad);
  }
  return false;
}

bool FunctionModel::twice_differentiable_at(const Vector& x) const {
  require_dim(x);
  switch (family_) {
    case Family::Linear:
    case Family::Exponential:
      return true;
    case Family::PowerNorm:
      return x.norm() > 0.0 || power_ >= 2.0;
    case Family::SignedPower:
      return x(0) != 0.0 || power_ == 1.0 || power_ > 2.0;
    case Family::Circle:
      return std::fabs(x(0)) < 1.0;
    case Family::PiecewiseNonconvex:
    case Family::PiecewiseConvex:
      return x(0) != 0.0;
    case Family::Custom:
      return static_cast<bool>(custom_.hess);
  }
  return false;
}

bool FunctionModel::locally_lipschitz_at(const Vector& x) const {
  require_dim(x);
  switch (family_) {
    case Family::Linear:
    case Family::Exponential:
    case Family::PiecewiseNonconvex:
    case Family::PiecewiseConvex:
      return true;
    case Family::PowerNorm:
      return x.norm() > 0.0 || power_ >= 1.0;
    case Family::SignedPower:
      return x(0) != 0.0 || power_ >= 1.0;
    case Family::Circle:
      return std::fabs(x(0)) < 1.0;
    case Family::Custom:
      return true;  // the user's responsibility; assumed Lipschitz
  }
  return false;
}

SubdiffSet FunctionModel::lower_subdifferential(const Vector& x) const {
  require_dim(x);
  if (family_ == Family::Custom) return custom_.subdiff(x);
  if (family_ == Family::PowerNorm && x.norm() == 0.0) {
    if (power_ > 1.0) return SubdiffSet::point(Vector::Zero(dim_));
    if (power_ == 1.0) return SubdiffSet::ball(dim_, std::fabs(alpha_));
    // p < 1: a sharp well (alpha > 0) has every slope below it; a sharp
    // peak (alpha < 0) has none.
    return alpha_ > 0.0 ? SubdiffSet::full(dim_) : SubdiffSet::empty();
  }
  if (family_ == Family::SignedPower && x(0) == 0.0) {
    if (power_ > 1.0) return SubdiffSet::point1(0.0);
    if (power_ == 1.0) return SubdiffSet::point1(alpha_);
    return SubdiffSet::empty();
  }
  if (family_ == Family::PiecewiseNonconvex && x(0) == 0.0)
    return SubdiffSet::interval(0.0, 1.0);  // hull of the one-sided slopes
  if (family_ == Family::Circle && std::fabs(x(0)) >= 1.0) return SubdiffSet::empty();
  return SubdiffSet::point(gradient(x));
}

SubdiffSet FunctionModel::upper_subdifferential(const Vector& x) const {
  require_dim(x);
  if (family_ == Family::Custom) return custom_.subdiff(x);
  if (family_ == Family::PowerNorm && x.norm() == 0.0) {
    if (power_ > 1.0) return SubdiffSet::point(Vector::Zero(dim_));
    if (power_ == 1.0) return SubdiffSet::ball(dim_, std::fabs(alpha_));
    return alpha_ > 0.0 ? SubdiffSet::empty() : SubdiffSet::full(dim_);
  }
  if (family_ == Family::SignedPower && x(0) == 0.0) {
    if (power_ > 1.0) return SubdiffSet::point1(0.0);
    if (power_ == 1.0) return SubdiffSet::point1(alpha_);
    return SubdiffSet::empty();
  }
  if (family_ == Family::PiecewiseNonconvex && x(0) == 0.0)
    return SubdiffSet::interval(0.0, 1.0);
  if (family_ == Family::Circle && std::fabs(x(0)) >= 1.0) return SubdiffSet::full(1);
  return SubdiffSet::point(gradient(x));
}

SubdiffSet FunctionModel::symmetric_subdifferential(const Vector& x) const {
  require_dim(x);
  if (!in_domain(x, 1e-12)) throw DomainError("symmetric_subdifferential: outside dom f");
  if (family_ == Family::Custom) return custom_.subdiff(x);
  // PowerNorm at the origin is reported as empty for p <= 1 and {0} for
  // p > 1, the convention documented alongside the catalogue.
  if (family_ == Family::PowerNorm && x.norm() == 0.0) {
    if (power_ > 1.0) return SubdiffSet::point(Vector::Zero(dim_));
    return SubdiffSet::empty();
  }
  if (family_ == Family::SignedPower && x(0) == 0.0) {
    if (power_ > 1.0) return SubdiffSet::point1(0.0);
    if (power_ == 1.0) return SubdiffSet::point1(alpha_);
    return SubdiffSet::empty();
  }
  if (family_ == Family::PiecewiseNonconvex && x(0) == 0.0)
    return SubdiffSet::interval(0.0, 1.0);
  if (family_ == Family::Circle && std::fabs(x(0)) >= 1.0) return SubdiffSet::full(1);
  return SubdiffSet::point(gradient(x));
}

SubdiffSet FunctionModel::certificate_subdifferential(const Vector& x) const {
  require_dim(x);
  // The certificate needs the honest first-order sets at non-smooth points;
  // unbounded sets are fine here because only distances are taken.
  if (family_ == Family::PowerNorm && x.norm() == 0.0) {
    if (power_ > 1.0) return SubdiffSet::point(Vector::Zero(dim_));
    if (power_ == 1.0) return SubdiffSet::ball(dim_, std::fabs(alpha_));
    return SubdiffSet::full(dim_);
  }
  if (family_ == Family::Circle && std::fabs(x(0)) >= 1.0) return SubdiffSet::full(1);
  return symmetric_subdifferential(x);
}

std::vector<Vector> FunctionModel::known_zeros() const {
  std::vector<Vector> zs;
  auto push1 = [&](double v) {
    Vector z(1);
    z(0) = v;
    zs.push_back(z);
  };
  switch (family_) {
    case Family::Linear:
      push1(beta_ / alpha_);
      break;
    case Family::Exponential:
      push1(std::log(beta_ / alpha_));
      break;
    case Family::PowerNorm:
      zs.push_back(Vector::Zero(dim_));
      break;
    case Family::SignedPower:
    case Family::PiecewiseNonconvex:
      push1(0.0);
      break;
    case Family::Circle: {
      const double r = alpha_ / beta_;
      const double z = std::sqrt(std::max(0.0, 1.0 - r * r));
      push1(-z);
      push1(z);
      break;
    }
    case Family::PiecewiseConvex:
      push1(std::sqrt(2.0));
      break;
    case Family::Custom:
      zs = custom_.zeros;
      break;
  }
  return zs;
}

bool FunctionModel::has_lyapunov_potential() const { return family_ != Family::Custom; }

bool FunctionModel::in_lyapunov_domain(const Vector& x) const {
  require_dim(x);
  switch (family_) {
    case Family::Linear:
    case Family::Exponential:
    case Family::PowerNorm:
    case Family::SignedPower:
    case Family::PiecewiseNonconvex:
      return true;
    case Family::Circle: {
      const double v = std::fabs(x(0));
      return v > 0.0 && v < 1.0;
    }
    case Family::PiecewiseConvex:
      return x(0) > 0.0;
    case Family::Custom:
      return false;
  }
  return false;
}

std::string FunctionModel::lyapunov_domain_description() const {
  switch (family_) {
    case Family::Linear:
    case Family::Exponential:
    case Family::SignedPower:
    case Family::PiecewiseNonconvex:
      return "R";
    case Family::PowerNorm:
      return dim_ == 1 ? "R" : "R^n";
    case Family::Circle:
      return "]-1,1[ minus {0}";
    case Family::PiecewiseConvex:
      return "]0,+inf[";
    case Family::Custom:
      return "none";
  }
  return "none";
}

double FunctionModel::lyapunov_potential(const Vector& x) const {
  require_dim(x);
  if (!has_lyapunov_potential()) throw UnsupportedError("no closed-form antiderivative");
  if (!in_lyapunov_domain(x)) throw DomainError("point outside the antiderivative domain D");
  switch (family_) {
    case Family::Linear:
      return 0.5 * x(0) * x(0) - (beta_ / alpha_) * x(0);
    case Family::Exponential:
      return x(0) + (beta_ / alpha_) * std::exp(-x(0));
    case Family::PowerNorm:
      return x.squaredNorm() / (2.0 * power_);
    case Family::SignedPower:
      return x(0) * x(0) / (2.0 * power_);
    case Family::Circle: {
      const double v = x(0);
      const double s = std::sqrt(std::max(0.0, 1.0 - v * v));
      const double r = alpha_ / beta_;
      return 0.5 * v * v - (1.0 - r) * std::log(std::fabs(v)) + r * s - r * std::log1p(s);
    }
    case Family::PiecewiseNonconvex:
      return x(0) >= 0.0 ? x(0) * x(0) / (2.0 * power_) : 0.5 * x(0) * x(0);
    case Family::PiecewiseConvex:
      return 0.25 * x(0) * x(0) - std::log(x(0));
    case Family::Custom:
      break;
  }
  throw UnsupportedError("no closed-form antiderivative");
}

Vector FunctionModel::lyapunov_potential_gradient(const Vector& x) const {
  require_dim(x);
  if (!has_lyapunov_potential()) throw UnsupportedError("no closed-form antiderivative");
  if (!in_lyapunov_domain(x)) throw DomainError("point outside the antiderivative domain D");
  Vector g(dim_);
  switch (family_) {
    case Family::Linear:
      g(0) = x(0) - beta_ / alpha_;
      return g;
    case Family::Exponential:
      g(0) = 1.0 - (beta_ / alpha_) * std::exp(-x(0));
      return g;
    case Family::PowerNorm:
      return x / power_;
    case Family::SignedPower:
      g(0) = x(0) / power_;
      return g;
    case Family::Circle: {
      const double v = x(0);
      const double s = std::sqrt(std::max(0.0, 1.0 - v * v));
      const double r = alpha_ / beta_;
      g(0) = v - (1.0 - r) / v - r * v / (1.0 + s);
      return g;
    }
    case Family::PiecewiseNonconvex:
      g(0) = x(0) >= 0.0 ? x(0) / power_ : x(0);
      return g;
    case Family::PiecewiseConvex:
      g(0) = 0.5 * x(0) - 1.0 / x(0);
      return g;
    case Family::Custom:
      break;
  }
  throw UnsupportedError("no closed-form antiderivative");
}

std::vector<double> FunctionModel::kink_points() const {
  switch (family_) {
    case Family::PowerNorm:
      return power_ > 1.0 ? std::vector<double>{} : std::vector<double>{0.0};
    case Family::SignedPower:
      return power_ >= 1.0 ? std::vector<double>{} : std::vector<double>{0.0};
    case Family::PiecewiseNonconvex:
      return {0.0};
    default:
      return {};
  }
}

}  // namespace drzero
