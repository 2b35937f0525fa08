#pragma once
// Catalog of nonlinear potentials f(rho) for i dpsi/dt = -1/2 Lap psi
// + f(|psi|^2) psi with far-field density 1. Every member satisfies
// f(1) = 0 (checked at construction), so the constant background is a
// steady state. Besides f itself the catalog provides the analytic
// derivative f', the antiderivative F(rho) = integral_1^rho f, and the
// exact phase factor of the pointwise nonlinear sub-flow.
//
// Members and closed forms (rho = |psi|^2):
//   gp            f = rho - 1                                F = (rho-1)^2/2
//   power         f = lambda (rho^alpha - 1), lambda = +-1
//   competing     f = a1 (rho^alpha1 - 1) - a2 (rho^alpha2 - 1), alpha1 > alpha2
//   cubic_quintic f = a5 rho^2 - a3 rho + a1, all > 0, a3 = a1 + a5
//   saturated     f = rho/(1 + g rho) - 1/(1 + g)
//   exponential   f = e^{-g} - e^{-g rho}
//   transiting    f = 2 rho (1 + a tanh(g (rho^2 - 1))) - 2
//                 (recentered so f(1) = 0; the textbook form 2 rho (1 + a tanh(...))
//                  does not vanish at rho = 1)
//   logarithmic   f = rho log rho       (f(0) taken as the limit 0, but
//                                        eval_f rejects rho = 0 by contract)
//   zero          f = 0                 (testing aid: the free equation)

#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsfarf/quadrature.hpp"

namespace nlsfarf {

enum class NonlinKind {
  gp,
  power,
  competing,
  cubic_quintic,
  saturated,
  exponential,
  transiting,
  logarithmic,
  zero
};

inline std::string kind_name(NonlinKind k) {
  switch (k) {
    case NonlinKind::gp: return "gp";
    case NonlinKind::power: return "power";
    case NonlinKind::competing: return "competing";
    case NonlinKind::cubic_quintic: return "cubic_quintic";
    case NonlinKind::saturated: return "saturated";
    case NonlinKind::exponential: return "exponential";
    case NonlinKind::transiting: return "transiting";
    case NonlinKind::logarithmic: return "logarithmic";
    case NonlinKind::zero: return "zero";
  }
  throw std::logic_error("kind_name: unhandled kind");
}

namespace detail {
// rho^alpha with a fast path for half-integer exponents (alpha = code/2),
// which cover the exponents the heavy simulations actually use. code < 0
// means "no fast path".
inline int half_integer_code(double alpha) {
  const double doubled = 2.0 * alpha;
  const double rounded = std::nearbyint(doubled);
  if (std::abs(doubled - rounded) < 1e-12 && rounded >= 0.0 && rounded <= 12.0)
    return static_cast<int>(rounded);
  return -1;
}
inline double pow_rho(double rho, double alpha, int code) {
  if (code < 0) return std::pow(rho, alpha);
  double base = std::sqrt(rho);
  double r = 1.0;
  int e = code;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}
}  // namespace detail

struct NonlinearitySpec {
  NonlinKind kind = NonlinKind::gp;
  // Parameter slots; which are meaningful depends on kind (see header note).
  double lambda = 1.0;   // power sign
  double alpha = 1.0;    // power exponent
  double a1 = 1.0, a2 = 1.0, alpha1 = 1.0, alpha2 = 0.5;  // competing
  double ca1 = 1.0, ca3 = 2.0, ca5 = 1.0;                 // cubic-quintic
  double gamma = 1.0;    // saturated / exponential / transiting
  double a = 0.1;        // transiting amplitude
  // Natural growth exponent for the subcriticality check |f| <= C(1+rho^alpha).
  double alpha_growth = 1.0;
  // Power nonlinearities with alpha >= 2 exceed the 3D energy-subcritical
  // range; they are accepted but flagged.
  bool flagged_supercritical_3d = false;

  int pcode_alpha = 2, pcode_a1 = 2, pcode_a2 = 1;  // half-integer fast paths

  bool operator==(const NonlinearitySpec& o) const {
    return kind == o.kind && lambda == o.lambda && alpha == o.alpha &&
           a1 == o.a1 && a2 == o.a2 && alpha1 == o.alpha1 &&
           alpha2 == o.alpha2 && ca1 == o.ca1 && ca3 == o.ca3 &&
           ca5 == o.ca5 && gamma == o.gamma && a == o.a;
  }
};

inline double eval_f(const NonlinearitySpec& s, double rho);

namespace detail {
inline void check_unit_root(const NonlinearitySpec& s) {
  const double f1 = eval_f(s, 1.0);
  if (std::abs(f1) > 1e-12)
    throw std::logic_error("nonlinearity: f(1) = " + std::to_string(f1) +
                           " but the far-field density must be a root of f");
}
}  // namespace detail

inline NonlinearitySpec make_gp() {
  NonlinearitySpec s;
  s.kind = NonlinKind::gp;
  s.alpha_growth = 1.0;
  detail::check_unit_root(s);
  return s;
}

inline NonlinearitySpec make_power(double lambda, double alpha) {
  if (lambda != 1.0 && lambda != -1.0)
    throw std::invalid_argument("power nonlinearity: lambda must be +1 or -1");
  if (!(alpha > 0.0))
    throw std::invalid_argument("power nonlinearity: alpha must be positive");
  NonlinearitySpec s;
  s.kind = NonlinKind::power;
  s.lambda = lambda;
  s.alpha = alpha;
  s.alpha_growth = alpha;
  s.flagged_supercritical_3d = alpha >= 2.0;
  s.pcode_alpha = detail::half_integer_code(alpha);
  detail::check_unit_root(s);
  return s;
}

inline NonlinearitySpec make_competing(double a1, double a2, double alpha1,
                                       double alpha2) {
  if (!(a1 > 0.0) || !(a2 > 0.0))
    throw std::invalid_argument("competing nonlinearity: a1, a2 must be positive");
  if (!(alpha1 > alpha2) || !(alpha2 > 0.0))
    throw std::invalid_argument(
        "competing nonlinearity: exponents must satisfy alpha1 > alpha2 > 0");
  NonlinearitySpec s;
  s.kind = NonlinKind::competing;
  s.a1 = a1;
  s.a2 = a2;
  s.alpha1 = alpha1;
  s.alpha2 = alpha2;
  s.alpha_growth = alpha1;
  s.pcode_a1 = detail::half_integer_code(alpha1);
  s.pcode_a2 = detail::half_integer_code(alpha2);
  detail::check_unit_root(s);
  return s;
}

inline NonlinearitySpec make_cubic_quintic(double a1, double a3, double a5) {
  if (!(a1 > 0.0) || !(a3 > 0.0) || !(a5 > 0.0))
    throw std::invalid_argument(
        "cubic-quintic nonlinearity: coefficients must be positive");
  if (std::abs(a3 - (a1 + a5)) > 1e-12 * std::max(1.0, a3))
    throw std::invalid_argument(
        "cubic-quintic nonlinearity: a3 = a1 + a5 required so that the "
        "far-field density 1 is a root of f");
  if (a1 == a5)
    throw std::invalid_argument(
        "cubic-quintic nonlinearity: a1 = a5 makes the two roots coincide "
        "(discriminant a3^2 - 4 a1 a5 must be positive)");
  NonlinearitySpec s;
  s.kind = NonlinKind::cubic_quintic;
  s.ca1 = a1;
  s.ca3 = a3;
  s.ca5 = a5;
  s.alpha_growth = 2.0;
  detail::check_unit_root(s);
  return s;
}

inline NonlinearitySpec make_saturated(double gamma) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("saturated nonlinearity: gamma must be positive");
  NonlinearitySpec s;
  s.kind = NonlinKind::saturated;
  s.gamma = gamma;
  s.alpha_growth = 0.0;  // f is bounded
  detail::check_unit_root(s);
  return s;
}

inline NonlinearitySpec make_exponential(double gamma) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("exponential nonlinearity: gamma must be positive");
  NonlinearitySpec s;
  s.kind = NonlinKind::exponential;
  s.gamma = gamma;
  s.alpha_growth = 0.0;  // f is bounded
  detail::check_unit_root(s);
  return s;
}

inline NonlinearitySpec make_transiting(double a, double gamma) {
  if (!(a > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument(
        "transiting nonlinearity: a and gamma must be positive");
  NonlinearitySpec s;
  s.kind = NonlinKind::transiting;
  s.a = a;
  s.gamma = gamma;
  s.alpha_growth = 1.0;  // f grows linearly once tanh saturates
  detail::check_unit_root(s);
  return s;
}

inline NonlinearitySpec make_logarithmic() {
  NonlinearitySpec s;
  s.kind = NonlinKind::logarithmic;
  s.alpha_growth = 1.5;  // rho log rho <= C (1 + rho^{3/2})
  detail::check_unit_root(s);
  return s;
}

inline NonlinearitySpec make_zero() {
  NonlinearitySpec s;
  s.kind = NonlinKind::zero;
  s.alpha_growth = 0.0;
  return s;
}

inline double eval_f(const NonlinearitySpec& s, double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw std::domain_error("eval_f: rho must be finite and >= 0");
  switch (s.kind) {
    case NonlinKind::gp:
      return rho - 1.0;
    case NonlinKind::power:
      return s.lambda * (detail::pow_rho(rho, s.alpha, s.pcode_alpha) - 1.0);
    case NonlinKind::competing:
      return s.a1 * (detail::pow_rho(rho, s.alpha1, s.pcode_a1) - 1.0) -
             s.a2 * (detail::pow_rho(rho, s.alpha2, s.pcode_a2) - 1.0);
    case NonlinKind::cubic_quintic:
      return (s.ca5 * rho - s.ca3) * rho + s.ca1;
    case NonlinKind::saturated:
      return rho / (1.0 + s.gamma * rho) - 1.0 / (1.0 + s.gamma);
    case NonlinKind::exponential:
      return std::exp(-s.gamma) - std::exp(-s.gamma * rho);
    case NonlinKind::transiting:
      return 2.0 * rho * (1.0 + s.a * std::tanh(s.gamma * (rho * rho - 1.0))) -
             2.0;
    case NonlinKind::logarithmic:
      if (rho == 0.0)
        throw std::domain_error("eval_f: logarithmic kind requires rho > 0");
      return rho * std::log(rho);
    case NonlinKind::zero:
      return 0.0;
  }
  throw std::logic_error("eval_f: unhandled kind");
}

inline double eval_f_prime(const NonlinearitySpec& s, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw std::domain_error("eval_f_prime: rho must be finite and > 0");
  switch (s.kind) {
    case NonlinKind::gp:
      return 1.0;
    case NonlinKind::power:
      return s.lambda * s.alpha * std::pow(rho, s.alpha - 1.0);
    case NonlinKind::competing:
      return s.a1 * s.alpha1 * std::pow(rho, s.alpha1 - 1.0) -
             s.a2 * s.alpha2 * std::pow(rho, s.alpha2 - 1.0);
    case NonlinKind::cubic_quintic:
      return 2.0 * s.ca5 * rho - s.ca3;
    case NonlinKind::saturated: {
      const double d = 1.0 + s.gamma * rho;
      return 1.0 / (d * d);
    }
    case NonlinKind::exponential:
      return s.gamma * std::exp(-s.gamma * rho);
    case NonlinKind::transiting: {
      const double t = std::tanh(s.gamma * (rho * rho - 1.0));
      const double sech2 = 1.0 - t * t;
      return 2.0 * (1.0 + s.a * t) + 4.0 * s.a * s.gamma * rho * rho * sech2;
    }
    case NonlinKind::logarithmic:
      return std::log(rho) + 1.0;
    case NonlinKind::zero:
      return 0.0;
  }
  throw std::logic_error("eval_f_prime: unhandled kind");
}

namespace detail {
// log(cosh(x)) without overflow for large |x|.
inline double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}
// (rho^{a+1} - 1)/(a+1) - (rho - 1), the antiderivative of rho^a - 1 from 1.
inline double power_primitive(double rho, double a) {
  return (std::pow(rho, a + 1.0) - 1.0) / (a + 1.0) - (rho - 1.0);
}
}  // namespace detail

// F(rho) = integral of f from 1 to rho, in closed form for every member.
inline double eval_F(const NonlinearitySpec& s, double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw std::domain_error("eval_F: rho must be finite and >= 0");
  const double d = rho - 1.0;
  switch (s.kind) {
    case NonlinKind::gp:
      return 0.5 * d * d;
    case NonlinKind::power:
      return s.lambda * detail::power_primitive(rho, s.alpha);
    case NonlinKind::competing:
      return s.a1 * detail::power_primitive(rho, s.alpha1) -
             s.a2 * detail::power_primitive(rho, s.alpha2);
    case NonlinKind::cubic_quintic:
      return s.ca5 * (rho * rho * rho - 1.0) / 3.0 -
             s.ca3 * (rho * rho - 1.0) / 2.0 + s.ca1 * d;
    case NonlinKind::saturated:
      return d / s.gamma -
             std::log1p(s.gamma * d / (1.0 + s.gamma)) / (s.gamma * s.gamma) -
             d / (1.0 + s.gamma);
    case NonlinKind::exponential:
      return std::exp(-s.gamma) * d +
             (std::exp(-s.gamma * rho) - std::exp(-s.gamma)) / s.gamma;
    case NonlinKind::transiting:
      return d * d + (s.a / s.gamma) * detail::log_cosh(s.gamma * (rho * rho - 1.0));
    case NonlinKind::logarithmic:
      // integral of r log r = r^2 (2 log r - 1)/4; the rho = 0 limit is 1/4.
      if (rho == 0.0) return 0.25;
      return (rho * rho * (2.0 * std::log(rho) - 1.0) + 1.0) / 4.0;
    case NonlinKind::zero:
      return 0.0;
  }
  throw std::logic_error("eval_F: unhandled kind");
}

// Same quantity by adaptive quadrature; the independent path for testing
// the closed forms. Tolerance is absolute.
inline double eval_F_quadrature(const NonlinearitySpec& s, double rho,
                                double tol = 1e-12) {
  const double lo = s.kind == NonlinKind::logarithmic && rho == 0.0
                        ? std::nextafter(0.0, 1.0)
                        : rho;
  return integrate_adaptive([&s](double r) { return eval_f(s, r); }, 1.0, lo,
                            tol);
}

// Exact solution factor of i dpsi/dt = f(rho) psi over time dt at fixed
// density rho: a pure phase, so |psi| is invariant under this sub-flow.
inline std::complex<double> nonlinear_phase(const NonlinearitySpec& s,
                                            double rho, double dt) {
  return std::polar(1.0, -eval_f(s, rho) * dt);
}

struct KatoReport {
  double alpha_used = 0.0;
  double max_ratio_f = 0.0;            // sup |f| / (1 + rho^alpha)
  double max_ratio_rho_fprime = 0.0;   // sup |rho f'| / (1 + rho^alpha)
  // Growth heuristic samples: ratio at rho_max vs at rho_max/10. A factor
  // above 10 means the ratio is still growing like a power at the boundary
  // of the sampled range, i.e. alpha was too small.
  double ratio_f_end = 0.0, ratio_f_tenth = 0.0;
  double ratio_rfp_end = 0.0, ratio_rfp_tenth = 0.0;
  bool growth_detected = false;
  bool passed = false;
};

// Samples the subcriticality ratios |f|/(1+rho^alpha) and |rho f'|/(1+rho^alpha)
// on log-spaced rho in (0, rho_max]. No universal constant is enforced; the
// report carries the observed suprema, and passed is false only when a ratio
// is non-finite or still growing at the end of the range.
inline KatoReport check_kato(const NonlinearitySpec& s, double alpha,
                             double rho_max, int n_samples = 2000) {
  if (!(rho_max > 1.0))
    throw std::invalid_argument("check_kato: rho_max must exceed 1");
  if (n_samples < 1000)
    throw std::invalid_argument("check_kato: need at least 1000 samples");
  KatoReport rep;
  rep.alpha_used = alpha;
  const double lo = 1e-6;
  const double llo = std::log(lo), lhi = std::log(rho_max);
  bool finite = true;
  auto ratio_f = [&](double rho) {
    return std::abs(eval_f(s, rho)) / (1.0 + std::pow(rho, alpha));
  };
  auto ratio_rfp = [&](double rho) {
    return std::abs(rho * eval_f_prime(s, rho)) / (1.0 + std::pow(rho, alpha));
  };
  for (int i = 0; i < n_samples; ++i) {
    const double rho =
        std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                           static_cast<double>(n_samples - 1));
    const double rf = ratio_f(rho);
    const double rp = ratio_rfp(rho);
    if (!std::isfinite(rf) || !std::isfinite(rp)) {
      finite = false;
      break;
    }
    rep.max_ratio_f = std::max(rep.max_ratio_f, rf);
    rep.max_ratio_rho_fprime = std::max(rep.max_ratio_rho_fprime, rp);
  }
  rep.ratio_f_end = ratio_f(rho_max);
  rep.ratio_f_tenth = ratio_f(rho_max / 10.0);
  rep.ratio_rfp_end = ratio_rfp(rho_max);
  rep.ratio_rfp_tenth = ratio_rfp(rho_max / 10.0);
  rep.growth_detected = rep.ratio_f_end > 10.0 * rep.ratio_f_tenth ||
                        rep.ratio_rfp_end > 10.0 * rep.ratio_rfp_tenth;
  rep.passed = finite && !rep.growth_detected;
  return rep;
}

inline KatoReport check_kato(const NonlinearitySpec& s, double rho_max = 1e4,
                             int n_samples = 2000) {
  return check_kato(s, s.alpha_growth, rho_max, n_samples);
}

// Flat key-value serialization of a spec, one "key = value" line each,
// with keys as they appear in run configs under the nonlinearity section.
inline std::vector<std::pair<std::string, std::string>> spec_to_key_values(
    const NonlinearitySpec& s) {
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("kind", kind_name(s.kind));
  switch (s.kind) {
    case NonlinKind::power:
      kv.emplace_back("lambda", num(s.lambda));
      kv.emplace_back("alpha", num(s.alpha));
      break;
    case NonlinKind::competing:
      kv.emplace_back("a1", num(s.a1));
      kv.emplace_back("a2", num(s.a2));
      kv.emplace_back("alpha1", num(s.alpha1));
      kv.emplace_back("alpha2", num(s.alpha2));
      break;
    case NonlinKind::cubic_quintic:
      kv.emplace_back("alpha1", num(s.ca1));
      kv.emplace_back("alpha3", num(s.ca3));
      kv.emplace_back("alpha5", num(s.ca5));
      break;
    case NonlinKind::saturated:
    case NonlinKind::exponential:
      kv.emplace_back("gamma", num(s.gamma));
      break;
    case NonlinKind::transiting:
      kv.emplace_back("a", num(s.a));
      kv.emplace_back("gamma", num(s.gamma));
      break;
    case NonlinKind::gp:
    case NonlinKind::logarithmic:
    case NonlinKind::zero:
      break;
  }
  return kv;
}

}  // namespace nlsfarf
