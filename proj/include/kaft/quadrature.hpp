#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "kaft/detail/sum.hpp"
#include "kaft/specfn.hpp"

namespace kaft::quadrature {

enum class TailPolicy { ExponentBased, FixedZ };

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_levels = 12;
  TailPolicy tail_policy = TailPolicy::ExponentBased;
  double fixed_z = 1e6;  // tail cutoff under TailPolicy::FixedZ
  int osc_max_zeros = 200;
  int accel_terms = 12;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("quadrature: tolerances must be positive");
    if (max_levels < 4) throw DomainError("quadrature: max_levels must be >= 4");
    if (osc_max_zeros < 8) throw DomainError("quadrature: osc_max_zeros must be >= 8");
    if (accel_terms < 0) throw DomainError("quadrature: accel_terms must be >= 0");
  }
  double tolerance(double magnitude) const { return std::max(abs_tol, rel_tol * magnitude); }
};

template <class T>
struct IntegralResult {
  T value{};
  double est_error = 0.0;
  long evaluations = 0;
  double truncation_bound = 0.0;
  int levels = 0;

  IntegralResult& operator+=(const IntegralResult& o) {
    value += o.value;
    est_error += o.est_error;
    evaluations += o.evaluations;
    truncation_bound += o.truncation_bound;
    levels = std::max(levels, o.levels);
    return *this;
  }
};

// A node handed to integrands that want the distances to both ends of the
// interval without cancellation.
struct QuadPoint {
  double x;
  double from_lo;
  double to_hi;
};

namespace detail {

template <class F>
auto call(F& f, const QuadPoint& p) {
  if constexpr (std::is_invocable_v<F&, const QuadPoint&>)
    return f(p);
  else
    return f(p.x);
}

template <class F>
using value_t = std::decay_t<decltype(call(std::declval<F&>(), std::declval<const QuadPoint&>()))>;

template <class F>
constexpr bool wants_point = std::is_invocable_v<F&, const QuadPoint&>;

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace detail

// tanh-sinh rule on (lo, hi). An integrable algebraic singularity at either
// end is fine; nodes never sit on an endpoint.
template <class F>
auto integrate_singular_band(F&& f, double lo, double hi, const QuadratureSpec& spec)
    -> IntegralResult<detail::value_t<F>> {
  using T = detail::value_t<F>;
  spec.validate();
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("quadrature: need finite lo < hi, got [" + detail::fmt(lo) + ", " +
                      detail::fmt(hi) + "]");
  constexpr double pi = std::numbers::pi;
  constexpr double s_max = 6.0;
  const double half = 0.5 * (hi - lo);
  IntegralResult<T> r;

  auto eval = [&](double s, kaft::detail::Accumulator<T>& acc) {
    double sh = std::sinh(std::fabs(s));
    double q = std::exp(-pi * sh);
    double w = 2.0 * pi * std::cosh(s) * q / ((1.0 + q) * (1.0 + q));
    double near = half * 2.0 * q / (1.0 + q);
    double far = half * 2.0 / (1.0 + q);
    QuadPoint p;
    if (s > 0.0) {
      p.to_hi = near;
      p.from_lo = far;
      p.x = hi - near;
    } else {
      p.from_lo = near;
      p.to_hi = far;
      p.x = lo + near;
    }
    if (near == 0.0 || w == 0.0) return;
    if constexpr (!detail::wants_point<F>) {
      if (p.x <= lo || p.x >= hi) return;
    }
    T v = detail::call(f, p);
    ++r.evaluations;
    if (!kaft::detail::is_finite(v))
      throw NumericalError("quadrature: non-finite integrand at x=" + detail::fmt(p.x));
    acc.add(v * (half * w));
  };

  kaft::detail::Accumulator<T> total;  // Σ w f over all nodes so far (unit step)
  double h = 1.0;
  {
    int n = static_cast<int>(s_max);
    for (int k = -n; k <= n; ++k) eval(k * h, total);
  }
  T prev = total.value() * h;
  for (int level = 1; level <= spec.max_levels; ++level) {
    h *= 0.5;
    int n = static_cast<int>(s_max / h);
    for (int k = 1; k <= n; k += 2) {
      eval(k * h, total);
      eval(-k * h, total);
    }
    T cur = total.value() * h;
    double diff = kaft::detail::magnitude(cur - prev);
    r.levels = level;
    if (level >= 3 && diff <= spec.tolerance(kaft::detail::magnitude(cur))) {
      r.value = cur;
      r.est_error = diff;
      return r;
    }
    prev = cur;
  }
  throw NumericalError("quadrature: tanh-sinh did not converge after " +
                           std::to_string(spec.max_levels) + " levels on [" + detail::fmt(lo) +
                           ", " + detail::fmt(hi) + "]",
                       kaft::detail::magnitude(prev));
}

// ∫_lo^∞ f for f ~ C z^p (p < -1). Points passed to f carry from_lo = z - lo.
// The substitution z = lo u^{-β}, β = 1/(-p-1), makes the transformed
// integrand tend to a constant as u -> 0, so the tanh-sinh rule sees a
// bounded function even when p is close to -1.
template <class F>
auto integrate_power_tail(F&& f, double lo, double decay_exponent, const QuadratureSpec& spec)
    -> IntegralResult<detail::value_t<F>> {
  using T = detail::value_t<F>;
  spec.validate();
  const double p = decay_exponent;
  if (!(p < -1.0)) throw DomainError("quadrature: decay exponent must be < -1");
  if (!(lo > 0.0) || !std::isfinite(lo)) throw DomainError("quadrature: tail start must be > 0");
  const double beta = 1.0 / (-p - 1.0);
  double z_max;
  if (spec.tail_policy == TailPolicy::FixedZ) {
    z_max = spec.fixed_z;
    if (!(z_max > lo)) throw DomainError("quadrature: fixed tail cutoff must exceed the tail start");
  } else {
    double u_cut = 1e-3 * std::min(spec.rel_tol, spec.abs_tol);
    z_max = lo * std::min(std::pow(u_cut, -beta), 1e100);
  }
  const double u_min = std::pow(lo / z_max, 1.0 / beta);

  auto at = [&](double z, double from_lo) -> T {
    QuadPoint zp{z, from_lo, std::numeric_limits<double>::infinity()};
    return detail::call(f, zp);
  };
  auto g = [&](const QuadPoint& up) -> T {
    double u = up.x;
    double z = lo * std::pow(u, -beta);
    // z - lo = lo (u^{-β} - 1), with 1-u known exactly near u = 1
    double from_lo = up.to_hi < 0.5 ? lo * std::expm1(-beta * std::log1p(-up.to_hi)) : z - lo;
    return at(z, from_lo) * (lo * beta * std::pow(u, -beta - 1.0));
  };
  IntegralResult<T> r = integrate_singular_band(g, u_min, 1.0, spec);

  double f_hi = kaft::detail::magnitude(at(z_max, z_max - lo));
  double f_mid = kaft::detail::magnitude(at(z_max / 8.0, z_max / 8.0 - lo));
  r.evaluations += 2;
  if (f_hi > 0.0 && f_mid > 0.0) {
    double slope = std::log(f_hi / f_mid) / std::log(8.0);
    if (slope > p + 0.1)
      throw NumericalError("quadrature: measured tail decay z^" + detail::fmt(slope) +
                               " is slower than the promised z^" + detail::fmt(p),
                           kaft::detail::magnitude(r.value));
  }
  r.truncation_bound = f_hi * z_max / (-p - 1.0);
  return r;
}

// ∫_lo^∞ g(t) J_order(freq t) dt by integration between zeros of the Bessel
// factor and Euler summation of the partial sums.
template <class G>
auto integrate_bessel_oscillatory(G&& g, Order order, double freq, double lo,
                                  const QuadratureSpec& spec) -> IntegralResult<detail::value_t<G>> {
  using T = detail::value_t<G>;
  spec.validate();
  if (!(freq > 0.0) || !std::isfinite(freq)) throw DomainError("quadrature: freq must be > 0");
  if (!(lo >= 0.0) || !std::isfinite(lo)) throw DomainError("quadrature: lo must be >= 0");
  QuadratureSpec cell = spec;
  cell.abs_tol = 0.1 * spec.abs_tol;

  // first zero beyond lo
  const double x0 = lo * freq;
  int n = std::max(1, static_cast<int>(std::floor(x0 / std::numbers::pi - 0.5 * order.value)) - 2);
  double zero = specfn::bessel_j_zero(order, n);
  while (zero <= x0 * (1.0 + 1e-12)) zero = specfn::bessel_j_zero(order, ++n);

  IntegralResult<T> r;
  std::vector<T> partial;
  kaft::detail::Accumulator<T> sum;
  double a = lo;
  bool first = true;
  const int k = spec.accel_terms;
  std::vector<double> binom(k + 1, 1.0);
  for (int j = 1; j <= k; ++j) binom[j] = binom[j - 1] * (k - j + 1) / j;
  auto euler = [&](std::size_t end) {
    // K-fold averaged partial sum ending at index end (inclusive)
    T e{};
    for (int j = 0; j <= k; ++j) e += partial[end - k + j] * binom[j];
    return e * std::ldexp(1.0, -k);
  };
  T last_estimate{};
  bool have_estimate = false;
  for (int cells = 0; cells < spec.osc_max_zeros; ++cells) {
    double b = zero / freq;
    auto integrand = [&](const QuadPoint& p) -> T {
      double t = p.x;
      QuadPoint gp{t, first ? p.from_lo : t - lo, std::numeric_limits<double>::infinity()};
      return detail::call(g, gp) * specfn::bessel_j(order, freq * t);
    };
    IntegralResult<T> c = integrate_singular_band(integrand, a, b, cell);
    r.evaluations += c.evaluations;
    r.est_error += c.est_error;
    r.levels = std::max(r.levels, c.levels);
    sum.add(c.value);
    partial.push_back(sum.value());
    first = false;
    a = b;
    zero = specfn::bessel_j_zero(order, ++n);
    if (partial.size() >= static_cast<std::size_t>(k + 1)) {
      T est = euler(partial.size() - 1);
      if (have_estimate) {
        double diff = kaft::detail::magnitude(est - last_estimate);
        if (partial.size() >= 4 && diff <= spec.tolerance(kaft::detail::magnitude(est))) {
          r.value = est;
          r.est_error += diff;
          return r;
        }
      }
      last_estimate = est;
      have_estimate = true;
    }
  }
  throw NumericalError("quadrature: oscillatory integral did not stabilize within " +
                           std::to_string(spec.osc_max_zeros) + " zeros",
                       kaft::detail::magnitude(have_estimate ? last_estimate : sum.value()));
}

}  // namespace kaft::quadrature
