#pragma once

// Integration of pointwise functionals of a PairDensity over the three
// ranges of the free magnitude V:
//   inner  0 < V < |P-Q|
//   band   |P-Q| < V < P+Q     (variable t = cos θ of the (P,Q;V) triangle)
//   tail   V > P+Q             (variable T = cosh θ, or V itself for Bessel tails)
// Integrands receive a Triangle with exact gaps and return a value per dV.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "kaft/genkernel.hpp"
#include "kaft/quadrature.hpp"

namespace kaft::detail {

using macdonald::Triangle;
using quadrature::IntegralResult;
using quadrature::QuadPoint;
using quadrature::QuadratureSpec;

// A point of the band given by 1 - t and 1 + t.
struct BandPoint {
  double omt, opt;
};

inline BandPoint band_point_from_s(double s) {
  // t = tanh((π/2) sinh s)
  double y = 0.5 * std::numbers::pi * std::sinh(s);
  double q = std::exp(-2.0 * std::fabs(y));
  double near = 2.0 * q / (1.0 + q), far = 2.0 / (1.0 + q);
  return y >= 0.0 ? BandPoint{near, far} : BandPoint{far, near};
}

inline Triangle band_triangle(double p, double q, BandPoint b) {
  const double pq2 = 2.0 * p * q, d = std::fabs(p - q), s = p + q;
  double v = b.omt <= 1.0 ? std::sqrt(d * d + pq2 * b.omt) : std::sqrt(std::max(0.0, s * s - pq2 * b.opt));
  return Triangle(p, q, v, pq2 * b.omt / (v + d), pq2 * b.opt / (s + v));
}

// Sign changes of g along the band, located by bisection in the s variable.
template <class G>
std::vector<double> band_sign_changes(double p, double q, G&& g, int samples = 97) {
  std::vector<double> roots;
  const double s_lim = 3.2;
  auto val = [&](double s) { return g(band_triangle(p, q, band_point_from_s(s))); };
  double s0 = -s_lim, g0 = val(s0);
  for (int i = 1; i <= samples; ++i) {
    double s1 = -s_lim + 2.0 * s_lim * i / samples;
    double g1 = val(s1);
    if ((g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0)) {
      double a = s0, b = s1, ga = g0;
      for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
        double m = 0.5 * (a + b);
        double gm = val(m);
        if ((gm < 0.0) == (ga < 0.0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    s0 = s1;
    g0 = g1;
  }
  return roots;
}

// f(Triangle) per dV integrated over the band; cuts are s-values of interior
// split points (see band_point_from_s).
template <class F>
auto integrate_band(double p, double q, F&& f, const QuadratureSpec& spec,
                    std::vector<double> cuts = {}) {
  using T = std::decay_t<decltype(f(std::declval<const Triangle&>()))>;
  std::sort(cuts.begin(), cuts.end());
  std::vector<BandPoint> edges;
  edges.push_back({2.0, 0.0});  // t = -1
  for (double s : cuts) edges.push_back(band_point_from_s(s));
  edges.push_back({0.0, 2.0});  // t = 1
  IntegralResult<T> total;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    BandPoint lo = edges[i], hi = edges[i + 1];
    double t_lo = lo.opt - 1.0, t_hi = 1.0 - hi.omt;
    if (!(t_lo < t_hi)) continue;
    auto g = [&](const QuadPoint& x) -> T {
      BandPoint b{hi.omt + x.to_hi, lo.opt + x.from_lo};
      Triangle tr = band_triangle(p, q, b);
      // a node whose distance to an edge underflows carries no weight
      macdonald::Triple g = tr.pq_v();
      if (g.gap_inner == 0.0 || g.gap_outer == 0.0) return T{};
      return f(tr) * (p * q / tr.v());
    };
    total += quadrature::integrate_singular_band(g, t_lo, t_hi, spec);
  }
  return total;
}

// 0 < V < |P-Q|; empty when P == Q.
template <class F>
auto integrate_inner(double p, double q, F&& f, const QuadratureSpec& spec) {
  using T = std::decay_t<decltype(f(std::declval<const Triangle&>()))>;
  const double dd = std::fabs(p - q), s = p + q;
  if (!(dd > 0.0)) return IntegralResult<T>{};
  auto g = [&](const QuadPoint& x) -> T {
    double v = x.from_lo <= x.to_hi ? x.from_lo : dd - x.to_hi;
    return f(Triangle(p, q, v, -x.to_hi, s - v));
  };
  return quadrature::integrate_singular_band(g, 0.0, dd, spec);
}

inline Triangle tail_triangle(double p, double q, double v, double beyond) {
  // beyond = V - (P+Q) > 0
  return Triangle(p, q, v, 2.0 * std::min(p, q) + beyond, -beyond);
}

// V > P+Q, integrated in T = cosh θ where the integrand (including the
// Jacobian) decays like T^{t_exponent}. With cosh_max finite the range is
// 1 < T < cosh_max and no decay is assumed.
template <class F>
auto integrate_tail_power(double p, double q, double t_exponent, F&& f, const QuadratureSpec& spec,
                          double cosh_max = std::numeric_limits<double>::infinity()) {
  using T = std::decay_t<decltype(f(std::declval<const Triangle&>()))>;
  const double s = p + q, pq2 = 2.0 * p * q;
  auto g = [&](const QuadPoint& x) -> T {
    double tau = x.from_lo;  // T - 1
    double v = std::sqrt(s * s + pq2 * tau);
    double beyond = pq2 * tau / (v + s);
    return f(tail_triangle(p, q, v, beyond)) * (p * q / v);
  };
  if (std::isfinite(cosh_max)) {
    auto h = [&](const QuadPoint& x) -> T { return g(QuadPoint{1.0 + x.from_lo, x.from_lo, x.to_hi}); };
    return quadrature::integrate_singular_band(h, 0.0, cosh_max - 1.0, spec);
  }
  return quadrature::integrate_power_tail(g, 1.0, t_exponent, spec);
}

// V > P+Q with an oscillatory Bessel factor: ∫ f(tr) J_order(freq V) dV.
template <class F>
auto integrate_tail_bessel(double p, double q, F&& f, Order order, double freq,
                          const QuadratureSpec& spec) {
  using T = std::decay_t<decltype(f(std::declval<const Triangle&>()))>;
  const double s = p + q;
  auto g = [&](const QuadPoint& x) -> T {
    double beyond = x.from_lo;
    double v = s + beyond;
    return f(tail_triangle(p, q, v, beyond));
  };
  return quadrature::integrate_bessel_oscillatory(g, order, freq, s, spec);
}

}  // namespace kaft::detail
