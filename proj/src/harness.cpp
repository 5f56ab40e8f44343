#include "kaft/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "kaft/detail/pair_integrals.hpp"
#include "kaft/parallel.hpp"

namespace kaft::harness {

using detail::Triangle;
using genkernel::EvenOdd;
using genkernel::PairDensity;
using quadrature::IntegralResult;
using quadrature::QuadPoint;
using Cx = ComplexValue;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

template <class T>
double quad_error(const IntegralResult<T>& r) {
  return r.est_error + r.truncation_bound;
}

// ∫ B(λ,z) dγ_{x,y}(z) for xy != 0.
IntegralResult<Cx> integrate_kernel(const PairDensity& d, double lambda, const QuadratureSpec& spec) {
  const Params& p = d.params();
  const double a = p.a(), mu = p.mu(), nu = p.nu();
  const double u = lambda == 0.0 ? 0.0 : 2.0 / a * std::pow(std::fabs(lambda), 0.5 * a);
  const Cx mc = genkernel::m_const(p) * lambda;
  auto lin = [&](const Triangle& tr) -> Cx {
    EvenOdd eo = d.at(tr);
    if (u == 0.0) return 2.0 * eo.even;
    const double v = tr.v();
    double je = specfn::normalized_bessel_j(Order{mu}, u * v);
    double jo = specfn::normalized_bessel_j(Order{nu}, u * v);
    return 2.0 * (je * eo.even + mc * (std::pow(v, 2.0 / a) * jo) * eo.odd);
  };
  IntegralResult<Cx> r = detail::integrate_inner(d.p(), d.q(), lin, spec);
  r += detail::integrate_band(d.p(), d.q(), lin, spec);
  if (!p.compact()) {
    if (u == 0.0) {
      r += detail::integrate_tail_power(
          d.p(), d.q(), -1.0 - 2.0 / a, [&](const Triangle& tr) { return 2.0 * d.at(tr).even; }, spec);
    } else {
      const double lg = specfn::log_gamma(mu + 1.0).log_abs;
      auto g = [&](const Triangle& tr) -> Cx {
        return 2.0 * d.at(tr).even * std::exp(lg - mu * std::log(0.5 * u * tr.v()));
      };
      r += detail::integrate_tail_bessel(d.p(), d.q(), g, Order{mu}, u, spec);
    }
  }
  return r;
}

}  // namespace

ResidualReport make_report(Cx lhs, Cx rhs, double quad_error, double wall_ms) {
  ResidualReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_residual = std::abs(lhs - rhs);
  r.rel_residual = r.abs_residual / (1.0 + std::abs(lhs));
  r.quad_error = quad_error;
  r.wall_ms = wall_ms;
  return r;
}

ResidualReport product_residual(const Params& p, double lambda, double x, double y,
                                const QuadratureSpec& spec) {
  Stopwatch sw;
  p.require_density();
  Cx lhs = genkernel::b_kernel(p, lambda, x) * genkernel::b_kernel(p, lambda, y);
  if (y == 0.0) return make_report(lhs, genkernel::b_kernel(p, lambda, x), 0.0, sw.ms());
  if (x == 0.0) return make_report(lhs, genkernel::b_kernel(p, lambda, y), 0.0, sw.ms());
  PairDensity d(p, PairDensity::Kind::Gamma, x, y);
  IntegralResult<Cx> r = integrate_kernel(d, lambda, spec);
  return make_report(lhs, r.value, quad_error(r), sw.ms());
}

ResidualReport mass_residual(const Params& p, double x, double y, const QuadratureSpec& spec) {
  Stopwatch sw;
  p.require_density();
  if (x == 0.0 || y == 0.0) return make_report(1.0, 1.0, 0.0, sw.ms());
  PairDensity d(p, PairDensity::Kind::Gamma, x, y);
  IntegralResult<Cx> r = integrate_kernel(d, 0.0, spec);
  return make_report(1.0, r.value, quad_error(r), sw.ms());
}

TvReport tv_norm_report(const Params& p, double x, double y, const QuadratureSpec& spec) {
  p.require_density();
  if (x == 0.0 || y == 0.0) throw DomainError("tv_norm: needs x, y nonzero");
  PairDensity d(p, PairDensity::Kind::Gamma, x, y);
  auto tv = [&](const Triangle& tr) -> double {
    EvenOdd eo = d.at(tr);
    return std::abs(eo.even + eo.odd) + std::abs(eo.even - eo.odd);
  };
  std::vector<double> cuts;
  if (p.compact()) {
    // real density: |E ± O| has kinks where E ± O changes sign
    for (double s : {1.0, -1.0}) {
      auto g = [&](const Triangle& tr) {
        EvenOdd b = d.bracket(tr);
        return (b.even + s * b.odd).real();
      };
      auto roots = detail::band_sign_changes(d.p(), d.q(), g);
      cuts.insert(cuts.end(), roots.begin(), roots.end());
    }
  }
  TvReport rep;
  auto in = detail::integrate_inner(d.p(), d.q(), tv, spec);
  auto band = detail::integrate_band(d.p(), d.q(), tv, spec, cuts);
  auto out = detail::integrate_tail_power(d.p(), d.q(), -1.0 - 2.0 / p.a(), tv, spec);
  rep.inner = in.value;
  rep.band = band.value;
  rep.outer = out.value;
  rep.total = in.value + band.value + out.value;
  rep.est_error = in.est_error + band.est_error + out.est_error;
  rep.truncation_bound = out.truncation_bound;
  return rep;
}

double tv_norm(const Params& p, double x, double y, const QuadratureSpec& spec) {
  return tv_norm_report(p, x, y, spec).total;
}

namespace {

void check_hankel_args(double x, double y, double t) {
  if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
    throw DomainError("hankel: x, y must be positive");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("hankel: t must be >= 0");
}

}  // namespace

ResidualReport hankel_identity_eq1(Order mu_o, Order nu_o, double x, double y, double t,
                                   const QuadratureSpec& spec) {
  Stopwatch sw;
  check_hankel_args(x, y, t);
  const double mu = mu_o.value, nu = nu_o.value;
  macdonald::Kernel k(macdonald::MacdonaldOrders::make(mu, nu));
  Cx lhs;
  if (t == 0.0) {
    if (nu < mu) throw DomainError("hankel eq1: t=0 needs nu >= mu");
    lhs = nu == mu ? std::pow(x * y, nu) : 0.0;
  } else {
    lhs = std::pow(x * y, nu) * std::pow(t, 2.0 * (nu - mu)) *
          specfn::normalized_bessel_j(nu_o, x * t) * specfn::normalized_bessel_j(nu_o, y * t);
  }
  const double c = std::exp((2.0 * nu - mu) * std::numbers::ln2 +
                            2.0 * specfn::log_gamma(nu + 1.0).log_abs -
                            specfn::log_gamma(mu + 1.0).log_abs);
  auto f = [&](const Triangle& tr) -> double {
    const double v = tr.v();
    double j = t == 0.0 ? 1.0 : specfn::normalized_bessel_j(mu_o, t * v);
    return k(tr.pq_v()) * j * std::pow(v, mu + 1.0);
  };
  IntegralResult<double> r = detail::integrate_band(x, y, f, spec);
  if (!k.outer_vanishes()) {
    if (t == 0.0) {
      r += detail::integrate_tail_power(x, y, -1.0 - (nu - mu), f, spec);
    } else {
      const double lg = specfn::log_gamma(mu + 1.0).log_abs;
      auto g = [&](const Triangle& tr) -> double {
        const double v = tr.v();
        return k(tr.pq_v()) * std::exp((mu + 1.0) * std::log(v) + lg - mu * std::log(0.5 * t * v));
      };
      r += detail::integrate_tail_bessel(x, y, g, mu_o, t, spec);
    }
  }
  return make_report(lhs, c * r.value, c * quad_error(r), sw.ms());
}

ResidualReport hankel_identity_eq2(Order mu_o, Order nu_o, double x, double y, double t,
                                   const QuadratureSpec& spec) {
  Stopwatch sw;
  check_hankel_args(x, y, t);
  const double mu = mu_o.value, nu = nu_o.value;
  macdonald::Kernel k(macdonald::MacdonaldOrders::make(mu, nu));
  Cx lhs = std::pow(x, nu) * std::pow(y, mu);
  if (t != 0.0)
    lhs *= specfn::normalized_bessel_j(nu_o, x * t) * specfn::normalized_bessel_j(mu_o, y * t);
  const double c = std::exp(mu * std::numbers::ln2 + specfn::log_gamma(mu + 1.0).log_abs);
  // R(x, z; y) vanishes for z > x + y
  auto f = [&](const Triangle& tr) -> double {
    const double v = tr.v();
    double j = t == 0.0 ? 1.0 : specfn::normalized_bessel_j(nu_o, t * v);
    return k(tr.pv_q()) * j * std::pow(v, nu + 1.0);
  };
  IntegralResult<double> r = detail::integrate_band(x, y, f, spec);
  if (y > x && !k.outer_vanishes()) r += detail::integrate_inner(x, y, f, spec);
  return make_report(lhs, c * r.value, c * quad_error(r), sw.ms());
}

double legendre_p_closed_form(Order mu_o, Order nu_o) {
  const double mu = mu_o.value, nu = nu_o.value;
  return std::exp((mu + 0.5) * std::numbers::ln2 + specfn::log_gamma(mu + 0.5).log_abs) *
         specfn::rgamma(mu - nu + 1.0) * specfn::rgamma(mu + nu + 1.0);
}

double legendre_q_closed_form(Order mu_o, Order nu_o) {
  const double mu = mu_o.value, nu = nu_o.value;
  specfn::LogGamma g = specfn::log_gamma(nu - mu);
  return g.sign *
         std::exp((mu - 0.5) * std::numbers::ln2 + g.log_abs + specfn::log_gamma(mu + 0.5).log_abs) *
         specfn::rgamma(nu + mu + 1.0);
}

ResidualReport legendre_p_integral_check(Order mu_o, Order nu_o, const QuadratureSpec& spec) {
  Stopwatch sw;
  const double mu = mu_o.value, nu = nu_o.value;
  if (!(mu > -0.5)) throw DomainError("legendre_p check: mu=" + fmt(mu) + " must exceed -1/2");
  const Order m{0.5 - mu}, n{nu - 0.5};
  auto f = [&](const QuadPoint& x) {
    double omt = x.to_hi, opt = x.from_lo;
    return std::pow(omt * opt, 0.5 * mu - 0.25) * specfn::legendre_p(m, n, omt, opt);
  };
  auto r = quadrature::integrate_singular_band(f, -1.0, 1.0, spec);
  return make_report(r.value, legendre_p_closed_form(mu_o, nu_o), quad_error(r), sw.ms());
}

ResidualReport legendre_q_integral_check(Order mu_o, Order nu_o, const QuadratureSpec& spec) {
  Stopwatch sw;
  const double mu = mu_o.value, nu = nu_o.value;
  if (!(mu > -0.5)) throw DomainError("legendre_q check: mu=" + fmt(mu) + " must exceed -1/2");
  if (!(nu > mu))
    throw DomainError("legendre_q check: integrand decays like t^(mu-nu-1); needs nu > mu, got mu=" +
                      fmt(mu) + ", nu=" + fmt(nu));
  const Order m{0.5 - mu}, n{nu - 0.5};
  auto f = [&](const QuadPoint& x) {
    double tm1 = x.from_lo, t = x.x;
    return std::pow(tm1 * (t + 1.0), 0.5 * mu - 0.25) *
           specfn::legendre_q_phase_free(m, n, t, tm1);
  };
  auto r = quadrature::integrate_power_tail(f, 1.0, mu - nu - 1.0, spec);
  double rhs = legendre_q_closed_form(mu_o, nu_o);
  if (rhs * r.value < 0.0) rhs = -rhs;  // compared up to overall sign
  return make_report(r.value, rhs, quad_error(r), sw.ms());
}

// ---------------------------------------------------------------- test functions

TestFunction TestFunction::callable(std::function<double(double)> f, double support_radius,
                                    std::string name) {
  if (!(support_radius > 0.0)) throw DomainError("test function: support radius must be > 0");
  TestFunction t;
  t.f_ = std::move(f);
  t.support_ = support_radius;
  t.name_ = std::move(name);
  return t;
}

TestFunction TestFunction::gaussian(double scale) {
  return callable([scale](double x) { return std::exp(-(x / scale) * (x / scale)); }, 6.5 * scale,
                  "gaussian");
}

TestFunction TestFunction::bump(double r) {
  return callable(
      [r](double x) {
        double s = x / r;
        if (std::fabs(s) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - s * s));
      },
      r, "bump");
}

TestFunction TestFunction::constant(double value) {
  return callable([value](double) { return value; }, kInf, "constant");
}

namespace {

// Natural cubic spline second derivatives.
std::vector<double> spline_moments(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> m(n, 0.0), c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
    double a = h0 / 6.0, b = (h0 + h1) / 3.0, cc = h1 / 6.0;
    double r = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    double den = b - a * c[i - 1];
    c[i] = cc / den;
    d[i] = (r - a * d[i - 1]) / den;
  }
  for (std::size_t i = n - 1; i-- > 1;) m[i] = d[i] - c[i] * m[i + 1];
  return m;
}

double spline_eval(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& m, double t) {
  if (t < x.front() || t > x.back()) return 0.0;
  std::size_t i = std::upper_bound(x.begin(), x.end(), t) - x.begin();
  i = std::clamp<std::size_t>(i, 1, x.size() - 1);
  double h = x[i] - x[i - 1];
  double a = (x[i] - t) / h, b = (t - x[i - 1]) / h;
  return a * y[i - 1] + b * y[i] + ((a * a * a - a) * m[i - 1] + (b * b * b - b) * m[i]) * h * h / 6.0;
}

}  // namespace

TestFunction TestFunction::samples(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 4)
    throw DomainError("test function: need at least 4 samples with matching x and y");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw DomainError("test function: sample abscissae must increase");
  TestFunction t;
  t.sampled_ = true;
  t.xs_ = std::move(xs);
  t.ys_ = std::move(ys);
  auto m = spline_moments(t.xs_, t.ys_);
  t.f_ = [x = t.xs_, y = t.ys_, m](double s) { return spline_eval(x, y, m, s); };
  t.support_ = std::max(std::fabs(t.xs_.front()), std::fabs(t.xs_.back()));
  t.name_ = "samples";
  return t;
}

double TestFunction::operator()(double x) const {
  if (std::fabs(x) > support_) return 0.0;
  return f_(x);
}

void TestFunction::check(double tol) const {
  if (!std::isfinite(support_)) return;
  double peak = 0.0;
  for (int i = 0; i <= 400; ++i) peak = std::max(peak, std::fabs(f_(-support_ + support_ * i / 200.0)));
  double edge = std::max(std::fabs(f_(support_)), std::fabs(f_(-support_)));
  if (sampled_) {
    double lo = std::fabs(ys_.front()), hi = std::fabs(ys_.back());
    edge = std::max(lo, hi);
  }
  if (edge > tol * std::max(1.0, peak))
    throw DomainError("test function: declared support truncates f (edge value " + fmt(edge) + ")");
  if (sampled_) {
    // spline through every other sample, compared at the omitted ones; the
    // error of the full spline is about 1/16 of that difference
    std::vector<double> cx, cy;
    for (std::size_t i = 0; i < xs_.size(); i += 2) {
      cx.push_back(xs_[i]);
      cy.push_back(ys_[i]);
    }
    if (cx.back() != xs_.back()) {
      cx.push_back(xs_.back());
      cy.push_back(ys_.back());
    }
    if (cx.size() < 4) throw DomainError("test function: too few samples to assess resolution");
    auto m = spline_moments(cx, cy);
    double worst = 0.0;
    for (std::size_t i = 1; i < xs_.size(); i += 2)
      worst = std::max(worst, std::fabs(spline_eval(cx, cy, m, xs_[i]) - ys_[i]));
    if (worst / 16.0 > tol * std::max(1.0, peak))
      throw DomainError("test function: sample grid too coarse for requested tolerance (estimated error " +
                        fmt(worst / 16.0) + ")");
  }
}

// ---------------------------------------------------------------- translation

TranslationResult translate_report(const Params& p, double y, const TestFunction& f, double z,
                                   const QuadratureSpec& spec) {
  p.require_density();
  const double inv = 2.0 / p.a();
  // σ_{y,z} collapses onto ±max(|y|,|z|) within a relative distance of about
  // min/max in the a/2 power; below kDirac that is the Dirac case to working accuracy
  constexpr double kDirac = 1e-12;
  const double py = std::pow(std::fabs(y), 0.5 * p.a()), pz = std::pow(std::fabs(z), 0.5 * p.a());
  if (py <= kDirac * pz) return {f(z), 0.0};
  if (pz <= kDirac * py) return {f(y), 0.0};
  f.check(spec.tolerance(1.0));
  PairDensity d(p, PairDensity::Kind::Sigma, y, z);
  auto lin = [&](const Triangle& tr) -> Cx {
    const double xi = std::pow(tr.v(), inv);
    const double fp = f(xi), fm = f(-xi);
    if (fp == 0.0 && fm == 0.0) return 0.0;
    EvenOdd eo = d.at(tr);
    return (fp + fm) * eo.even + (fp - fm) * eo.odd;
  };
  const double P = d.p(), Q = d.q(), vl = std::pow(f.support(), 0.5 * p.a());
  IntegralResult<Cx> r = detail::integrate_inner(P, Q, lin, spec);
  if (vl > std::fabs(P - Q)) r += detail::integrate_band(P, Q, lin, spec);
  if (!p.compact() && vl > P + Q) {
    double cosh_max = std::isfinite(vl) ? (vl - P - Q) * (vl + P + Q) / (2.0 * P * Q) + 1.0 : kInf;
    r += detail::integrate_tail_power(P, Q, -1.0 - 2.0 / p.a(), lin, spec, cosh_max);
  }
  return {r.value, quad_error(r)};
}

ComplexValue translate(const Params& p, double y, const TestFunction& f, double z,
                       const QuadratureSpec& spec) {
  return translate_report(p, y, f, z, spec).value;
}

// ---------------------------------------------------------------- grids

std::vector<double> Axis::values() const {
  std::vector<double> v;
  if (count == 1) return {min};
  for (int i = 0; i < count; ++i) {
    double s = static_cast<double>(i) / (count - 1);
    if (spacing == Spacing::Log)
      v.push_back(min * std::pow(max / min, s));
    else
      v.push_back(min + s * (max - min));
  }
  v.front() = min;
  v.back() = max;
  return v;
}

void SweepGrid::validate() const {
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const Axis& a = axes[i];
    if (a.count < 1) throw DomainError("grid axis " + a.name + ": count must be >= 1");
    if (!std::isfinite(a.min) || !std::isfinite(a.max))
      throw DomainError("grid axis " + a.name + ": bounds must be finite");
    if (a.count > 1 && !(a.min < a.max)) throw DomainError("grid axis " + a.name + ": needs min < max");
    if (a.spacing == Spacing::Log && !(a.min > 0.0))
      throw DomainError("grid axis " + a.name + ": log spacing needs min > 0");
    for (std::size_t j = 0; j < i; ++j)
      if (axes[j].name == a.name) throw DomainError("grid axis " + a.name + " given twice");
  }
}

const Axis* SweepGrid::find(const std::string& name) const {
  for (const Axis& a : axes)
    if (a.name == name) return &a;
  return nullptr;
}

std::vector<std::vector<double>> SweepGrid::points() const {
  validate();
  std::vector<std::vector<double>> out{{}};
  for (const Axis& a : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : out)
      for (double v : a.values()) {
        auto row = prefix;
        row.push_back(v);
        next.push_back(std::move(row));
      }
    out = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------- L^p probe

namespace {

QuadratureSpec norm_spec(const QuadratureSpec& spec) {
  QuadratureSpec s = spec;
  s.rel_tol = std::max(spec.rel_tol, 1e-7);
  s.abs_tol = std::max(spec.abs_tol, 1e-10);
  return s;
}

// ∫_{-L}^{L} g(x) |x|^w dx for an even-agnostic g, in two panels split at 0
// and, when split > 0, also at ±split.
template <class G>
double weighted_integral(G&& g, double w, double L, double split, const QuadratureSpec& spec) {
  std::vector<double> edges{0.0};
  if (split > 0.0 && split < L) edges.push_back(split);
  edges.push_back(L);
  double total = 0.0;
  for (double sign : {1.0, -1.0}) {
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      double lo = edges[i];
      auto h = [&](const QuadPoint& q) {
        double ax = lo == 0.0 ? q.from_lo : q.x;
        return g(sign * ax) * std::pow(ax, w);
      };
      total += quadrature::integrate_singular_band(h, lo, edges[i + 1], spec).value;
    }
  }
  return total;
}

double finish_norm(double integral, double p_exp) {
  return p_exp == 1.0 ? integral : std::pow(integral, 1.0 / p_exp);
}

}  // namespace

double lp_norm(const Params& p, const TestFunction& f, double p_exp, const QuadratureSpec& spec) {
  if (!(p_exp == 1.0 || p_exp == 2.0 || p_exp == kInf))
    throw DomainError("lp_norm: exponent must be 1, 2 or inf");
  const double L = f.support();
  if (p_exp == kInf) {
    double m = 0.0;
    if (!std::isfinite(L)) return std::fabs(f(0.0));
    for (int i = 0; i <= 4000; ++i) m = std::max(m, std::fabs(f(-L + L * i / 2000.0)));
    return m;
  }
  if (!std::isfinite(L)) throw DomainError("lp_norm: needs f of finite support");
  auto g = [&](double x) { return std::pow(std::fabs(f(x)), p_exp); };
  return finish_norm(weighted_integral(g, p.weight(), L, 0.0, norm_spec(spec)), p_exp);
}

std::vector<LpProbe> lp_bound_probe_report(const Params& p, const std::vector<double>& p_exps,
                                           const TestFunction& f, const SweepGrid& y_grid,
                                           const QuadratureSpec& spec, int jobs) {
  p.require_density();
  for (double e : p_exps)
    if (!(e == 1.0 || e == 2.0 || e == kInf))
      throw DomainError("lp_bound_probe: exponent must be 1, 2 or inf");
  if (!p.compact()) throw DomainError("lp_bound_probe: needs 2/a to be an integer (compact support)");
  if (!std::isfinite(f.support())) throw DomainError("lp_bound_probe: needs f of finite support");
  y_grid.validate();
  const Axis* ax = y_grid.find("y");
  if (!ax) throw DomainError("lp_bound_probe: grid has no axis named y");
  const std::vector<double> ys = ax->values();
  const QuadratureSpec outer = norm_spec(spec);

  std::vector<double> fnorm;
  for (double e : p_exps) fnorm.push_back(lp_norm(p, f, e, spec));

  std::vector<std::vector<double>> ratio(ys.size(), std::vector<double>(p_exps.size(), 1.0));
  parallel_for(ys.size(), jobs, [&](std::size_t iy) {
    const double y = ys[iy];
    if (y == 0.0) return;  // τ_0 is the identity
    const double a = p.a();
    const double z_max =
        std::pow(std::pow(std::fabs(y), 0.5 * a) + std::pow(f.support(), 0.5 * a), 2.0 / a);
    std::map<double, double> memo;
    auto tau = [&](double z) {
      auto it = memo.find(z);
      if (it != memo.end()) return it->second;
      double v = std::abs(translate(p, y, f, z, spec));
      memo.emplace(z, v);
      return v;
    };
    for (std::size_t ie = 0; ie < p_exps.size(); ++ie) {
      const double e = p_exps[ie];
      if (e == kInf) continue;
      auto g = [&](double z) { return std::pow(tau(z), e); };
      double n = finish_norm(weighted_integral(g, p.weight(), z_max, std::fabs(y), outer), e);
      ratio[iy][ie] = n / fnorm[ie];
    }
    for (std::size_t ie = 0; ie < p_exps.size(); ++ie) {
      if (p_exps[ie] != kInf) continue;
      if (memo.empty()) {
        // make sure the sup sees the node set used by the integral norms
        auto g = [&](double z) { return tau(z); };
        weighted_integral(g, p.weight(), z_max, std::fabs(y), outer);
      }
      double m = 0.0;
      for (const auto& kv : memo) m = std::max(m, kv.second);
      ratio[iy][ie] = m / fnorm[ie];
    }
  });

  std::vector<LpProbe> out;
  for (std::size_t ie = 0; ie < p_exps.size(); ++ie) {
    LpProbe pr;
    pr.p_exp = p_exps[ie];
    pr.y = ys;
    for (std::size_t iy = 0; iy < ys.size(); ++iy) {
      pr.ratio.push_back(ratio[iy][ie]);
      pr.max_ratio = std::max(pr.max_ratio, ratio[iy][ie]);
    }
    out.push_back(pr);
  }
  return out;
}

double lp_bound_probe(const Params& p, double p_exp, const TestFunction& f, const SweepGrid& y_grid,
                      const QuadratureSpec& spec, int jobs) {
  return lp_bound_probe_report(p, {p_exp}, f, y_grid, spec, jobs).front().max_ratio;
}

}  // namespace kaft::harness
