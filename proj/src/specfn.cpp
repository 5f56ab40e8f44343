#include "kaft/specfn.hpp"

#include <math.h>

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

#include "kaft/detail/sum.hpp"

namespace kaft::specfn {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

bool is_pole(double x) { return x <= 0.0 && near_integer(x); }

double cos_pi(double x) { return sin_pi(x + 0.5); }

}  // namespace

bool near_integer(double x) {
  return std::fabs(x - std::nearbyint(x)) <= 8.0 * kEps * std::max(1.0, std::fabs(x));
}

LogGamma log_gamma(double x) {
  if (!std::isfinite(x)) throw DomainError("log_gamma: non-finite argument");
  if (x <= 0.0 && x == std::floor(x))
    throw DomainError("log_gamma: pole at nonpositive integer x=" + fmt(x));
  int sign = 1;
  double v = ::lgamma_r(x, &sign);
  return {v, sign};
}

double gamma(double x) {
  LogGamma g = log_gamma(x);
  return g.sign * std::exp(g.log_abs);
}

double rgamma(double x) {
  if (is_pole(x)) return 0.0;
  LogGamma g = log_gamma(x);
  return g.sign * std::exp(-g.log_abs);
}

double sin_pi(double x) {
  if (near_integer(x)) return 0.0;
  double r = x - 2.0 * std::nearbyint(0.5 * x);  // [-1, 1]
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(kPi * r);
}

double digamma(double x) {
  if (is_pole(x)) throw DomainError("digamma: pole at nonpositive integer x=" + fmt(x));
  if (x < 0.0) {
    // reflection: ψ(x) = ψ(1-x) - π cot(πx)
    return digamma(1.0 - x) - kPi * cos_pi(x) / sin_pi(x);
  }
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  double r = 1.0 / (x * x);
  double tail =
      r * (1.0 / 12 -
           r * (1.0 / 120 -
                r * (1.0 / 252 -
                     r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12.0))))));
  return acc + std::log(x) - 0.5 / x - tail;
}

// ---------------------------------------------------------------- Bessel

namespace {

void check_order(double nu) {
  if (!(nu > -1.0) || !std::isfinite(nu))
    throw DomainError("bessel: order nu=" + fmt(nu) + " must exceed -1");
}

double series_limit(double nu) { return std::max(6.0, nu); }
double asymptotic_limit(double nu) { return std::max(25.0, 2.0 * nu * nu); }

EvalResult normalized_series(double nu, double x) {
  const double q = -0.25 * x * x;
  detail::CompensatedSum sum;
  double term = 1.0;
  sum.add(term);
  for (int k = 1; k < 500; ++k) {
    term *= q / (k * (nu + k));
    sum.add(term);
    if (std::fabs(term) <= 0.5 * kEps * std::fabs(sum.value()) && k > 0.5 * x) {
      double err = std::fabs(term) + 2.0 * kEps * sum.magnitude();
      return {sum.value(), err};
    }
  }
  throw NumericalError("bessel series did not converge for x=" + fmt(x), sum.value());
}

// Hankel expansion of J_ν(x) for large x.
EvalResult hankel_asymptotic(double nu, double x) {
  const double mu4 = 4.0 * nu * nu;
  detail::CompensatedSum p, q;
  double term = 1.0;  // a_k / x^k
  double last = 1.0;
  p.add(1.0);
  int k = 0;
  for (; k < 60; ++k) {
    double odd = 2.0 * k + 1.0;
    double next = term * (mu4 - odd * odd) / ((k + 1) * 8.0 * x);
    if (std::fabs(next) > std::fabs(term) && k > 2) break;  // smallest term reached
    term = next;
    last = std::fabs(term);
    int j = k + 1;
    // P collects even j with sign (-1)^{j/2}, Q odd j with sign (-1)^{(j-1)/2}
    double s = ((j / 2) % 2 == 0) ? 1.0 : -1.0;
    if (j % 2 == 0)
      p.add(s * term);
    else
      q.add(s * term);
    if (last <= 0.5 * kEps) break;
  }
  // ω = x - (ν/2 + 1/4)π
  double phi = 0.5 * nu + 0.25;
  double c = std::cos(x) * cos_pi(phi) + std::sin(x) * sin_pi(phi);
  double s = std::sin(x) * cos_pi(phi) - std::cos(x) * sin_pi(phi);
  double amp = std::sqrt(2.0 / (kPi * x));
  double v = amp * (p.value() * c - q.value() * s);
  double err = amp * (last + 4.0 * kEps * (p.magnitude() + q.magnitude())) +
               8.0 * kEps * x * amp;  // phase rounding of cos(x), sin(x)
  return {v, err};
}

// 𝒥_ν(x) by Miller's backward recurrence, normalized with
//   (x/2)^ν/Γ(ν+1) = J_ν + Σ_{k≥1} (ν+2k) Γ(ν+k)/(k! Γ(ν+1)) J_{ν+2k}.
EvalResult normalized_miller(double nu, double x) {
  const double decay = std::pow(1.5 * 18.0 * std::log(10.0) * std::sqrt(x), 2.0 / 3.0);
  int m = static_cast<int>(std::ceil(x + decay)) + 20;
  m += m % 2;
  std::vector<double> y(m + 2, 0.0);
  y[m + 1] = 0.0;
  y[m] = 1e-300;
  for (int n = m; n >= 1; --n) {
    y[n - 1] = 2.0 * (nu + n) / x * y[n] - y[n + 1];
    if (std::fabs(y[n - 1]) > 1e250) {
      for (int j = n - 1; j <= m; ++j) y[j] *= 1e-250;
    }
  }
  detail::CompensatedSum norm;
  norm.add(y[0]);
  double h = 1.0;
  for (int k = 1; 2 * k <= m; ++k) {
    if (k > 1) h *= (nu + k - 1) / k;
    norm.add((nu + 2.0 * k) * h * y[2 * k]);
  }
  double v = y[0] / norm.value();
  double err = 16.0 * kEps * (std::fabs(v) + norm.magnitude() / std::fabs(norm.value()) *
                                                   std::fabs(v));
  return {v, err};
}

double log_scale(double nu, double x) {
  // ln[(x/2)^ν / Γ(ν+1)]
  return nu * std::log(0.5 * x) - log_gamma(nu + 1.0).log_abs;
}

}  // namespace

EvalResult normalized_bessel_j_eval(Order nu_o, double x) {
  const double nu = nu_o.value;
  check_order(nu);
  if (!std::isfinite(x)) throw DomainError("bessel: non-finite argument");
  x = std::fabs(x);
  if (x == 0.0) return {1.0, 0.0};
  if (x <= series_limit(nu)) return normalized_series(nu, x);
  if (x >= asymptotic_limit(nu)) {
    EvalResult j = hankel_asymptotic(nu, x);
    double s = std::exp(-log_scale(nu, x));
    return {j.value * s, j.est_error * s};
  }
  return normalized_miller(nu, x);
}

double normalized_bessel_j(Order nu, double x) { return normalized_bessel_j_eval(nu, x).value; }

double bessel_j(Order nu_o, double x) {
  const double nu = nu_o.value;
  check_order(nu);
  if (!(x >= 0.0) || !std::isfinite(x))
    throw DomainError("bessel_j: argument x=" + fmt(x) + " must be finite and >= 0");
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    throw DomainError("bessel_j: J_nu(0) diverges for negative order nu=" + fmt(nu));
  }
  if (x >= asymptotic_limit(nu)) return hankel_asymptotic(nu, x).value;
  double n = x <= series_limit(nu) ? normalized_series(nu, x).value
                                   : normalized_miller(nu, x).value;
  return n * std::exp(log_scale(nu, x));
}

double bessel_j_zero(Order nu_o, int n) {
  const double nu = nu_o.value;
  check_order(nu);
  if (n < 1) throw DomainError("bessel_j_zero: index must be >= 1");
  const double mu = 4.0 * nu * nu;
  const double beta = (n + 0.5 * nu - 0.25) * kPi;
  const double e = 8.0 * beta;
  double j = beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e) -
             32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) /
                 (15.0 * e * e * e * e * e);
  if (!(j > 0.0)) j = beta;
  for (int it = 0; it < 3; ++it) {
    double f = bessel_j(nu_o, j);
    double d = nu / j * f - bessel_j(Order{nu + 1.0}, j);
    if (d == 0.0) break;
    double step = f / d;
    if (std::fabs(step) > 0.5) break;  // start too poor; keep the estimate
    j -= step;
    if (std::fabs(step) <= 4.0 * kEps * j) break;
  }
  return j;
}

// ---------------------------------------------------------------- 2F1

namespace {

EvalResult gauss_series(double a, double b, double c, double z) {
  // the dispatcher uses |z| <= 1/2; direct calls may go a little further
  if (!(std::fabs(z) <= 0.75))
    throw DomainError("hyp2f1 series: |z| must be <= 3/4, got " + fmt(z));
  detail::CompensatedSum sum;
  double term = 1.0;
  sum.add(term);
  for (int n = 0; n < 4000; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    sum.add(term);
    if (term == 0.0) return {sum.value(), 2.0 * kEps * sum.magnitude()};
    double ratio = std::fabs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2.0)) * z);
    if (ratio < 1.0 && std::fabs(term) * ratio / (1.0 - ratio) <= 0.5 * kEps * std::fabs(sum.value())) {
      double tail = std::fabs(term) * ratio / (1.0 - ratio);
      return {sum.value(), tail + 2.0 * kEps * sum.magnitude()};
    }
  }
  throw NumericalError("hyp2f1 series did not converge at z=" + fmt(z), sum.value());
}

// Terminating series; a = -n.
EvalResult polynomial(double a, double b, double c, double z) {
  int n = static_cast<int>(std::nearbyint(-a));
  detail::CompensatedSum sum;
  double term = 1.0;
  sum.add(term);
  for (int k = 0; k < n; ++k) {
    term *= (-n + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum.add(term);
  }
  return {sum.value(), 4.0 * kEps * sum.magnitude()};
}

}  // namespace

Hyp2F1::Hyp2F1(double a, double b, double c) : a_(a), b_(b), c_(c) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw DomainError("hyp2f1: non-finite parameter");
  if (is_pole(c)) throw DomainError("hyp2f1: c=" + fmt(c) + " is a nonpositive integer (pole)");
  if (is_pole(b) && !is_pole(a)) std::swap(a_, b_);
  if (is_pole(a_) || is_pole(b_)) {
    if (is_pole(b_) && b_ > a_) std::swap(a_, b_);  // shortest polynomial
    path_ = Path::Terminating;
    return;
  }
  d_ = c_ - a_ - b_;
  if (is_pole(c_ - a_) || is_pole(c_ - b_)) {
    path_ = Path::EulerTerminating;
    return;
  }
  if (near_integer(d_)) {
    m_ = static_cast<int>(std::nearbyint(d_));
    path_ = Path::Logarithmic;
    if (m_ >= 0) {
      LogGamma gc = log_gamma(c_);
      LogGamma g1 = log_gamma(a_ + m_);
      LogGamma g2 = log_gamma(b_ + m_);
      LogGamma ga = log_gamma(a_);
      LogGamma gb = log_gamma(b_);
      log_c1_ = gc.log_abs - g1.log_abs - g2.log_abs;
      sign_c1_ = gc.sign * g1.sign * g2.sign;
      log_c2_ = gc.log_abs - ga.log_abs - gb.log_abs;
      sign_c2_ = gc.sign * ga.sign * gb.sign;
    }
    return;
  }
  path_ = Path::Connection;
  if (std::fabs(d_ - std::nearbyint(d_)) <= 1e-8) {
    sign_c1_ = sign_c2_ = 0;  // degenerate: transformation refused
    return;
  }
  LogGamma gc = log_gamma(c_);
  LogGamma gd = log_gamma(d_);
  LogGamma gmd = log_gamma(-d_);
  LogGamma gca = log_gamma(c_ - a_);
  LogGamma gcb = log_gamma(c_ - b_);
  LogGamma ga = log_gamma(a_);
  LogGamma gb = log_gamma(b_);
  log_c1_ = gc.log_abs + gd.log_abs - gca.log_abs - gcb.log_abs;
  sign_c1_ = gc.sign * gd.sign * gca.sign * gcb.sign;
  log_c2_ = gc.log_abs + gmd.log_abs - ga.log_abs - gb.log_abs;
  sign_c2_ = gc.sign * gmd.sign * ga.sign * gb.sign;
}

EvalResult Hyp2F1::series(double z) const {
  if (path_ == Path::Terminating) return polynomial(a_, b_, c_, z);
  return gauss_series(a_, b_, c_, z);
}

EvalResult Hyp2F1::transformed(double w) const {
  if (!(w > 0.0)) throw DomainError("hyp2f1: z must be < 1");
  switch (path_) {
    case Path::Terminating:
      return polynomial(a_, b_, c_, 1.0 - w);
    case Path::EulerTerminating: {
      // 2F1(a,b;c;z) = (1-z)^{c-a-b} 2F1(c-a,c-b;c;z)
      double ca = c_ - a_, cb = c_ - b_;
      EvalResult p = is_pole(ca) ? polynomial(ca, cb, c_, 1.0 - w) : polynomial(cb, ca, c_, 1.0 - w);
      double s = std::pow(w, d_);
      return {p.value * s, p.est_error * s};
    }
    case Path::Connection: {
      if (sign_c1_ == 0 && sign_c2_ == 0)
        throw DomainError("hyp2f1: degenerate-parameter: c-a-b=" + fmt(d_) +
                          " within 1e-8 of an integer on the transformation path");
      EvalResult s1 = gauss_series(a_, b_, 1.0 - d_, w);
      EvalResult s2 = gauss_series(c_ - a_, c_ - b_, 1.0 + d_, w);
      double c1 = sign_c1_ * std::exp(log_c1_);
      double c2 = sign_c2_ * std::exp(log_c2_ + d_ * std::log(w));
      double t1 = c1 * s1.value, t2 = c2 * s2.value;
      double v = t1 + t2;
      double err = std::fabs(c1) * s1.est_error + std::fabs(c2) * s2.est_error +
                   8.0 * kEps * (std::fabs(t1) + std::fabs(t2));
      if (!std::isfinite(v)) throw NumericalError("hyp2f1: connection formula overflow");
      return {v, err};
    }
    case Path::Logarithmic: {
      if (m_ < 0) {
        // Euler transform maps c-a-b = -m to +m.
        Hyp2F1 inner(c_ - a_, c_ - b_, c_);
        EvalResult r = inner.transformed(w);
        double s = std::pow(w, d_);
        return {r.value * s, r.est_error * s};
      }
      const int m = m_;
      const double lw = std::log(w);
      detail::CompensatedSum p1;
      double t = 1.0;
      // Σ_{n<m} (a)_n (b)_n (m-n-1)! / n! (-w)^n
      double fact = std::tgamma(static_cast<double>(m));  // (m-1)!
      for (int n = 0; n < m; ++n) {
        p1.add(t * fact);
        t *= (a_ + n) * (b_ + n) / (n + 1.0) * (-w);
        if (m - n - 1 > 0) fact /= (m - n - 1);
      }
      detail::CompensatedSum p2;
      double psi1 = digamma(1.0);
      double psi2 = digamma(m + 1.0);
      double psia = digamma(a_ + m);
      double psib = digamma(b_ + m);
      double coef = 1.0 / std::tgamma(m + 1.0);  // 1/(n! (n+m)!) at n=0
      double last = 0.0;
      for (int n = 0; n < 4000; ++n) {
        double term = coef * (lw - psi1 - psi2 + psia + psib);
        p2.add(term);
        last = std::fabs(term);
        if (n > 2 && last <= 0.25 * kEps * std::fabs(p2.value())) break;
        if (n == 3999) throw NumericalError("hyp2f1: logarithmic series did not converge");
        coef *= (a_ + m + n) * (b_ + m + n) / ((n + 1.0) * (n + 1.0 + m)) * w;
        psi1 += 1.0 / (n + 1.0);
        psi2 += 1.0 / (n + 1.0 + m);
        psia += 1.0 / (a_ + m + n);
        psib += 1.0 / (b_ + m + n);
      }
      double c1 = sign_c1_ * std::exp(log_c1_);
      double c2 = sign_c2_ * std::exp(log_c2_) * std::pow(-w, m);
      double t1 = c1 * p1.value();
      double t2 = -c2 * p2.value();
      double err = 16.0 * kEps * (std::fabs(c1) * p1.magnitude() + std::fabs(c2) * p2.magnitude()) +
                   std::fabs(c2) * last;
      return {t1 + t2, err};
    }
  }
  throw NumericalError("hyp2f1: unreachable");
}

EvalResult Hyp2F1::operator()(double z) const { return (*this)(z, 1.0 - z); }

EvalResult Hyp2F1::operator()(double z, double one_minus_z) const {
  // z may round to (or a few ulps past) 1 when 1 - z is known separately
  if (!(z <= 1.0 + 4.0 * kEps) || !(one_minus_z > 0.0))
    throw DomainError("hyp2f1: z=" + fmt(z) + " must be < 1");
  if (z < -0.5) throw DomainError("hyp2f1: z=" + fmt(z) + " below supported range");
  if (z == 0.0) return {1.0, 0.0};
  if (path_ == Path::Terminating) return polynomial(a_, b_, c_, z);
  if (z <= 0.5) return gauss_series(a_, b_, c_, z);
  return transformed(one_minus_z);
}

EvalResult hyp2f1(double a, double b, double c, double z) { return Hyp2F1(a, b, c)(z); }

EvalResult hyp2f1(double a, double b, double c, double z, double one_minus_z) {
  return Hyp2F1(a, b, c)(z, one_minus_z);
}

// ---------------------------------------------------------------- Legendre

double legendre_p(Order mu, Order nu, double t) { return legendre_p(mu, nu, 1.0 - t, 1.0 + t); }

double legendre_p(Order mu_o, Order nu_o, double omt, double opt) {
  const double mu = mu_o.value, nu = nu_o.value;
  if (is_pole(1.0 - mu))
    throw DomainError("legendre_p: 1-mu=" + fmt(1.0 - mu) + " is a nonpositive integer");
  if (!(omt >= 0.0) || !(opt > 0.0))
    throw DomainError("legendre_p: t must lie in (-1, 1]");
  if (omt == 0.0) {
    if (mu < 0.0) return 0.0;
    if (mu == 0.0) return 1.0;
    throw DomainError("legendre_p: range error: prefactor ((1+t)/(1-t))^{mu/2} diverges at t=1 for mu=" +
                      fmt(mu) + " > 0");
  }
  LogGamma g = log_gamma(1.0 - mu);
  double lp = 0.5 * mu * (std::log(opt) - std::log(omt)) - g.log_abs;
  if (lp > 700.0)
    throw DomainError("legendre_p: range error: prefactor overflows at 1-t=" + fmt(omt));
  EvalResult f = hyp2f1(nu + 1.0, -nu, 1.0 - mu, 0.5 * omt, 0.5 * opt);
  return g.sign * std::exp(lp) * f.value;
}

double legendre_q_phase_free(Order mu, Order nu, double t) {
  return legendre_q_phase_free(mu, nu, t, t - 1.0);
}

double legendre_q_phase_free(Order mu_o, Order nu_o, double t, double tm1) {
  const double mu = mu_o.value, nu = nu_o.value;
  if (!(tm1 > 0.0) || !std::isfinite(t))
    throw DomainError("legendre_q: argument t=" + fmt(t) + " must exceed 1");
  if (is_pole(nu + 1.5))
    throw DomainError("legendre_q: nu+3/2=" + fmt(nu + 1.5) + " is a nonpositive integer");
  if (is_pole(mu + nu + 1.0))
    throw DomainError("legendre_q: mu+nu+1=" + fmt(mu + nu + 1.0) + " is a nonpositive integer");
  LogGamma g1 = log_gamma(mu + nu + 1.0);
  LogGamma g2 = log_gamma(nu + 1.5);
  const double tp1 = t + 1.0;
  double lp = 0.5 * std::log(kPi) + g1.log_abs - g2.log_abs +
              0.5 * mu * (std::log(tm1) + std::log(tp1)) - (nu + 1.0) * std::numbers::ln2 -
              (mu + nu + 1.0) * std::log(t);
  double z = 1.0 / (t * t);
  double omz = tm1 * tp1 * z;
  EvalResult f = hyp2f1(0.5 * (mu + nu) + 1.0, 0.5 * (mu + nu + 1.0), nu + 1.5, z, omz);
  return g1.sign * g2.sign * std::exp(lp) * f.value;
}

double gegenbauer(int n, Order mu_o, double t) {
  const double mu = mu_o.value;
  if (n < 0) throw DomainError("gegenbauer: degree must be >= 0");
  if (!(mu > -0.5) || mu == 0.0)
    throw DomainError("gegenbauer: mu=" + fmt(mu) + " must exceed -1/2 and be nonzero");
  if (n == 0) return 1.0;
  double c0 = 1.0, c1 = 2.0 * mu * t;
  for (int k = 1; k < n; ++k) {
    double c2 = (2.0 * (k + mu) * t * c1 - (k + 2.0 * mu - 1.0) * c0) / (k + 1.0);
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

}  // namespace kaft::specfn
