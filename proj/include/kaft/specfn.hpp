#pragma once

#include "kaft/errors.hpp"

namespace kaft {

// Order or degree of a Bessel/Legendre function.
struct Order {
  double value;
};

struct EvalResult {
  double value = 0.0;
  double est_error = 0.0;
};

}  // namespace kaft

namespace kaft::specfn {

struct LogGamma {
  double log_abs;  // ln|Γ(x)|
  int sign;        // sign of Γ(x)
};

// Throws DomainError at the poles x = 0, -1, -2, ...
LogGamma log_gamma(double x);
double gamma(double x);
// 1/Γ(x); exactly 0 at the poles.
double rgamma(double x);
double digamma(double x);
// sin(πx) with exact zeros at integers.
double sin_pi(double x);

// Treats x as an integer when it is within a few ulps of one. Parameters such
// as 3/(2/3) come out of the (k,a) map slightly off the intended integer.
bool near_integer(double x);

double bessel_j(Order nu, double x);
// Γ(ν+1)(x/2)^{-ν} J_ν(x); regular at x = 0.
double normalized_bessel_j(Order nu, double x);
EvalResult normalized_bessel_j_eval(Order nu, double x);
// n-th positive zero of J_ν (McMahon start plus Newton steps).
double bessel_j_zero(Order nu, int n);

// Gauss 2F1(a,b;c;z) for z < 1 with precomputed connection coefficients.
// The evaluator can be reused for many z; the parameters are fixed.
class Hyp2F1 {
 public:
  Hyp2F1(double a, double b, double c);
  EvalResult operator()(double z) const;
  // one_minus_z must equal 1-z; pass it when it is known more accurately
  // than the rounded difference.
  EvalResult operator()(double z, double one_minus_z) const;

  EvalResult series(double z) const;
  EvalResult transformed(double one_minus_z) const;

 private:
  enum class Path { Terminating, Connection, Logarithmic, EulerTerminating };

  double a_, b_, c_;
  Path path_;
  int m_ = 0;  // integer value of c-a-b on the logarithmic path
  double d_ = 0.0;
  double g1_ = 0.0, g2_ = 0.0;  // connection coefficients
  double log_c1_ = 0.0, log_c2_ = 0.0;
  int sign_c1_ = 0, sign_c2_ = 0;
};

EvalResult hyp2f1(double a, double b, double c, double z);
EvalResult hyp2f1(double a, double b, double c, double z, double one_minus_z);

// Ferrers function P^μ_ν(t) on (-1,1].
double legendre_p(Order mu, Order nu, double t);
double legendre_p(Order mu, Order nu, double one_minus_t, double one_plus_t);

// e^{-μπi} Q^μ_ν(t) for t > 1 (real).
double legendre_q_phase_free(Order mu, Order nu, double t);
double legendre_q_phase_free(Order mu, Order nu, double t, double t_minus_one);

double gegenbauer(int n, Order mu, double t);

}  // namespace kaft::specfn
