#include "kaft/macdonald.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace kaft::macdonald {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_positive(double x, double y, double z) {
  if (!(x > 0.0) || !(y > 0.0) || !(z > 0.0) || !std::isfinite(x) || !std::isfinite(y) ||
      !std::isfinite(z))
    throw DomainError("macdonald: x, y, z must be finite and positive");
}

}  // namespace

const char* region_name(Region r) {
  switch (r) {
    case Region::Inner: return "inner";
    case Region::Band: return "band";
    case Region::Outer: return "outer";
    case Region::Boundary: return "boundary";
  }
  return "?";
}

MacdonaldOrders MacdonaldOrders::make(double mu, double nu) {
  if (!(mu > -0.5) || !std::isfinite(mu))
    throw DomainError("macdonald: mu=" + fmt(mu) + " must exceed -1/2");
  if (!(nu > -0.5) || !std::isfinite(nu))
    throw DomainError("macdonald: nu=" + fmt(nu) + " must exceed -1/2");
  return {Order{mu}, Order{nu}};
}

TripleGeometry classify(double x, double y, double z, double boundary_eps) {
  check_positive(x, y, z);
  TripleGeometry g{x, y, z, Region::Boundary, 0.0, 0.0};
  const double diff = std::fabs(x - y), sum = x + y;
  if (std::fabs(z - diff) <= boundary_eps * sum || std::fabs(z - sum) <= boundary_eps * sum)
    return g;
  if (z < diff) {
    g.region = Region::Inner;
  } else if (z < sum) {
    double c = (x * x + y * y - z * z) / (2.0 * x * y);
    double clamped = std::clamp(c, -1.0, 1.0);
    if (std::fabs(c - clamped) >= 1e-12) return g;
    g.region = Region::Band;
    g.cos_theta = clamped;
  } else {
    g.region = Region::Outer;
    g.cosh_theta = (z * z - x * x - y * y) / (2.0 * x * y);
  }
  return g;
}

Triangle::Triangle(double p, double q, double v, double gap_inner, double gap_outer)
    : p_(p), q_(q), v_(v), d1_(gap_inner), d2_(gap_outer) {}

Triangle Triangle::from_sides(double p, double q, double v) {
  return Triangle(p, q, v, v - std::fabs(p - q), p + q - v);
}

Triple Triangle::pq_v() const { return {p_, q_, v_, d1_, d2_}; }

// With s_pq = V - (P - Q) and s_qp = V - (Q - P):
//   (P,V;Q): gap_inner = Q - |P-V|, gap_outer = P + V - Q = s_qp
//   (Q,V;P): gap_inner = P - |Q-V|, gap_outer = Q + V - P = s_pq
// and Q - |P-V| equals s_pq when P >= V, else P + Q - V.
Triple Triangle::pv_q() const {
  double s_pq = p_ >= q_ ? d1_ : v_ + (q_ - p_);
  double s_qp = q_ >= p_ ? d1_ : v_ + (p_ - q_);
  double inner = p_ >= v_ ? s_pq : d2_;
  return {p_, v_, q_, inner, s_qp};
}

Triple Triangle::qv_p() const {
  double s_pq = p_ >= q_ ? d1_ : v_ + (q_ - p_);
  double s_qp = q_ >= p_ ? d1_ : v_ + (p_ - q_);
  double inner = q_ >= v_ ? s_qp : d2_;
  return {q_, v_, p_, inner, s_pq};
}

Kernel::Kernel(const MacdonaldOrders& orders)
    : orders_(orders),
      band_f_(orders.nu.value + 0.5, 0.5 - orders.nu.value, orders.mu.value + 0.5),
      outer_f_(0.5 * (orders.nu.value - orders.mu.value) + 1.0,
               0.5 * (orders.nu.value - orders.mu.value + 1.0), orders.nu.value + 1.0) {
  const double mu = orders.mu.value, nu = orders.nu.value;
  band_log_const_ = -0.5 * std::log(2.0 * std::numbers::pi) - specfn::log_gamma(mu + 0.5).log_abs;
  double s = specfn::sin_pi(mu - nu);
  outer_zero_ = s == 0.0;
  outer_const_ = outer_zero_ ? 0.0
                             : s * std::exp(specfn::log_gamma(nu - mu + 1.0).log_abs -
                                            nu * std::numbers::ln2 -
                                            specfn::log_gamma(nu + 1.0).log_abs) /
                                   std::numbers::pi;
}

double Kernel::band(double a, double b, double c, double omc, double opc) const {
  const double mu = orders_.mu.value;
  double lp = band_log_const_ + (mu - 1.0) * std::log(a * b) - mu * std::log(c) +
              (mu - 0.5) * std::log(omc);
  EvalResult f = band_f_(0.5 * omc, 0.5 * opc);
  return std::exp(lp) * f.value;
}

double Kernel::outer(double a, double b, double c, double chm1) const {
  if (outer_zero_) return 0.0;
  const double mu = orders_.mu.value, nu = orders_.nu.value;
  const double t = 1.0 + chm1;
  double lp = (mu - 1.0) * std::log(a * b) - mu * std::log(c) - (nu - mu + 1.0) * std::log(t);
  double z = 1.0 / t / t;
  double omz = (chm1 / t) * ((t + 1.0) / t);
  EvalResult f = outer_f_(z, omz);
  return outer_const_ * std::exp(lp) * f.value;
}

double Kernel::operator()(const Triple& t) const {
  if (t.gap_inner < 0.0) return 0.0;
  const double ab2 = 2.0 * t.a * t.b;
  if (t.gap_outer < 0.0) {
    if (outer_zero_) return 0.0;
    return outer(t.a, t.b, t.c, -t.gap_outer * (t.c + t.a + t.b) / ab2);
  }
  double omc = t.gap_inner * (t.c + std::fabs(t.a - t.b)) / ab2;
  double opc = t.gap_outer * (t.a + t.b + t.c) / ab2;
  return band(t.a, t.b, t.c, omc, opc);
}

double r_kernel(const MacdonaldOrders& orders, double x, double y, double z) {
  TripleGeometry g = classify(x, y, z);
  if (g.region == Region::Boundary)
    throw DomainError("macdonald: boundary singularity at (x,y,z)=(" + fmt(x) + "," + fmt(y) +
                      "," + fmt(z) + ")");
  if (g.region == Region::Inner) return 0.0;
  Kernel k(orders);
  return k(Triangle::from_sides(x, y, z).pq_v());
}

double r_kernel_gegenbauer(Order mu_o, int n, double x, double y, double z) {
  const double mu = mu_o.value;
  if (!(mu > -0.5) || mu == 0.0)
    throw DomainError("macdonald: mu=" + fmt(mu) + " must exceed -1/2 and be nonzero");
  if (n < 0) throw DomainError("macdonald: n must be >= 0");
  TripleGeometry g = classify(x, y, z);
  if (g.region == Region::Boundary)
    throw DomainError("macdonald: boundary singularity at (x,y,z)=(" + fmt(x) + "," + fmt(y) +
                      "," + fmt(z) + ")");
  if (g.region != Region::Band) return 0.0;
  const double nu = mu + n;
  Triple t = Triangle::from_sides(x, y, z).pq_v();
  const double ab2 = 2.0 * x * y;
  double omc = t.gap_inner * (z + std::fabs(x - y)) / ab2;
  double opc = t.gap_outer * (x + y + z) / ab2;
  double sin2 = omc * opc;
  specfn::LogGamma g2mu = specfn::log_gamma(2.0 * mu);
  double lp = (0.5 - mu) * std::numbers::ln2 + g2mu.log_abs + specfn::log_gamma(n + 1.0).log_abs -
              specfn::log_gamma(nu + mu).log_abs - specfn::log_gamma(mu + 0.5).log_abs +
              (mu - 1.0) * std::log(x * y) + (mu - 0.5) * std::log(sin2) -
              0.5 * std::log(2.0 * std::numbers::pi) - mu * std::log(z);
  return g2mu.sign * std::exp(lp) * specfn::gegenbauer(n, mu_o, 1.0 - omc);
}

}  // namespace kaft::macdonald
