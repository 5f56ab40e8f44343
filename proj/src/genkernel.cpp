#include "kaft/genkernel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace kaft::genkernel {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

ComplexValue unit_phase(double turns_half) {
  // e^{-iπ t}
  return {specfn::sin_pi(turns_half + 0.5), -specfn::sin_pi(turns_half)};
}

}  // namespace

Params::Params(double k, double a)
    : k_(k),
      a_(a),
      mu_((2.0 * k - 1.0) / a),
      nu_((2.0 * k + 1.0) / a),
      w_(2.0 * k + a - 2.0),
      compact_(specfn::near_integer(2.0 / a)),
      phase2_(unit_phase(2.0 / a)) {}

Params Params::make(double k, double a) {
  if (!std::isfinite(k) || !(k >= 0.0)) throw DomainError("k=" + fmt(k) + " must be >= 0");
  if (!std::isfinite(a) || !(a > 0.0)) throw DomainError("a=" + fmt(a) + " must be > 0");
  Params p(k, a);
  if (!(p.mu_ > -1.0))
    throw DomainError("mu=(2k-1)/a=" + fmt(p.mu_) + " must exceed -1 for the kernel");
  return p;
}

bool Params::density_admissible() const { return mu_ > -0.5 && w_ > -1.0; }

void Params::require_density() const {
  if (!(mu_ > -0.5)) throw DomainError("mu=(2k-1)/a=" + fmt(mu_) + " must exceed -1/2");
  if (!(w_ > -1.0)) throw DomainError("w=2k+a-2=" + fmt(w_) + " must exceed -1");
}

std::vector<std::string> Params::diagnostics() const {
  std::vector<std::string> out;
  out.push_back("mu=" + fmt(mu_) + (mu_ > -0.5 ? " > -1/2" : " <= -1/2 (density not admissible)"));
  out.push_back("w=" + fmt(w_) + (w_ > -1.0 ? " > -1" : " <= -1 (weight not integrable)"));
  out.push_back(std::string("2k>a-1: ") + (abstract_condition() ? "yes" : "no"));
  out.push_back(std::string("compact support (2/a integer): ") + (compact_ ? "yes" : "no"));
  return out;
}

ComplexValue m_const(const Params& p) {
  double lg = specfn::log_gamma(p.mu() + 1.0).log_abs - specfn::log_gamma(p.nu() + 1.0).log_abs -
              2.0 / p.a() * std::log(p.a());
  return unit_phase(1.0 / p.a()) * std::exp(lg);
}

ComplexValue b_kernel(const Params& p, double lambda, double x) {
  if (!std::isfinite(lambda) || !std::isfinite(x)) throw DomainError("b_kernel: non-finite input");
  const double s = lambda * x;
  if (s == 0.0) return {1.0, 0.0};
  const double u = 2.0 / p.a() * std::pow(std::fabs(s), 0.5 * p.a());
  double j1 = specfn::normalized_bessel_j(Order{p.mu()}, u);
  double j2 = specfn::normalized_bessel_j(Order{p.nu()}, u);
  return ComplexValue(j1, 0.0) + m_const(p) * (s * j2);
}

PairDensity::PairDensity(const Params& p, Kind kind, double x, double y)
    : params_(p),
      p_(std::pow(std::fabs(x), 0.5 * p.a())),
      q_(std::pow(std::fabs(y), 0.5 * p.a())),
      r_mumu_(macdonald::MacdonaldOrders::make(p.mu(), p.mu())),
      r_munu_(macdonald::MacdonaldOrders::make(p.mu(), p.nu())) {
  p.require_density();
  if (x == 0.0 || y == 0.0) throw DomainError("pair density needs x, y nonzero");
  const double sx = sgn(x), sy = sgn(y);
  if (kind == Kind::Gamma) {
    c_pq_ = p.phase2() * (sx * sy);
    c_pv_ = sx;
    c_qv_ = sy;
  } else {
    c_pq_ = sx * sy;
    c_pv_ = p.phase2() * sx;
    c_qv_ = sy;
  }
  const double mu = p.mu();
  log_k_ = (mu - 1.0) * std::numbers::ln2 + specfn::log_gamma(mu + 1.0).log_abs -
           mu * std::log(p_ * q_);
}

EvenOdd PairDensity::bracket(const macdonald::Triangle& t) const {
  macdonald::Triple pq = t.pq_v();
  double e0 = r_mumu_(pq);
  double e1 = r_munu_(pq);
  double o1 = r_munu_(t.pv_q());
  double o2 = r_munu_(t.qv_p());
  return {e0 + c_pq_ * e1, c_pv_ * o1 + c_qv_ * o2};
}

EvenOdd PairDensity::at(const macdonald::Triangle& t) const {
  EvenOdd b = bracket(t);
  const double v = t.v();
  double s = std::exp(log_k_ + params_.mu() * std::log(v) + std::log(v));
  return {b.even * s, b.odd * s};
}

double PairDensity::z_of(double v) const { return std::pow(v, 2.0 / params_.a()); }
double PairDensity::v_of(double z) const { return std::pow(std::fabs(z), 0.5 * params_.a()); }

ComplexValue delta_density(const Params& p, double x, double y, double z) {
  p.require_density();
  if (x == 0.0 || y == 0.0 || z == 0.0)
    throw DomainError("delta_density: x, y, z must be nonzero");
  PairDensity d(p, PairDensity::Kind::Gamma, x, y);
  const double v = d.v_of(z);
  macdonald::TripleGeometry g = macdonald::classify(d.p(), d.q(), v);
  if (g.region == macdonald::Region::Boundary)
    throw DomainError("delta_density: boundary singularity at z=" + fmt(z));
  // the slots (P,V;Q) and (Q,V;P) have their own edges
  if (macdonald::classify(d.p(), v, d.q()).region == macdonald::Region::Boundary ||
      macdonald::classify(d.q(), v, d.p()).region == macdonald::Region::Boundary)
    throw DomainError("delta_density: boundary singularity at z=" + fmt(z));
  EvenOdd b = d.bracket(macdonald::Triangle::from_sides(d.p(), d.q(), v));
  const double mu = p.mu();
  double c = std::exp(std::log(p.a()) + (mu - 2.0) * std::numbers::ln2 +
                      specfn::log_gamma(mu + 1.0).log_abs - mu * std::log(d.p() * d.q() * v));
  return c * (b.even + sgn(z) * b.odd);
}

ComplexValue MeasureDescriptor::density(double z) const {
  if (kind != MeasureKind::Density) throw DomainError("measure has no density");
  double wz = std::pow(std::fabs(z), params.weight());
  return (sigma ? delta_density(params, x, z, y) : delta_density(params, x, y, z)) * wz;
}

double MeasureDescriptor::atom() const {
  if (kind == MeasureKind::DiracAtX) return x;
  if (kind == MeasureKind::DiracAtY) return y;
  throw DomainError("measure has no atom");
}

namespace {

MeasureDescriptor make_measure(const Params& p, double x, double y, bool sigma) {
  p.require_density();
  MeasureKind kind = MeasureKind::Density;
  if (y == 0.0)
    kind = MeasureKind::DiracAtX;
  else if (x == 0.0)
    kind = MeasureKind::DiracAtY;
  return {kind, p, x, y, sigma};
}

}  // namespace

MeasureDescriptor gamma_measure(const Params& p, double x, double y) {
  return make_measure(p, x, y, false);
}

MeasureDescriptor sigma_measure(const Params& p, double x, double y) {
  return make_measure(p, x, y, true);
}

}  // namespace kaft::genkernel
