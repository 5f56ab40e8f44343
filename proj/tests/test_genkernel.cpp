#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "kaft/genkernel.hpp"

using namespace kaft;
using namespace kaft::genkernel;

namespace {

constexpr double pi = std::numbers::pi;
const std::complex<double> I(0.0, 1.0);

// Γ(ν+1) (u/2)^{-ν} J_ν(u)
double nj(double nu, double u) {
  if (u == 0.0) return 1.0;
  return boost::math::tgamma(nu + 1.0) * std::pow(0.5 * u, -nu) * boost::math::cyl_bessel_j(nu, u);
}

std::complex<double> m_oracle(double k, double a) {
  return std::exp(-I * pi / a) * boost::math::tgamma((2 * k + a - 1) / a) /
         (std::pow(a, 2.0 / a) * boost::math::tgamma((2 * k + a + 1) / a));
}

std::complex<double> b_oracle(double k, double a, double lambda, double x) {
  double u = 2.0 / a * std::pow(std::fabs(lambda * x), a / 2);
  return nj((2 * k - 1) / a, u) + m_oracle(k, a) * (lambda * x) * nj((2 * k + 1) / a, u);
}

// Four-term density assembled from r_kernel.
std::complex<double> delta_oracle(double k, double a, double x, double y, double z) {
  double mu = (2 * k - 1) / a, nu = (2 * k + 1) / a;
  auto mm = macdonald::MacdonaldOrders::make(mu, mu), mn = macdonald::MacdonaldOrders::make(mu, nu);
  double X = std::pow(std::fabs(x), a / 2), Y = std::pow(std::fabs(y), a / 2), Z = std::pow(std::fabs(z), a / 2);
  auto sg = [](double v) { return v < 0 ? -1.0 : 1.0; };
  double den = std::pow(std::fabs(x * y * z), k - 0.5);
  std::complex<double> s = macdonald::r_kernel(mm, X, Y, Z) +
                           std::exp(-2.0 * I * pi / a) * sg(x * y) * macdonald::r_kernel(mn, X, Y, Z) +
                           sg(x * z) * macdonald::r_kernel(mn, X, Z, Y) + sg(y * z) * macdonald::r_kernel(mn, Y, Z, X);
  return a * std::pow(2.0, mu - 2.0) * boost::math::tgamma(mu + 1.0) * s / den;
}

bool close(std::complex<double> u, std::complex<double> v, double tol) {
  return std::abs(u - v) <= tol * std::max(1.0, std::abs(v));
}

}  // namespace

TEST_CASE("Params derived quantities and validation") {
  auto p = Params::make(0.75, 4.0 / 3.0);
  CHECK(p.mu() == doctest::Approx(0.375));
  CHECK(p.nu() == doctest::Approx(1.875));
  CHECK(p.nu() - p.mu() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(p.weight() == doctest::Approx(1.5 + 4.0 / 3.0 - 2.0));
  CHECK_FALSE(p.compact());
  CHECK(Params::make(0.5, 2.0).compact());
  CHECK(Params::make(1.0, 2.0 / 3.0).compact());
  CHECK(Params::make(0.5, 1.0).compact());
  CHECK_FALSE(Params::make(0.5, 3.0).compact());
  CHECK_THROWS_AS(Params::make(-0.1, 2.0), DomainError);
  CHECK_THROWS_AS(Params::make(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(Params::make(0.5, -1.0), DomainError);
  // B is defined, the density is not: mu = -1/2
  auto b_only = Params::make(0.0, 2.0);
  CHECK_FALSE(b_only.density_admissible());
  try {
    b_only.require_density();
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("mu=(2k-1)/a") != std::string::npos);
  }
  CHECK(Params::make(0.5, 2.0).density_admissible());
  CHECK(Params::make(0.1, 2.0).abstract_condition() == false);
  CHECK_FALSE(Params::make(0.1, 2.0).diagnostics().empty());
  CHECK(std::abs(Params::make(0.5, 2.0).phase2() + 1.0) <= 1e-15);
}

TEST_CASE("m_const") {
  CHECK(std::abs(m_const(Params::make(0, 2)) - (-I)) <= 1e-15);
  for (double k : {0.5, 1.0, 2.25, 7.0})
    CHECK(std::abs(m_const(Params::make(k, 2)) - (-I / (2 * k + 1))) <= 1e-15);
  for (double k : {0.3, 0.75, 1.6})
    for (double a : {0.5, 2.0 / 3.0, 1.0, 4.0 / 3.0, 3.0}) {
      auto p = Params::make(k, a);
      CHECK(close(m_const(p), m_oracle(k, a), 1e-14));
      CHECK(std::abs(m_const(p)) ==
            doctest::Approx(std::tgamma(p.mu() + 1) / (std::pow(a, 2 / a) * std::tgamma(p.nu() + 1))).epsilon(1e-14));
    }
}

TEST_CASE("constant identity m^2 a^{4/a} Gamma^2(nu+1)/Gamma(mu+1) = e^{-2i pi/a} Gamma(mu+1)") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uk(0.0, 3.0), ua(0.3, 4.0);
  for (int n = 0; n < 10;) {
    double k = uk(rng), a = ua(rng);
    auto p = Params::make(k, a);
    if (!p.density_admissible()) continue;
    ++n;
    auto m = m_const(p);
    auto lhs = m * m * std::pow(a, 4 / a) * std::pow(std::tgamma(p.nu() + 1), 2) / std::tgamma(p.mu() + 1);
    auto rhs = p.phase2() * std::tgamma(p.mu() + 1);
    CHECK(close(lhs, rhs, 1e-13));
  }
}

TEST_CASE("b_kernel") {
  for (double k : {0.0, 0.5, 1.3})
    for (double a : {1.5, 2.0, 3.0}) {
      auto p = Params::make(k, a);
      CHECK(b_kernel(p, 0.0, 2.3) == ComplexValue(1.0, 0.0));
      for (double l : {-1.7, 0.4, 2.0})
        for (double x : {-2.2, 0.3, 1.9}) {
          INFO("k=" << k << " a=" << a << " l=" << l << " x=" << x);
          CHECK(b_kernel(p, l, x) == b_kernel(p, x, l));
          CHECK(close(b_kernel(p, l, x), b_oracle(k, a, l, x), 1e-12));
        }
    }
  auto p = Params::make(0, 2);
  for (double l : {-3.0, -0.5, 0.9, 2.0})
    for (double x : {-2.5, -0.1, 0.7, 3.0, 11.0}) CHECK(close(b_kernel(p, l, x), std::exp(-I * l * x), 1e-12));
  CHECK(close(b_kernel(p, 2, 3), {std::cos(6.0), -std::sin(6.0)}, 1e-12));
}

TEST_CASE("delta_density against four-term assembly") {
  for (auto [k, a] : std::vector<std::pair<double, double>>{{0.5, 2}, {0.75, 4.0 / 3.0}, {1.0, 2.0 / 3.0}, {0.5, 3.0}})
    for (auto [x, y, z] : std::vector<std::array<double, 3>>{
             {0.7, 1.3, 1.1}, {-0.7, 1.3, 1.1}, {0.7, -1.3, -1.6}, {1.0, 1.2, 4.5}, {-2.0, 0.5, 0.3}, {1.0, 1.0, -1.5}}) {
      auto p = Params::make(k, a);
      INFO("k=" << k << " a=" << a << " x=" << x << " y=" << y << " z=" << z);
      auto d = delta_density(p, x, y, z);
      CHECK(close(d, delta_oracle(k, a, x, y, z), 1e-12));
      CHECK(close(delta_density(p, y, x, z), d, 1e-13));
    }
  CHECK_THROWS_AS(delta_density(Params::make(0.5, 2), 0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(delta_density(Params::make(0.0, 2), 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("support dichotomy and realness") {
  for (double a : {2.0, 1.0, 2.0 / 3.0}) {
    auto p = Params::make(1.0, a);
    double edge = 1.0 + std::pow(1.2, a / 2);
    for (double f : {1.05, 1.5, 3.0, -1.2, -8.0}) {
      // |z|^{a/2} beyond |x|^{a/2}+|y|^{a/2}
      double z = std::copysign(std::pow(std::fabs(f) * edge, 2 / a), f);
      INFO("a=" << a << " z=" << z);
      CHECK(std::abs(delta_density(p, 1.0, 1.2, z)) <= 1e-10);
    }
    CHECK(std::abs(delta_density(p, 1.0, 1.2, std::pow(0.9 * edge, 2 / a))) > 1e-6);
  }
  for (double a : {4.0 / 3.0, 3.0}) {
    auto p = Params::make(1.0, a);
    double best = 0.0;
    for (double z : {3.0, 5.0, -4.0, 20.0}) best = std::max(best, std::abs(delta_density(p, 1.0, 1.2, z)));
    CHECK(best > 1e-6);
  }
  auto p = Params::make(0.8, 2.0);
  for (double z : {-2.1, -0.4, 0.3, 1.1, 1.9}) CHECK(delta_density(p, 0.7, -1.3, z).imag() == 0.0);
}

TEST_CASE("gamma tail decays like z^-3 for (0.75, 4/3)") {
  auto p = Params::make(0.75, 4.0 / 3.0);
  auto m = gamma_measure(p, 1.0, 1.2);
  double z1 = 10.0, z2 = 100.0;
  double slope = std::log(std::abs(m.density(z2)) / std::abs(m.density(z1))) / std::log(z2 / z1);
  CHECK(slope == doctest::Approx(-3.0).epsilon(0.1 / 3.0));
}

TEST_CASE("measures") {
  auto p = Params::make(0.5, 2.0);
  CHECK(gamma_measure(p, 1.5, 0).kind == MeasureKind::DiracAtX);
  CHECK(gamma_measure(p, 1.5, 0).atom() == 1.5);
  CHECK(gamma_measure(p, 0, 2).kind == MeasureKind::DiracAtY);
  CHECK(gamma_measure(p, 0, 2).atom() == 2.0);
  CHECK(gamma_measure(p, 1, 1).kind == MeasureKind::Density);
  CHECK(sigma_measure(p, 0.4, 0).kind == MeasureKind::DiracAtX);
  CHECK(sigma_measure(p, 0, 0.4).kind == MeasureKind::DiracAtY);
  CHECK_THROWS_AS(gamma_measure(p, 1, 1).atom(), DomainError);
  CHECK_THROWS_AS(gamma_measure(p, 1, 0).density(0.5), DomainError);
  auto q = Params::make(0.75, 4.0 / 3.0);
  auto g = gamma_measure(q, 0.7, 1.3), s = sigma_measure(q, 0.7, 1.1);
  double w = q.weight();
  CHECK(close(g.density(1.1), delta_density(q, 0.7, 1.3, 1.1) * std::pow(1.1, w), 1e-14));
  CHECK(close(s.density(1.3), delta_density(q, 0.7, 1.3, 1.1) * std::pow(1.3, w), 1e-14));
}

TEST_CASE("PairDensity reproduces the z-line density") {
  for (auto [k, a] : std::vector<std::pair<double, double>>{{0.5, 2}, {0.75, 4.0 / 3.0}, {0.6, 3.0}})
    for (auto kind : {PairDensity::Kind::Gamma, PairDensity::Kind::Sigma}) {
      auto p = Params::make(k, a);
      double x = 0.8, y = -1.4;
      PairDensity pd(p, kind, x, y);
      auto m = kind == PairDensity::Kind::Gamma ? gamma_measure(p, x, y) : sigma_measure(p, x, y);
      for (double v : {0.2, 0.9, 1.5, 2.9}) {
        double zpos = pd.z_of(v);
        CHECK(pd.v_of(zpos) == doctest::Approx(v).epsilon(1e-14));
        auto eo = pd.at(macdonald::Triangle::from_sides(pd.p(), pd.q(), v));
        // dz = (2/a) V^{2/a-1} dV
        double jac = 2.0 / a * std::pow(v, 2.0 / a - 1.0);
        INFO("k=" << k << " a=" << a << " v=" << v);
        CHECK(close(eo.even + eo.odd, m.density(zpos) * jac, 1e-12));
        CHECK(close(eo.even - eo.odd, m.density(-zpos) * jac, 1e-12));
      }
    }
}
