#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "kaft/harness.hpp"

using namespace kaft;
using namespace kaft::harness;
using genkernel::b_kernel;
using genkernel::delta_density;

namespace {

constexpr double pi = std::numbers::pi;
const QuadratureSpec spec;

std::complex<double> b_oracle(double k, double a, double l, double x) {
  auto nj = [](double nu, double u) {
    return u == 0.0 ? 1.0 : boost::math::tgamma(nu + 1) * std::pow(0.5 * u, -nu) * boost::math::cyl_bessel_j(nu, u);
  };
  double u = 2 / a * std::pow(std::fabs(l * x), a / 2);
  auto m = std::exp(std::complex<double>(0, -pi / a)) * boost::math::tgamma((2 * k + a - 1) / a) /
           (std::pow(a, 2 / a) * boost::math::tgamma((2 * k + a + 1) / a));
  return nj((2 * k - 1) / a, u) + m * (l * x) * nj((2 * k + 1) / a, u);
}

// ∫|Δ(x,y,z)||z|^w dz for compact a, pieced between the region points in
// V = |z|^{a/2}, each piece mapped by a smoothstep so the edge singularities
// go away, then adaptive Gauss-Kronrod.
double tv_oracle(const Params& p, double x, double y) {
  double a = p.a(), X = std::pow(x, a / 2), Y = std::pow(y, a / 2);
  std::vector<double> vs{0.0, std::fabs(X - Y), X + Y};
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double total = 0.0;
  for (double s : {-1.0, 1.0})
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
      double v0 = vs[i], len = vs[i + 1] - vs[i];
      if (!(len > 0)) continue;
      auto f = [&](double u) {
        double v = v0 + len * u * u * (3 - 2 * u);
        double z = std::pow(v, 2 / a);
        double dv = 6 * len * u * (1 - u);
        std::complex<double> d;
        try {
          d = delta_density(p, x, y, s * z);
        } catch (const DomainError&) {
          return 0.0;  // a node within rounding of an edge, where the smoothed integrand is ~0
        }
        return std::abs(d) * std::pow(z, p.weight()) * (2 / a) * std::pow(v, 2 / a - 1) * dv;
      };
      total += GK::integrate(f, 0.0, 1.0, 12, 1e-12);
    }
  return total;
}

}  // namespace

TEST_CASE("product residual examples") {
  auto p = Params::make(0.5, 2);
  auto r = product_residual(p, 1.1, 0.7, 1.3, spec);
  CHECK(r.rel_residual <= 1e-6);
  CHECK(std::abs(r.lhs - b_oracle(0.5, 2, 1.1, 0.7) * b_oracle(0.5, 2, 1.1, 1.3)) <= 1e-12);
  auto d = product_residual(p, 1.1, 0.7, 0.0, spec);
  CHECK(d.abs_residual == 0.0);
  CHECK(d.rhs == b_kernel(p, 1.1, 0.7));
  auto m = product_residual(p, 0.0, 0.7, 1.3, spec);
  CHECK(std::abs(m.rhs - 1.0) <= 1e-8);
  CHECK(make_report({3, 4}, {3, 4}, 0, 0).rel_residual == 0.0);
  CHECK(make_report({3, 4}, {3, 5}, 0, 0).rel_residual == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("product residual across parameter families and symmetry") {
  for (auto [k, a] : std::vector<std::pair<double, double>>{{0.75, 4.0 / 3.0}, {1.0, 2.0 / 3.0}, {0.6, 3.0}, {1.2, 1.0}}) {
    auto p = Params::make(k, a);
    for (auto [l, x, y] : std::vector<std::array<double, 3>>{{0.9, 0.7, 1.3}, {-1.4, -0.5, 2.0}, {2.0, 1.1, -0.4}}) {
      auto r = product_residual(p, l, x, y, spec), s = product_residual(p, l, y, x, spec);
      INFO("k=" << k << " a=" << a << " l=" << l << " x=" << x << " y=" << y);
      CHECK(r.rel_residual <= 1e-5);
      CHECK(std::abs(r.rhs - s.rhs) <= 1e-7);
      CHECK(std::abs(r.lhs - b_oracle(k, a, l, x) * b_oracle(k, a, l, y)) <= 1e-11);
    }
    auto m = mass_residual(p, 0.8, -1.5, spec);
    CHECK(m.abs_residual <= 1e-6);
  }
}

TEST_CASE("TV norm against an independent quadrature") {
  for (auto [k, a] : std::vector<std::pair<double, double>>{{0.5, 2}, {1.0, 2.0 / 3.0}, {0.8, 1.0}})
    for (auto [x, y] : std::vector<std::pair<double, double>>{{0.7, 1.3}, {1.0, 1.0}, {2.0, 0.3}}) {
      auto p = Params::make(k, a);
      auto t = tv_norm_report(p, x, y, spec);
      INFO("k=" << k << " a=" << a << " x=" << x << " y=" << y);
      CHECK(t.total == doctest::Approx(tv_oracle(p, x, y)).epsilon(1e-7));
      CHECK(t.outer <= 1e-10);
      CHECK(t.total >= 1.0 - 1e-9);  // |∫dγ| = 1
      CHECK(tv_norm(p, y, x, spec) == doctest::Approx(t.total).epsilon(1e-8));
    }
  auto p = Params::make(0.5, 2);
  CHECK(tv_norm(p, 1.0, 1.0, spec) == doctest::Approx(4 / pi).epsilon(1e-8));
}

TEST_CASE("TV norm for non-compact a and small y") {
  auto p = Params::make(0.75, 4.0 / 3.0);
  auto t = tv_norm_report(p, 1.0, 1.2, spec);
  CHECK(t.outer > 1e-6);
  CHECK(std::isfinite(t.total));
  CHECK(t.total == doctest::Approx(t.inner + t.band + t.outer).epsilon(1e-12));
  CHECK(tv_norm(p, 1.2, 1.0, spec) == doctest::Approx(t.total).epsilon(1e-7));
  std::vector<double> v;
  for (double y : {1e-1, 1e-2, 1e-3, 1e-4}) v.push_back(tv_norm(p, 1.0, y, spec));
  for (int i = 2; i < 4; ++i) CHECK(std::fabs(v[i] - v[i - 1]) < std::fabs(v[i - 1] - v[i - 2]));
  CHECK(v.back() < 1.6);
  auto q = Params::make(0.5, 2);
  CHECK(tv_norm(q, 1.0, 1e-4, spec) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(tv_norm(p, 0.0, 1.0, spec), DomainError);
}

TEST_CASE("Hankel identities") {
  auto h = hankel_identity_eq1(Order{0.5}, Order{0.5}, 1, 1, 1, spec);
  CHECK(h.rel_residual <= 1e-6);
  h = hankel_identity_eq1(Order{0.4}, Order{0.9}, 0.8, 1.1, 1.3, spec);
  CHECK(h.rel_residual <= 1e-5);
  // lhs from Boost Bessel functions
  auto nj = [](double nu, double u) { return boost::math::tgamma(nu + 1) * std::pow(0.5 * u, -nu) * boost::math::cyl_bessel_j(nu, u); };
  CHECK(h.lhs.real() == doctest::Approx(std::pow(0.88, 0.9) * std::pow(1.3, 1.0) * nj(0.9, 1.04) * nj(0.9, 1.43)).epsilon(1e-12));
  auto z = hankel_identity_eq1(Order{0.4}, Order{0.9}, 0.8, 1.1, 0.0, spec);
  CHECK(z.lhs == ComplexValue(0.0));
  CHECK(std::abs(z.rhs) <= 1e-6);
  auto e = hankel_identity_eq1(Order{0.7}, Order{0.7}, 0.8, 1.1, 0.0, spec);
  CHECK(e.rel_residual <= 1e-6);

  h = hankel_identity_eq2(Order{0.5}, Order{0.5}, 1, 1, 1, spec);
  CHECK(h.rel_residual <= 1e-6);
  h = hankel_identity_eq2(Order{0.25}, Order{1.1}, 0.9, 1.4, 0.7, spec);
  CHECK(h.rel_residual <= 1e-5);
  z = hankel_identity_eq2(Order{0.25}, Order{1.1}, 0.9, 1.4, 0.0, spec);
  CHECK(z.lhs.real() == doctest::Approx(std::pow(0.9, 1.1) * std::pow(1.4, 0.25)).epsilon(1e-14));
  CHECK(z.rel_residual <= 1e-6);
}

TEST_CASE("Legendre integral identities") {
  auto r = legendre_p_integral_check(Order{0.5}, Order{0.5}, spec);
  CHECK(r.lhs.real() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.rhs.real() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(legendre_p_integral_check(Order{1}, Order{0.5}, spec).rel_residual <= 1e-8);
  // μ - ν + 1 = -2: reciprocal gamma zero
  CHECK(legendre_p_closed_form(Order{0.5}, Order{3.5}) == 0.0);
  r = legendre_p_integral_check(Order{0.5}, Order{3.5}, spec);
  CHECK(std::abs(r.lhs) <= 1e-8);
  // μ = 0, 1 give P^{±1/2}, elementary in θ = arccos t:
  //   ∫ = sqrt(2/π) sin(νπ)/ν  and  sqrt(2/π) sin(νπ)/(ν(1-ν²))
  for (double nu : {0.3, 0.5, 1.7, 2.5}) {
    double c = std::sqrt(2 / pi) * std::sin(nu * pi) / nu;
    CHECK(legendre_p_closed_form(Order{0.0}, Order{nu}) == doctest::Approx(c).epsilon(1e-13));
    CHECK(legendre_p_closed_form(Order{1.0}, Order{nu}) == doctest::Approx(c / (1 - nu * nu)).epsilon(1e-13));
    CHECK(legendre_p_integral_check(Order{0.0}, Order{nu}, spec).rel_residual <= 1e-8);
  }
  // likewise Q^{±1/2}: sqrt(π/2)/ν and sqrt(π/2)/(ν(ν²-1)), up to sign
  for (double nu : {1.3, 2.0, 3.5}) {
    double c = std::sqrt(pi / 2) / nu;
    CHECK(std::fabs(legendre_q_closed_form(Order{0.0}, Order{nu})) == doctest::Approx(c).epsilon(1e-13));
    CHECK(std::fabs(legendre_q_closed_form(Order{1.0}, Order{nu})) == doctest::Approx(c / (nu * nu - 1)).epsilon(1e-13));
    CHECK(legendre_q_integral_check(Order{1.0}, Order{nu}, spec).rel_residual <= 1e-6);
  }
  CHECK(legendre_q_integral_check(Order{0.5}, Order{1.5}, spec).rel_residual <= 1e-6);
  CHECK(legendre_q_integral_check(Order{0.2}, Order{0.9}, spec).rel_residual <= 1e-6);
  CHECK_THROWS_AS(legendre_q_integral_check(Order{1.2}, Order{0.6}, spec), DomainError);
  CHECK_THROWS_AS(legendre_q_closed_form(Order{0.5}, Order{0.5}), DomainError);
}

TEST_CASE("test functions") {
  auto g = TestFunction::gaussian(0.5);
  CHECK(g(0.0) == 1.0);
  CHECK(g(0.5) == doctest::Approx(std::exp(-1.0)));
  CHECK(g(10.0) == 0.0);
  CHECK_NOTHROW(g.check(1e-8));
  auto b = TestFunction::bump(2.0);
  CHECK(b(0.0) == doctest::Approx(1.0));
  CHECK(b(2.0) == 0.0);
  CHECK(TestFunction::constant(3.0)(1e9) == 3.0);
  auto cut = TestFunction::callable([](double x) { return std::exp(-x * x); }, 1.0);
  CHECK_THROWS_AS(cut.check(1e-6), DomainError);
  CHECK_THROWS_AS(TestFunction::callable([](double) { return 1.0; }, 0.0), DomainError);
  std::vector<double> xs, ys;
  for (int i = 0; i <= 400; ++i) {
    xs.push_back(-4 + 0.02 * i);
    ys.push_back(std::exp(-xs.back() * xs.back()));
  }
  auto s = TestFunction::samples(xs, ys);
  CHECK(s(0.31) == doctest::Approx(std::exp(-0.31 * 0.31)).epsilon(1e-7));
  CHECK_NOTHROW(s.check(1e-6));
  std::vector<double> cx, cy;
  for (int i = 0; i <= 16; ++i) {
    cx.push_back(-4 + 0.5 * i);
    cy.push_back(std::exp(-cx.back() * cx.back()));
  }
  CHECK_THROWS_AS(TestFunction::samples(cx, cy).check(1e-6), DomainError);
  CHECK_THROWS_AS(TestFunction::samples({0, 1, 0.5, 2}, {0, 0, 0, 0}), DomainError);
}

TEST_CASE("translation operator") {
  auto p = Params::make(0.5, 2);
  auto g = TestFunction::gaussian();
  CHECK(translate(p, 0.0, g, 0.7, spec) == ComplexValue(g(0.7)));
  CHECK(translate(p, 0.7, g, 0.0, spec) == ComplexValue(g(0.7)));
  for (auto [k, a] : std::vector<std::pair<double, double>>{{0.5, 2}, {0.75, 4.0 / 3.0}})
    for (auto [y, z] : std::vector<std::pair<double, double>>{{0.6, 1.1}, {-1.5, 0.4}}) {
      auto q = Params::make(k, a);
      CHECK(std::abs(translate(q, y, TestFunction::constant(), z, spec) - 1.0) <= 1e-5);
    }
  // Fourier side: ∫ τ_y f(z) B(λ,z) |z|^w dz = B(λ,y) ∫ f(x) B(λ,x) |x|^w dx
  double y = 0.8, l = 1.3, w = p.weight();
  auto f = TestFunction::gaussian(0.7);
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto line = [&](auto&& h, double lim) {
    std::complex<double> s = 0.0;
    for (auto [lo, hi] : std::vector<std::pair<double, double>>{{-lim, -y}, {-y, 0}, {0, y}, {y, lim}}) {
      auto re = [&](double z) { return h(z).real(); };
      auto im = [&](double z) { return h(z).imag(); };
      s += std::complex<double>(GK::integrate(re, lo, hi, 8, 1e-9), GK::integrate(im, lo, hi, 8, 1e-9));
    }
    return s;
  };
  auto fhat =
      line([&](double x) { return f(x) * b_oracle(0.5, 2, l, x) * std::pow(std::fabs(x), w); }, f.support());
  auto that = line([&](double z) { return translate(p, y, f, z, spec) * b_oracle(0.5, 2, l, z) * std::pow(std::fabs(z), w); },
                   f.support() + y);
  auto rhs = b_oracle(0.5, 2, l, y) * fhat;
  CHECK(std::abs(that - rhs) <= 1e-4 * (1 + std::abs(rhs)));
}

TEST_CASE("sweep grids") {
  Axis lin{"x", 0, 1, 5, Spacing::Linear};
  CHECK(lin.values() == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  Axis lg{"y", 0.1, 10, 3, Spacing::Log};
  auto v = lg.values();
  CHECK(v.front() == 0.1);
  CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.back() == 10.0);
  SweepGrid g{{lin, lg}};
  CHECK_NOTHROW(g.validate());
  CHECK(g.points().size() == 15);
  CHECK(g.points()[1] == std::vector<double>{0, v[1]});
  CHECK(g.find("y") != nullptr);
  CHECK(g.find("z") == nullptr);
  CHECK_THROWS_AS((SweepGrid{{Axis{"x", 0, 1, 0}}}.validate()), DomainError);
  CHECK_THROWS_AS((SweepGrid{{Axis{"x", 1, 1, 3}}}.validate()), DomainError);
  CHECK_THROWS_AS((SweepGrid{{Axis{"x", 0, 1, 3, Spacing::Log}}}.validate()), DomainError);
  CHECK_THROWS_AS((SweepGrid{{lin, lin}}.validate()), DomainError);
}

TEST_CASE("L^p probe") {
  auto p = Params::make(0.5, 2);
  auto g = TestFunction::gaussian();
  CHECK(lp_norm(p, TestFunction::bump(), INFINITY, spec) == doctest::Approx(1.0).epsilon(1e-6));
  // ∫ e^{-2x^2}|x| dx = 1/2
  CHECK(lp_norm(p, g, 2, spec) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-8));
  SweepGrid zero{{Axis{"y", 0, 0, 1}}};
  auto r = lp_bound_probe_report(p, {1, 2, INFINITY}, g, zero, spec);
  REQUIRE(r.size() == 3);
  for (const auto& pr : r) {
    CHECK(pr.y == std::vector<double>{0.0});
    CHECK(pr.ratio[0] == 1.0);
  }
  SweepGrid ys{{Axis{"y", 0.5, 2, 2, Spacing::Log}}};
  double one = lp_bound_probe(p, 1, g, ys, spec);
  CHECK(std::isfinite(one));
  CHECK(one <= 1.0 + 1e-6);  // τ_y is a contraction on L^1 when Δ >= 0
  CHECK_THROWS_AS(lp_bound_probe(Params::make(0.75, 4.0 / 3.0), 2, g, ys, spec), DomainError);
  CHECK_THROWS_AS(lp_bound_probe(p, 2, TestFunction::constant(), ys, spec), DomainError);
}
