#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kaft/genkernel.hpp"
#include "kaft/quadrature.hpp"

namespace kaft::harness {

using genkernel::Params;
using quadrature::QuadratureSpec;

struct ResidualReport {
  ComplexValue lhs, rhs;
  double abs_residual = 0.0;
  double rel_residual = 0.0;  // abs_residual / (1 + |lhs|)
  double quad_error = 0.0;
  double wall_ms = 0.0;
};

ResidualReport make_report(ComplexValue lhs, ComplexValue rhs, double quad_error, double wall_ms);

// ∫ B(λ,z) dγ_{x,y}(z) against B(λ,x) B(λ,y).
ResidualReport product_residual(const Params& p, double lambda, double x, double y,
                                const QuadratureSpec& spec);
// ∫ dγ_{x,y} against 1.
ResidualReport mass_residual(const Params& p, double x, double y, const QuadratureSpec& spec);

struct TvReport {
  double total = 0.0;
  double inner = 0.0;  // 0 < |z|^{a/2} < ||x|^{a/2} - |y|^{a/2}|
  double band = 0.0;
  double outer = 0.0;  // |z|^{a/2} > |x|^{a/2} + |y|^{a/2}
  double est_error = 0.0;
  double truncation_bound = 0.0;
};

TvReport tv_norm_report(const Params& p, double x, double y, const QuadratureSpec& spec);
double tv_norm(const Params& p, double x, double y, const QuadratureSpec& spec);

ResidualReport hankel_identity_eq1(Order mu, Order nu, double x, double y, double t,
                                   const QuadratureSpec& spec);
ResidualReport hankel_identity_eq2(Order mu, Order nu, double x, double y, double t,
                                   const QuadratureSpec& spec);

// ∫_{-1}^{1} (1-t^2)^{μ/2-1/4} P^{1/2-μ}_{ν-1/2}(t) dt against its closed form.
ResidualReport legendre_p_integral_check(Order mu, Order nu, const QuadratureSpec& spec);
// ∫_1^∞ (t^2-1)^{μ/2-1/4} Q^{1/2-μ}_{ν-1/2}(t) dt (phase-free) against its
// closed form; needs ν > μ.
ResidualReport legendre_q_integral_check(Order mu, Order nu, const QuadratureSpec& spec);
double legendre_p_closed_form(Order mu, Order nu);
double legendre_q_closed_form(Order mu, Order nu);

// Real test function on the line, zero for |x| > support().
class TestFunction {
 public:
  static TestFunction callable(std::function<double(double)> f, double support_radius,
                               std::string name = "callable");
  // Natural cubic spline through (xs, ys); zero outside [xs.front(), xs.back()].
  static TestFunction samples(std::vector<double> xs, std::vector<double> ys);
  static TestFunction gaussian(double scale = 1.0);
  static TestFunction bump(double radius = 1.0);
  static TestFunction constant(double value = 1.0);

  double operator()(double x) const;
  double support() const { return support_; }
  const std::string& name() const { return name_; }
  // Throws DomainError when the declared support cuts off a non-negligible
  // part of f, or when sampled data are too coarse for tol.
  void check(double tol) const;

 private:
  std::function<double(double)> f_;
  double support_ = 0.0;
  std::string name_;
  std::vector<double> xs_, ys_;
  bool sampled_ = false;
};

struct TranslationResult {
  ComplexValue value;
  double est_error = 0.0;
};

// τ_y f(z) = ∫ f dσ_{y,z}.
TranslationResult translate_report(const Params& p, double y, const TestFunction& f, double z,
                                   const QuadratureSpec& spec);
ComplexValue translate(const Params& p, double y, const TestFunction& f, double z,
                       const QuadratureSpec& spec);

enum class Spacing { Linear, Log };

struct Axis {
  std::string name;
  double min = 0.0, max = 0.0;
  int count = 1;
  Spacing spacing = Spacing::Linear;
  std::vector<double> values() const;
};

struct SweepGrid {
  std::vector<Axis> axes;
  void validate() const;
  const Axis* find(const std::string& name) const;
  // Cartesian product in axis order, last axis fastest.
  std::vector<std::vector<double>> points() const;
};

// Weighted L^p norm ∫|g|^p |x|^w dx; p_exp = +inf for the sup norm.
double lp_norm(const Params& p, const TestFunction& f, double p_exp, const QuadratureSpec& spec);

struct LpProbe {
  double p_exp = 1.0;
  std::vector<double> y;
  std::vector<double> ratio;
  double max_ratio = 0.0;
};

// ‖τ_y f‖_p / ‖f‖_p over the grid axis named "y", one probe per exponent.
// Needs 2/a integer and f of finite support so that τ_y f has finite support.
std::vector<LpProbe> lp_bound_probe_report(const Params& p, const std::vector<double>& p_exps,
                                           const TestFunction& f, const SweepGrid& y_grid,
                                           const QuadratureSpec& spec, int jobs = 1);
double lp_bound_probe(const Params& p, double p_exp, const TestFunction& f, const SweepGrid& y_grid,
                      const QuadratureSpec& spec, int jobs = 1);

}  // namespace kaft::harness
