#pragma once

#include <complex>
#include <string>
#include <vector>

#include "kaft/macdonald.hpp"

namespace kaft {

using ComplexValue = std::complex<double>;

}  // namespace kaft

namespace kaft::genkernel {

// (k,a) with derived orders mu = (2k-1)/a, nu = (2k+1)/a and weight
// exponent w = 2k+a-2.
class Params {
 public:
  // Admissible for the kernel B alone: k >= 0, a > 0, mu > -1.
  static Params make(double k, double a);

  double k() const { return k_; }
  double a() const { return a_; }
  double mu() const { return mu_; }
  double nu() const { return nu_; }
  double weight() const { return w_; }

  // Throws DomainError unless mu > -1/2 and w > -1, which the product
  // formula and the densities need.
  void require_density() const;
  bool density_admissible() const;
  // 2k > a-1 (quoted in the abstract); informational.
  bool abstract_condition() const { return 2.0 * k_ > a_ - 1.0; }
  std::vector<std::string> diagnostics() const;

  // 2/a is an integer: compactly supported densities, real coefficients.
  bool compact() const { return compact_; }
  // e^{-2iπ/a}
  ComplexValue phase2() const { return phase2_; }

 private:
  Params(double k, double a);
  double k_, a_, mu_, nu_, w_;
  bool compact_;
  ComplexValue phase2_;
};

ComplexValue m_const(const Params& p);
ComplexValue b_kernel(const Params& p, double lambda, double x);

// Δ_{k,a}(x,y,z); all three arguments nonzero.
ComplexValue delta_density(const Params& p, double x, double y, double z);

enum class MeasureKind { Density, DiracAtX, DiracAtY };

struct MeasureDescriptor {
  MeasureKind kind;
  Params params;
  double x, y;
  bool sigma = false;  // density z -> Δ(x,z,y)|z|^w instead of Δ(x,y,z)|z|^w

  // Density against dz; only for kind == Density and z != 0.
  ComplexValue density(double z) const;
  // Location of the point mass for the Dirac kinds.
  double atom() const;
};

MeasureDescriptor gamma_measure(const Params& p, double x, double y);
MeasureDescriptor sigma_measure(const Params& p, double x, double y);

struct EvenOdd {
  ComplexValue even, odd;
};

// The measure γ_{x,y} or σ_{x,y} written in the magnitude V = |z|^{a/2} of
// the free variable:
//   ∫ f dm = Σ_{s=±1} ∫_0^∞ f(s V^{2/a}) (E(V) + s O(V)) dV
//          = 2 ∫_0^∞ (f_even E + f_odd O) dV.
// P = |x|^{a/2}, Q = |y|^{a/2}. Triangles are (P, Q, V).
class PairDensity {
 public:
  enum class Kind { Gamma, Sigma };
  PairDensity(const Params& p, Kind kind, double x, double y);

  const Params& params() const { return params_; }
  double p() const { return p_; }
  double q() const { return q_; }

  // E and O per unit dV.
  EvenOdd at(const macdonald::Triangle& t) const;
  // The bracket of R terms alone, without K (PQV)^{-μ} V^{μ+1}.
  EvenOdd bracket(const macdonald::Triangle& t) const;

  // Map between the z line and V.
  double z_of(double v) const;
  double v_of(double z) const;

 private:
  Params params_;
  double p_, q_;
  macdonald::Kernel r_mumu_, r_munu_;
  ComplexValue c_pq_, c_pv_, c_qv_;  // coefficients of the μν terms
  double log_k_;                     // ln(2^{μ-1} Γ(μ+1)) - μ ln(PQ)
};

}  // namespace kaft::genkernel
