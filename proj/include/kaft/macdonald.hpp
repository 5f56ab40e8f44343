#pragma once

#include "kaft/specfn.hpp"

namespace kaft::macdonald {

enum class Region { Inner, Band, Outer, Boundary };

const char* region_name(Region r);

struct TripleGeometry {
  double x = 0, y = 0, z = 0;
  Region region = Region::Boundary;
  double cos_theta = 0;   // Band only
  double cosh_theta = 0;  // Outer only
};

struct MacdonaldOrders {
  Order mu, nu;
  // Throws DomainError unless both orders exceed -1/2.
  static MacdonaldOrders make(double mu, double nu);
};

TripleGeometry classify(double x, double y, double z, double boundary_eps = 1e-13);

// R_{μ,ν}(x,y,z) = ∫_0^∞ J_ν(xt) J_ν(yt) J_μ(zt) t^{1-μ} dt.
double r_kernel(const MacdonaldOrders& orders, double x, double y, double z);
double r_kernel_gegenbauer(Order mu, int n, double x, double y, double z);

// Sides of a triangle-like triple together with the two signed gaps
// gap_inner = c - |a-b| and gap_outer = a + b - c, carried separately so the
// kernel never sees a cancelled difference near the region edges.
struct Triple {
  double a, b, c;
  double gap_inner;
  double gap_outer;
};

// A triple of magnitudes (P, Q, V) with both gaps of the (P,Q;V) slot, from
// which the gaps of the permuted slots (P,V;Q) and (Q,V;P) follow exactly.
class Triangle {
 public:
  // gap_inner = V - |P-Q|, gap_outer = P + Q - V.
  Triangle(double p, double q, double v, double gap_inner, double gap_outer);
  static Triangle from_sides(double p, double q, double v);

  double p() const { return p_; }
  double q() const { return q_; }
  double v() const { return v_; }

  Triple pq_v() const;  // R(P,Q;V)
  Triple pv_q() const;  // R(P,V;Q)
  Triple qv_p() const;  // R(Q,V;P)

 private:
  double p_, q_, v_, d1_, d2_;
};

// R_{μ,ν} evaluator with order-dependent constants precomputed. Evaluation
// on interior points only; boundary points give whatever the formulas
// produce (±∞ or a finite limit).
class Kernel {
 public:
  explicit Kernel(const MacdonaldOrders& orders);
  double operator()(const Triple& t) const;
  double band(double a, double b, double c, double one_minus_cos, double one_plus_cos) const;
  double outer(double a, double b, double c, double cosh_minus_one) const;
  bool outer_vanishes() const { return outer_zero_; }
  const MacdonaldOrders& orders() const { return orders_; }

 private:
  MacdonaldOrders orders_;
  specfn::Hyp2F1 band_f_;
  specfn::Hyp2F1 outer_f_;
  double band_log_const_;
  double outer_const_;
  bool outer_zero_;
};

}  // namespace kaft::macdonald
