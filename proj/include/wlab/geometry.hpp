#pragma once

#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "wlab/field.hpp"
#include "wlab/jets.hpp"
#include "wlab/multivector.hpp"

namespace wlab {

struct GeomOptions {
  double kappa = 1e-2;          // jet / nested-difference relative step
  double conf_warn_tol = 1e-6;  // conformality defect above this sets the warning flag
};

// First- and second-order geometric data of a conformal immersion at a point.
struct PointGeometry {
  Vec2 x;
  double lambda = 0.0;  // log conformal factor, |grad Phi|^2 = 2 e^{2 lambda}
  Vec2 grad_lambda;
  Vec e1, e2;             // orthonormal tangent frame e_j = e^{-lambda} d_j Phi
  MultiVector gauss;      // unit (m-2)-vector star(e1 ^ e2)
  MultiVector star_gauss; // unit 2-vector e1 ^ e2
  Vec h11, h12, h22;      // normal-valued second fundamental form, h21 = h12
  Vec H;                  // mean curvature vector (h11 + h22) / 2
  double grad_n_norm = 0.0;         // e^{-lambda} |pi_n grad^2 Phi|
  double conf_defect_scale = 0.0;   // (|d1 Phi| - |d2 Phi|) / e^lambda
  double conf_defect_angle = 0.0;   // d1 Phi . d2 Phi / e^{2 lambda}
  bool conformality_warning = false;

  PointGeometry() : gauss(3), star_gauss(3) {}

  Vec project_tangent(const Vec& v) const { return e1 * dot(v, e1) + e2 * dot(v, e2); }
  Vec project_normal(const Vec& v) const { return v - project_tangent(v); }
};

PointGeometry point_geometry(const ImmersionField& f, const Vec2& x,
                             const GeomOptions& opts = {});

// Integral of e^{2 lambda} |H|^2 over the annulus r_in < |x| < r_out, polar
// tensor quadrature: periodic trapezoid in phi, composite Simpson in r.
double willmore_energy(const ImmersionField& f, double r_in, double r_out, int n_r,
                       int n_phi, const GeomOptions& opts = {});

// Same quadrature with integrand |grad n|^2.
double gauss_energy(const ImmersionField& f, double r_in, double r_out, int n_r,
                    int n_phi, const GeomOptions& opts = {});

// The two components of the conserved current
//   X_j = d_j H - 3 pi_n(d_j H) + star((perp grad n)_j ^ H),
// with perp grad = (-d_2, d_1).
struct Current2 {
  Vec comp1, comp2;
};

// Point evaluator for the current and its derived quantities. Shares one
// geometry cache across evaluations, so circle sweeps and nested differences
// reuse points.
class CurrentEvaluator {
 public:
  CurrentEvaluator(const ImmersionField& f, const GeomOptions& opts = {});

  const PointGeometry& geometry(const Vec2& x) const;
  Current2 current(const Vec2& x) const;
  Vec divergence(const Vec2& x) const;      // d_1 X_1 + d_2 X_2
  Vec lhs_pointwise(const Vec2& x) const;   // normal Laplacian form of the equation

  const ImmersionField& field() const { return field_; }
  const GeomOptions& options() const { return opts_; }

 private:
  ImmersionField field_;
  GeomOptions opts_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
  RnField current_field_;  // memoized packed current components
};

// One-shot conveniences.
Current2 willmore_current(const ImmersionField& f, const Vec2& x, const GeomOptions& opts = {});
Vec willmore_divergence(const ImmersionField& f, const Vec2& x, const GeomOptions& opts = {});
Vec willmore_lhs_pointwise(const ImmersionField& f, const Vec2& x, const GeomOptions& opts = {});

// delta(r) = r sup_{|x|=r} |grad n|, the scale-invariant Gauss-map profile.
std::vector<std::pair<double, double>> delta_profile(const ImmersionField& f,
                                                     const std::vector<double>& radii,
                                                     int n_phi = 64,
                                                     const GeomOptions& opts = {});

// CSV rows x1,x2,lambda,H_1..H_m,grad_n_norm,defect_scale,defect_angle over a
// polar grid; header included.
void dump_geometry_csv(std::ostream& os, const ImmersionField& f, double r_in, double r_out,
                       int n_r, int n_phi, const GeomOptions& opts = {});

}  // namespace wlab
