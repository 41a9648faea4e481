#include "wlab/geometry.hpp"

#include <cmath>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace wlab {

PointGeometry point_geometry(const ImmersionField& f, const Vec2& x, const GeomOptions& opts) {
  JetOptions jopts;
  jopts.kappa = opts.kappa;
  Jet jet = compute_jet(f, x, 2, jopts);

  const Vec d1 = jet.partial(1, 0);
  const Vec d2 = jet.partial(0, 1);
  const double g2 = d1.norm2() + d2.norm2();
  if (!(g2 > 1e-300))
    throw std::domain_error(f.name + ": degenerate point, |grad Phi| = 0 at |x|=" +
                            std::to_string(x.norm()));

  PointGeometry g;
  g.x = x;
  g.lambda = 0.5 * std::log(0.5 * g2);
  const double el = std::exp(g.lambda);

  const Vec d11 = jet.partial(2, 0);
  const Vec d12 = jet.partial(1, 1);
  const Vec d22 = jet.partial(0, 2);
  g.grad_lambda = Vec2{(dot(d1, d11) + dot(d2, d12)) / g2, (dot(d1, d12) + dot(d2, d22)) / g2};

  g.e1 = d1 / el;
  g.e2 = d2 / el;
  g.conf_defect_scale = (d1.norm() - d2.norm()) / el;
  g.conf_defect_angle = dot(d1, d2) / (el * el);
  g.conformality_warning = std::abs(g.conf_defect_scale) > opts.conf_warn_tol ||
                           std::abs(g.conf_defect_angle) > opts.conf_warn_tol;

  MultiVector tangent_plane = wedge(MultiVector::from_vector(g.e1), MultiVector::from_vector(g.e2));
  double area = tangent_plane.norm();
  if (!(area > 1e-300))
    throw std::domain_error(f.name + ": degenerate tangent plane at |x|=" + std::to_string(x.norm()));
  g.star_gauss = tangent_plane * (1.0 / area);
  g.gauss = hodge(g.star_gauss);

  const double iel2 = 1.0 / (el * el);
  g.h11 = g.project_normal(d11) * iel2;
  g.h12 = g.project_normal(d12) * iel2;
  g.h22 = g.project_normal(d22) * iel2;
  g.H = (g.h11 + g.h22) * 0.5;

  double hf2 = g.h11.norm2() + 2.0 * g.h12.norm2() + g.h22.norm2();
  g.grad_n_norm = el * std::sqrt(hf2);
  return g;
}

namespace {

double polar_quadrature(const ImmersionField& f, double r_in, double r_out, int n_r, int n_phi,
                        const GeomOptions& opts, bool willmore_integrand) {
  if (n_r < 4 || n_phi < 4)
    throw std::invalid_argument("annulus quadrature: counts must be at least 4");
  if (!(f.r_min <= r_in && r_in < r_out && r_out <= f.r_max))
    throw std::invalid_argument("annulus quadrature: need r_min <= r_in < r_out <= r_max");
  int nr = n_r % 2 == 0 ? n_r : n_r + 1;  // Simpson needs an even interval count

  const double dr = (r_out - r_in) / nr;
  const double dphi = kTwoPi / n_phi;
  double total = 0.0;
  for (int i = 0; i <= nr; ++i) {
    double r = r_in + i * dr;
    double wr = (i == 0 || i == nr) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    double ring = 0.0;
    for (int k = 0; k < n_phi; ++k) {
      PointGeometry g = point_geometry(f, Vec2::polar(r, k * dphi), opts);
      double e2l = std::exp(2.0 * g.lambda);
      ring += willmore_integrand ? e2l * g.H.norm2() : g.grad_n_norm * g.grad_n_norm;
    }
    total += wr * ring * r;
  }
  return total * (dr / 3.0) * dphi;
}

}  // namespace

double willmore_energy(const ImmersionField& f, double r_in, double r_out, int n_r, int n_phi,
                       const GeomOptions& opts) {
  return polar_quadrature(f, r_in, r_out, n_r, n_phi, opts, true);
}

double gauss_energy(const ImmersionField& f, double r_in, double r_out, int n_r, int n_phi,
                    const GeomOptions& opts) {
  return polar_quadrature(f, r_in, r_out, n_r, n_phi, opts, false);
}

struct CurrentEvaluator::Cache {
  std::unordered_map<detail::Vec2Key, PointGeometry, detail::Vec2KeyHash> geom;
  std::mutex mu;
};

CurrentEvaluator::CurrentEvaluator(const ImmersionField& f, const GeomOptions& opts)
    : field_(f), opts_(opts), cache_(std::make_shared<Cache>()) {
  auto cache = cache_;
  ImmersionField field = field_;
  GeomOptions o = opts_;

  RnField raw;
  raw.len = 2 * field.dim;
  auto geom_at = [cache, field, o](const Vec2& y) -> PointGeometry {
    auto key = detail::key_of(y);
    {
      std::lock_guard<std::mutex> lock(cache->mu);
      auto it = cache->geom.find(key);
      if (it != cache->geom.end()) return it->second;
    }
    PointGeometry g = point_geometry(field, y, o);
    std::lock_guard<std::mutex> lock(cache->mu);
    return cache->geom.emplace(key, g).first->second;
  };

  // Mean curvature as a derived field.
  RnField h_field;
  h_field.len = field.dim;
  h_field.eval = [geom_at, m = field.dim](const Vec2& y) {
    PointGeometry g = geom_at(y);
    std::vector<double> v(m);
    for (int i = 0; i < m; ++i) v[i] = g.H[i];
    return v;
  };
  h_field = memoize(h_field);

  // Gauss map as a derived field, packed dense blade coefficients.
  const int nblades = 1 << field.dim;
  RnField n_field;
  n_field.len = nblades;
  n_field.eval = [geom_at, nblades](const Vec2& y) {
    PointGeometry g = geom_at(y);
    std::vector<double> v(nblades);
    for (Blade b = 0; b < Blade(nblades); ++b) v[b] = g.gauss.coeff(b);
    return v;
  };
  n_field = memoize(n_field);

  raw.eval = [geom_at, h_field, n_field, field, o, nblades](const Vec2& y) {
    const int m = field.dim;
    PointGeometry g = geom_at(y);

    auto unpack_vec = [m](const std::vector<double>& v) {
      Vec w(m);
      for (int i = 0; i < m; ++i) w[i] = v[i];
      return w;
    };
    Vec dH1 = unpack_vec(field_derivative(h_field, y, 1, o.kappa));
    Vec dH2 = unpack_vec(field_derivative(h_field, y, 2, o.kappa));

    auto unpack_mv = [m, nblades](const std::vector<double>& v) {
      MultiVector w(m);
      for (Blade b = 0; b < Blade(nblades); ++b) w.coeff(b) = v[b];
      return w;
    };
    MultiVector dn1 = unpack_mv(field_derivative(n_field, y, 1, o.kappa));
    MultiVector dn2 = unpack_mv(field_derivative(n_field, y, 2, o.kappa));

    MultiVector hv = MultiVector::from_vector(g.H);
    // perp grad = (-d_2, d_1)
    Vec x1 = dH1 - g.project_normal(dH1) * 3.0 + hodge(wedge(-dn2, hv)).vector_part();
    Vec x2 = dH2 - g.project_normal(dH2) * 3.0 + hodge(wedge(dn1, hv)).vector_part();

    std::vector<double> out(2 * m);
    for (int i = 0; i < m; ++i) {
      out[i] = x1[i];
      out[m + i] = x2[i];
    }
    return out;
  };
  current_field_ = memoize(raw);
}

const PointGeometry& CurrentEvaluator::geometry(const Vec2& x) const {
  auto key = detail::key_of(x);
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->geom.find(key);
    if (it != cache_->geom.end()) return it->second;
  }
  PointGeometry g = point_geometry(field_, x, opts_);
  std::lock_guard<std::mutex> lock(cache_->mu);
  return cache_->geom.emplace(key, g).first->second;
}

Current2 CurrentEvaluator::current(const Vec2& x) const {
  std::vector<double> v = current_field_.eval(x);
  const int m = field_.dim;
  Current2 c{Vec(m), Vec(m)};
  for (int i = 0; i < m; ++i) {
    c.comp1[i] = v[i];
    c.comp2[i] = v[m + i];
  }
  return c;
}

Vec CurrentEvaluator::divergence(const Vec2& x) const {
  const int m = field_.dim;
  std::vector<double> d1 = field_derivative(current_field_, x, 1, opts_.kappa);
  std::vector<double> d2 = field_derivative(current_field_, x, 2, opts_.kappa);
  Vec div(m);
  for (int i = 0; i < m; ++i) div[i] = d1[i] + d2[m + i];
  return div;
}

Vec CurrentEvaluator::lhs_pointwise(const Vec2& x) const {
  const int m = field_.dim;
  const GeomOptions o = opts_;
  const ImmersionField field = field_;
  auto self = *this;

  // pi_n(grad H) as a derived field, both components packed.
  RnField w_field;
  w_field.len = 2 * m;
  w_field.eval = [self, m, o](const Vec2& y) {
    const PointGeometry& g = self.geometry(y);
    RnField h_field;
    h_field.len = m;
    h_field.eval = [&self, m](const Vec2& z) {
      const PointGeometry& gz = self.geometry(z);
      std::vector<double> v(m);
      for (int i = 0; i < m; ++i) v[i] = gz.H[i];
      return v;
    };
    std::vector<double> d1 = field_derivative(h_field, y, 1, o.kappa);
    std::vector<double> d2 = field_derivative(h_field, y, 2, o.kappa);
    Vec v1(m), v2(m);
    for (int i = 0; i < m; ++i) {
      v1[i] = d1[i];
      v2[i] = d2[i];
    }
    v1 = g.project_normal(v1);
    v2 = g.project_normal(v2);
    std::vector<double> out(2 * m);
    for (int i = 0; i < m; ++i) {
      out[i] = v1[i];
      out[m + i] = v2[i];
    }
    return out;
  };
  w_field = memoize(w_field);

  std::vector<double> dw1 = field_derivative(w_field, x, 1, opts_.kappa);
  std::vector<double> dw2 = field_derivative(w_field, x, 2, opts_.kappa);
  Vec div_w(m);
  for (int i = 0; i < m; ++i) div_w[i] = dw1[i] + dw2[m + i];

  const PointGeometry& g = geometry(x);
  const double e2l = std::exp(2.0 * g.lambda);
  Vec laplace_perp = g.project_normal(div_w) / e2l;

  Vec coupling = g.h11 * dot(g.h11, g.H) + g.h12 * (2.0 * dot(g.h12, g.H)) +
                 g.h22 * dot(g.h22, g.H);
  return laplace_perp + coupling - g.H * (2.0 * g.H.norm2());
}

Current2 willmore_current(const ImmersionField& f, const Vec2& x, const GeomOptions& opts) {
  return CurrentEvaluator(f, opts).current(x);
}

Vec willmore_divergence(const ImmersionField& f, const Vec2& x, const GeomOptions& opts) {
  return CurrentEvaluator(f, opts).divergence(x);
}

Vec willmore_lhs_pointwise(const ImmersionField& f, const Vec2& x, const GeomOptions& opts) {
  return CurrentEvaluator(f, opts).lhs_pointwise(x);
}

std::vector<std::pair<double, double>> delta_profile(const ImmersionField& f,
                                                     const std::vector<double>& radii, int n_phi,
                                                     const GeomOptions& opts) {
  int n = n_phi < 64 ? 64 : n_phi;
  std::vector<std::pair<double, double>> out;
  out.reserve(radii.size());
  for (double r : radii) {
    double sup = 0.0;
    for (int k = 0; k < n; ++k) {
      PointGeometry g = point_geometry(f, Vec2::polar(r, k * kTwoPi / n), opts);
      sup = std::max(sup, g.grad_n_norm);
    }
    out.emplace_back(r, r * sup);
  }
  return out;
}

void dump_geometry_csv(std::ostream& os, const ImmersionField& f, double r_in, double r_out,
                       int n_r, int n_phi, const GeomOptions& opts) {
  os << "x1,x2,lambda";
  for (int i = 1; i <= f.dim; ++i) os << ",H_" << i;
  os << ",grad_n_norm,defect_scale,defect_angle\n";
  for (int i = 0; i < n_r; ++i) {
    double r = r_in + (r_out - r_in) * (n_r == 1 ? 0.0 : double(i) / (n_r - 1));
    for (int k = 0; k < n_phi; ++k) {
      Vec2 x = Vec2::polar(r, k * kTwoPi / n_phi);
      PointGeometry g = point_geometry(f, x, opts);
      os << x.x1 << ',' << x.x2 << ',' << g.lambda;
      for (int c = 0; c < f.dim; ++c) os << ',' << g.H[c];
      os << ',' << g.grad_n_norm << ',' << g.conf_defect_scale << ',' << g.conf_defect_angle
         << '\n';
    }
  }
}

}  // namespace wlab
