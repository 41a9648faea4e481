#include "wlab/zoo.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

namespace wlab {

Rotation Rotation::identity(int dim) {
  Rotation r;
  r.dim = dim;
  for (int i = 0; i < dim; ++i) r.m[i][i] = 1.0;
  return r;
}

Rotation Rotation::random(int dim, std::uint64_t seed) {
  // Gram-Schmidt on a seeded Gaussian matrix.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Rotation r;
  r.dim = dim;
  for (int i = 0; i < dim; ++i) {
    Vec v(dim);
    for (int k = 0; k < dim; ++k) v[k] = gauss(rng);
    for (int j = 0; j < i; ++j) {
      Vec prev(dim);
      for (int k = 0; k < dim; ++k) prev[k] = r.m[j][k];
      v -= prev * dot(v, prev);
    }
    v = v.normalized();
    for (int k = 0; k < dim; ++k) r.m[i][k] = v[k];
  }
  return r;
}

Vec Rotation::apply(const Vec& v) const {
  if (v.dim() != dim) throw std::invalid_argument("Rotation::apply: dimension mismatch");
  Vec out(dim);
  for (int i = 0; i < dim; ++i) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += m[i][k] * v[k];
    out[i] = s;
  }
  return out;
}

double Rotation::orthogonality_defect() const {
  double worst = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += m[k][i] * m[k][j];
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

ImmersionField make_plane(int dim) {
  if (dim < 3 || dim > kMaxDim) throw std::invalid_argument("make_plane: dim out of range");
  ImmersionField f;
  f.name = "plane";
  f.dim = dim;
  f.r_min = 1e-12;
  f.r_max = 16.0;
  f.branch_order_hint = 1;
  f.map = [dim](const Vec2& x) {
    Vec v(dim);
    v[0] = x.x1;
    v[1] = x.x2;
    return v;
  };
  return f;
}

ImmersionField make_sphere_patch() {
  ImmersionField f;
  f.name = "sphere_patch";
  f.dim = 3;
  f.r_min = 1e-12;
  f.r_max = 16.0;
  f.branch_order_hint = 1;
  f.map = [](const Vec2& x) {
    double r2 = x.x1 * x.x1 + x.x2 * x.x2;
    double d = 1.0 / (1.0 + r2);
    return Vec{2.0 * x.x1 * d, 2.0 * x.x2 * d, (r2 - 1.0) * d};
  };
  return f;
}

ImmersionField make_catenoid() {
  ImmersionField f;
  f.name = "catenoid";
  f.dim = 3;
  f.r_min = 1e-12;
  f.r_max = 16.0;
  f.map = [](const Vec2& x) {
    double r = x.norm();
    double t = std::log(r);
    double c = std::cosh(t);
    return Vec{c * x.x1 / r, c * x.x2 / r, t};
  };
  return f;
}

ImmersionField invert(const ImmersionField& f) {
  ImmersionField g = f;
  g.name = "inverted(" + f.name + ")";
  auto inner = f.map;
  std::string name = g.name;
  g.map = [inner, name](const Vec2& x) {
    Vec p = inner(x);
    double n2 = p.norm2();
    if (n2 < 1e-24)
      throw std::domain_error(name + ": inversion pole, |Phi| < 1e-12 on the domain");
    return p / n2;
  };
  return g;
}

ImmersionField make_inverted_catenoid(int branch) {
  if (branch != 1 && branch != -1)
    throw std::invalid_argument("make_inverted_catenoid: branch must be +1 or -1");
  ImmersionField f;
  f.name = branch == 1 ? "inverted_catenoid" : "inverted_catenoid_mirror";
  f.dim = 3;
  f.r_min = 1e-12;
  f.r_max = 4.0;
  f.branch_order_hint = 1;
  // t = -branch * log r selects the end; the ambient dilation by 1/2 makes
  // the fitted leading coefficient satisfy |A^1| = 1.
  const double normalization = 0.5;
  f.map = [branch, normalization](const Vec2& x) {
    double r = x.norm();
    double t = -branch * std::log(r);
    double c = std::cosh(t);
    Vec p{c * x.x1 / r, c * x.x2 / r, t};
    return p * (normalization / p.norm2());
  };
  return f;
}

ImmersionField precompose_power(const ImmersionField& f, int theta0) {
  if (theta0 < 1) throw std::invalid_argument("precompose_power: theta0 must be >= 1");
  if (theta0 == 1) return f;
  ImmersionField g = f;
  g.name = f.name + "^" + std::to_string(theta0);
  if (f.branch_order_hint) g.branch_order_hint = *f.branch_order_hint * theta0;
  g.r_min = std::pow(f.r_min, 1.0 / theta0);
  g.r_max = std::pow(f.r_max, 1.0 / theta0);
  auto inner = f.map;
  g.map = [inner, theta0](const Vec2& x) {
    std::complex<double> z = std::pow(std::complex<double>(x.x1, x.x2), theta0);
    return inner(Vec2{z.real(), z.imag()});
  };
  return g;
}

ImmersionField make_covered_inverted_catenoid(int theta0, int branch) {
  ImmersionField f = precompose_power(make_inverted_catenoid(branch), theta0);
  f.name = "covered_inverted_catenoid_" + std::to_string(theta0) +
           (branch == -1 ? "_mirror" : "");
  return f;
}

namespace {

std::complex<double> poly_eval(const std::vector<double>& coeffs, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> poly_antiderivative(const std::vector<double>& a) {
  std::vector<double> out(a.size() + 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) out[i + 1] = a[i] / double(i + 1);
  return out;
}

}  // namespace

ImmersionField make_weierstrass_minimal(const std::vector<double>& f_coeffs,
                                        const std::vector<double>& g_coeffs) {
  std::vector<double> f = f_coeffs.empty() ? std::vector<double>{0.0} : f_coeffs;
  std::vector<double> g = g_coeffs.empty() ? std::vector<double>{0.0} : g_coeffs;
  std::vector<double> g2 = poly_mul(g, g);

  // Integrands ((1 - g^2) f / 2, i (1 + g^2) f / 2, f g); antiderivatives are
  // exact monomial sums, so P1, P2i, P3 below satisfy Phi = Re(P1, i P2i, P3).
  std::vector<double> w1 = f;
  w1.resize(std::max(w1.size(), g2.size() + f.size()), 0.0);
  std::vector<double> fg2 = poly_mul(f, g2);
  std::vector<double> w2 = w1;
  for (size_t i = 0; i < fg2.size(); ++i) {
    w1[i] -= fg2[i];
    w2[i] += fg2[i];
  }
  for (double& c : w1) c *= 0.5;
  for (double& c : w2) c *= 0.5;
  std::vector<double> w3 = poly_mul(f, g);

  std::vector<double> p1 = poly_antiderivative(w1);
  std::vector<double> p2 = poly_antiderivative(w2);
  std::vector<double> p3 = poly_antiderivative(w3);

  bool all_zero = true;
  for (const auto& p : {p1, p2, p3})
    for (double c : p)
      if (c != 0.0) all_zero = false;
  if (all_zero) throw std::invalid_argument("make_weierstrass_minimal: zero immersion");

  ImmersionField field;
  field.name = "weierstrass_minimal";
  field.dim = 3;
  field.r_min = 1e-12;
  field.r_max = 16.0;
  field.map = [p1, p2, p3](const Vec2& x) {
    std::complex<double> z(x.x1, x.x2);
    std::complex<double> a = poly_eval(p1, z);
    std::complex<double> b = poly_eval(p2, z);
    std::complex<double> c = poly_eval(p3, z);
    // Re(i b) = -Im(b)
    return Vec{a.real(), -b.imag(), c.real()};
  };
  return field;
}

ImmersionField embed_in_higher_codim(const ImmersionField& f, int m_target,
                                     const Rotation& rotation) {
  if (m_target < f.dim || m_target > kMaxDim)
    throw std::invalid_argument("embed_in_higher_codim: target dimension out of range");
  if (rotation.dim != m_target)
    throw std::invalid_argument("embed_in_higher_codim: rotation dimension mismatch");
  if (rotation.orthogonality_defect() > 1e-10)
    throw std::invalid_argument("embed_in_higher_codim: rotation is not orthogonal");
  ImmersionField g = f;
  g.name = f.name + "@R" + std::to_string(m_target);
  g.dim = m_target;
  auto inner = f.map;
  int m_src = f.dim;
  g.map = [inner, rotation, m_src, m_target](const Vec2& x) {
    Vec p = inner(x);
    Vec padded(m_target);
    for (int i = 0; i < m_src; ++i) padded[i] = p[i];
    return rotation.apply(padded);
  };
  return g;
}

SurfaceSpec SurfaceSpec::from_json(const nlohmann::json& j) {
  SurfaceSpec s;
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw std::invalid_argument("surface spec: missing string field 'kind'");
  s.kind = j.at("kind").get<std::string>();
  s.dim = j.value("m", 3);
  s.theta0 = j.value("theta0", s.kind == "covered_inverted_catenoid" ? 2 : 1);
  s.branch = j.value("branch", +1);
  if (j.contains("f")) s.f_coeffs = j.at("f").get<std::vector<double>>();
  if (j.contains("g")) s.g_coeffs = j.at("g").get<std::vector<double>>();
  s.m_target = j.value("m_target", 4);
  s.rotation_seed = j.value("rotation_seed", std::uint64_t{0});
  if (j.contains("base")) s.base = std::make_shared<SurfaceSpec>(from_json(j.at("base")));
  return s;
}

nlohmann::json SurfaceSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  if (kind == "plane") j["m"] = dim;
  if (kind == "covered_inverted_catenoid") j["theta0"] = theta0;
  if (kind == "inverted_catenoid" || kind == "covered_inverted_catenoid") j["branch"] = branch;
  if (kind == "weierstrass_minimal") {
    j["f"] = f_coeffs;
    j["g"] = g_coeffs;
  }
  if (kind == "embedded_variant") {
    j["m_target"] = m_target;
    j["rotation_seed"] = rotation_seed;
    if (base) j["base"] = base->to_json();
  }
  return j;
}

ImmersionField make_field(const SurfaceSpec& spec) {
  if (spec.kind == "plane") return make_plane(spec.dim);
  if (spec.kind == "sphere_patch") return make_sphere_patch();
  if (spec.kind == "catenoid") return make_catenoid();
  if (spec.kind == "inverted_catenoid") return make_inverted_catenoid(spec.branch);
  if (spec.kind == "covered_inverted_catenoid")
    return make_covered_inverted_catenoid(spec.theta0, spec.branch);
  if (spec.kind == "weierstrass_minimal")
    return make_weierstrass_minimal(spec.f_coeffs, spec.g_coeffs);
  if (spec.kind == "embedded_variant") {
    if (!spec.base) throw std::invalid_argument("embedded_variant: missing 'base' surface");
    ImmersionField base = make_field(*spec.base);
    Rotation r = spec.rotation_seed == 0 ? Rotation::identity(spec.m_target)
                                         : Rotation::random(spec.m_target, spec.rotation_seed);
    return embed_in_higher_codim(base, spec.m_target, r);
  }
  throw std::invalid_argument("unknown surface kind '" + spec.kind + "'");
}

std::vector<ImmersionField> standard_zoo() {
  std::vector<ImmersionField> fields;
  fields.push_back(make_plane(3));
  fields.push_back(make_sphere_patch());
  fields.push_back(make_catenoid());
  fields.push_back(make_inverted_catenoid(+1));
  fields.push_back(make_covered_inverted_catenoid(2));
  fields.push_back(make_weierstrass_minimal({0.0, 1.0}, {0.0, 1.0}));
  fields.push_back(
      embed_in_higher_codim(make_inverted_catenoid(+1), 5, Rotation::random(5, 20240517)));
  return fields;
}

}  // namespace wlab
