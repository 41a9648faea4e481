#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "wlab/geometry.hpp"
#include "wlab/zoo.hpp"

using namespace wlab;

namespace {

constexpr double kPi = kTwoPi / 2.0;

ImmersionField quartic_graph() {
  ImmersionField f;
  f.name = "quartic_graph";
  f.dim = 3;
  f.r_min = 1e-12;
  f.r_max = 4.0;
  f.map = [](const Vec2& x) { return Vec{x.x1, x.x2, x.x1 * x.x1 * x.x1 * x.x1}; };
  return f;
}

double div_budget(const CurrentEvaluator& ev, const Vec2& x) {
  Current2 X = ev.current(x);
  double xs = std::max(X.comp1.norm(), X.comp2.norm());
  return 1e-3 * std::max(1.0, xs / x.norm());
}

}  // namespace

TEST_CASE("plane geometry is trivial") {
  ImmersionField f = make_plane(3);
  PointGeometry g = point_geometry(f, {0.3, -0.2});
  CHECK(std::abs(g.lambda) < 1e-12);
  CHECK(g.H.norm() < 1e-12);
  CHECK(g.h11.norm() < 1e-12);
  CHECK(g.h12.norm() < 1e-12);
  CHECK(g.h22.norm() < 1e-12);
  CHECK((g.gauss - MultiVector::basis(3, 3)).norm() < 1e-12);
  CHECK(g.grad_n_norm < 1e-12);
  CHECK(!g.conformality_warning);
}

TEST_CASE("unit sphere patch has |H| = 1 and unit frames") {
  ImmersionField f = make_sphere_patch();
  for (Vec2 x : {Vec2{0.3, 0.0}, Vec2{0.1, 0.45}, Vec2{-0.2, -0.35}}) {
    PointGeometry g = point_geometry(f, x);
    CHECK(std::abs(g.H.norm() - 1.0) < 1e-6);
    CHECK(std::abs(g.e1.norm() - 1.0) < 1e-9);
    CHECK(std::abs(g.e2.norm() - 1.0) < 1e-9);
    CHECK(std::abs(dot(g.e1, g.e2)) < 1e-9);
    CHECK(std::abs(inner(g.gauss, g.gauss) - 1.0) < 1e-8);
    // e^lambda = 2/(1+|x|^2) for this chart, so grad lambda = -2x/(1+|x|^2)
    double r2 = x.x1 * x.x1 + x.x2 * x.x2;
    CHECK(std::abs(std::exp(g.lambda) - 2.0 / (1.0 + r2)) < 1e-9);
    CHECK(std::abs(g.grad_lambda.x1 + 2.0 * x.x1 / (1.0 + r2)) < 1e-8);
    CHECK(std::abs(g.grad_lambda.x2 + 2.0 * x.x2 / (1.0 + r2)) < 1e-8);
  }
}

TEST_CASE("catenoid is minimal") {
  ImmersionField f = make_catenoid();
  for (double r : {0.1, 0.3, 0.5, 0.8})
    for (double phi : {0.0, 1.1, 3.9}) {
      PointGeometry g = point_geometry(f, Vec2::polar(r, phi));
      CHECK(g.H.norm() < 1e-6);
    }
}

TEST_CASE("mean curvature is normal") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> rad(0.05, 0.5), ang(0.0, kTwoPi);
  for (const ImmersionField& f : standard_zoo()) {
    for (int t = 0; t < 5; ++t) {
      PointGeometry g = point_geometry(f, Vec2::polar(rad(rng), ang(rng)));
      double tol = 1e-5 * std::max(1.0, std::exp(-g.lambda));
      CHECK(g.project_tangent(g.H).norm() < tol);
    }
  }
}

TEST_CASE("tangential Laplacian vanishes: Laplace Phi = 2 e^{2 lambda} H") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> rad(0.08, 0.5), ang(0.0, kTwoPi);
  for (const ImmersionField& f : standard_zoo()) {
    for (int t = 0; t < 5; ++t) {
      Vec2 x = Vec2::polar(rad(rng), ang(rng));
      Jet j = compute_jet(f, x, 2);
      PointGeometry g = point_geometry(f, x);
      Vec laplace = j.partial(2, 0) + j.partial(0, 2);
      double e2l = std::exp(2.0 * g.lambda);
      CHECK((laplace - g.H * (2.0 * e2l)).norm() < 1e-7 * e2l * (1.0 + g.H.norm()));
    }
  }
}

TEST_CASE("two routes to |grad n| agree") {
  // Frame route: grad n = star[(pi_n grad e1) ^ e2 + e1 ^ (pi_n grad e2)] with
  // pi_n grad e_j = e^lambda (h_1j, h_2j); compare with e^{-lambda} |pi_n grad^2 Phi|.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> rad(0.05, 0.5), ang(0.0, kTwoPi);
  for (const ImmersionField& f : standard_zoo()) {
    for (int t = 0; t < 4; ++t) {
      PointGeometry g = point_geometry(f, Vec2::polar(rad(rng), ang(rng)));
      double el = std::exp(g.lambda);
      auto mv = [](const Vec& v) { return MultiVector::from_vector(v); };
      MultiVector d1n =
          hodge(wedge(mv(g.h11 * el), mv(g.e2)) + wedge(mv(g.e1), mv(g.h12 * el)));
      MultiVector d2n =
          hodge(wedge(mv(g.h12 * el), mv(g.e2)) + wedge(mv(g.e1), mv(g.h22 * el)));
      double frame_route = std::sqrt(inner(d1n, d1n) + inner(d2n, d2n));
      if (g.grad_n_norm > 1e-12)
        CHECK(std::abs(frame_route - g.grad_n_norm) / g.grad_n_norm < 1e-6);
    }
  }
}

TEST_CASE("chart rotation leaves scalar outputs unchanged") {
  ImmersionField base = make_inverted_catenoid(+1);
  double alpha = 0.83;
  ImmersionField rotated = base;
  rotated.name = "rotated_chart";
  auto inner_map = base.map;
  rotated.map = [inner_map, alpha](const Vec2& x) {
    double c = std::cos(alpha), s = std::sin(alpha);
    return inner_map(Vec2{c * x.x1 - s * x.x2, s * x.x1 + c * x.x2});
  };
  for (double r : {0.1, 0.3}) {
    PointGeometry ga = point_geometry(base, Vec2::polar(r, 0.3 + alpha));
    PointGeometry gb = point_geometry(rotated, Vec2::polar(r, 0.3));
    CHECK(std::abs(ga.lambda - gb.lambda) < 1e-9);
    CHECK(std::abs(ga.H.norm() - gb.H.norm()) < 1e-7);
    CHECK(std::abs(ga.grad_n_norm - gb.grad_n_norm) < 1e-7);
  }
}

TEST_CASE("conformal parameter gradient scales with the branch order") {
  // lambda = (theta0 - 1) log|x| + smooth, so r |grad lambda| tends to
  // theta0 - 1; on the order-one chart the gradient itself stays bounded.
  ImmersionField cov = make_covered_inverted_catenoid(2);
  for (double r : {0.01, 0.02}) {
    PointGeometry g = point_geometry(cov, Vec2::polar(r, 0.7));
    double scaled = r * std::hypot(g.grad_lambda.x1, g.grad_lambda.x2);
    CHECK(scaled > 0.95);
    CHECK(scaled < 1.05);
  }
  ImmersionField inv = make_inverted_catenoid(+1);
  for (double r : {0.02, 0.1, 0.3}) {
    PointGeometry g = point_geometry(inv, Vec2::polar(r, 0.7));
    CHECK(std::hypot(g.grad_lambda.x1, g.grad_lambda.x2) < 5.0);
  }
}

TEST_CASE("degenerate point is an error") {
  ImmersionField f;
  f.name = "constant";
  f.dim = 3;
  f.r_min = 1e-12;
  f.r_max = 4.0;
  f.map = [](const Vec2&) { return Vec{1.0, 0.0, 0.0}; };
  CHECK_THROWS_AS(point_geometry(f, {0.3, 0.0}), std::domain_error);
}

TEST_CASE("willmore energy of flat and minimal charts vanishes") {
  CHECK(willmore_energy(make_plane(3), 0.05, 0.5, 32, 64) < 1e-30);
  CHECK(willmore_energy(make_catenoid(), 0.05, 0.5, 32, 64) < 1e-8);
  CHECK(gauss_energy(make_plane(3), 0.05, 0.5, 32, 64) < 1e-30);
}

TEST_CASE("willmore energy of the sphere patch equals the image area") {
  double a = 0.05, b = 0.5;
  double area = 4.0 * kPi * (1.0 / (1.0 + a * a) - 1.0 / (1.0 + b * b));
  CHECK(std::abs(willmore_energy(make_sphere_patch(), a, b, 32, 64) - area) < 1e-5);
}

TEST_CASE("catenoid gauss energy matches the total-curvature closed form") {
  // On a minimal chart |II|^2 = -2K, and the catenoid's total curvature over
  // the annulus is 2 pi (tanh(log b) - tanh(log a)).
  double a = 0.05, b = 0.5;
  double expect = 2.0 * kTwoPi * (std::tanh(std::log(b)) - std::tanh(std::log(a)));
  CHECK(std::abs(gauss_energy(make_catenoid(), a, b, 32, 64) - expect) < 1e-6);
}

namespace {

// integral of the pointwise Moebius-invariant density (|H|^2 - K) e^{2 lambda}
// over the annulus, with K from the Gauss equation.
double invariant_bending_energy(const ImmersionField& f, double a, double b, int nr, int nphi) {
  double dr = (b - a) / nr, dphi = kTwoPi / nphi, total = 0.0;
  for (int i = 0; i <= nr; ++i) {
    double r = a + i * dr;
    double wr = (i == 0 || i == nr) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    double ring = 0.0;
    for (int k = 0; k < nphi; ++k) {
      PointGeometry g = point_geometry(f, Vec2::polar(r, k * dphi));
      double gauss_curv = dot(g.h11, g.h22) - g.h12.norm2();
      ring += (g.H.norm2() - gauss_curv) * std::exp(2.0 * g.lambda);
    }
    total += wr * ring * r;
  }
  return total * dr / 3.0 * dphi;
}

}  // namespace

TEST_CASE("inversion preserves the invariant bending density") {
  double a = 0.05, b = 0.5;
  double cat = invariant_bending_energy(make_catenoid(), a, b, 32, 64);
  double inv = invariant_bending_energy(invert(make_catenoid()), a, b, 32, 64);
  CHECK(std::abs(cat - inv) < 1e-9 * cat);
  // every point of the unit sphere is umbilic, so its density vanishes
  CHECK(std::abs(invariant_bending_energy(make_sphere_patch(), a, b, 16, 32)) < 1e-12);
}

TEST_CASE("gauss energy is stable under quadrature doubling") {
  ImmersionField f = make_inverted_catenoid(+1);
  double e1 = gauss_energy(f, 0.05, 0.5, 32, 64);
  double e2 = gauss_energy(f, 0.05, 0.5, 64, 128);
  CHECK(std::abs(e1 - e2) / e2 < 1e-3);
}

TEST_CASE("double cover doubles the gauss energy of the mapped annulus") {
  double covered = gauss_energy(make_covered_inverted_catenoid(2), 0.05, 0.5, 64, 128);
  double base = gauss_energy(make_inverted_catenoid(+1), 0.0025, 0.25, 96, 128);
  CHECK(std::abs(covered - 2.0 * base) / (2.0 * base) < 0.02);
}

TEST_CASE("quadrature counts below 4 are rejected") {
  CHECK_THROWS_AS(willmore_energy(make_plane(3), 0.05, 0.5, 2, 64), std::invalid_argument);
  CHECK_THROWS_AS(gauss_energy(make_plane(3), 0.05, 0.5, 32, 3), std::invalid_argument);
}

TEST_CASE("conserved current vanishes on flat and minimal charts") {
  Current2 Xp = willmore_current(make_plane(3), {0.2, 0.1});
  CHECK(Xp.comp1.norm() < 1e-12);
  CHECK(Xp.comp2.norm() < 1e-12);
  CHECK(willmore_divergence(make_plane(3), {0.2, 0.1}).norm() < 1e-12);
  Current2 Xc = willmore_current(make_catenoid(), {0.3, 0.15});
  CHECK(Xc.comp1.norm() < 1e-5);
  CHECK(Xc.comp2.norm() < 1e-5);

  // a log-singular chart carries a visibly nonzero current
  Current2 Xi = willmore_current(make_inverted_catenoid(+1), {0.2, 0.0});
  CHECK(std::max(Xi.comp1.norm(), Xi.comp2.norm()) > 1.0);
}

TEST_CASE("current divergence sits inside the halving-calibrated budget") {
  // The budget at the default step is 1e-3 max(1, |X|/|x|); differencing
  // noise in the triply nested divergence grows like kappa^-3 under halving.
  for (const ImmersionField& f : {make_inverted_catenoid(+1), make_sphere_patch()}) {
    for (Vec2 x : {Vec2::polar(0.15, 0.7), Vec2::polar(0.3, 2.1)}) {
      GeomOptions coarse, fine;
      fine.kappa = coarse.kappa / 2.0;
      CurrentEvaluator ev_c(f, coarse), ev_f(f, fine);
      CHECK(ev_c.divergence(x).norm() < div_budget(ev_c, x));
      CHECK(ev_f.divergence(x).norm() < 8.0 * div_budget(ev_f, x));
    }
  }
}

TEST_CASE("every zoo member conserves the current within budget") {
  for (const ImmersionField& f : standard_zoo()) {
    CurrentEvaluator ev(f, GeomOptions{});
    Vec2 x = Vec2::polar(0.2, 0.9);
    CHECK(ev.divergence(x).norm() < div_budget(ev, x));
  }
}

TEST_CASE("conformality defect is a warning, not a failure") {
  ImmersionField f = quartic_graph();
  PointGeometry g = point_geometry(f, {0.5, 0.0});
  CHECK(g.conformality_warning);
  CHECK(g.conf_defect_scale > 1e-3);
  CHECK(g.H.finite());  // the pipeline still runs
}

TEST_CASE("non-willmore control field breaks the divergence budget tenfold") {
  ImmersionField f = quartic_graph();
  CurrentEvaluator ev(f, GeomOptions{});
  Vec2 x{0.3, 0.1};
  CHECK(ev.divergence(x).norm() > 10.0 * div_budget(ev, x));
}

TEST_CASE("pointwise equation residual is small on willmore charts") {
  CHECK(willmore_lhs_pointwise(make_plane(3), {0.2, 0.1}).norm() < 1e-12);
  CHECK(willmore_lhs_pointwise(make_catenoid(), {0.3, 0.0}).norm() < 1e-5);
  ImmersionField inv = make_inverted_catenoid(+1);
  CurrentEvaluator ev(inv, GeomOptions{});
  Vec2 x{0.25, 0.0};
  CHECK(ev.lhs_pointwise(x).norm() < div_budget(ev, x));
  ImmersionField sph = make_sphere_patch();
  CurrentEvaluator evs(sph, GeomOptions{});
  CHECK(evs.lhs_pointwise({0.25, 0.1}).norm() < div_budget(evs, {0.25, 0.1}));
}

TEST_CASE("delta profile vanishes on the plane and decays on the inverted catenoid") {
  auto flat = delta_profile(make_plane(3), {0.1, 0.05, 0.025});
  for (auto& [r, d] : flat) CHECK(d < 1e-12);

  std::vector<double> ladder;
  for (double r = 0.1; r > 0.006; r *= 0.5) ladder.push_back(r);
  auto rows = delta_profile(make_inverted_catenoid(+1), ladder);
  for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].second < rows[i - 1].second);
  CHECK(rows.back().second > 0.0);
}

TEST_CASE("geometry CSV dump has the documented schema") {
  std::ostringstream ss;
  dump_geometry_csv(ss, make_sphere_patch(), 0.1, 0.3, 3, 4);
  std::istringstream in(ss.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "x1,x2,lambda,H_1,H_2,H_3,grad_n_norm,defect_scale,defect_angle");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3 * 4);
}
