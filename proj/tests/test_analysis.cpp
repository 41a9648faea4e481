#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "wlab/analysis.hpp"
#include "wlab/zoo.hpp"

using namespace wlab;

namespace {

constexpr double kPi = kTwoPi / 2.0;
const double kSingleCoverFlux = 16.0 * kPi;  // |c0| of the normalized single cover

ImmersionField quartic_graph() {
  ImmersionField f;
  f.name = "quartic_graph";
  f.dim = 3;
  f.r_min = 1e-12;
  f.r_max = 4.0;
  f.map = [](const Vec2& x) { return Vec{x.x1, x.x2, x.x1 * x.x1 * x.x1 * x.x1}; };
  return f;
}

ImmersionField planted_expansion(int theta0, const CVec& A, const CVec& B, const CVec& C,
                                 const char* name) {
  ImmersionField f;
  f.name = name;
  f.dim = A.dim();
  f.r_min = 1e-12;
  f.r_max = 4.0;
  f.map = [theta0, A, B, C](const Vec2& x) {
    double r2 = x.x1 * x.x1 + x.x2 * x.x2;
    Vec v = re_power(A, x, theta0);
    if (B.dim() == A.dim()) v += re_power(B, x, theta0 + 1);
    if (C.dim() == A.dim()) v += re_power(C, x, theta0 - 1) * r2;
    return v;
  };
  return f;
}

ImmersionField dilate(const ImmersionField& f, double s) {
  ImmersionField g = f;
  g.name = f.name + "_scaled";
  auto inner = f.map;
  g.map = [inner, s](const Vec2& x) { return inner(x) * s; };
  return g;
}

const CVec kUnitLeading{Vec{1, 0, 0}, Vec{0, -1, 0}};

}  // namespace

TEST_CASE("branch orders across the zoo") {
  AnalyzeOptions opts;
  CHECK(branch_order(make_plane(3), opts).theta0 == 1);
  CHECK(branch_order(make_sphere_patch(), opts).theta0 == 1);
  CHECK(branch_order(make_inverted_catenoid(+1), opts).theta0 == 1);
  CHECK(branch_order(make_covered_inverted_catenoid(2), opts).theta0 == 2);
  CHECK(branch_order(make_covered_inverted_catenoid(3), opts).theta0 == 3);
  CHECK(branch_order(make_weierstrass_minimal({0, 1}, {0, 1}), opts).theta0 == 2);
  BranchOrderResult b = branch_order(make_covered_inverted_catenoid(2), opts);
  CHECK(b.defect < 0.05);
}

TEST_CASE("the catenoid chart degenerates at an end, not a branch point") {
  CHECK_THROWS_WITH_AS(branch_order(make_catenoid(), AnalyzeOptions{}),
                       doctest::Contains("not a finite-order branch point"), std::domain_error);
}

TEST_CASE("a fractional-power chart is rejected as a branch point") {
  ImmersionField half;
  half.name = "half_power";
  half.dim = 3;
  half.r_min = 1e-12;
  half.r_max = 4.0;
  half.map = [](const Vec2& x) {
    double s = std::pow(x.norm(), 0.5);
    return Vec{s * x.x1, s * x.x2, 0.0};
  };
  CHECK_THROWS_WITH_AS(branch_order(half, AnalyzeOptions{}),
                       doctest::Contains("not a finite-order branch point"), std::domain_error);
}

TEST_CASE("a missing leading Fourier mode fails the SNR gate") {
  CHECK_THROWS_WITH_AS(fit_leading(make_plane(3), 3, AnalyzeOptions{}),
                       doctest::Contains("SNR"), std::domain_error);
}

TEST_CASE("leading coefficient of the identity chart is exact") {
  LeadingFit lf = fit_leading(make_plane(3), 1, AnalyzeOptions{});
  CHECK((lf.A - kUnitLeading).norm() < 1e-12);
  CHECK(std::abs(lf.scale_limit - 1.0) < 1e-12);
}

TEST_CASE("normalized inverted catenoid has A = (1, -i, 0)") {
  AnalyzeOptions opts;
  LeadingFit lf = fit_leading(make_inverted_catenoid(+1), 1, opts);
  CHECK((lf.A - kUnitLeading).norm() < 1e-3);
  CHECK(lf.snr > 10.0);
  // magnitude cross-check against the conformal-factor limit
  CHECK(std::abs(lf.A.re.norm() - lf.scale_limit) < 1e-3);
}

TEST_CASE("leading fit is equivariant under ambient rotation") {
  AnalyzeOptions opts;
  LeadingFit base = fit_leading(make_inverted_catenoid(+1), 1, opts);
  Rotation R = Rotation::random(5, 7);
  LeadingFit rotated =
      fit_leading(embed_in_higher_codim(make_inverted_catenoid(+1), 5, R), 1, opts);
  Vec are(5), aim(5);
  for (int i = 0; i < 3; ++i) {
    are[i] = base.A.re[i];
    aim[i] = base.A.im[i];
  }
  CHECK((CVec(R.apply(are), R.apply(aim)) - rotated.A).norm() < 1e-4);
  CHECK(std::abs(rotated.A.re.norm() - base.A.re.norm()) < 1e-4);
}

TEST_CASE("synthetic round-trip recovers planted coefficients to 1e-8") {
  CVec A{Vec{1, 0, 0}, Vec{0, -1, 0}};
  CVec B0{Vec{0.3, 0, 0.1}, Vec{0, 0.2, 0}};
  CVec C0{Vec{0, 0, 0.25}, Vec{0, 0, -0.15}};
  ImmersionField f = planted_expansion(2, A, B0, C0, "planted");
  AnalyzeOptions opts;
  BranchOrderResult bo = branch_order(f, opts);
  REQUIRE(bo.theta0 == 2);
  LeadingFit lf = fit_leading(f, 2, opts);
  CHECK((lf.A - A).norm() < 1e-8);
  ExpansionFit ef = fit_expansion(f, 2, lf.A, opts);
  CHECK((ef.B - B0).norm() < 1e-8);
  CHECK((ef.C - C0).norm() < 1e-8);
  CHECK(ef.remainder_exponent > 50.0);  // nothing left beyond the model
}

TEST_CASE("covered inverted catenoid has vanishing sub-leading coefficients") {
  AnalyzeOptions opts;
  ImmersionField f = make_covered_inverted_catenoid(2);
  LeadingFit lf = fit_leading(f, 2, opts);
  ExpansionFit ef = fit_expansion(f, 2, lf.A, opts);
  CHECK(ef.B.norm() < 1e-3 * lf.A.norm());
  CHECK(ef.C.norm() < 1e-3 * lf.A.norm());
}

TEST_CASE("weierstrass (z, z) expansion: B = (0, 0, 1/3), C = 0") {
  AnalyzeOptions opts;
  ImmersionField f = make_weierstrass_minimal({0, 1}, {0, 1});
  LeadingFit lf = fit_leading(f, 2, opts);
  CVec expect_A{Vec{0.25, 0, 0}, Vec{0, 0.25, 0}};
  CHECK((lf.A - expect_A).norm() < 1e-8);
  ExpansionFit ef = fit_expansion(f, 2, lf.A, opts);
  CHECK((ef.B - CVec{Vec{0, 0, 1.0 / 3.0}, Vec{0, 0, 0}}).norm() < 1e-8);
  CHECK(ef.C.norm() < 1e-8 * lf.A.norm());
  CHECK(std::abs(ef.remainder_exponent - 3.0) < 0.05);  // the z^4 tail
}

TEST_CASE("expansion fit refuses order one") {
  CHECK_THROWS_AS(fit_expansion(make_inverted_catenoid(+1), 1, kUnitLeading, AnalyzeOptions{}),
                  std::invalid_argument);
}

TEST_CASE("minimal charts carry no flux") {
  ResidueResult r = residue(make_catenoid(), 0.3, 128);
  CHECK(r.c0.norm() < 1e-5);
  ResidueResult w = residue(make_weierstrass_minimal({0, 1}, {0, 1}), 0.3, 128);
  CHECK(w.c0.norm() < 1e-5);
}

TEST_CASE("inverted catenoid residue: axis, magnitude, branch sign") {
  ResidueResult up = residue(make_inverted_catenoid(+1), 0.2, 256);
  CHECK(std::hypot(up.c0[0], up.c0[1]) < 0.01 * up.c0.norm());
  CHECK(std::abs(up.c0.norm() - kSingleCoverFlux) < 0.01 * kSingleCoverFlux);
  CHECK(up.c0[2] > 0.0);
  CHECK(up.reliable);

  ResidueResult down = residue(make_inverted_catenoid(-1), 0.2, 256);
  CHECK(down.c0[2] < 0.0);
  CHECK((up.c0 + down.c0).norm() < 1e-6 * up.c0.norm());
}

TEST_CASE("residue is linear in the covering order") {
  Vec base = residue(make_inverted_catenoid(+1), 0.2, 256).c0;
  for (int theta0 : {2, 3}) {
    Vec covered = residue(make_covered_inverted_catenoid(theta0), 0.2, 256).c0;
    CHECK((covered - base * double(theta0)).norm() < 0.01 * covered.norm());
  }
}

TEST_CASE("residue is contour independent on willmore charts") {
  SpreadResult flat = residue_spread(make_plane(3), {0.1, 0.2, 0.4}, 128);
  CHECK(flat.max_deviation < 1e-12);
  SpreadResult s = residue_spread(make_inverted_catenoid(+1), {0.1, 0.2, 0.4}, 256);
  CHECK(s.max_deviation < 0.005 * s.mean.norm());
}

TEST_CASE("generic graph is a negative control for contour independence") {
  SpreadResult s = residue_spread(quartic_graph(), {0.1, 0.2, 0.4}, 256);
  CHECK(s.max_deviation > 1.0);
}

TEST_CASE("residue transforms equivariantly") {
  Vec base = residue(make_inverted_catenoid(+1), 0.2, 256).c0;

  // ambient rotation
  Rotation R = Rotation::random(5, 7);
  Vec rotated = residue(embed_in_higher_codim(make_inverted_catenoid(+1), 5, R), 0.2, 256).c0;
  Vec padded(5);
  for (int i = 0; i < 3; ++i) padded[i] = base[i];
  CHECK((R.apply(padded) - rotated).norm() < 1e-4 * base.norm());

  // ambient dilation: c0 -> c0 / s
  double s = 2.5;
  Vec dilated = residue(dilate(make_inverted_catenoid(+1), s), 0.2, 256).c0;
  CHECK((base / s - dilated).norm() < 1e-4 * dilated.norm());

  // domain rotation: c0 unchanged
  ImmersionField dr = make_inverted_catenoid(+1);
  auto inner = dr.map;
  dr.map = [inner](const Vec2& x) {
    double c = std::cos(0.7), sn = std::sin(0.7);
    return inner(Vec2{c * x.x1 - sn * x.x2, sn * x.x1 + c * x.x2});
  };
  CHECK((residue(dr, 0.2, 256).c0 - base).norm() < 1e-4 * base.norm());
}

TEST_CASE("weighted curvature profile of the covered chart") {
  AnalyzeOptions opts;
  ImmersionField f = make_covered_inverted_catenoid(2);
  std::vector<double> ladder = geometric_ladder(f, 0.3, 10, opts.geom.kappa);
  HProfile p = weighted_H_profile(f, 2, CVec(3), ladder, opts);
  CHECK(p.f_limit > 0.0);

  // f_limit * lim e^lambda / r^{theta0-1} = 2 theta0
  LeadingFit lf = fit_leading(f, 2, opts);
  CHECK(std::abs(p.f_limit * lf.scale_limit - 4.0) < 1e-3);

  // e^lambda H = O(r^{1-eps}): log-log slope approaches 1 deep in the chart
  std::vector<double> lr, lv;
  for (double r : {1e-5, 5e-6, 2.5e-6, 1.25e-6}) {
    double sup = 0.0;
    for (int k = 0; k < 8; ++k) {
      PointGeometry g = point_geometry(f, Vec2::polar(r, k * kTwoPi / 8), opts.geom);
      sup = std::max(sup, std::exp(g.lambda) * g.H.norm());
    }
    lr.push_back(std::log(r));
    lv.push_back(std::log(sup));
  }
  double n = 4, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < 4; ++i) {
    sx += lr[i];
    sy += lv[i];
    sxx += lr[i] * lr[i];
    sxy += lr[i] * lv[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope >= 0.9);

  CHECK_THROWS_AS(weighted_H_profile(make_inverted_catenoid(+1), 1, CVec(3), ladder, opts),
                  std::invalid_argument);
}

TEST_CASE("log singularity of the inverted catenoid mean curvature") {
  AnalyzeOptions opts;
  ImmersionField f = make_inverted_catenoid(+1);
  Vec c0 = residue(f, 0.2, 256).c0;
  std::vector<double> radii = {0.1, 0.05, 0.03, 0.02};
  LogSingularityResult ls = log_singularity_check(f, c0, radii, opts);
  CHECK(std::abs(ls.h_log_slope - c0.norm() / (4.0 * kPi)) < 0.05 * c0.norm() / (4.0 * kPi));
  CHECK(ls.bounded_ratio < 2.0);

  // covered chart with C = 0: same compensation stays bounded
  ImmersionField cov = make_covered_inverted_catenoid(2);
  Vec c0c = residue(cov, 0.2, 256).c0;
  LogSingularityResult lsc = log_singularity_check(cov, c0c, radii, opts);
  CHECK(lsc.bounded_ratio < 2.0);

  // minimal chart: H and c0 both vanish, compensation is identically small
  LogSingularityResult lsm =
      log_singularity_check(make_catenoid(), Vec{0, 0, 0}, {0.3, 0.2, 0.1}, opts);
  CHECK(lsm.sup_compensated < 1e-6);
}

TEST_CASE("full reports across the zoo") {
  AnalyzeOptions opts;

  ExpansionReport plane = analyze(make_plane(3), opts);
  CHECK(plane.theta0 == 1);
  CHECK(plane.verdict == Verdict::removable);

  ExpansionReport inv = analyze(make_inverted_catenoid(+1), opts);
  CHECK(inv.theta0 == 1);
  CHECK(inv.verdict == Verdict::log_singular_H);

  ExpansionReport cov2 = analyze(make_covered_inverted_catenoid(2), opts);
  CHECK(cov2.theta0 == 2);
  CHECK(cov2.verdict == Verdict::regular_branch_order_leap);

  ExpansionReport cov3 = analyze(make_covered_inverted_catenoid(3), opts);
  CHECK(cov3.theta0 == 3);
  CHECK(cov3.verdict == Verdict::regular_branch_order_leap);

  ExpansionReport weier = analyze(make_weierstrass_minimal({0, 1}, {0, 1}), opts);
  CHECK(weier.theta0 == 2);
  CHECK(weier.verdict == Verdict::removable);

  // fitted-coefficient invariants hold on every report
  for (const ExpansionReport* r : {&plane, &inv, &cov2, &cov3, &weier}) {
    CHECK(r->a_orthogonality < 1e-3);
    CHECK(r->a_norm_ratio < 1e-3);
    CHECK(r->pin_a < 1e-3);
    CHECK(r->c0_dot_a < 1e-3);
    CHECK(r->pin_c < 1e-3);
    CHECK(r->f_limit > 0.0);
  }
}

TEST_CASE("enneper chart runs the full pipeline and is removable") {
  // Weierstrass data f = 1, g = z: an order-one minimal chart with
  // e^lambda = (1 + |z|^2)/2 and a quadratic third component.
  ExpansionReport r = analyze(make_weierstrass_minimal({1.0}, {0.0, 1.0}), AnalyzeOptions{});
  CHECK(r.theta0 == 1);
  CHECK(r.verdict == Verdict::removable);
  CHECK(std::abs(r.scale - 0.5) < 1e-8);
  CHECK(r.c0.norm() < 1e-6);
  CHECK(std::abs(r.exponents.at(0) - 2.0) < 0.05);
}

TEST_CASE("rotated higher-codimension embedding runs the full pipeline") {
  ImmersionField emb = embed_in_higher_codim(make_covered_inverted_catenoid(2), 5,
                                             Rotation::random(5, 321));
  ExpansionReport r = analyze(emb, AnalyzeOptions{});
  CHECK(r.theta0 == 2);
  CHECK(r.verdict == Verdict::regular_branch_order_leap);
  CHECK(std::abs(r.c0.norm() - 2.0 * kSingleCoverFlux) < 0.01 * r.c0.norm());
  CHECK(r.B.norm() < 1e-3 * r.A.norm());
  CHECK(r.C.norm() < 1e-3 * r.A.norm());
  CHECK(r.pin_a < 1e-3);
  CHECK(r.c0_dot_a < 1e-3);
}

TEST_CASE("planted spinning mode classifies as spinning_H") {
  CVec A{Vec{1, 0, 0}, Vec{0, -1, 0}};
  CVec C0{Vec{0, 0, 0.06}, Vec{0, 0, -0.02}};
  ImmersionField f = planted_expansion(2, A, CVec(), C0, "spinning_probe");
  ExpansionReport rep = analyze(f, AnalyzeOptions{});
  CHECK(rep.theta0 == 2);
  CHECK(rep.verdict == Verdict::spinning_H);
  CHECK((rep.C - C0).norm() < 1e-6);
  CHECK(rep.pin_c < 1e-3);
}

TEST_CASE("classification is scale invariant") {
  AnalyzeOptions opts;
  for (double s : {0.1, 10.0}) {
    ExpansionReport rep = analyze(dilate(make_inverted_catenoid(+1), s), opts);
    CHECK(rep.verdict == Verdict::log_singular_H);
    CHECK(std::abs(rep.scale - s) < 0.01 * s);
    ExpansionReport w = analyze(dilate(make_weierstrass_minimal({0, 1}, {0, 1}), s), opts);
    CHECK(w.verdict == Verdict::removable);
  }
}

TEST_CASE("classify thresholds follow the definition") {
  ExpansionReport rep;
  rep.A = kUnitLeading;
  rep.scale = 1.0;
  rep.B = CVec(3);
  rep.C = CVec(3);
  rep.c0 = Vec{0, 0, 0};

  rep.theta0 = 1;
  CHECK(classify(rep, 1e-3) == Verdict::removable);
  rep.c0 = Vec{0, 0, kSingleCoverFlux};
  CHECK(classify(rep, 1e-3) == Verdict::log_singular_H);

  rep.theta0 = 2;
  CHECK(classify(rep, 1e-3) == Verdict::regular_branch_order_leap);
  rep.C = CVec{Vec{0, 0, 0.5}, Vec{0, 0, 0}};
  CHECK(classify(rep, 1e-3) == Verdict::spinning_H);
  rep.C = CVec(3);
  rep.c0 = Vec{0, 0, 0};
  CHECK(classify(rep, 1e-3) == Verdict::removable);
}

TEST_CASE("report serializes with the fixed schema and finite entries") {
  ExpansionReport rep = analyze(make_weierstrass_minimal({0, 1}, {0, 1}), AnalyzeOptions{});
  nlohmann::ordered_json j = rep.to_json();
  for (const char* key : {"theta0", "A_re", "A_im", "B_re", "B_im", "C_re", "C_im", "c0",
                          "c0_spread", "f_limit", "exponents", "verdict"})
    CHECK(j.contains(key));
  CHECK(j["verdict"] == "removable");
  CHECK(j["A_re"].size() == 3);
}

TEST_CASE("degenerate ladders and bad inputs error out") {
  ImmersionField f = make_plane(3);
  f.r_min = 0.2;  // leaves fewer than 3 rungs below 0.3
  CHECK_THROWS_AS(geometric_ladder(f, 0.3, 10, 1e-2), std::domain_error);
  CHECK_THROWS_AS(residue(make_plane(3), 0.2, 16), std::invalid_argument);
  CHECK_THROWS_AS(residue_spread(make_plane(3), {0.1, 0.2}, 128), std::invalid_argument);
  CHECK_THROWS_AS(fit_leading(make_plane(3), 0, AnalyzeOptions{}), std::invalid_argument);
}
