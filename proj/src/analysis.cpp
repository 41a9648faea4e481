#include "wlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wlab {

namespace {

constexpr double kPi = kTwoPi / 2.0;

struct LinearFit {
  double slope = 0.0, intercept = 0.0;
};

LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("least_squares: need at least two points");
  double n = double(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::domain_error("least_squares: degenerate abscissae");
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

// Linear-in-r extrapolation to r = 0 from the two smallest rungs.
Vec extrapolate2(double r_small, const Vec& y_small, double r_big, const Vec& y_big) {
  double w = r_small / (r_big - r_small);
  return y_small + (y_small - y_big) * w;
}
double extrapolate2(double r_small, double y_small, double r_big, double y_big) {
  double w = r_small / (r_big - r_small);
  return y_small + (y_small - y_big) * w;
}

}  // namespace

std::vector<double> geometric_ladder(const ImmersionField& f, double top, int count,
                                     double kappa) {
  double min_allowed = f.r_min / (1.0 - 3.0 * kappa) * 1.0001;
  std::vector<double> out;
  double r = top;
  for (int k = 0; k < count; ++k, r *= 0.5)
    if (r > min_allowed && r < f.r_max / (1.0 + 3.0 * kappa)) out.push_back(r);
  if (out.size() < 3)
    throw std::domain_error("geometric_ladder: fewer than 3 usable radii inside the domain of " +
                            f.name);
  return out;  // descending
}

Vec residue_circle(const CurrentEvaluator& ev, double rho, int n_samples) {
  const int m = ev.field().dim;
  Vec acc(m);
  for (int k = 0; k < n_samples; ++k) {
    double phi = k * kTwoPi / n_samples;
    double c = std::cos(phi), s = std::sin(phi);
    Current2 X = ev.current(Vec2{rho * c, rho * s});
    acc += X.comp1 * c + X.comp2 * s;
  }
  return acc * (rho * kTwoPi / n_samples);
}

ResidueResult residue(const ImmersionField& f, double rho, int n_samples,
                      const GeomOptions& opts) {
  if (n_samples < 64) throw std::invalid_argument("residue: need at least 64 samples");
  CurrentEvaluator ev(f, opts);
  Vec coarse = residue_circle(ev, rho, n_samples);
  Vec fine = residue_circle(ev, rho, 2 * n_samples);
  ResidueResult r;
  r.c0 = fine;
  r.error_estimate = (fine - coarse).norm();
  r.reliable = !(r.error_estimate > 0.1 * fine.norm() && fine.norm() > 1e-6);
  return r;
}

SpreadResult residue_spread(const ImmersionField& f, const std::vector<double>& rhos,
                            int n_samples, const GeomOptions& opts) {
  if (rhos.size() < 3) throw std::invalid_argument("residue_spread: need at least 3 radii");
  CurrentEvaluator ev(f, opts);
  SpreadResult out;
  out.mean = Vec(f.dim);
  for (double rho : rhos) {
    Vec c = residue_circle(ev, rho, 2 * n_samples);
    out.per_rho.push_back(c);
    out.mean += c;
  }
  out.mean *= 1.0 / double(rhos.size());
  for (size_t i = 0; i < out.per_rho.size(); ++i)
    for (size_t j = i + 1; j < out.per_rho.size(); ++j)
      out.max_deviation = std::max(out.max_deviation, (out.per_rho[i] - out.per_rho[j]).norm());
  return out;
}

BranchOrderResult branch_order(const ImmersionField& f, const AnalyzeOptions& opts) {
  std::vector<double> ladder =
      geometric_ladder(f, std::min(opts.ladder_top, 0.3), std::max(opts.ladder_count, 5),
                       opts.geom.kappa);
  const int n_phi = 32;
  JetOptions jopts;
  jopts.kappa = opts.geom.kappa;
  std::vector<double> logs, lambdas;
  for (double r : ladder) {
    double acc = 0.0;
    for (int k = 0; k < n_phi; ++k) {
      Jet j = compute_jet(f, Vec2::polar(r, k * kTwoPi / n_phi), 1, jopts);
      double g2 = j.partial(1, 0).norm2() + j.partial(0, 1).norm2();
      acc += 0.5 * std::log(0.5 * g2);
    }
    logs.push_back(std::log(r));
    lambdas.push_back(acc / n_phi);
  }
  LinearFit fit = least_squares(logs, lambdas);
  BranchOrderResult out;
  out.slope = fit.slope;
  double rounded = std::round(fit.slope);
  out.defect = std::abs(fit.slope - rounded);
  if (out.defect > 0.2)
    throw std::domain_error(f.name + ": not a finite-order branch point (lambda slope " +
                            std::to_string(fit.slope) + " is not near an integer)");
  if (rounded < 0.0)
    throw std::domain_error(f.name + ": not a finite-order branch point (lambda slope " +
                            std::to_string(fit.slope) + " gives order below 1)");
  out.theta0 = int(rounded) + 1;
  return out;
}

LeadingFit fit_leading(const ImmersionField& f, int theta0, const AnalyzeOptions& opts) {
  if (theta0 < 1) throw std::invalid_argument("fit_leading: theta0 must be >= 1");
  std::vector<double> ladder =
      geometric_ladder(f, opts.ladder_top, opts.ladder_count, opts.geom.kappa);
  const int n = opts.fit_nphi;
  const int m = f.dim;
  const int omega = theta0 - 1;
  JetOptions jopts;
  jopts.kappa = opts.geom.kappa;

  struct Rung {
    CVec ahat;
    double scale = 0.0;
    double snr = 0.0;
  };
  std::vector<Rung> rungs;
  for (double r : ladder) {
    Vec pre(m), pim(m);
    double msq = 0.0;
    double scale_acc = 0.0;
    for (int k = 0; k < n; ++k) {
      double phi = k * kTwoPi / n;
      Jet j = compute_jet(f, Vec2::polar(r, phi), 1, jopts);
      Vec wre = j.partial(1, 0);
      Vec wim = -j.partial(0, 1);
      double c = std::cos(omega * phi), s = std::sin(omega * phi);
      pre += wre * c + wim * s;
      pim += wim * c - wre * s;
      msq += (wre.norm2() + wim.norm2());
      scale_acc += std::sqrt(0.5 * (wre.norm2() + wim.norm2()));
    }
    pre *= 1.0 / n;
    pim *= 1.0 / n;
    msq /= n;
    Rung rung;
    double p2 = pre.norm2() + pim.norm2();
    rung.snr = std::sqrt(p2 / std::max(msq - p2, 1e-30));
    double denom = theta0 * std::pow(r, omega);
    rung.ahat = CVec(pre / denom, pim / denom);
    rung.scale = (scale_acc / n) / std::pow(r, omega);
    rungs.push_back(rung);
  }

  // Extrapolate toward r -> 0 from the two smallest rungs.
  size_t last = rungs.size() - 1;
  double r_s = ladder[last], r_b = ladder[last - 1];
  LeadingFit out;
  out.A = CVec(extrapolate2(r_s, rungs[last].ahat.re, r_b, rungs[last - 1].ahat.re),
               extrapolate2(r_s, rungs[last].ahat.im, r_b, rungs[last - 1].ahat.im));
  out.scale_limit = extrapolate2(r_s, rungs[last].scale, r_b, rungs[last - 1].scale);
  out.snr = std::min(rungs[last].snr, rungs[last - 1].snr);
  if (out.snr < 10.0)
    throw std::domain_error(f.name + ": leading-coefficient Fourier projection SNR " +
                            std::to_string(out.snr) + " below 10");
  return out;
}

namespace {

// Fourier coefficient (1/n) sum Psi e^{-i k phi} of a real vector-valued
// circle sample set.
CVec circle_mode(const std::vector<Vec>& samples, int k_freq) {
  int n = int(samples.size());
  int m = samples[0].dim();
  Vec re(m), im(m);
  for (int k = 0; k < n; ++k) {
    double phi = k * kTwoPi / n;
    double c = std::cos(k_freq * phi), s = std::sin(k_freq * phi);
    re += samples[k] * c;
    im -= samples[k] * s;
  }
  return CVec(re / double(n), im / double(n));
}

// Fit y(r) = a u(r) + b v(r) by least squares with column scaling; returns a
// and the condition number of the scaled normal matrix.
struct RadialFit {
  CVec a;
  double condition = 1.0;
};
RadialFit radial_two_term(const std::vector<double>& radii, const std::vector<CVec>& y,
                          double pu, double pv) {
  int n = int(radii.size());
  int m = y[0].dim();
  double su = 0.0, sv = 0.0;
  std::vector<double> us(n), vs(n);
  for (int i = 0; i < n; ++i) {
    us[i] = std::pow(radii[i], pu);
    vs[i] = std::pow(radii[i], pv);
    su = std::max(su, std::abs(us[i]));
    sv = std::max(sv, std::abs(vs[i]));
  }
  for (int i = 0; i < n; ++i) {
    us[i] /= su;
    vs[i] /= sv;
  }
  double suu = 0, suv = 0, svv = 0;
  for (int i = 0; i < n; ++i) {
    suu += us[i] * us[i];
    suv += us[i] * vs[i];
    svv += vs[i] * vs[i];
  }
  double tr = suu + svv, det = suu * svv - suv * suv;
  double disc = std::sqrt(std::max(tr * tr / 4.0 - det, 0.0));
  double lmax = tr / 2.0 + disc, lmin = tr / 2.0 - disc;
  RadialFit out;
  out.condition = lmin > 0.0 ? lmax / lmin : 1e308;
  if (out.condition > 1e8)
    throw std::domain_error("radial fit: normal equations ill-conditioned (condition " +
                            std::to_string(out.condition) + ")");
  out.a = CVec(m);
  auto solve_component = [&](auto get) {
    // normal equations for (alpha, beta) in y = alpha u + beta v
    double bu = 0, bv = 0;
    for (int i = 0; i < n; ++i) {
      bu += us[i] * get(i);
      bv += vs[i] * get(i);
    }
    double alpha = (svv * bu - suv * bv) / det;
    return alpha / su;  // undo column scaling
  };
  for (int c = 0; c < m; ++c) {
    out.a.re[c] = solve_component([&](int i) { return y[i].re[c]; });
    out.a.im[c] = solve_component([&](int i) { return y[i].im[c]; });
  }
  return out;
}

Vec model_value(const Vec2& x, int theta0, const CVec& A, const CVec& B, const CVec& C) {
  Vec v = re_power(A, x, theta0);
  if (B.dim() == A.dim()) v += re_power(B, x, theta0 + 1);
  if (C.dim() == A.dim()) {
    double r2 = x.x1 * x.x1 + x.x2 * x.x2;
    v += re_power(C, x, theta0 - 1) * r2;
  }
  return v;
}

}  // namespace

ExpansionFit fit_expansion(const ImmersionField& f, int theta0, const CVec& A,
                           const AnalyzeOptions& opts) {
  if (theta0 < 2)
    throw std::invalid_argument(
        "fit_expansion: requires theta0 >= 2 (for order one only the leading "
        "coefficient and the remainder exponent are defined)");
  std::vector<double> ladder =
      geometric_ladder(f, opts.ladder_top, opts.ladder_count, opts.geom.kappa);
  const int n = opts.fit_nphi;
  const int m = f.dim;

  std::vector<CVec> mode_lo, mode_hi;
  for (double r : ladder) {
    std::vector<Vec> psi(n, Vec(m));
    for (int k = 0; k < n; ++k) {
      Vec2 x = Vec2::polar(r, k * kTwoPi / n);
      psi[k] = f(x) - re_power(A, x, theta0);
    }
    mode_lo.push_back(circle_mode(psi, theta0 - 1));
    mode_hi.push_back(circle_mode(psi, theta0 + 1));
  }

  // Both target modes scale like r^{theta0+1}; the nuisance column absorbs
  // the next radial order.
  RadialFit lo = radial_two_term(ladder, mode_lo, theta0 + 1, theta0 + 2);
  RadialFit hi = radial_two_term(ladder, mode_hi, theta0 + 1, theta0 + 2);

  ExpansionFit out;
  out.C = lo.a * 2.0;
  out.B = hi.a * 2.0;
  out.remainder_exponent = remainder_exponent(f, theta0, A, out.B, out.C, opts);
  return out;
}

double remainder_exponent(const ImmersionField& f, int theta0, const CVec& A, const CVec& B,
                          const CVec& C, const AnalyzeOptions& opts) {
  std::vector<double> ladder =
      geometric_ladder(f, opts.ladder_top, opts.ladder_count, opts.geom.kappa);
  const int n = opts.fit_nphi;
  double floor = 1e-12 * (1.0 + A.norm());
  std::vector<double> logs, vals;
  for (double r : ladder) {
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      Vec2 x = Vec2::polar(r, k * kTwoPi / n);
      double dev = (f(x) - model_value(x, theta0, A, B, C)).norm();
      worst = std::max(worst, dev);
    }
    worst /= std::pow(r, theta0 - 1);
    if (worst > floor) {
      logs.push_back(std::log(r));
      vals.push_back(std::log(worst));
    }
  }
  if (logs.size() < 2) return 99.0;  // remainder below the noise floor everywhere
  return least_squares(logs, vals).slope;
}

HProfile weighted_H_profile(const ImmersionField& f, int theta0, const CVec& C,
                            const std::vector<double>& radii, const AnalyzeOptions& opts) {
  if (theta0 < 2)
    throw std::invalid_argument("weighted_H_profile: requires theta0 >= 2");
  if (radii.empty()) throw std::invalid_argument("weighted_H_profile: no radii");
  const int n_phi = 16;
  HProfile out;
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> f_avg(sorted.size(), 0.0);
  for (size_t i = 0; i < sorted.size(); ++i) {
    double r = sorted[i];
    for (int k = 0; k < n_phi; ++k) {
      Vec2 x = Vec2::polar(r, k * kTwoPi / n_phi);
      PointGeometry g = point_geometry(f, x, opts.geom);
      double el = std::exp(g.lambda);
      double fx = 2.0 * theta0 * std::pow(r, theta0 - 1) / el;
      Vec2 unit{x.x1 / r, x.x2 / r};
      HProfileRow row;
      row.x = x;
      row.weighted_H = g.H * el;
      row.predicted = C.dim() == f.dim ? re_power(C, unit, theta0 - 1) * fx : Vec(f.dim);
      out.max_deviation = std::max(out.max_deviation, (row.weighted_H - row.predicted).norm());
      out.rows.push_back(row);
      f_avg[i] += fx;
    }
    f_avg[i] /= n_phi;
  }
  out.f_limit = sorted.size() >= 2
                    ? extrapolate2(sorted[0], f_avg[0], sorted[1], f_avg[1])
                    : f_avg[0];
  return out;
}

LogSingularityResult log_singularity_check(const ImmersionField& f, const Vec& c0,
                                           const std::vector<double>& radii,
                                           const AnalyzeOptions& opts) {
  if (radii.size() < 2) throw std::invalid_argument("log_singularity_check: need >= 2 radii");
  const int n_phi = 32;
  LogSingularityResult out;
  std::vector<double> inv_logs, sup_h;
  double comp_min = 1e308, comp_max = 0.0;
  for (double r : radii) {
    double sup_comp = 0.0, sup_raw = 0.0;
    for (int k = 0; k < n_phi; ++k) {
      PointGeometry g = point_geometry(f, Vec2::polar(r, k * kTwoPi / n_phi), opts.geom);
      Vec comp = g.H + c0 * (std::log(r) / (4.0 * kPi));
      sup_comp = std::max(sup_comp, comp.norm());
      sup_raw = std::max(sup_raw, g.H.norm());
    }
    out.sup_compensated = std::max(out.sup_compensated, sup_comp);
    comp_min = std::min(comp_min, sup_comp);
    comp_max = std::max(comp_max, sup_comp);
    inv_logs.push_back(std::log(1.0 / r));
    sup_h.push_back(sup_raw);
  }
  out.bounded_ratio = comp_min > 0.0 ? comp_max / comp_min : 1.0;
  out.h_log_slope = least_squares(inv_logs, sup_h).slope;
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::removable: return "removable";
    case Verdict::log_singular_H: return "log_singular_H";
    case Verdict::spinning_H: return "spinning_H";
    case Verdict::regular_branch_order_leap: return "regular_branch_order_leap";
  }
  return "unknown";
}

Verdict classify(const ExpansionReport& report, double tol) {
  double a1 = std::max(report.scale, 1e-300);
  // |c0| carries an inverse length scale; |c0| |A^1| is dilation-invariant.
  // The single-cover reference flux 16 pi sets the unit.
  bool c0_zero = report.c0.norm() * a1 < tol * 16.0 * kPi;
  if (report.theta0 == 1) return c0_zero ? Verdict::removable : Verdict::log_singular_H;
  bool c_zero = report.C.norm() < tol * report.A.norm();
  if (!c_zero) return Verdict::spinning_H;
  return c0_zero ? Verdict::removable : Verdict::regular_branch_order_leap;
}

MultiVector tangent_plane_at_origin(const ImmersionField& f, double r, int n_phi,
                                    const GeomOptions& opts) {
  MultiVector acc(f.dim);
  for (int k = 0; k < n_phi; ++k) {
    PointGeometry g = point_geometry(f, Vec2::polar(r, k * kTwoPi / n_phi), opts);
    acc += g.star_gauss;
  }
  double norm = acc.norm();
  if (!(norm > 1e-300))
    throw std::domain_error("tangent_plane_at_origin: tangent planes average to zero");
  return acc * (1.0 / norm);
}

Vec project_off_plane(const MultiVector& w, const Vec& v) {
  // Double contraction against a unit simple 2-vector gives minus the
  // in-plane part.
  MultiVector inside = interior(w, interior(w, MultiVector::from_vector(v)));
  return v + inside.vector_part();
}

ExpansionReport analyze(const ImmersionField& f, const AnalyzeOptions& opts) {
  ExpansionReport rep;
  BranchOrderResult bo = branch_order(f, opts);
  rep.theta0 = bo.theta0;

  LeadingFit lead = fit_leading(f, rep.theta0, opts);
  rep.A = lead.A;
  rep.scale = lead.A.re.norm();
  rep.scale_limit = lead.scale_limit;
  rep.fit_snr = lead.snr;

  if (rep.theta0 >= 2) {
    ExpansionFit fit = fit_expansion(f, rep.theta0, rep.A, opts);
    rep.B = fit.B;
    rep.C = fit.C;
    rep.exponents.push_back(fit.remainder_exponent);
  } else {
    rep.B = CVec(f.dim);
    rep.C = CVec(f.dim);
    rep.exponents.push_back(remainder_exponent(f, 1, rep.A, CVec(), CVec(), opts));
  }

  SpreadResult spread = residue_spread(f, opts.residue_rhos, opts.residue_samples, opts.geom);
  rep.c0 = spread.mean;
  rep.c0_spread = spread.max_deviation;
  rep.c0_error = spread.max_deviation;

  if (rep.theta0 >= 2) {
    std::vector<double> ladder =
        geometric_ladder(f, opts.ladder_top, opts.ladder_count, opts.geom.kappa);
    HProfile profile = weighted_H_profile(f, rep.theta0, rep.C, ladder, opts);
    rep.f_limit = profile.f_limit;
  } else {
    rep.f_limit = 2.0 / std::max(rep.scale_limit, 1e-300);
  }

  // Invariant diagnostics against the Gauss map at the origin.
  std::vector<double> ladder =
      geometric_ladder(f, opts.ladder_top, opts.ladder_count, opts.geom.kappa);
  MultiVector plane0 = tangent_plane_at_origin(f, ladder.back(), opts.fit_nphi, opts.geom);
  double a1 = rep.A.re.norm(), a2 = rep.A.im.norm();
  rep.a_orthogonality = std::abs(dot(rep.A.re, rep.A.im)) / std::max(a1 * a2, 1e-300);
  rep.a_norm_ratio = std::abs(a1 - a2) / std::max(a1, 1e-300);
  Vec pin_a = project_off_plane(plane0, rep.A.re) + project_off_plane(plane0, rep.A.im);
  rep.pin_a = pin_a.norm() / std::max(rep.A.norm(), 1e-300);
  double c0n = rep.c0.norm();
  rep.c0_dot_a = c0n * a1 < 16.0 * kPi * 1e-4
                     ? 0.0
                     : std::max(std::abs(dot(rep.c0, rep.A.re)), std::abs(dot(rep.c0, rep.A.im))) /
                           (c0n * std::max(a1, 1e-300));
  double cn = rep.C.norm();
  if (cn > 1e-9 * std::max(1.0, rep.A.norm())) {
    Vec dc = (rep.C.re - project_off_plane(plane0, rep.C.re)) +
             (rep.C.im - project_off_plane(plane0, rep.C.im));
    rep.pin_c = dc.norm() / cn;
  }

  PointGeometry g_probe = point_geometry(f, Vec2::polar(ladder.front(), 0.4), opts.geom);
  rep.conformality_warning = g_probe.conformality_warning;

  rep.verdict = classify(rep, opts.tol);
  return rep;
}

namespace {
nlohmann::ordered_json vec_json(const Vec& v) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
  return a;
}
}  // namespace

nlohmann::ordered_json ExpansionReport::to_json() const {
  nlohmann::ordered_json j;
  j["theta0"] = theta0;
  j["A_re"] = vec_json(A.re);
  j["A_im"] = vec_json(A.im);
  j["B_re"] = vec_json(B.re);
  j["B_im"] = vec_json(B.im);
  j["C_re"] = vec_json(C.re);
  j["C_im"] = vec_json(C.im);
  j["c0"] = vec_json(c0);
  j["c0_spread"] = c0_spread;
  j["f_limit"] = f_limit;
  j["exponents"] = exponents;
  j["verdict"] = to_string(verdict);
  j["scale"] = scale;
  j["scale_limit"] = scale_limit;
  j["diagnostics"] = {{"a_orthogonality", a_orthogonality},
                      {"a_norm_ratio", a_norm_ratio},
                      {"pin_a", pin_a},
                      {"c0_dot_a", c0_dot_a},
                      {"pin_c", pin_c},
                      {"fit_snr", fit_snr},
                      {"conformality_warning", conformality_warning}};
  return j;
}

}  // namespace wlab
