#pragma once

#include <string>
#include <vector>

#include "wlab/geometry.hpp"
#include "wlab/multivector.hpp"
#include "wlab/zoo.hpp"

#include "json.hpp"

namespace wlab {

struct AnalyzeOptions {
  GeomOptions geom;
  double ladder_top = 0.3;  // fit radii r_k = ladder_top * 2^-k, clipped to the field
  int ladder_count = 10;
  int fit_nphi = 64;
  std::vector<double> residue_rhos = {0.1, 0.2, 0.4};
  int residue_samples = 256;
  double tol = 1e-3;  // relative tolerance for the classifier
};

// Geometric radius ladder descending from `top`, clipped so jets at the
// smallest rung keep their stencil inside the field domain.
std::vector<double> geometric_ladder(const ImmersionField& f, double top, int count,
                                     double kappa);

// Flux of the conserved current through the circle |x| = rho, periodic
// trapezoid with n and 2n samples; the doubling difference is the error
// estimate.
struct ResidueResult {
  Vec c0;
  double error_estimate = 0.0;
  bool reliable = true;
};
ResidueResult residue(const ImmersionField& f, double rho, int n_samples,
                      const GeomOptions& opts = {});
Vec residue_circle(const CurrentEvaluator& ev, double rho, int n_samples);

// Contour independence diagnostic over several radii.
struct SpreadResult {
  Vec mean;
  double max_deviation = 0.0;  // max pairwise |c0(rho_i) - c0(rho_j)|
  std::vector<Vec> per_rho;
};
SpreadResult residue_spread(const ImmersionField& f, const std::vector<double>& rhos,
                            int n_samples, const GeomOptions& opts = {});

// Least-squares slope of circle-averaged lambda against log r; the branch
// order is round(slope) + 1. Throws if the nearest integer is farther than 0.2
// or the order is below 1.
struct BranchOrderResult {
  int theta0 = 1;
  double slope = 0.0;
  double defect = 0.0;
};
BranchOrderResult branch_order(const ImmersionField& f, const AnalyzeOptions& opts = {});

// Leading coefficient A from the Fourier mode theta0-1 of d1 Phi - i d2 Phi
// over circles, extrapolated linearly in r to 0. scale_limit is the
// extrapolated limit of e^lambda / r^{theta0-1} (= theta0 |A^1| for a
// conformal chart).
struct LeadingFit {
  CVec A;
  double scale_limit = 0.0;
  double snr = 0.0;  // worst Fourier signal-to-residual ratio on the fit rungs
};
LeadingFit fit_leading(const ImmersionField& f, int theta0, const AnalyzeOptions& opts = {});

// Sub-leading coefficients for theta0 >= 2: B and C from the Fourier modes
// theta0+1 and theta0-1 of Phi - Re(A x^theta0), each fitted radially against
// r^{theta0+1} with an r^{theta0+2} nuisance term.
struct ExpansionFit {
  CVec B, C;
  double remainder_exponent = 0.0;  // log-log slope of the post-fit remainder
};
ExpansionFit fit_expansion(const ImmersionField& f, int theta0, const CVec& A,
                           const AnalyzeOptions& opts = {});

// Remainder decay exponent of Phi minus the fitted model, scaled by
// |x|^{theta0-1}. Returns 99 when the remainder sits below the noise floor.
double remainder_exponent(const ImmersionField& f, int theta0, const CVec& A, const CVec& B,
                          const CVec& C, const AnalyzeOptions& opts = {});

// Weighted mean curvature against the spinning-mode prediction
//   e^lambda H = f(x) Re[C (x/|x|)^{theta0-1}],  f = 2 theta0 |x|^{theta0-1} e^{-lambda}.
// Requires theta0 >= 2.
struct HProfileRow {
  Vec2 x;
  Vec weighted_H;
  Vec predicted;
};
struct HProfile {
  std::vector<HProfileRow> rows;
  double max_deviation = 0.0;
  double f_limit = 0.0;  // extrapolated limit of f, positive
};
HProfile weighted_H_profile(const ImmersionField& f, int theta0, const CVec& C,
                            const std::vector<double>& radii, const AnalyzeOptions& opts = {});

// Boundedness of H + (c0 / 4 pi) log|x| where raw |H| grows logarithmically.
struct LogSingularityResult {
  double sup_compensated = 0.0;
  double bounded_ratio = 1.0;  // max over radii / min over radii of the compensated sup
  double h_log_slope = 0.0;    // fitted slope of sup|H| against log(1/r)
};
LogSingularityResult log_singularity_check(const ImmersionField& f, const Vec& c0,
                                           const std::vector<double>& radii,
                                           const AnalyzeOptions& opts = {});

enum class Verdict { removable, log_singular_H, spinning_H, regular_branch_order_leap };
std::string to_string(Verdict v);

struct ExpansionReport {
  int theta0 = 1;
  CVec A, B, C;
  double scale = 0.0;        // |A^1|
  double scale_limit = 0.0;  // lim e^lambda / r^{theta0-1}
  std::vector<double> exponents;
  Vec c0;
  double c0_spread = 0.0;
  double c0_error = 0.0;
  double f_limit = 0.0;
  Verdict verdict = Verdict::removable;

  // invariant diagnostics, all relative
  double a_orthogonality = 0.0;  // |A^1 . A^2| / |A^1||A^2|
  double a_norm_ratio = 0.0;     // ||A^1| - |A^2|| / |A^1|
  double pin_a = 0.0;            // |pi_{n(0)} A| / |A|
  double c0_dot_a = 0.0;         // max_j |c0 . A^j| / (|c0||A^1|), 0 when c0 negligible
  double pin_c = 0.0;            // |pi_{n(0)} C - C| / |C|, 0 when C negligible
  double fit_snr = 0.0;
  bool conformality_warning = false;

  nlohmann::ordered_json to_json() const;
};

// Scale-invariant classification; tolerances are relative (|C| against
// tol |A|, |c0| against tol * 16 pi / |A^1|).
Verdict classify(const ExpansionReport& report, double tol);

// Full pipeline: branch order, leading and sub-leading fits, residue and
// spread, weighted-curvature limit, invariant diagnostics, verdict.
ExpansionReport analyze(const ImmersionField& f, const AnalyzeOptions& opts = {});

// Gauss map at the origin, estimated as the normalized average of the
// tangent 2-vector over the circle |x| = r.
MultiVector tangent_plane_at_origin(const ImmersionField& f, double r, int n_phi,
                                    const GeomOptions& opts = {});

// Projection onto the orthogonal complement of the plane of a unit simple
// 2-vector w.
Vec project_off_plane(const MultiVector& w, const Vec& v);

}  // namespace wlab
