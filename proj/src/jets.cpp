#include "wlab/jets.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace wlab {

namespace {

// Order-4 central stencils on offsets -3..3, index shifted by +3.
// D[k] is the weight table for the k-th derivative; divide by h^k.
constexpr double kD0[7] = {0, 0, 0, 1, 0, 0, 0};
constexpr double kD1[7] = {0, 1.0 / 12, -2.0 / 3, 0, 2.0 / 3, -1.0 / 12, 0};
constexpr double kD2[7] = {0, -1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12, 0};
constexpr double kD3[7] = {1.0 / 8, -1, 13.0 / 8, 0, -13.0 / 8, 1, -1.0 / 8};

const double* stencil(int k) {
  switch (k) {
    case 0: return kD0;
    case 1: return kD1;
    case 2: return kD2;
    case 3: return kD3;
    default: throw std::invalid_argument("stencil: derivative order out of range");
  }
}

int stencil_extent(int k) { return k == 3 ? 3 : 2; }

// All partials (i,j), i+j <= order, from one lattice of evaluations at step h.
void level_partials(const ImmersionField& f, const Vec2& x, int order, double h,
                    std::array<Vec, 10>& out) {
  std::map<std::pair<int, int>, Vec> lattice;
  auto value_at = [&](int a, int b) -> const Vec& {
    auto it = lattice.find({a, b});
    if (it == lattice.end())
      it = lattice.emplace(std::pair<int, int>{a, b}, f(Vec2{x.x1 + a * h, x.x2 + b * h})).first;
    return it->second;
  };

  for (int i = 0; i <= order; ++i) {
    for (int j = 0; i + j <= order; ++j) {
      const double* di = stencil(i);
      const double* dj = stencil(j);
      Vec acc(f.dim);
      for (int a = -stencil_extent(i); a <= stencil_extent(i); ++a) {
        double wa = di[a + 3];
        if (wa == 0.0) continue;
        for (int b = -stencil_extent(j); b <= stencil_extent(j); ++b) {
          double wb = dj[b + 3];
          if (wb == 0.0) continue;
          acc += value_at(a, b) * (wa * wb);
        }
      }
      out[Jet::index(i, j)] = acc * (1.0 / std::pow(h, i + j));
    }
  }
}

}  // namespace

int Jet::index(int i, int j) {
  static constexpr int table[4][4] = {
      {0, 2, 5, 9}, {1, 4, 8, -1}, {3, 7, -1, -1}, {6, -1, -1, -1}};
  if (i < 0 || j < 0 || i > 3 || j > 3 || i + j > 3)
    throw std::invalid_argument("Jet: multi-index out of range");
  return table[i][j];
}

Jet compute_jet(const ImmersionField& f, const Vec2& x, int order, const JetOptions& opts) {
  if (order < 1 || order > 3) throw std::invalid_argument("compute_jet: order must be 1, 2 or 3");
  if (!(opts.kappa > 0.0) || opts.kappa > 0.1)
    throw std::invalid_argument("compute_jet: kappa must lie in (0, 0.1]");

  const double r = x.norm();
  const double h = opts.kappa * r;
  // Worst-case lattice point: 3 steps along an axis, or (2,2) diagonally.
  const double reach = (order == 3 ? 3.0 : 2.0 * std::sqrt(2.0)) * h;
  if (r - reach < f.r_min)
    throw std::domain_error("jet stencil at |x|=" + std::to_string(r) + " with h=" +
                            std::to_string(h) + " crosses inner radius r_min=" +
                            std::to_string(f.r_min) + " of " + f.name);
  if (r + reach > f.r_max)
    throw std::domain_error("jet stencil at |x|=" + std::to_string(r) + " with h=" +
                            std::to_string(h) + " crosses outer radius r_max=" +
                            std::to_string(f.r_max) + " of " + f.name);

  Jet jet;
  jet.order = order;
  jet.dim = f.dim;
  jet.step = h;

  std::array<Vec, 10> coarse, fine;
  level_partials(f, x, order, h, coarse);
  level_partials(f, x, order, h / 2, fine);

  const int entries = (order + 1) * (order + 2) / 2;
  for (int k = 0; k < entries; ++k) {
    Vec diff = fine[k] - coarse[k];
    jet.err_[k] = diff.norm();
    jet.d_[k] = opts.richardson ? (fine[k] * 16.0 - coarse[k]) / 15.0 : coarse[k];
  }
  return jet;
}

namespace {

std::vector<double> fd_axis(const RnField& f, const Vec2& x, int direction, double kappa,
                            const double* weights, int power) {
  if (direction != 1 && direction != 2)
    throw std::invalid_argument("field derivative: direction must be 1 or 2");
  double h = kappa * x.norm();
  if (!(h > 0.0)) throw std::domain_error("field derivative: zero step at the origin");
  std::vector<double> acc(f.len, 0.0);
  for (int a = -2; a <= 2; ++a) {
    double w = weights[a + 3];
    if (w == 0.0) continue;
    Vec2 p = direction == 1 ? Vec2{x.x1 + a * h, x.x2} : Vec2{x.x1, x.x2 + a * h};
    std::vector<double> v = f.eval(p);
    for (int i = 0; i < f.len; ++i) acc[i] += w * v[i];
  }
  double scale = 1.0 / std::pow(h, power);
  for (double& a : acc) a *= scale;
  return acc;
}

}  // namespace

std::vector<double> field_derivative(const RnField& f, const Vec2& x, int direction,
                                     double kappa) {
  return fd_axis(f, x, direction, kappa, kD1, 1);
}

std::vector<double> field_second_derivative(const RnField& f, const Vec2& x, int direction,
                                            double kappa) {
  return fd_axis(f, x, direction, kappa, kD2, 2);
}

}  // namespace wlab
