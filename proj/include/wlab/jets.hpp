#pragma once

#include <array>

#include "wlab/field.hpp"
#include "wlab/vec.hpp"

namespace wlab {

struct JetOptions {
  double kappa = 1e-2;      // relative step, h = kappa * |x|
  bool richardson = true;   // one halving level; off gives the raw order-4 value
};

// Value and partial derivatives of an immersion at a point, up to order 3.
// Mixed partials are stored once per multi-index (i, j), i + j <= order.
struct Jet {
  int order = 0;
  int dim = 0;
  double step = 0.0;  // h used at the coarse level

  static int index(int i, int j);  // (0,0)->0, (1,0)->1, (0,1)->2, ...

  const Vec& partial(int i, int j) const { return d_[index(i, j)]; }
  double error(int i, int j) const { return err_[index(i, j)]; }
  const Vec& value() const { return d_[0]; }

  std::array<Vec, 10> d_;
  std::array<double, 10> err_;
};

// Central differences of order 4 with relative step, one Richardson halving.
// The error estimate per derivative is the norm of the difference between the
// two levels. Throws if the stencil leaves [r_min, r_max] of the field.
Jet compute_jet(const ImmersionField& f, const Vec2& x, int order,
                const JetOptions& opts = {});

// Order-4 central first derivative of a derived field along direction 1 or 2,
// with relative step h = kappa * |x|.
std::vector<double> field_derivative(const RnField& f, const Vec2& x, int direction,
                                     double kappa);

// Order-4 central second derivative along one axis.
std::vector<double> field_second_derivative(const RnField& f, const Vec2& x,
                                            int direction, double kappa);

}  // namespace wlab
