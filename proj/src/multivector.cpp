#include "wlab/multivector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace wlab {

int reorder_sign(Blade a, Blade b) {
  // Each factor of b moves left past the factors of a with a larger axis.
  int swaps = 0;
  Blade bb = b;
  while (bb) {
    int j = std::countr_zero(bb);
    bb &= bb - 1;
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

MultiVector::MultiVector(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("MultiVector: ambient dimension out of range [1,8]");
  c_.fill(0.0);
}

MultiVector MultiVector::scalar(int dim, double value) {
  MultiVector m(dim);
  m.c_[0] = value;
  return m;
}

MultiVector MultiVector::basis(int dim, int axis) {
  if (axis < 1 || axis > dim) throw std::invalid_argument("MultiVector::basis: axis out of range");
  MultiVector m(dim);
  m.c_[Blade(1) << (axis - 1)] = 1.0;
  return m;
}

MultiVector MultiVector::blade(int dim, Blade mask, double coeff) {
  MultiVector m(dim);
  if (mask >= (Blade(1) << dim))
    throw std::invalid_argument("MultiVector::blade: mask exceeds ambient dimension");
  m.c_[mask] = coeff;
  return m;
}

MultiVector MultiVector::from_vector(const Vec& v) {
  MultiVector m(v.dim());
  for (int i = 0; i < v.dim(); ++i) m.c_[Blade(1) << i] = v[i];
  return m;
}

int MultiVector::grade() const {
  int g = -2;
  for (Blade b = 0; b < Blade(blade_count()); ++b) {
    if (c_[b] == 0.0) continue;
    int k = std::popcount(b);
    if (g == -2)
      g = k;
    else if (g != k)
      return -1;
  }
  return g == -2 ? 0 : g;
}

MultiVector MultiVector::grade_part(int k) const {
  MultiVector r(dim_);
  for (Blade b = 0; b < Blade(blade_count()); ++b)
    if (std::popcount(b) == k) r.c_[b] = c_[b];
  return r;
}

Vec MultiVector::vector_part() const {
  Vec v(dim_);
  for (int i = 0; i < dim_; ++i) v[i] = c_[Blade(1) << i];
  return v;
}

bool MultiVector::is_zero(double tol) const {
  for (Blade b = 0; b < Blade(blade_count()); ++b)
    if (std::abs(c_[b]) > tol) return false;
  return true;
}

double MultiVector::norm() const { return std::sqrt(inner(*this, *this)); }

void MultiVector::same_dim(const MultiVector& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("MultiVector: ambient dimension mismatch");
}

MultiVector& MultiVector::operator+=(const MultiVector& o) {
  same_dim(o);
  for (Blade b = 0; b < Blade(blade_count()); ++b) c_[b] += o.c_[b];
  return *this;
}

MultiVector& MultiVector::operator-=(const MultiVector& o) {
  same_dim(o);
  for (Blade b = 0; b < Blade(blade_count()); ++b) c_[b] -= o.c_[b];
  return *this;
}

MultiVector& MultiVector::operator*=(double s) {
  for (Blade b = 0; b < Blade(blade_count()); ++b) c_[b] *= s;
  return *this;
}

MultiVector MultiVector::operator+(const MultiVector& o) const { MultiVector r = *this; r += o; return r; }
MultiVector MultiVector::operator-(const MultiVector& o) const { MultiVector r = *this; r -= o; return r; }
MultiVector MultiVector::operator*(double s) const { MultiVector r = *this; r *= s; return r; }
MultiVector MultiVector::operator-() const { return *this * -1.0; }

bool operator==(const MultiVector& a, const MultiVector& b) {
  if (a.dim_ != b.dim_) return false;
  for (Blade m = 0; m < Blade(a.blade_count()); ++m)
    if (a.c_[m] != b.c_[m]) return false;
  return true;
}

MultiVector operator*(double s, const MultiVector& a) { return a * s; }

MultiVector wedge(const MultiVector& a, const MultiVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge: ambient dimension mismatch");
  const int n = a.blade_count();
  MultiVector r(a.dim());
  for (Blade ma = 0; ma < Blade(n); ++ma) {
    double ca = a.coeff(ma);
    if (ca == 0.0) continue;
    for (Blade mb = 0; mb < Blade(n); ++mb) {
      double cb = b.coeff(mb);
      if (cb == 0.0 || (ma & mb)) continue;
      r.coeff(ma | mb) += ca * cb * reorder_sign(ma, mb);
    }
  }
  return r;
}

double inner(const MultiVector& a, const MultiVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner: ambient dimension mismatch");
  double s = 0.0;
  for (Blade m = 0; m < Blade(a.blade_count()); ++m) s += a.coeff(m) * b.coeff(m);
  return s;
}

MultiVector hodge(const MultiVector& a) {
  if (a.grade() < 0)
    throw std::invalid_argument("hodge: argument must be homogeneous; apply grade-wise");
  const Blade full = Blade(a.blade_count()) - 1;
  MultiVector r(a.dim());
  for (Blade m = 0; m <= full; ++m) {
    double c = a.coeff(m);
    if (c == 0.0) continue;
    Blade comp = full ^ m;
    r.coeff(comp) += c * reorder_sign(m, comp);
  }
  return r;
}

MultiVector interior(const MultiVector& gamma, const MultiVector& beta) {
  if (gamma.dim() != beta.dim())
    throw std::invalid_argument("interior: ambient dimension mismatch");
  int gq = gamma.grade(), bp = beta.grade();
  if (gq >= 0 && bp >= 0 && !gamma.is_zero() && !beta.is_zero() && gq < bp)
    throw std::invalid_argument("interior: grade of first argument below grade of second");
  const int n = gamma.blade_count();
  MultiVector r(gamma.dim());
  for (Blade mg = 0; mg < Blade(n); ++mg) {
    double cg = gamma.coeff(mg);
    if (cg == 0.0) continue;
    for (Blade mb = 0; mb < Blade(n); ++mb) {
      double cb = beta.coeff(mb);
      if (cb == 0.0 || (mb & ~mg)) continue;
      Blade rest = mg ^ mb;
      r.coeff(rest) += cg * cb * reorder_sign(rest, mb);
    }
  }
  return r;
}

namespace {

// bullet of a against a single canonical blade, via the inductive rule with
// the blade split as (lowest axis) ^ (rest).
MultiVector bullet_blade(const MultiVector& a, Blade mask, int dim) {
  int k = std::popcount(mask);
  if (k == 0) return a;  // scalar factor handled by the caller
  if (k == 1) return interior(a, MultiVector::blade(dim, mask));
  Blade lo = mask & (~mask + 1);
  Blade rest = mask ^ lo;
  MultiVector b1 = MultiVector::blade(dim, lo);
  MultiVector first = wedge(bullet_blade(a, lo, dim), MultiVector::blade(dim, rest));
  MultiVector second = wedge(bullet_blade(a, rest, dim), b1);
  int q = k - 1;  // grade of the rest factor; p = 1
  return (q & 1) ? first - second : first + second;
}

}  // namespace

MultiVector bullet(const MultiVector& a, const MultiVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("bullet: ambient dimension mismatch");
  MultiVector r(a.dim());
  for (Blade mb = 0; mb < Blade(b.blade_count()); ++mb) {
    double cb = b.coeff(mb);
    if (cb == 0.0) continue;
    r += bullet_blade(a, mb, a.dim()) * cb;
  }
  return r;
}

}  // namespace wlab
