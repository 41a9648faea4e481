#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wlab/vec.hpp"

namespace wlab {

// Basis blade as a bitmask over the m axes: bit (k-1) set means axis k is a
// factor. Canonical order is ascending axis index.
using Blade = std::uint32_t;

// Sign of sorting the concatenation (a, b) of two disjoint canonical blades
// into canonical order, i.e. the sign s with  blade(a) ^ blade(b) = s * blade(a|b).
int reorder_sign(Blade a, Blade b);

// Graded element of the exterior algebra over R^m, 3 <= m <= 8 (smaller m
// allowed for internal use). Dense coefficient per canonical blade.
class MultiVector {
 public:
  explicit MultiVector(int dim);

  static MultiVector scalar(int dim, double value);
  static MultiVector basis(int dim, int axis);  // e_axis, 1-based
  static MultiVector blade(int dim, Blade mask, double coeff = 1.0);
  static MultiVector from_vector(const Vec& v);  // grade-1 element

  int dim() const { return dim_; }
  int blade_count() const { return 1 << dim_; }

  double coeff(Blade mask) const { return c_[mask]; }
  double& coeff(Blade mask) { return c_[mask]; }

  // Grade of the element; 0 for the zero element, -1 if mixed-grade.
  int grade() const;
  bool homogeneous() const { return grade() >= 0; }
  MultiVector grade_part(int k) const;

  double scalar_part() const { return c_[0]; }
  Vec vector_part() const;  // grade-1 coefficients as a Vec

  bool is_zero(double tol = 0.0) const;
  double norm() const;

  MultiVector& operator+=(const MultiVector& o);
  MultiVector& operator-=(const MultiVector& o);
  MultiVector& operator*=(double s);
  MultiVector operator+(const MultiVector& o) const;
  MultiVector operator-(const MultiVector& o) const;
  MultiVector operator*(double s) const;
  MultiVector operator-() const;

  friend bool operator==(const MultiVector& a, const MultiVector& b);

 private:
  void same_dim(const MultiVector& o) const;

  int dim_;
  std::array<double, 1 << kMaxDim> c_;
};

MultiVector operator*(double s, const MultiVector& a);

// Exterior product.
MultiVector wedge(const MultiVector& a, const MultiVector& b);

// Inner product with the canonical blades orthonormal; grade-mismatched
// parts contribute zero.
double inner(const MultiVector& a, const MultiVector& b);

// Hodge dual, alpha ^ star(beta) = <alpha, beta> e_1^...^e_m. Requires a
// homogeneous argument.
MultiVector hodge(const MultiVector& a);

// Interior multiplication, the adjoint of left exterior multiplication:
//   <interior(gamma, beta), alpha> = <gamma, alpha ^ beta>   for all alpha.
// On canonical blades this contracts the factors of beta out of gamma from
// the right. Requires grade(gamma) >= grade(beta) on homogeneous inputs.
MultiVector interior(const MultiVector& gamma, const MultiVector& beta);

// First-order contraction: bullet(a, b) = interior(a, b) for 1-vector b, and
//   bullet(a, wedge(b, c)) = wedge(bullet(a, b), c) + (-1)^{pq} wedge(bullet(a, c), b)
// for a p-vector b and q-vector c. Well-defined independent of factorization.
MultiVector bullet(const MultiVector& a, const MultiVector& b);

}  // namespace wlab
