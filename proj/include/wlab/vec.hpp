#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace wlab {

inline constexpr int kMaxDim = 8;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double sq(double x) { return x * x; }

// Point in the parameter disk.
struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  double norm() const { return std::hypot(x1, x2); }
  double angle() const { return std::atan2(x2, x1); }

  Vec2 operator+(const Vec2& o) const { return {x1 + o.x1, x2 + o.x2}; }
  Vec2 operator-(const Vec2& o) const { return {x1 - o.x1, x2 - o.x2}; }
  Vec2 operator*(double s) const { return {x1 * s, x2 * s}; }

  static Vec2 polar(double r, double phi) {
    return {r * std::cos(phi), r * std::sin(phi)};
  }
};

// Dense vector in R^m, 1 <= m <= 8. Fixed capacity, no heap.
class Vec {
 public:
  Vec() : dim_(0) { c_.fill(0.0); }
  explicit Vec(int dim) : dim_(dim) {
    check_dim(dim);
    c_.fill(0.0);
  }
  Vec(std::initializer_list<double> vals) : dim_(static_cast<int>(vals.size())) {
    check_dim(dim_);
    c_.fill(0.0);
    int i = 0;
    for (double v : vals) c_[i++] = v;
  }

  static Vec zero(int dim) { return Vec(dim); }
  static Vec axis(int dim, int k) {  // unit vector along axis k, 1-based
    Vec v(dim);
    if (k < 1 || k > dim) throw std::invalid_argument("Vec::axis: axis out of range");
    v[k - 1] = 1.0;
    return v;
  }

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

  Vec& operator+=(const Vec& o) {
    same_dim(o);
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    same_dim(o);
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }

  Vec operator+(const Vec& o) const { Vec r = *this; r += o; return r; }
  Vec operator-(const Vec& o) const { Vec r = *this; r -= o; return r; }
  Vec operator*(double s) const { Vec r = *this; r *= s; return r; }
  Vec operator/(double s) const { return *this * (1.0 / s); }
  Vec operator-() const { return *this * -1.0; }

  double norm2() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  Vec normalized() const {
    double n = norm();
    if (n == 0.0) throw std::domain_error("Vec::normalized: zero vector");
    return *this / n;
  }

  bool finite() const {
    for (int i = 0; i < dim_; ++i)
      if (!std::isfinite(c_[i])) return false;
    return true;
  }

 private:
  static void check_dim(int d) {
    if (d < 0 || d > kMaxDim) throw std::invalid_argument("Vec: dimension out of range");
  }
  void same_dim(const Vec& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("Vec: dimension mismatch");
  }

  int dim_;
  std::array<double, kMaxDim> c_;
};

inline double dot(const Vec& a, const Vec& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec operator*(double s, const Vec& v) { return v * s; }

// Complex m-vector, stored as a pair of real vectors (re + i*im).
struct CVec {
  Vec re, im;

  CVec() = default;
  explicit CVec(int dim) : re(dim), im(dim) {}
  CVec(Vec re_, Vec im_) : re(std::move(re_)), im(std::move(im_)) {
    if (re.dim() != im.dim()) throw std::invalid_argument("CVec: dimension mismatch");
  }

  int dim() const { return re.dim(); }
  double norm() const { return std::sqrt(re.norm2() + im.norm2()); }

  CVec operator+(const CVec& o) const { return {re + o.re, im + o.im}; }
  CVec operator-(const CVec& o) const { return {re - o.re, im - o.im}; }
  CVec operator*(double s) const { return {re * s, im * s}; }

  // Multiply by a complex scalar (a + ib).
  CVec cmul(double a, double b) const { return {re * a - im * b, re * b + im * a}; }
};

// Re(A z^k) evaluated at z = x1 + i x2; the real part is taken componentwise.
inline Vec re_power(const CVec& a, const Vec2& x, int k) {
  double zr = 1.0, zi = 0.0;
  for (int i = 0; i < k; ++i) {
    double nr = zr * x.x1 - zi * x.x2;
    double ni = zr * x.x2 + zi * x.x1;
    zr = nr;
    zi = ni;
  }
  return a.re * zr - a.im * zi;
}

}  // namespace wlab
