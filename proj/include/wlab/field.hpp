#pragma once

#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "wlab/vec.hpp"

namespace wlab {

// Evaluatable conformal immersion of the punctured disk into R^m. The chart
// degenerates at the origin; evaluation is refused below r_min.
struct ImmersionField {
  std::string name;
  int dim = 3;
  double r_min = 1e-12;
  double r_max = 4.0;
  std::optional<int> branch_order_hint;
  std::function<Vec(const Vec2&)> map;

  Vec operator()(const Vec2& x) const {
    double r = x.norm();
    if (r < r_min)
      throw std::domain_error(name + ": evaluation at |x|=" + std::to_string(r) +
                              " below inner radius r_min=" + std::to_string(r_min));
    if (r > r_max)
      throw std::domain_error(name + ": evaluation at |x|=" + std::to_string(r) +
                              " beyond outer radius r_max=" + std::to_string(r_max));
    return map(x);
  }
};

// Lazily evaluated derived field R^2 -> R^d (mean curvature, Gauss-map
// coefficients, current components, ...). `len` is d.
struct RnField {
  int len = 0;
  std::function<std::vector<double>(const Vec2&)> eval;
};

namespace detail {
struct Vec2Key {
  std::uint64_t a, b;
  bool operator==(const Vec2Key& o) const { return a == o.a && b == o.b; }
};
struct Vec2KeyHash {
  std::size_t operator()(const Vec2Key& k) const {
    std::uint64_t h = k.a * 0x9e3779b97f4a7c15ull;
    h ^= k.b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};
inline Vec2Key key_of(const Vec2& x) {
  Vec2Key k{};
  std::memcpy(&k.a, &x.x1, sizeof(double));
  std::memcpy(&k.b, &x.x2, sizeof(double));
  return k;
}
}  // namespace detail

// Memoizing wrapper for derived fields. Nested differencing and quadrature
// doubling re-evaluate at identical points; the cache is keyed on the exact
// bits of x. Safe for concurrent use.
inline RnField memoize(RnField f) {
  struct State {
    RnField inner;
    std::unordered_map<detail::Vec2Key, std::vector<double>, detail::Vec2KeyHash> cache;
    std::mutex mu;
  };
  auto st = std::make_shared<State>();
  st->inner = std::move(f);
  RnField out;
  out.len = st->inner.len;
  out.eval = [st](const Vec2& x) {
    auto key = detail::key_of(x);
    {
      std::lock_guard<std::mutex> lock(st->mu);
      auto it = st->cache.find(key);
      if (it != st->cache.end()) return it->second;
    }
    std::vector<double> v = st->inner.eval(x);
    std::lock_guard<std::mutex> lock(st->mu);
    return st->cache.emplace(key, std::move(v)).first->second;
  };
  return out;
}

}  // namespace wlab
