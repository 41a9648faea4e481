#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wlab/field.hpp"

#include "json.hpp"

namespace wlab {

// Orthogonal matrix on R^m for the higher-codimension embedding.
struct Rotation {
  int dim = 3;
  std::array<std::array<double, kMaxDim>, kMaxDim> m{};

  static Rotation identity(int dim);
  static Rotation random(int dim, std::uint64_t seed);
  Vec apply(const Vec& v) const;
  double orthogonality_defect() const;  // max |R^T R - I| entry
};

ImmersionField make_plane(int dim = 3);
ImmersionField make_sphere_patch();

// Log-polar catenoid chart, neck radius 1:
//   x = r e^{i phi}  ->  (cosh(log r) cos phi, cosh(log r) sin phi, log r).
ImmersionField make_catenoid();

// Compose with p -> p / |p|^2; conformality is preserved. Evaluation errors
// out if the inner field passes within 1e-12 of the origin.
ImmersionField invert(const ImmersionField& f);

// One graph of the inverted catenoid, dilated so the leading coefficient
// satisfies |A^1| = 1. branch = +1 picks the end t = -log r (graph above the
// tangent plane), branch = -1 the mirror graph.
ImmersionField make_inverted_catenoid(int branch = +1);

// Precompose with the complex power x -> x^theta0 on the chart; the branch
// order multiplies by theta0.
ImmersionField precompose_power(const ImmersionField& f, int theta0);

ImmersionField make_covered_inverted_catenoid(int theta0, int branch = +1);

// Weierstrass minimal immersion from polynomial data f, g (real coefficient
// lists, ascending degree):
//   Phi = Re Int ((1 - g^2) f / 2, i (1 + g^2) f / 2, f g) dz,
// integrated termwise from monomial antiderivatives.
ImmersionField make_weierstrass_minimal(const std::vector<double>& f_coeffs,
                                        const std::vector<double>& g_coeffs);

// Pad with zeros to m_target and apply the rotation. All scalar geometric
// outputs are invariant.
ImmersionField embed_in_higher_codim(const ImmersionField& f, int m_target,
                                     const Rotation& rotation);

// Serializable surface description, the CLI's --surface argument.
struct SurfaceSpec {
  std::string kind;  // plane | sphere_patch | catenoid | inverted_catenoid |
                     // covered_inverted_catenoid | weierstrass_minimal | embedded_variant
  int dim = 3;                      // plane
  int theta0 = 1;                   // covered_inverted_catenoid
  int branch = +1;                  // inverted catenoid family
  std::vector<double> f_coeffs, g_coeffs;  // weierstrass_minimal
  int m_target = 4;                 // embedded_variant
  std::uint64_t rotation_seed = 0;  // embedded_variant; 0 = identity
  std::shared_ptr<SurfaceSpec> base;  // embedded_variant

  static SurfaceSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

ImmersionField make_field(const SurfaceSpec& spec);

// All surfaces the verification sweeps run over.
std::vector<ImmersionField> standard_zoo();

}  // namespace wlab
