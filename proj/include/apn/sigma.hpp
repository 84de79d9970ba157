#pragma once

// The quotient surface
//   phi = [f(x0) + f(x1) + f(x2) + f(x0+x1+x2)] / [(x0+x1)(x1+x2)(x0+x2)]
// of a polynomial function, its plane sections, rational point counts and
// the APN test through its points.

#include <cstdint>
#include <vector>

#include "apn/funcrep.hpp"
#include "apn/tripoly.hpp"

namespace apn {

struct SigmaSurface {
  TriPoly phi;       // affine equation in x0, x1, x2, degree d - 3
  TriPoly phi_proj;  // homogenized with z
  PolyFunc source;   // the normalized input
  unsigned d = 0;
};

struct PointCount {
  std::uint64_t affine_total = 0;
  std::uint64_t affine_on_triple_locus = 0;
  std::uint64_t affine_off_locus = 0;
  std::uint64_t infinity_points = 0;
  std::uint64_t projective_total = 0;
};

struct CountOptions {
  unsigned max_m = 10;
};

/// Normalizes f first. Throws QAffineInput when nothing survives and
/// DegreeOutOfRange when d does not fit the exponent range.
SigmaSurface build_sigma(const PolyFunc& f);

/// The curve at infinity phi_d for x^d, homogeneous of degree d - 3 in
/// x0, x1, x2. Coefficients lie in F_2 but are stored in `field`.
TriPoly infinity_curve(unsigned d, const FieldPtr& field = Field::standard(1));

/// phi(x0, x1, a).
TriPoly section_xa(const PolyFunc& f, word_t a);

/// [f(x0) + f(x1) + f(x1+a) + f(x0+a)] / [(x0+x1)(x0+x1+a)] with a in the x2 slot.
TriPoly voloch_curve(const PolyFunc& f);

/// Exhaustive scan over F_q^3 plus the projective points of the top-degree
/// part of phi at infinity. Throws BudgetExceeded above opts.max_m.
PointCount count_points(const SigmaSurface& s, const CountOptions& opts = {});
PointCount count_points_serial(const SigmaSurface& s, const CountOptions& opts = {});

/// f is APN iff every rational zero of phi lies on the three planes x_i = x_j.
bool apn_via_surface(const PolyFunc& f, const CountOptions& opts = {});

/// x1 + x2 divides d phi / d x0.
bool lemma41_check(const PolyFunc& f);

/// Checks that (1:1:1:0) is a singular point of the projective surface and
/// that dPhi/dz restricted to the diagonal equals (d-3) a0 z^(d-4), where
/// a0 = phi(u, u, u). Requires d >= 5. Throws DiagonalNotConstantError when
/// phi(u, u, u) depends on u.
bool singular_at_infinity_diagonal(const PolyFunc& f);

class DiagonalNotConstantError : public Error {
 public:
  /// `diagonal` is phi(u, u, u); `roots` are its zeros u in F_q, each giving
  /// an affine singular point (u, u, u).
  DiagonalNotConstantError(UniPoly diagonal, std::vector<word_t> roots);
  const UniPoly& diagonal() const noexcept { return diagonal_; }
  const std::vector<word_t>& roots() const noexcept { return roots_; }

 private:
  UniPoly diagonal_;
  std::vector<word_t> roots_;
};

}  // namespace apn
