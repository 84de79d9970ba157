#pragma once

// Criteria for absolute irreducibility and smoothness of the curves attached
// to the quotient surface: arithmetic rules on d, an extension-field
// factorization sweep and a resultant-based singular point solver.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "apn/funcrep.hpp"
#include "apn/tripoly.hpp"

namespace apn {

enum class CriterionStatus { Established, Unknown, Refuted };

const char* to_string(CriterionStatus s) noexcept;

/// A point of P^2 with coordinates in F_{2^n}, scaled so that the leftmost
/// nonzero coordinate is 1.
struct ProjectivePoint {
  FieldPtr field;
  std::array<word_t, 3> coords{};

  unsigned degree() const noexcept { return field->m(); }
  std::string to_string() const;
  bool operator==(const ProjectivePoint& o) const;
};

struct CriterionVerdict {
  CriterionStatus status = CriterionStatus::Unknown;
  std::string rule;
  /// Factors (for a reducible curve) or singular points, when refuted.
  std::vector<TriPoly> witness_factors;
  std::vector<ProjectivePoint> witness_points;
  std::string detail;

  bool established() const noexcept { return status == CriterionStatus::Established; }
};

/// Absolute irreducibility of phi_d from d mod 4 and d mod 8.
CriterionVerdict jmw_irreducible(unsigned d);

/// Smoothness of phi_d from the arithmetic of l = (d - 1) / 2.
CriterionVerdict jw_smooth(unsigned d);

/// Multiplicative order of 2 modulo odd l > 1.
unsigned order_of_two(unsigned l);

struct IrreducibilityOptions {
  unsigned degree_cap = 32;
  /// Largest extension degree over F_2 the sweep may use.
  unsigned max_field_degree = 32;
};

/// Absolute irreducibility of a homogeneous curve in x0, x1, x2: factors over
/// F_{q^t} for every divisor t of the degree. Throws DegreeCapExceeded.
CriterionVerdict absolutely_irreducible(const TriPoly& curve, const IrreducibilityOptions& opts = {});

/// Same for an affine plane curve in x0, x1 (homogenized with x2).
CriterionVerdict absolutely_irreducible_affine(const TriPoly& curve, const IrreducibilityOptions& opts = {});

/// Multiplies each term by x2 to the missing degree.
TriPoly homogenize_x2(const TriPoly& p, unsigned target_deg);

/// All singular points of a reduced homogeneous curve in x0, x1, x2 over the
/// algebraic closure, each in the smallest F_{2^n} holding its coordinates.
/// Throws DegreeCapExceeded, ExtensionTooLarge when a point needs n > 32,
/// and InvalidParameters when the curve has a repeated component.
std::vector<ProjectivePoint> curve_singular_points(const TriPoly& curve, unsigned degree_cap = 32);

/// x^d + a x^r: coprime phi_d, phi_r and a squarefree one of them.
CriterionVerdict binomial_criterion(unsigned d, unsigned r);

/// x^d + c x^r: parity, power-of-2 and gcd(d-1, r-1) conditions.
CriterionVerdict voloch_criterion(unsigned d, unsigned r);

struct SurfaceVerdict {
  CriterionStatus status = CriterionStatus::Unknown;
  CriterionVerdict infinity;                 // curve at infinity
  std::vector<CriterionVerdict> sections;    // x2 = a
  std::vector<CriterionVerdict> voloch;      // x1 + x2 = a, a != 0
};

/// Absolute irreducibility of the surface of f: established as soon as the
/// curve at infinity, a section x2 = a or a curve F_a is absolutely
/// irreducible. `a_values` selects the sections tried.
SurfaceVerdict surface_irreducibility(const PolyFunc& f, const std::vector<word_t>& a_values = {0, 1},
                                      const IrreducibilityOptions& opts = {});

}  // namespace apn
