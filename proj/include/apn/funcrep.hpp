#pragma once

// Polynomial functions F_q -> F_q, their normal form and the classical APN
// exponent families.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apn/gf2m.hpp"
#include "apn/unipoly.hpp"

namespace apn {

/// A function of F_q given by its reduced polynomial (all exponents <= q - 1).
class PolyFunc {
 public:
  using Terms = std::map<std::uint64_t, word_t>;  // exponent -> nonzero coefficient

  /// Reduces exponents modulo X^q + X and drops zero coefficients.
  PolyFunc(FieldPtr field, const Terms& terms);

  static PolyFunc monomial(FieldPtr field, std::uint64_t d, word_t c = 1);
  static PolyFunc from_unipoly(const UniPoly& p);

  const FieldPtr& field() const noexcept { return field_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// -1 for the zero function.
  std::int64_t degree() const noexcept {
    return terms_.empty() ? -1 : static_cast<std::int64_t>(terms_.rbegin()->first);
  }
  word_t lead() const noexcept { return terms_.empty() ? 0 : terms_.rbegin()->second; }
  word_t coeff(std::uint64_t e) const noexcept;
  /// No constant term and no term of power-of-2 degree.
  bool is_normalized() const noexcept;

  word_t eval(word_t x) const noexcept;
  /// f(x) for every x in ascending order; FieldTooLarge above m = 24.
  std::vector<word_t> values() const;
  UniPoly to_unipoly() const;

  PolyFunc operator+(const PolyFunc& o) const;
  bool operator==(const PolyFunc& o) const;

  /// `x^9 + 0x3*x^6 + x^3`; "0" for the zero function.
  std::string to_string() const;

 private:
  FieldPtr field_;
  Terms terms_;
};

bool is_power_of_two(std::uint64_t n) noexcept;

/// Every monomial has degree 0 or a power of 2.
bool is_q_affine(const PolyFunc& f) noexcept;
bool is_q_affine(const UniPoly& p) noexcept;

/// Drops the constant and power-of-2 terms; throws BecameZero if nothing is left.
PolyFunc normalize(const PolyFunc& f);

/// c * f(a x + b); throws ZeroScalar when a or c is zero.
PolyFunc affine_transform(const PolyFunc& f, word_t a, word_t b, word_t c);

/// Scales by the inverse leading coefficient.
PolyFunc make_monic(const PolyFunc& f);

/// Squares every coefficient.
PolyFunc frobenius_twist(const PolyFunc& f);

enum class ApnFamily { Gold, Kasami, Welch, Niho, Inverse, Dobbertin };

const char* to_string(ApnFamily family) noexcept;
std::optional<ApnFamily> parse_family(std::string_view name) noexcept;
bool family_takes_h(ApnFamily family) noexcept;

/// Exponent of the family at (m, h); throws InvalidParameters when the
/// family's conditions on m and h fail.
std::uint64_t known_apn_exponent(ApnFamily family, unsigned m, std::optional<unsigned> h = std::nullopt);

struct CatalogueEntry {
  ApnFamily family;
  unsigned m;
  std::optional<unsigned> h;
  std::uint64_t d;
};

/// All valid instances at m, Gold and Kasami over 1 <= h < m.
std::vector<CatalogueEntry> apn_catalogue(unsigned m);

// Expression syntax: terms joined by '+', each a '*'-product of numbers
// (decimal bit masks or 0x hex), `x^k`, lowercase names bound in `named`
// and uppercase placeholders A..Z with optional powers.

struct ExprTerm {
  word_t coeff = 1;
  std::uint64_t x_exp = 0;
  std::map<char, unsigned> free;  // placeholder -> power
};

struct PolyExpr {
  std::vector<ExprTerm> terms;
  std::vector<char> placeholders;  // sorted
};

PolyExpr parse_poly_expr(const FieldPtr& field, std::string_view text,
                         const std::map<std::string, word_t>& named = {});

/// Substitutes placeholder values (in placeholder order).
PolyFunc instantiate(const FieldPtr& field, const PolyExpr& expr, std::span<const word_t> values);

/// Parses a function without placeholders.
PolyFunc parse_function(const FieldPtr& field, std::string_view text,
                        const std::map<std::string, word_t>& named = {});

}  // namespace apn
