#pragma once

// Sparse polynomials in up to four variables (x0, x1, x2, z) over F_{2^k}.
//
// Terms are kept in a map ordered by graded lexicographic order with
// x0 > x1 > x2 > z; only nonzero coefficients are stored. The fourth slot z
// is the homogenizing variable.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "apn/gf2m.hpp"
#include "apn/unipoly.hpp"

namespace apn {

inline constexpr int kTriVars = 4;
inline constexpr int kZ = 3;

struct Monomial {
  std::array<std::uint16_t, kTriVars> e{};

  unsigned total() const noexcept { return unsigned{e[0]} + e[1] + e[2] + e[3]; }
  bool divides(const Monomial& o) const noexcept;
  Monomial operator*(const Monomial& o) const;
  Monomial operator/(const Monomial& o) const;  // requires divides
  bool operator==(const Monomial&) const = default;
};

/// Graded lex, ascending: the last map entry is the leading term.
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const noexcept;
};

class TriPoly {
 public:
  using TermMap = std::map<Monomial, word_t, GradedLex>;

  explicit TriPoly(FieldPtr field) : field_(std::move(field)) {}

  static TriPoly constant(FieldPtr field, word_t c);
  /// The variable with index 0..3 (x0, x1, x2, z).
  static TriPoly var(FieldPtr field, int index);
  static TriPoly term(FieldPtr field, word_t c, Monomial mono);

  const FieldPtr& field() const noexcept { return field_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  word_t coeff(const Monomial& m) const noexcept;

  /// -1 for the zero polynomial.
  int total_degree() const noexcept;
  int degree_in(int var) const noexcept;
  bool is_homogeneous() const noexcept;
  /// Bit mask of the variables that occur.
  unsigned used_vars() const noexcept;

  /// Leading term under graded lex; undefined on zero.
  const std::pair<const Monomial, word_t>& leading() const { return *terms_.rbegin(); }

  void add_term(const Monomial& m, word_t c);

  TriPoly& operator+=(const TriPoly& o);
  TriPoly operator+(const TriPoly& o) const;
  TriPoly operator*(const TriPoly& o) const;
  TriPoly scaled(word_t s) const;
  TriPoly pow(unsigned e) const;

  /// Evaluates with unspecified trailing coordinates taken as zero.
  word_t eval(std::span<const word_t> point) const;

  /// Formal partial derivative in characteristic 2.
  TriPoly partial(int var) const;
  TriPoly homogeneous_component(unsigned deg) const;
  /// Multiplies every term by z^(target - term degree); throws DegreeTooSmall.
  TriPoly homogenize(unsigned target_deg) const;
  /// Replaces variable `var` by the constant `value`.
  TriPoly substitute(int var, word_t value) const;
  /// Swaps two variable slots.
  TriPoly swap_vars(int a, int b) const;
  /// Squares every coefficient (the Frobenius twist of the coefficients).
  TriPoly frobenius_coeffs() const;
  /// The polynomial restricted to one variable as a univariate polynomial;
  /// all other variables must be absent.
  UniPoly to_univariate(int var) const;
  static TriPoly from_univariate(const UniPoly& p, int var);

  /// Maps coefficients through `embed`, which must land in `target`.
  template <typename Map>
  TriPoly map_coeffs(FieldPtr target, Map&& embed) const {
    TriPoly r(std::move(target));
    for (const auto& [m, c] : terms_) r.add_term(m, embed(c));
    return r;
  }

  bool operator==(const TriPoly& o) const;

  /// `coeff*x0^i*x1^j*x2^k*z^l` terms joined by " + ", coefficients in hex,
  /// highest term first; "0" for the zero polynomial.
  std::string to_string() const;
  static TriPoly parse(FieldPtr field, const std::string& text);

 private:
  FieldPtr field_;
  TermMap terms_;
};

/// Multivariate division under graded lex. Throws NotDivisibleError carrying
/// the remainder when `den` does not divide `num` exactly.
TriPoly tp_exact_divide(const TriPoly& num, const TriPoly& den);

class NotDivisibleError : public Error {
 public:
  NotDivisibleError(TriPoly remainder)
      : Error(ErrorCode::NotDivisible, "nonzero remainder " + remainder.to_string()),
        remainder_(std::move(remainder)) {}
  const TriPoly& remainder() const noexcept { return remainder_; }

 private:
  TriPoly remainder_;
};

/// (x0 + x1)(x1 + x2)(x0 + x2).
TriPoly triple_product(const FieldPtr& field);

/// Bit-disjoint exponent triples (a, b, c) with a + b + c = r: the support of
/// (x0 + x1 + x2)^r over F_2.
std::vector<std::array<unsigned, 3>> trinomial_support(unsigned r);

}  // namespace apn
