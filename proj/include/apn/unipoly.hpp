#pragma once

// Dense univariate polynomials over F_{2^k} and their factorization.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apn/gf2m.hpp"

namespace apn {

class UniPoly {
 public:
  explicit UniPoly(FieldPtr field) : field_(std::move(field)) {}
  UniPoly(FieldPtr field, std::vector<word_t> coeffs);

  static UniPoly constant(FieldPtr field, word_t c);
  static UniPoly monomial(FieldPtr field, word_t c, std::size_t deg);
  static UniPoly x(FieldPtr field) { return monomial(std::move(field), 1, 1); }

  const FieldPtr& field() const noexcept { return field_; }

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_constant() const noexcept { return c_.size() <= 1; }
  bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }

  word_t coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
  word_t lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
  std::span<const word_t> coeffs() const noexcept { return c_; }
  void set_coeff(std::size_t i, word_t value);

  UniPoly& operator+=(const UniPoly& o);
  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scaled(word_t s) const;
  UniPoly monic() const;
  UniPoly derivative() const;
  /// p(x) * x^k.
  UniPoly shifted(std::size_t k) const;
  /// Keeps the coefficients of x^0 .. x^(n-1).
  UniPoly truncated(std::size_t n) const;

  word_t eval(word_t at) const noexcept;

  bool operator==(const UniPoly& o) const;

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim() noexcept;

  FieldPtr field_;
  std::vector<word_t> c_;
};

struct UniDivMod {
  UniPoly quot;
  UniPoly rem;
};

UniDivMod divmod(const UniPoly& a, const UniPoly& b);
UniPoly operator%(const UniPoly& a, const UniPoly& b);
/// Exact quotient; throws NotDivisible when the remainder is nonzero.
UniPoly exact_div(const UniPoly& a, const UniPoly& b);

/// Monic gcd; gcd(0, 0) = 0.
UniPoly gcd(const UniPoly& a, const UniPoly& b);

struct UniExtGcd {
  UniPoly g;  // monic
  UniPoly s;
  UniPoly t;  // s*a + t*b = g
};
UniExtGcd ext_gcd(const UniPoly& a, const UniPoly& b);

UniPoly mulmod(const UniPoly& a, const UniPoly& b, const UniPoly& m);
UniPoly powmod(const UniPoly& a, std::uint64_t e, const UniPoly& m);
/// a^(2^k) mod m by k squarings.
UniPoly frobenius_mod(const UniPoly& a, unsigned k, const UniPoly& m);

struct UniFactor {
  UniPoly poly;  // monic irreducible
  unsigned multiplicity;
};

struct UniFactorization {
  word_t unit = 0;
  std::vector<UniFactor> factors;
};

/// Squarefree, distinct-degree and randomized equal-degree factorization.
/// Factors are sorted by (degree, coefficients) for a seed-independent order.
UniFactorization uni_factor(const UniPoly& p, std::uint64_t seed = 0);

bool is_squarefree(const UniPoly& p);
bool is_irreducible(const UniPoly& p);

/// Distinct roots in the coefficient field, ascending.
std::vector<word_t> roots(const UniPoly& p, std::uint64_t seed = 0);

/// Ring embedding F_{2^k} -> F_{2^n} for k | n, fixed by the smallest root
/// of the source modulus in the target.
class FieldEmbedding {
 public:
  FieldEmbedding(FieldPtr from, FieldPtr to);

  word_t operator()(word_t a) const noexcept;
  UniPoly operator()(const UniPoly& p) const;
  /// Inverse image of an element of the subfield; nullopt when `b` lies outside it.
  std::optional<word_t> preimage(word_t b) const noexcept;

  const FieldPtr& from() const noexcept { return from_; }
  const FieldPtr& to() const noexcept { return to_; }

 private:
  FieldPtr from_;
  FieldPtr to_;
  std::vector<word_t> basis_image_;  // images of x^i, i < k
  // Echelon form of the images, each row paired with the source bits it combines.
  std::vector<std::pair<word_t, word_t>> echelon_;
};

}  // namespace apn
