#pragma once

// Bivariate algebra over F_{2^k}: gcd, resultant, squarefreeness and
// factorization of plane curves given as TriPoly with at most two variables.

#include <utility>
#include <vector>

#include "apn/tripoly.hpp"
#include "apn/unipoly.hpp"

namespace apn {

/// Dense p(u, v) = sum_i rows[i](v) u^i.
class BiPoly {
 public:
  explicit BiPoly(FieldPtr field) : field_(std::move(field)) {}
  BiPoly(FieldPtr field, std::vector<UniPoly> rows);

  static BiPoly constant(FieldPtr field, word_t c);
  static BiPoly from_tri(const TriPoly& p, int u_var, int v_var);
  TriPoly to_tri(int u_var, int v_var) const;

  const FieldPtr& field() const noexcept { return field_; }
  bool is_zero() const noexcept { return rows_.empty(); }
  bool is_constant() const noexcept { return rows_.empty() || (rows_.size() == 1 && rows_[0].degree() <= 0); }
  int deg_u() const noexcept { return static_cast<int>(rows_.size()) - 1; }
  int deg_v() const noexcept;
  int total_degree() const noexcept;
  const std::vector<UniPoly>& rows() const noexcept { return rows_; }
  UniPoly row(std::size_t i) const { return i < rows_.size() ? rows_[i] : UniPoly(field_); }
  word_t coeff(std::size_t i, std::size_t j) const noexcept {
    return i < rows_.size() ? rows_[i].coeff(j) : 0;
  }

  BiPoly operator+(const BiPoly& o) const;
  BiPoly operator*(const BiPoly& o) const;
  BiPoly scaled(word_t s) const;
  /// Product with every coefficient polynomial truncated below v^prec.
  BiPoly mul_trunc(const BiPoly& o, std::size_t prec) const;
  BiPoly partial_u() const;
  BiPoly partial_v() const;
  /// p(u, v0) as a polynomial in u.
  UniPoly eval_v(word_t v0) const;
  /// p(u0, v) as a polynomial in v.
  UniPoly eval_u(word_t u0) const;
  /// p(v, u).
  BiPoly swapped() const;
  /// p(u, v + c0 + c u).
  BiPoly shear(word_t c, word_t c0) const;
  /// All exponents even: the polynomial whose square is p.
  BiPoly sqrt() const;

  template <typename Map>
  BiPoly map_coeffs(FieldPtr target, Map&& embed) const {
    std::vector<UniPoly> r;
    r.reserve(rows_.size());
    for (const auto& row : rows_) {
      std::vector<word_t> c(row.coeffs().size());
      for (std::size_t j = 0; j < c.size(); ++j) c[j] = embed(row.coeffs()[j]);
      r.emplace_back(target, std::move(c));
    }
    return BiPoly(std::move(target), std::move(r));
  }

  bool operator==(const BiPoly& o) const;

 private:
  void trim();

  FieldPtr field_;
  std::vector<UniPoly> rows_;
};

/// The two variable slots a bivariate TriPoly lives in (ascending).
std::pair<int, int> bivariate_vars(const TriPoly& p, const TriPoly& q);

/// Gcd normalized to leading coefficient 1; gcd(p, 0) = p normalized.
TriPoly bi_gcd(const TriPoly& p, const TriPoly& q);

/// Res over the eliminated variable, as a polynomial in the remaining one.
UniPoly bi_resultant(const TriPoly& p, const TriPoly& q, int eliminated_var);
/// Same value from a fraction-free determinant of the Sylvester matrix;
/// slow, kept as a reference for testing.
UniPoly bi_resultant_sylvester(const TriPoly& p, const TriPoly& q, int eliminated_var);

bool bi_squarefree(const TriPoly& p);

struct BiFactor {
  TriPoly poly;  // leading coefficient 1 under graded lex
  unsigned multiplicity;
};

struct BiFactorization {
  word_t unit = 0;
  std::vector<BiFactor> factors;
};

struct BiFactorOptions {
  unsigned degree_cap = 32;
  /// When the base field has no usable evaluation point, factor over an
  /// extension and collect Galois orbits; otherwise throw NoGoodEvaluationPoint.
  bool allow_extension = true;
};

/// Factorization into irreducibles over the coefficient field.
BiFactorization bi_factor(const TriPoly& p, const BiFactorOptions& opts = {});

/// Univariate resultant with formal degrees n >= deg a and m >= deg b.
word_t uni_resultant(const UniPoly& a, int n, const UniPoly& b, int m);

}  // namespace apn
