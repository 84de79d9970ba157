#pragma once

// Arithmetic in the binary field F_{2^m}, 1 <= m <= 32, polynomial basis.
//
// Elements are plain bit vectors (bit i = coefficient of x^i) held in a
// std::uint32_t. A Field owns its reduction polynomial and, for m <= 16,
// log/antilog tables; it is immutable after construction and shared through
// FieldPtr. FieldElement is the checked value type for API use; the kernels
// work on raw words through the Field member functions.

#include <cstdint>
#include <memory>
#include <optional>
#include <ranges>
#include <string>
#include <vector>

#include "apn/error.hpp"

namespace apn {

using word_t = std::uint32_t;

/// True iff `poly` (bit i = coefficient of x^i) is irreducible over F_2.
bool is_irreducible_gf2(std::uint64_t poly);

/// Degree of a binary polynomial given as a bit mask; -1 for zero.
int gf2_degree(std::uint64_t poly) noexcept;

/// Smallest irreducible polynomial of degree m with nonzero constant term.
std::uint64_t default_modulus(unsigned m);

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  static constexpr unsigned kMaxDegree = 32;
  static constexpr unsigned kTableDegree = 16;

  /// Validates the modulus (degree m, irreducible); default modulus when absent.
  static FieldPtr create(unsigned m, std::optional<std::uint64_t> modulus = std::nullopt);
  /// Shared instance with the default modulus, built once per m.
  static FieldPtr standard(unsigned m);

  unsigned m() const noexcept { return m_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << m_; }
  word_t mask() const noexcept { return static_cast<word_t>(size() - 1); }
  bool has_tables() const noexcept { return !exp_.empty(); }

  bool contains(word_t a) const noexcept { return (std::uint64_t{a} >> m_) == 0; }

  static word_t add(word_t a, word_t b) noexcept { return a ^ b; }

  word_t mul(word_t a, word_t b) const noexcept {
    if (a == 0 || b == 0) return 0;
    if (has_tables()) return exp_[log_[a] + log_[b]];
    return mul_clmul(a, b);
  }

  word_t sqr(word_t a) const noexcept { return mul(a, a); }
  word_t frobenius(word_t a) const noexcept { return sqr(a); }

  /// Multiplicative inverse; throws DivisionByZero on 0.
  word_t inv(word_t a) const;
  word_t div(word_t a, word_t b) const { return mul(a, inv(b)); }
  word_t pow(word_t a, std::uint64_t e) const noexcept;

  /// Absolute trace Tr(a) = a + a^2 + ... + a^(2^(m-1)) in {0, 1}.
  unsigned trace(word_t a) const noexcept {
    return static_cast<unsigned>(__builtin_parity(a & trace_mask_));
  }

  /// Square root (the inverse Frobenius).
  word_t sqrt(word_t a) const noexcept { return pow(a, size() / 2); }

  /// A generator of the multiplicative group (smallest by value).
  word_t generator() const noexcept { return generator_; }

  /// All q elements in ascending value order.
  auto elements() const { return std::views::iota(std::uint64_t{0}, size()); }

  std::string describe() const;

  bool same_as(const Field& other) const noexcept {
    return m_ == other.m_ && modulus_ == other.modulus_;
  }

  Field(unsigned m, std::uint64_t modulus);  // use create()

 private:
  word_t mul_clmul(word_t a, word_t b) const noexcept;
  word_t find_generator() const;

  unsigned m_;
  std::uint64_t modulus_;
  word_t trace_mask_ = 0;
  word_t generator_ = 1;
  std::vector<word_t> exp_;  // size 2(q-1)
  std::vector<std::uint32_t> log_;
};

/// Throws FieldMismatch unless both fields are the same F_{2^m} presentation.
void require_same_field(const Field& a, const Field& b);

/// Checked element: a bit vector together with the field it lives in.
class FieldElement {
 public:
  FieldElement(FieldPtr field, word_t value);

  static FieldElement zero(FieldPtr field) { return {std::move(field), 0}; }
  static FieldElement one(FieldPtr field) { return {std::move(field), 1}; }

  word_t value() const noexcept { return value_; }
  const FieldPtr& field() const noexcept { return field_; }
  bool is_zero() const noexcept { return value_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement inv() const;
  FieldElement pow(std::uint64_t e) const;
  FieldElement frobenius() const;
  unsigned trace() const;

  bool operator==(const FieldElement& o) const;

 private:
  FieldPtr field_;
  word_t value_;
};

}  // namespace apn
