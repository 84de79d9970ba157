#pragma once

// Exact point-count bounds for the quotient surface and the degree/field-size
// exclusion inequalities derived from them. All comparisons are done in
// integers; a single square root is cleared by squaring with sign analysis.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace apn {

using BigInt = boost::multiprecision::cpp_int;

/// rational + coeff * sqrt(radicand), all integers.
struct Surd {
  BigInt rational = 0;
  BigInt coeff = 0;
  BigInt radicand = 0;

  double approx() const;
  std::string to_string() const;
};

/// a > c * sqrt(n) exactly, for c >= 0 and n >= 0.
bool exceeds_sqrt(const BigInt& a, const BigInt& c, const BigInt& n);

struct BoundReport {
  unsigned d = 0, m = 0;
  BigInt q;
  Surd lw_bound;       // (d-4)(d-5) q^(3/2) + 18 d^4 q
  Surd deligne_bound;  // (d-4)(d-5) q^(3/2) + (d^3 - 13d^2 + 57d - 82) q
  BigInt threshold;    // 4((d-3) q + 1)
  bool excluded_41 = false;
  bool excluded_42 = false;
  std::string form_used = "exact";
};

/// q - (d-4)(d-5) q^(1/2) - 18 d^4 - 4d + 13 - 3/q > 0. Requires d >= 5.
bool thm41_excludes(unsigned d, unsigned m);
/// q - (d-4)(d-5) q^(1/2) - d^3 + 13 d^2 - 61 d + 95 - 2/q > 0. Requires d >= 5.
bool thm42_excludes(unsigned d, unsigned m);

BoundReport bound_report(unsigned d, unsigned m);

enum class MmaxKind { Irreducible, IsolatedSingularities };
enum class BoundForm { Exact, Polynomial, QuarterPower };

const char* to_string(MmaxKind k) noexcept;
const char* to_string(BoundForm f) noexcept;
std::optional<MmaxKind> parse_kind(const std::string& s) noexcept;

/// Whether the given condition form excludes (d, m); nullopt when the form's
/// side condition on d fails.
///   Irreducible:  polynomial q^(1/2) > 13.51 - 5d + 4.773 d^2 (d >= 2),
///                 quarter power d < 0.45 q^(1/4) + 0.5 (d >= 9).
///   Isolated:     polynomial q > d^4 - 16d^3 + 94d^2 - 228d + 173 (d >= 6),
///                 quarter power d < q^(1/4) + 4 (d >= 10).
std::optional<bool> form_excludes(MmaxKind kind, BoundForm form, unsigned d, unsigned m);

inline constexpr unsigned kMaxTableM = 128;

/// Largest m <= kMaxTableM the form does not exclude (0 if it excludes all);
/// nullopt when the form does not apply at d.
std::optional<unsigned> m_max(MmaxKind kind, BoundForm form, unsigned d);

struct MmaxRow {
  unsigned d_max = 0;
  unsigned expected = 0;  // reference value
  unsigned m_max = 0;     // computed with `form`, or with the exact form on a mismatch
  std::optional<BoundForm> form;  // first form reproducing `expected`
  std::array<std::optional<unsigned>, 3> per_form;  // Exact, Polynomial, QuarterPower
  bool matches() const noexcept { return form.has_value(); }
  bool flagged() const noexcept { return !form || *form != BoundForm::Exact; }
};

struct MmaxTable {
  MmaxKind kind;
  std::vector<MmaxRow> rows;
};

/// Reference (d_max, m_max) rows of the two published tables.
const std::vector<std::pair<unsigned, unsigned>>& reference_mmax(MmaxKind kind);

MmaxTable mmax_table(MmaxKind kind);

/// curve_degree * q + 1.
BigInt serre_bound(unsigned curve_degree, const BigInt& q);
/// q + 1 - floor(2 sqrt(q)): the least integer allowed by the Weil interval.
BigInt hasse_weil_min(const BigInt& q);
/// q + 1 - 2 g sqrt(q) > cap.
bool weil_exclusion(unsigned genus, const BigInt& cap, const BigInt& q);
/// An irreducible plane curve of degree D with all its rational points on four
/// lines: q + 1 - (D-1)(D-2) sqrt(q) > 4D. Requires D >= 3.
bool curve_exclusion(unsigned D, const BigInt& q);

/// Smallest m in [1, limit] from which pred(2^m) holds for every larger m up
/// to limit; nullopt if pred(2^limit) fails.
template <typename Pred>
std::optional<unsigned> first_excluded_m(Pred&& pred, unsigned limit = kMaxTableM) {
  if (!pred(BigInt(1) << limit)) return std::nullopt;
  unsigned m = limit;
  while (m > 1 && pred(BigInt(1) << (m - 1))) --m;
  return m;
}

}  // namespace apn
