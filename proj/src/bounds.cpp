#include "apn/bounds.hpp"

#include <cmath>
#include <sstream>

#include <boost/multiprecision/integer.hpp>

#include "apn/error.hpp"

namespace apn {

namespace {

BigInt pow2(unsigned m) { return BigInt(1) << m; }

void require_d(unsigned d) {
  if (d < 5) throw Error(ErrorCode::InvalidParameters, "bounds need d >= 5");
  if (d > 1000000) throw Error(ErrorCode::DegreeOutOfRange, "degree too large");
}

BigInt B(unsigned d) { return BigInt(d - 4) * BigInt(d - 5); }

// Multiplied through by q: q^2 + lin*q + cst > (d-4)(d-5) q^(3/2).
bool surface_inequality(unsigned d, unsigned m, const BigInt& lin, int cst) {
  const BigInt q = pow2(m);
  return exceeds_sqrt(q * q + lin * q + cst, B(d) * q, q);
}

}  // namespace

double Surd::approx() const {
  return rational.convert_to<double>() + coeff.convert_to<double>() * std::sqrt(radicand.convert_to<double>());
}

std::string Surd::to_string() const {
  std::ostringstream os;
  os << rational;
  if (coeff != 0) os << " + " << coeff << "*sqrt(" << radicand << ")";
  return os.str();
}

bool exceeds_sqrt(const BigInt& a, const BigInt& c, const BigInt& n) {
  if (c < 0 || n < 0) throw Error(ErrorCode::InvalidParameters, "exceeds_sqrt needs c, n >= 0");
  if (c == 0 || n == 0) return a > 0;
  if (a <= 0) return false;
  return a * a > c * c * n;
}

bool thm41_excludes(unsigned d, unsigned m) {
  require_d(d);
  const BigInt D = d;
  return surface_inequality(d, m, -18 * D * D * D * D - 4 * D + 13, -3);
}

bool thm42_excludes(unsigned d, unsigned m) {
  require_d(d);
  const BigInt D = d;
  return surface_inequality(d, m, -D * D * D + 13 * D * D - 61 * D + 95, -2);
}

BoundReport bound_report(unsigned d, unsigned m) {
  require_d(d);
  BoundReport r;
  r.d = d;
  r.m = m;
  r.q = pow2(m);
  const BigInt D = d;
  r.lw_bound = {18 * D * D * D * D * r.q, B(d) * r.q, r.q};
  r.deligne_bound = {(D * D * D - 13 * D * D + 57 * D - 82) * r.q, B(d) * r.q, r.q};
  r.threshold = 4 * ((D - 3) * r.q + 1);
  r.excluded_41 = thm41_excludes(d, m);
  r.excluded_42 = thm42_excludes(d, m);
  return r;
}

const char* to_string(MmaxKind k) noexcept {
  return k == MmaxKind::Irreducible ? "irreducible" : "isolated";
}

const char* to_string(BoundForm f) noexcept {
  switch (f) {
    case BoundForm::Exact: return "exact";
    case BoundForm::Polynomial: return "polynomial";
    case BoundForm::QuarterPower: return "quarter-power";
  }
  return "?";
}

std::optional<MmaxKind> parse_kind(const std::string& s) noexcept {
  if (s == "irreducible") return MmaxKind::Irreducible;
  if (s == "isolated") return MmaxKind::IsolatedSingularities;
  return std::nullopt;
}

std::optional<bool> form_excludes(MmaxKind kind, BoundForm form, unsigned d, unsigned m) {
  require_d(d);
  const BigInt q = pow2(m), D = d;
  if (form == BoundForm::Exact) return kind == MmaxKind::Irreducible ? thm41_excludes(d, m) : thm42_excludes(d, m);
  if (kind == MmaxKind::Irreducible) {
    if (form == BoundForm::Polynomial) {
      // sqrt(q) > (13510 - 5000 d + 4773 d^2) / 1000
      const BigInt r = 13510 - 5000 * D + 4773 * D * D;
      return r < 0 || q * 1000000 > r * r;
    }
    if (d < 9) return std::nullopt;
    // d < 0.45 q^(1/4) + 0.5  <=>  (20d - 10)^4 < 9^4 q
    const BigInt l = 20 * D - 10;
    return l * l * l * l < 6561 * q;
  }
  if (form == BoundForm::Polynomial) {
    if (d < 6) return std::nullopt;
    return q > D * D * D * D - 16 * D * D * D + 94 * D * D - 228 * D + 173;
  }
  if (d < 10) return std::nullopt;
  const BigInt l = D - 4;
  return l * l * l * l < q;
}

std::optional<unsigned> m_max(MmaxKind kind, BoundForm form, unsigned d) {
  for (unsigned m = kMaxTableM; m >= 1; --m) {
    const auto ex = form_excludes(kind, form, d, m);
    if (!ex) return std::nullopt;
    if (!*ex) return m;
  }
  return 0;
}

const std::vector<std::pair<unsigned, unsigned>>& reference_mmax(MmaxKind kind) {
  static const std::vector<std::pair<unsigned, unsigned>> irreducible{
      {7, 15},  {9, 16},  {10, 17}, {12, 18}, {15, 19}, {17, 20}, {21, 21}, {23, 22},
      {29, 23}, {36, 24}, {41, 25}, {49, 26}, {50, 27}, {70, 28}, {83, 29}};
  static const std::vector<std::pair<unsigned, unsigned>> isolated{
      {7, 6},   {9, 9},   {10, 10}, {12, 11}, {13, 12}, {15, 13}, {17, 14}, {20, 15},
      {23, 16}, {26, 17}, {30, 18}, {36, 19}, {42, 20}, {49, 21}, {57, 22}};
  return kind == MmaxKind::Irreducible ? irreducible : isolated;
}

MmaxTable mmax_table(MmaxKind kind) {
  MmaxTable t{kind, {}};
  for (const auto& [d, expected] : reference_mmax(kind)) {
    MmaxRow row;
    row.d_max = d;
    row.expected = expected;
    const BoundForm forms[] = {BoundForm::Exact, BoundForm::Polynomial, BoundForm::QuarterPower};
    for (int i = 0; i < 3; ++i) {
      row.per_form[i] = m_max(kind, forms[i], d);
      if (!row.form && row.per_form[i] == expected) row.form = forms[i];
    }
    row.m_max = row.form ? expected : *row.per_form[0];
    t.rows.push_back(row);
  }
  return t;
}

BigInt serre_bound(unsigned curve_degree, const BigInt& q) { return BigInt(curve_degree) * q + 1; }

BigInt hasse_weil_min(const BigInt& q) {
  if (q < 0) throw Error(ErrorCode::InvalidParameters, "negative q");
  const BigInt four_q = 4 * q;
  return q + 1 - BigInt(boost::multiprecision::sqrt(four_q));
}

bool weil_exclusion(unsigned genus, const BigInt& cap, const BigInt& q) {
  return exceeds_sqrt(q + 1 - cap, 2 * BigInt(genus), q);
}

bool curve_exclusion(unsigned D, const BigInt& q) {
  if (D < 3) throw Error(ErrorCode::InvalidParameters, "curve exclusion needs D >= 3");
  return exceeds_sqrt(q + 1 - 4 * BigInt(D), BigInt(D - 1) * BigInt(D - 2), q);
}

}  // namespace apn
