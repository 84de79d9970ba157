#include "apn/sigma.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>

namespace apn {

namespace {

Monomial mono(unsigned a, unsigned b, unsigned c, unsigned z = 0) {
  Monomial m;
  m.e = {static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b), static_cast<std::uint16_t>(c),
         static_cast<std::uint16_t>(z)};
  return m;
}

// f(x0) + f(x1) + f(x2) + f(x0 + x1 + x2) expanded term by term.
TriPoly sigma_numerator(const FieldPtr& field, const PolyFunc::Terms& terms) {
  TriPoly num(field);
  for (const auto& [e, c] : terms) {
    for (const auto& t : trinomial_support(static_cast<unsigned>(e))) {
      const int nonzero = (t[0] != 0) + (t[1] != 0) + (t[2] != 0);
      if (nonzero >= 2) num.add_term(mono(t[0], t[1], t[2]), c);
    }
  }
  return num;
}

struct FlatTerm {
  unsigned i, j, k;
  word_t c;
};

struct FlatTri {
  unsigned deg = 0;
  std::vector<FlatTerm> terms;

  explicit FlatTri(const TriPoly& p) {
    const int td = p.total_degree();
    deg = td < 0 ? 0 : static_cast<unsigned>(td);
    for (const auto& [m, v] : p.terms()) terms.push_back({m.e[0], m.e[1], m.e[2], v});
  }
};

std::vector<word_t> power_table(const Field& F, unsigned deg) {
  const std::uint64_t q = F.size();
  std::vector<word_t> pw(q * (deg + 1));
  for (std::uint64_t x = 0; x < q; ++x) {
    word_t acc = 1;
    for (unsigned e = 0; e <= deg; ++e) {
      pw[x * (deg + 1) + e] = acc;
      acc = F.mul(acc, static_cast<word_t>(x));
    }
  }
  return pw;
}

struct Tally {
  std::uint64_t on = 0, off = 0;
};

// Zeros of phi with x0 fixed, split by whether two coordinates coincide.
Tally scan_slice(const Field& F, const FlatTri& P, const std::vector<word_t>& pw, word_t x0,
                 std::vector<word_t>& cjk, std::vector<word_t>& ck) {
  const std::uint64_t q = F.size();
  const std::size_t n = P.deg + 1;
  const word_t* p0 = &pw[std::size_t{x0} * n];
  std::fill(cjk.begin(), cjk.end(), 0);
  for (const auto& t : P.terms) cjk[t.j * n + t.k] ^= F.mul(t.c, p0[t.i]);
  Tally t;
  for (std::uint64_t x1 = 0; x1 < q; ++x1) {
    const word_t* p1 = &pw[x1 * n];
    for (std::size_t k = 0; k < n; ++k) {
      word_t acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc ^= F.mul(cjk[j * n + k], p1[j]);
      ck[k] = acc;
    }
    for (std::uint64_t x2 = 0; x2 < q; ++x2) {
      word_t v = 0;
      for (std::size_t k = n; k-- > 0;) v = F.mul(v, static_cast<word_t>(x2)) ^ ck[k];
      if (v != 0) continue;
      const bool on = x0 == x1 || x1 == x2 || x0 == x2;
      (on ? t.on : t.off) += 1;
    }
  }
  return t;
}

// Projective zeros of a homogeneous curve in x0, x1, x2 over F_q.
std::uint64_t projective_curve_zeros(const Field& F, const TriPoly& curve) {
  if (curve.is_zero()) return F.size() * F.size() + F.size() + 1;
  if (curve.is_constant()) return 0;
  const std::uint64_t q = F.size();
  std::uint64_t n = 0;
  std::array<word_t, 3> pt{};
  for (std::uint64_t a = 0; a < q; ++a) {
    for (std::uint64_t b = 0; b < q; ++b) {
      pt = {static_cast<word_t>(a), static_cast<word_t>(b), 1};
      n += curve.eval(pt) == 0;
    }
    pt = {static_cast<word_t>(a), 1, 0};
    n += curve.eval(pt) == 0;
  }
  pt = {1, 0, 0};
  n += curve.eval(pt) == 0;
  return n;
}

void check_budget(const SigmaSurface& s, const CountOptions& opts) {
  const unsigned m = s.phi.field()->m();
  if (m > opts.max_m) {
    throw Error(ErrorCode::BudgetExceeded, "point scan over F_2^" + std::to_string(m) + " exceeds the cap m <= " +
                                               std::to_string(opts.max_m));
  }
}

PointCount finish(const SigmaSurface& s, std::uint64_t on, std::uint64_t off) {
  PointCount pc;
  pc.affine_on_triple_locus = on;
  pc.affine_off_locus = off;
  pc.affine_total = on + off;
  pc.infinity_points = projective_curve_zeros(*s.phi.field(), s.phi.homogeneous_component(s.d - 3));
  pc.projective_total = pc.affine_total + pc.infinity_points;
  return pc;
}

}  // namespace

SigmaSurface build_sigma(const PolyFunc& f) {
  PolyFunc g = f;
  try {
    g = normalize(f);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BecameZero) throw;
    throw Error(ErrorCode::QAffineInput, "f is q-affine, the quotient vanishes");
  }
  const auto d = static_cast<std::uint64_t>(g.degree());
  if (d < 3 || d > std::numeric_limits<std::uint16_t>::max() || d >= g.field()->size()) {
    throw Error(ErrorCode::DegreeOutOfRange, "degree " + std::to_string(d) + " out of range");
  }
  const TriPoly num = sigma_numerator(g.field(), g.terms());
  TriPoly phi = tp_exact_divide(num, triple_product(g.field()));
  if (phi.is_zero()) throw Error(ErrorCode::QAffineInput, "quotient is zero");
  SigmaSurface s{phi, phi.homogenize(static_cast<unsigned>(d - 3)), g, static_cast<unsigned>(d)};
  return s;
}

TriPoly infinity_curve(unsigned d, const FieldPtr& field) {
  if (d < 3) throw Error(ErrorCode::DegreeOutOfRange, "infinity curve needs d >= 3");
  const TriPoly num = sigma_numerator(field, {{d, 1}});
  return tp_exact_divide(num, triple_product(field));
}

TriPoly section_xa(const PolyFunc& f, word_t a) {
  const SigmaSurface s = build_sigma(f);
  if (!s.phi.field()->contains(a)) throw Error(ErrorCode::FieldMismatch, "a is not in the field");
  return s.phi.substitute(2, a);
}

TriPoly voloch_curve(const PolyFunc& f) {
  const PolyFunc g = normalize(f);
  if (g.degree() < 3) throw Error(ErrorCode::DegreeOutOfRange, "degree below 3");
  const FieldPtr& field = g.field();
  TriPoly num(field);
  for (const auto& [e, c] : g.terms()) {
    const auto E = static_cast<unsigned>(e);
    for (unsigned s = (E - 1) & E;; s = (s - 1) & E) {
      num.add_term(mono(s, 0, E - s), c);
      num.add_term(mono(0, s, E - s), c);
      if (s == 0) break;
    }
  }
  const TriPoly x0 = TriPoly::var(field, 0), x1 = TriPoly::var(field, 1), a = TriPoly::var(field, 2);
  return tp_exact_divide(num, (x0 + x1) * (x0 + x1 + a));
}

PointCount count_points(const SigmaSurface& s, const CountOptions& opts) {
  check_budget(s, opts);
  const Field& F = *s.phi.field();
  const FlatTri P(s.phi);
  const auto pw = power_table(F, P.deg);
  const std::size_t n = P.deg + 1;
  const auto q = static_cast<std::int64_t>(F.size());
  std::uint64_t on = 0, off = 0;
#pragma omp parallel reduction(+ : on, off)
  {
    std::vector<word_t> cjk(n * n), ck(n);
#pragma omp for schedule(dynamic)
    for (std::int64_t x0 = 0; x0 < q; ++x0) {
      const Tally t = scan_slice(F, P, pw, static_cast<word_t>(x0), cjk, ck);
      on += t.on;
      off += t.off;
    }
  }
  return finish(s, on, off);
}

PointCount count_points_serial(const SigmaSurface& s, const CountOptions& opts) {
  check_budget(s, opts);
  const Field& F = *s.phi.field();
  const FlatTri P(s.phi);
  const auto pw = power_table(F, P.deg);
  const std::size_t n = P.deg + 1;
  std::vector<word_t> cjk(n * n), ck(n);
  std::uint64_t on = 0, off = 0;
  for (std::uint64_t x0 = 0; x0 < F.size(); ++x0) {
    const Tally t = scan_slice(F, P, pw, static_cast<word_t>(x0), cjk, ck);
    on += t.on;
    off += t.off;
  }
  return finish(s, on, off);
}

bool apn_via_surface(const PolyFunc& f, const CountOptions& opts) {
  SigmaSurface s{TriPoly(f.field()), TriPoly(f.field()), f, 0};
  try {
    s = build_sigma(f);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::QAffineInput) throw;
    // phi vanishes identically, so every triple of distinct points is a zero.
    return f.field()->size() <= 2;
  }
  return count_points(s, opts).affine_off_locus == 0;
}

bool lemma41_check(const PolyFunc& f) {
  const SigmaSurface s = build_sigma(f);
  const FieldPtr& field = s.phi.field();
  try {
    tp_exact_divide(s.phi.partial(0), TriPoly::var(field, 1) + TriPoly::var(field, 2));
  } catch (const NotDivisibleError&) {
    return false;
  }
  return true;
}

DiagonalNotConstantError::DiagonalNotConstantError(UniPoly diagonal, std::vector<word_t> roots)
    : Error(ErrorCode::DiagonalNotConstant, "phi(u,u,u) = " + diagonal.to_string("u")),
      diagonal_(std::move(diagonal)),
      roots_(std::move(roots)) {}

bool singular_at_infinity_diagonal(const PolyFunc& f) {
  const SigmaSurface s = build_sigma(f);
  if (s.d < 5) throw Error(ErrorCode::DegreeOutOfRange, "needs d >= 5");
  const FieldPtr& field = s.phi.field();
  std::vector<word_t> diag(s.d - 2, 0);
  for (const auto& [m, c] : s.phi.terms()) diag[m.e[0] + m.e[1] + m.e[2]] ^= c;
  const UniPoly g(field, diag);
  if (g.degree() > 0) throw DiagonalNotConstantError(g, roots(g));
  const word_t a0 = g.coeff(0);

  const std::array<word_t, 4> at{1, 1, 1, 0};
  for (int v = 0; v < kTriVars; ++v) {
    if (s.phi_proj.partial(v).eval(at) != 0) return false;
  }
  // dPhi/dz on the line x0 = x1 = x2 = 1.
  TriPoly dz = s.phi_proj.partial(kZ);
  for (int v = 0; v < 3; ++v) dz = dz.substitute(v, 1);
  const UniPoly lhs = dz.to_univariate(kZ);
  const UniPoly rhs = (s.d - 3) % 2 == 0 ? UniPoly(field) : UniPoly::monomial(field, a0, s.d - 4);
  return lhs == rhs;
}

}  // namespace apn
