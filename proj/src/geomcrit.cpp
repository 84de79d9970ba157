#include "apn/geomcrit.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "apn/bivariate.hpp"
#include "apn/sigma.hpp"

namespace apn {

const char* to_string(CriterionStatus s) noexcept {
  switch (s) {
    case CriterionStatus::Established: return "Established";
    case CriterionStatus::Unknown: return "Unknown";
    case CriterionStatus::Refuted: return "Refuted";
  }
  return "?";
}

std::string ProjectivePoint::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < 3; ++i) {
    if (i) os << ':';
    if (coords[i] <= 1) {
      os << coords[i];
    } else {
      os << "0x" << std::hex << coords[i] << std::dec;
    }
  }
  os << ')';
  if (field->m() > 1) os << " over F_2^" << field->m();
  return os.str();
}

bool ProjectivePoint::operator==(const ProjectivePoint& o) const {
  return field->same_as(*o.field) && coords == o.coords;
}

namespace {

CriterionVerdict verdict(CriterionStatus s, std::string rule, std::string detail = {}) {
  CriterionVerdict v;
  v.status = s;
  v.rule = std::move(rule);
  v.detail = std::move(detail);
  return v;
}

bool is_pow2_or_one(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

unsigned x2_order(const TriPoly& c) {
  unsigned o = ~0U;
  for (const auto& [m, v] : c.terms()) o = std::min<unsigned>(o, m.e[2]);
  return c.is_zero() ? 0 : o;
}

TriPoly strip_x2(const TriPoly& c, unsigned k) {
  TriPoly r(c.field());
  for (const auto& [m0, v] : c.terms()) {
    Monomial m = m0;
    m.e[2] = static_cast<std::uint16_t>(m.e[2] - k);
    r.add_term(m, v);
  }
  return r;
}

void require_plane_curve(const TriPoly& c) {
  if ((c.used_vars() & ~0b111U) != 0) throw Error(ErrorCode::InvalidParameters, "curve must live in x0, x1, x2");
  if (!c.is_homogeneous()) throw Error(ErrorCode::InvalidParameters, "curve must be homogeneous");
}

bool homogeneous_squarefree(const TriPoly& c) {
  if (x2_order(c) > 1) return false;
  return bi_squarefree(c.substitute(2, 1));
}

// Cached embeddings between the standard fields used by the solvers.
class Embeddings {
 public:
  const FieldEmbedding& get(const FieldPtr& from, const FieldPtr& to) {
    const auto key = std::make_pair(from.get(), to.get());
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, FieldEmbedding(from, to)).first;
    return it->second;
  }

 private:
  std::map<std::pair<const Field*, const Field*>, FieldEmbedding> cache_;
};

FieldPtr extension(unsigned n) {
  if (n > Field::kMaxDegree) {
    throw Error(ErrorCode::ExtensionTooLarge, "singular point needs F_2^" + std::to_string(n));
  }
  return Field::standard(n);
}

}  // namespace

unsigned order_of_two(unsigned l) {
  if (l < 3 || l % 2 == 0) throw Error(ErrorCode::InvalidParameters, "order of 2 needs odd l > 1");
  unsigned k = 1;
  std::uint64_t p = 2 % l;
  while (p != 1) {
    p = p * 2 % l;
    ++k;
  }
  return k;
}

CriterionVerdict jmw_irreducible(unsigned d) {
  if (d < 5) throw Error(ErrorCode::InvalidParameters, "needs d >= 5");
  if (d % 4 == 3) return verdict(CriterionStatus::Established, "jmw", "d = 3 mod 4");
  if (d % 8 == 5 && d > 13) return verdict(CriterionStatus::Established, "jmw", "d = 5 mod 8, d > 13");
  return verdict(CriterionStatus::Unknown, "jmw", "no congruence rule applies");
}

CriterionVerdict jw_smooth(unsigned d) {
  if (d < 5) throw Error(ErrorCode::InvalidParameters, "needs d >= 5");
  if (d % 2 == 0) return verdict(CriterionStatus::Unknown, "jw", "d even");
  const unsigned l = (d - 1) / 2;
  if (l % 2 == 0) return verdict(CriterionStatus::Unknown, "jw", "l = " + std::to_string(l) + " even");
  const unsigned ord = order_of_two(l);
  std::uint64_t p = 1;
  for (unsigned r = 1; r <= ord; ++r) {
    p = p * 2 % l;
    if (p == l - 1) {
      return verdict(CriterionStatus::Established, "jw", "2^" + std::to_string(r) + " = -1 mod " + std::to_string(l));
    }
  }
  if (is_prime(l) && l > 17 && ord == (l - 1) / 2) {
    return verdict(CriterionStatus::Established, "jw",
                   "l = " + std::to_string(l) + " prime, ord_l(2) = " + std::to_string(ord));
  }
  return verdict(CriterionStatus::Unknown, "jw", "l = " + std::to_string(l) + ", ord_l(2) = " + std::to_string(ord));
}

TriPoly homogenize_x2(const TriPoly& p, unsigned target_deg) {
  TriPoly r(p.field());
  for (const auto& [m0, v] : p.terms()) {
    Monomial m = m0;
    if (m.e[2] != 0 || m.e[3] != 0) throw Error(ErrorCode::InvalidParameters, "expected a polynomial in x0, x1");
    if (m.total() > target_deg) throw Error(ErrorCode::DegreeTooSmall, "target degree below the polynomial degree");
    m.e[2] = static_cast<std::uint16_t>(target_deg - m.total());
    r.add_term(m, v);
  }
  return r;
}

CriterionVerdict absolutely_irreducible(const TriPoly& curve, const IrreducibilityOptions& opts) {
  if (curve.is_zero()) throw Error(ErrorCode::InvalidParameters, "zero curve");
  require_plane_curve(curve);
  const unsigned D = static_cast<unsigned>(curve.total_degree());
  if (D > opts.degree_cap) {
    throw Error(ErrorCode::DegreeCapExceeded, "degree " + std::to_string(D) + " above cap " +
                                                  std::to_string(opts.degree_cap));
  }
  if (D == 0) {
    CriterionVerdict v = verdict(CriterionStatus::Refuted, "degenerate", "constant, no curve");
    v.witness_factors.push_back(curve);
    return v;
  }
  if (D == 1) return verdict(CriterionStatus::Established, "linear");
  const FieldPtr& base = curve.field();
  if (const unsigned o = x2_order(curve); o > 0) {
    CriterionVerdict v = verdict(CriterionStatus::Refuted, "factorization", "x2 divides the curve");
    v.witness_factors.push_back(TriPoly::var(base, 2));
    v.witness_factors.push_back(strip_x2(curve, 1));
    return v;
  }
  const TriPoly g = curve.substitute(2, 1);
  const unsigned k = base->m();
  std::vector<unsigned> skipped;
  for (unsigned t = 1; t <= D; ++t) {
    if (D % t != 0) continue;
    if (k * t > opts.max_field_degree) {
      skipped.push_back(t);
      continue;
    }
    TriPoly gt = g;
    FieldPtr ext = base;
    if (t > 1) {
      ext = Field::standard(k * t);
      const FieldEmbedding emb(base, ext);
      gt = g.map_coeffs(ext, [&](word_t c) { return emb(c); });
    }
    const BiFactorization fz = bi_factor(gt, BiFactorOptions{opts.degree_cap, true});
    unsigned count = 0;
    for (const auto& f : fz.factors) count += f.multiplicity;
    if (count > 1) {
      CriterionVerdict v =
          verdict(CriterionStatus::Refuted, "factorization", "splits over F_2^" + std::to_string(k * t));
      for (const auto& f : fz.factors) {
        const TriPoly h = homogenize_x2(f.poly, static_cast<unsigned>(f.poly.total_degree()));
        for (unsigned i = 0; i < f.multiplicity; ++i) v.witness_factors.push_back(h);
      }
      return v;
    }
  }
  if (!skipped.empty()) {
    return verdict(CriterionStatus::Unknown, "factorization",
                   "extension degree " + std::to_string(k * skipped.front()) + " beyond the sweep limit");
  }
  return verdict(CriterionStatus::Established, "factorization",
                 "irreducible over F_q^t for every t dividing " + std::to_string(D));
}

CriterionVerdict absolutely_irreducible_affine(const TriPoly& curve, const IrreducibilityOptions& opts) {
  if (curve.is_zero()) throw Error(ErrorCode::InvalidParameters, "zero curve");
  return absolutely_irreducible(homogenize_x2(curve, static_cast<unsigned>(curve.total_degree())), opts);
}

namespace {

class SingularSolver {
 public:
  SingularSolver(const TriPoly& c) : c_(c), base_(c.field()) {
    for (int i = 0; i < 3; ++i) partials_[i] = c.partial(i);
  }

  std::vector<ProjectivePoint> run() {
    affine_chart();
    line_at_infinity();
    std::sort(out_.begin(), out_.end(), [](const ProjectivePoint& a, const ProjectivePoint& b) {
      if (a.degree() != b.degree()) return a.degree() < b.degree();
      return a.coords < b.coords;
    });
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return out_;
  }

 private:
  UniPoly lift(const UniPoly& p, const FieldPtr& to) {
    if (p.field()->same_as(*to)) return p;
    return emb_.get(p.field(), to)(p);
  }

  word_t lift(word_t a, const FieldPtr& from, const FieldPtr& to) {
    if (from->same_as(*to)) return a;
    return emb_.get(from, to)(a);
  }

  // Gcd of the nonzero polynomials; nullopt if all vanish.
  static std::optional<UniPoly> common(const std::vector<UniPoly>& ps) {
    std::optional<UniPoly> g;
    for (const auto& p : ps) {
      if (p.is_zero()) continue;
      g = g ? gcd(*g, p) : p.monic();
    }
    return g;
  }

  // Roots of p over the algebraic closure, each with the field it was found in.
  std::vector<std::pair<FieldPtr, word_t>> closure_roots(const UniPoly& p) {
    std::vector<std::pair<FieldPtr, word_t>> r;
    if (p.degree() <= 0) return r;
    const unsigned k = p.field()->m();
    for (const auto& f : uni_factor(p).factors) {
      const FieldPtr e = extension(k * static_cast<unsigned>(f.poly.degree()));
      for (word_t x : roots(lift(f.poly, e))) r.emplace_back(e, x);
    }
    return r;
  }

  TriPoly on_field(const TriPoly& p, const FieldPtr& to) {
    if (p.field()->same_as(*to)) return p;
    const auto& e = emb_.get(p.field(), to);
    return p.map_coeffs(to, [&](word_t c) { return e(c); });
  }

  using Equations = std::array<TriPoly, 4>;  // the curve and its three partials

  Equations equations_on(const FieldPtr& e) {
    return {on_field(c_, e), on_field(partials_[0], e), on_field(partials_[1], e), on_field(partials_[2], e)};
  }

  Equations carry(const Equations& eq, const FieldPtr& to) {
    return {on_field(eq[0], to), on_field(eq[1], to), on_field(eq[2], to), on_field(eq[3], to)};
  }

  static bool vanish(const Equations& eq, const std::array<word_t, 3>& pt) {
    return std::all_of(eq.begin(), eq.end(), [&](const TriPoly& p) { return p.eval(pt) == 0; });
  }

  // Canonical scaling in the smallest field that holds the point.
  // `eq` holds the equations over e as carried along the tower that produced pt.
  void emit(const FieldPtr& e, std::array<word_t, 3> pt, const Equations& eq) {
    const Field& F = *e;
    for (int i = 0; i < 3; ++i) {
      if (pt[i] == 0) continue;
      const word_t s = F.inv(pt[i]);
      for (auto& x : pt) x = F.mul(x, s);
      break;
    }
    if (!vanish(eq, pt)) throw Error(ErrorCode::InvalidParameters, "singular point verification failed");
    const unsigned n = e->m(), k = base_->m();
    for (unsigned s = k; s < n; s += k) {
      if (n % s != 0) continue;
      const FieldPtr small = Field::standard(s);
      const auto& em = emb_.get(small, e);
      std::array<word_t, 3> down{};
      bool ok = true;
      for (int i = 0; i < 3 && ok; ++i) {
        const auto y = em.preimage(pt[i]);
        ok = y.has_value();
        if (ok) down[i] = *y;
      }
      if (ok && vanish(equations_on(small), down)) {
        out_.push_back({small, down});
        return;
      }
    }
    out_.push_back({e, pt});
  }

  // Points (u : v : 1).
  void affine_chart() {
    const TriPoly g = c_.substitute(2, 1);
    const TriPoly gu = g.partial(0), gv = g.partial(1);
    std::vector<UniPoly> res;
    if (!gu.is_zero()) res.push_back(bi_resultant(g, gu, 1));
    if (!gv.is_zero()) res.push_back(bi_resultant(g, gv, 1));
    const auto R = common(res);
    if (!R) throw Error(ErrorCode::InvalidParameters, "curve has a repeated component");
    for (const auto& [e1, u0] : closure_roots(*R)) {
      std::vector<UniPoly> fibre;
      for (const TriPoly* p : {&g, &gu, &gv}) {
        fibre.push_back(on_field(*p, e1).substitute(0, u0).to_univariate(1));
      }
      const auto G = common(fibre);
      if (!G) throw Error(ErrorCode::InvalidParameters, "curve has a repeated component");
      const Equations eq1 = equations_on(e1);
      for (const auto& [e2, v0] : closure_roots(*G)) emit(e2, {lift(u0, e1, e2), v0, 1}, carry(eq1, e2));
    }
  }

  // Points (u : 1 : 0) and (1 : 0 : 0).
  void line_at_infinity() {
    std::vector<UniPoly> lines;
    for (const TriPoly* p : {&c_, &partials_[0], &partials_[1], &partials_[2]}) {
      lines.push_back(p->substitute(1, 1).substitute(2, 0).to_univariate(0));
    }
    const auto H = common(lines);
    if (!H) throw Error(ErrorCode::InvalidParameters, "curve has a repeated component");
    for (const auto& [e, u0] : closure_roots(*H)) emit(e, {u0, 1, 0}, equations_on(e));
    const Equations eq = equations_on(base_);
    if (vanish(eq, {1, 0, 0})) emit(base_, {1, 0, 0}, eq);
  }

  TriPoly c_;
  FieldPtr base_;
  std::array<TriPoly, 3> partials_{TriPoly(base_), TriPoly(base_), TriPoly(base_)};
  Embeddings emb_;
  std::vector<ProjectivePoint> out_;
};

}  // namespace

std::vector<ProjectivePoint> curve_singular_points(const TriPoly& curve, unsigned degree_cap) {
  if (curve.is_zero()) throw Error(ErrorCode::InvalidParameters, "zero curve");
  require_plane_curve(curve);
  const int D = curve.total_degree();
  if (static_cast<unsigned>(D) > degree_cap) {
    throw Error(ErrorCode::DegreeCapExceeded, "degree " + std::to_string(D) + " above cap " +
                                                  std::to_string(degree_cap));
  }
  if (D <= 1) return {};
  if (!homogeneous_squarefree(curve)) throw Error(ErrorCode::InvalidParameters, "curve has a repeated component");
  return SingularSolver(curve).run();
}

CriterionVerdict binomial_criterion(unsigned d, unsigned r) {
  if (!(d > r && r >= 3)) throw Error(ErrorCode::InvalidParameters, "needs d > r >= 3");
  const TriPoly pd = infinity_curve(d), pr = infinity_curve(r);
  if (pd.is_zero() || pr.is_zero()) {
    return verdict(CriterionStatus::Unknown, "binomial", "a power-of-2 exponent gives no curve");
  }
  const bool x2_common = x2_order(pd) > 0 && x2_order(pr) > 0;
  const TriPoly g = bi_gcd(pd.substitute(2, 1), pr.substitute(2, 1));
  if (x2_common || !g.is_constant()) {
    CriterionVerdict v = verdict(CriterionStatus::Unknown, "binomial", "phi_d and phi_r share a component");
    v.witness_factors.push_back(x2_common ? TriPoly::var(pd.field(), 2)
                                          : homogenize_x2(g, static_cast<unsigned>(g.total_degree())));
    return v;
  }
  const bool sqf_d = homogeneous_squarefree(pd);
  const bool curve_r = !pr.is_constant();
  const bool sqf_r = curve_r && homogeneous_squarefree(pr);
  if (sqf_d && r >= 5) return verdict(CriterionStatus::Established, "binomial", "coprime, phi_d squarefree, r >= 5");
  if (sqf_r) return verdict(CriterionStatus::Established, "binomial", "coprime, phi_r squarefree");
  std::string why = sqf_d ? "phi_d squarefree but r < 5" : "phi_d has a repeated component";
  why += curve_r ? (sqf_r ? "" : "; phi_r has a repeated component") : "; phi_3 is constant";
  return verdict(CriterionStatus::Unknown, "binomial", why);
}

CriterionVerdict voloch_criterion(unsigned d, unsigned r) {
  if (!(d > r && r >= 2)) throw Error(ErrorCode::InvalidParameters, "needs d > r >= 2");
  const bool parity = !(d % 2 == 0 && r % 2 == 0);
  const bool gcd_ok = is_pow2_or_one(std::gcd(d - 1, r - 1));
  const bool both = !is_power_of_two(d) && !is_power_of_two(r);
  const bool d_only = !is_power_of_two(d);
  const bool ok = parity && gcd_ok && both;
  std::string detail = "gcd(d-1, r-1) = " + std::to_string(std::gcd(d - 1, r - 1));
  if (!parity) detail += "; d and r both even";
  if (both != d_only) {
    detail += "; r is a power of 2: Unknown when the power-of-2 clause covers d and r, ";
    detail += (parity && gcd_ok && d_only) ? "Established" : "Unknown";
    detail += " when it covers d only";
  }
  return verdict(ok ? CriterionStatus::Established : CriterionStatus::Unknown, "voloch", detail);
}

SurfaceVerdict surface_irreducibility(const PolyFunc& f, const std::vector<word_t>& a_values,
                                      const IrreducibilityOptions& opts) {
  const SigmaSurface s = build_sigma(f);
  SurfaceVerdict out;
  auto guarded = [&](auto&& fn) {
    try {
      return fn();
    } catch (const Error& e) {
      return verdict(CriterionStatus::Unknown, "skipped", e.what());
    }
  };
  out.infinity = guarded([&] {
    if (s.d >= 5) {
      CriterionVerdict v = jmw_irreducible(s.d);
      if (v.established()) return v;
    }
    return absolutely_irreducible(s.phi.homogeneous_component(s.d - 3), opts);
  });
  const TriPoly fa = voloch_curve(f);
  for (word_t a : a_values) {
    if (!s.phi.field()->contains(a)) continue;
    out.sections.push_back(guarded([&] { return absolutely_irreducible_affine(s.phi.substitute(2, a), opts); }));
    if (a != 0) out.voloch.push_back(guarded([&] { return absolutely_irreducible_affine(fa.substitute(2, a), opts); }));
  }
  bool any = out.infinity.established();
  for (const auto& v : out.sections) any = any || v.established();
  for (const auto& v : out.voloch) any = any || v.established();
  out.status = any ? CriterionStatus::Established : CriterionStatus::Unknown;
  return out;
}

}  // namespace apn
