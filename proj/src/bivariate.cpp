#include "apn/bivariate.hpp"

#include <algorithm>
#include <bit>
#include <optional>

namespace apn {

BiPoly::BiPoly(FieldPtr field, std::vector<UniPoly> rows) : field_(std::move(field)), rows_(std::move(rows)) {
  trim();
}

void BiPoly::trim() {
  while (!rows_.empty() && rows_.back().is_zero()) rows_.pop_back();
}

BiPoly BiPoly::constant(FieldPtr field, word_t c) {
  std::vector<UniPoly> rows;
  rows.push_back(UniPoly::constant(field, c));
  return BiPoly(std::move(field), std::move(rows));
}

BiPoly BiPoly::from_tri(const TriPoly& p, int u_var, int v_var) {
  const FieldPtr& f = p.field();
  std::vector<std::vector<word_t>> dense;
  for (const auto& [m, c] : p.terms()) {
    const unsigned i = m.e[static_cast<std::size_t>(u_var)];
    const unsigned j = m.e[static_cast<std::size_t>(v_var)];
    if (i + j != m.total()) throw Error(ErrorCode::InvalidParameters, "polynomial is not bivariate: " + p.to_string());
    if (dense.size() <= i) dense.resize(i + 1);
    if (dense[i].size() <= j) dense[i].resize(j + 1, 0);
    dense[i][j] ^= c;
  }
  std::vector<UniPoly> rows;
  rows.reserve(dense.size());
  for (auto& r : dense) rows.emplace_back(f, std::move(r));
  return BiPoly(f, std::move(rows));
}

TriPoly BiPoly::to_tri(int u_var, int v_var) const {
  TriPoly r(field_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto c = rows_[i].coeffs();
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] == 0) continue;
      Monomial m;
      m.e[static_cast<std::size_t>(u_var)] = static_cast<std::uint16_t>(i);
      m.e[static_cast<std::size_t>(v_var)] = static_cast<std::uint16_t>(j);
      r.add_term(m, c[j]);
    }
  }
  return r;
}

int BiPoly::deg_v() const noexcept {
  int d = -1;
  for (const auto& r : rows_) d = std::max(d, r.degree());
  return d;
}

int BiPoly::total_degree() const noexcept {
  int d = -1;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (!rows_[i].is_zero()) d = std::max(d, static_cast<int>(i) + rows_[i].degree());
  }
  return d;
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
  std::vector<UniPoly> r = rows_;
  if (r.size() < o.rows_.size()) r.resize(o.rows_.size(), UniPoly(field_));
  for (std::size_t i = 0; i < o.rows_.size(); ++i) r[i] += o.rows_[i];
  return BiPoly(field_, std::move(r));
}

BiPoly BiPoly::operator*(const BiPoly& o) const {
  const std::size_t prec = static_cast<std::size_t>(std::max(0, deg_v()) + std::max(0, o.deg_v()) + 1);
  return mul_trunc(o, prec);
}

BiPoly BiPoly::mul_trunc(const BiPoly& o, std::size_t prec) const {
  require_same_field(*field_, *o.field_);
  if (rows_.empty() || o.rows_.empty()) return BiPoly(field_);
  const Field& f = *field_;
  std::vector<std::vector<word_t>> acc(rows_.size() + o.rows_.size() - 1, std::vector<word_t>(prec, 0));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto a = rows_[i].coeffs();
    for (std::size_t k = 0; k < o.rows_.size(); ++k) {
      const auto b = o.rows_[k].coeffs();
      auto& out = acc[i + k];
      for (std::size_t s = 0; s < a.size() && s < prec; ++s) {
        if (a[s] == 0) continue;
        const std::size_t lim = std::min(b.size(), prec - s);
        for (std::size_t t = 0; t < lim; ++t) out[s + t] ^= f.mul(a[s], b[t]);
      }
    }
  }
  std::vector<UniPoly> rows;
  rows.reserve(acc.size());
  for (auto& r : acc) rows.emplace_back(field_, std::move(r));
  return BiPoly(field_, std::move(rows));
}

BiPoly BiPoly::scaled(word_t s) const {
  std::vector<UniPoly> r;
  r.reserve(rows_.size());
  for (const auto& row : rows_) r.push_back(row.scaled(s));
  return BiPoly(field_, std::move(r));
}

BiPoly BiPoly::partial_u() const {
  std::vector<UniPoly> r;
  for (std::size_t i = 1; i < rows_.size(); ++i) r.push_back(i % 2 == 1 ? rows_[i] : UniPoly(field_));
  return BiPoly(field_, std::move(r));
}

BiPoly BiPoly::partial_v() const {
  std::vector<UniPoly> r;
  r.reserve(rows_.size());
  for (const auto& row : rows_) r.push_back(row.derivative());
  return BiPoly(field_, std::move(r));
}

UniPoly BiPoly::eval_v(word_t v0) const {
  std::vector<word_t> c(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) c[i] = rows_[i].eval(v0);
  return UniPoly(field_, std::move(c));
}

UniPoly BiPoly::eval_u(word_t u0) const {
  const Field& f = *field_;
  std::vector<word_t> acc(static_cast<std::size_t>(std::max(0, deg_v() + 1)), 0);
  for (std::size_t i = rows_.size(); i-- > 0;) {
    for (auto& a : acc) a = f.mul(a, u0);
    const auto c = rows_[i].coeffs();
    for (std::size_t j = 0; j < c.size(); ++j) acc[j] ^= c[j];
  }
  return UniPoly(field_, std::move(acc));
}

BiPoly BiPoly::swapped() const {
  const int dv = deg_v();
  std::vector<std::vector<word_t>> dense(static_cast<std::size_t>(dv + 1), std::vector<word_t>(rows_.size(), 0));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto c = rows_[i].coeffs();
    for (std::size_t j = 0; j < c.size(); ++j) dense[j][i] = c[j];
  }
  std::vector<UniPoly> rows;
  for (auto& r : dense) rows.emplace_back(field_, std::move(r));
  return BiPoly(field_, std::move(rows));
}

BiPoly BiPoly::shear(word_t c, word_t c0) const {
  if (rows_.empty()) return *this;
  const Field& f = *field_;
  const int dv = deg_v();
  const std::size_t du = rows_.size() - 1;
  const std::size_t n = du + static_cast<std::size_t>(dv) + 1;
  // Horner in v with L = v + c0 + c*u; acc[i][j] holds the u^i v^j coefficient.
  std::vector<std::vector<word_t>> acc(n, std::vector<word_t>(static_cast<std::size_t>(dv) + 1, 0));
  for (int j = dv; j >= 0; --j) {
    std::vector<std::vector<word_t>> next(n, std::vector<word_t>(static_cast<std::size_t>(dv) + 1, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < acc[i].size(); ++k) {
        const word_t a = acc[i][k];
        if (a == 0) continue;
        if (k + 1 < next[i].size()) next[i][k + 1] ^= a;
        next[i][k] ^= f.mul(a, c0);
        if (i + 1 < n) next[i + 1][k] ^= f.mul(a, c);
      }
    }
    for (std::size_t i = 0; i <= du; ++i) next[i][static_cast<std::size_t>(0)] ^= rows_[i].coeff(static_cast<std::size_t>(j));
    acc = std::move(next);
  }
  std::vector<UniPoly> rows;
  rows.reserve(n);
  for (auto& r : acc) rows.emplace_back(field_, std::move(r));
  return BiPoly(field_, std::move(rows));
}

BiPoly BiPoly::sqrt() const {
  const Field& f = *field_;
  std::vector<UniPoly> r;
  for (std::size_t i = 0; i < rows_.size(); i += 2) {
    const auto c = rows_[i].coeffs();
    std::vector<word_t> h((c.size() + 1) / 2, 0);
    for (std::size_t j = 0; j < c.size(); j += 2) h[j / 2] = f.sqrt(c[j]);
    r.emplace_back(field_, std::move(h));
  }
  return BiPoly(field_, std::move(r));
}

bool BiPoly::operator==(const BiPoly& o) const {
  if (!field_->same_as(*o.field_) || rows_.size() != o.rows_.size()) return false;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (!(rows_[i] == o.rows_[i])) return false;
  }
  return true;
}

std::pair<int, int> bivariate_vars(const TriPoly& p, const TriPoly& q) {
  const unsigned mask = p.used_vars() | q.used_vars();
  const int n = std::popcount(mask);
  if (n > 2) throw Error(ErrorCode::InvalidParameters, "more than two variables in a bivariate operation");
  int a = -1, b = -1;
  for (int i = 0; i < kTriVars; ++i) {
    if ((mask >> i) & 1U) (a < 0 ? a : b) = i;
  }
  for (int i = 0; i < kTriVars && (a < 0 || b < 0); ++i) {
    if (i == a || i == b) continue;
    (a < 0 ? a : b) = i;
  }
  if (a > b) std::swap(a, b);
  return {a, b};
}

namespace {

// Leading coefficient under graded lex with u > v.
word_t bi_lead(const BiPoly& p) {
  int best_total = -1, best_i = -1;
  word_t lead = 0;
  for (std::size_t i = 0; i < p.rows().size(); ++i) {
    const UniPoly& r = p.rows()[i];
    if (r.is_zero()) continue;
    const int t = static_cast<int>(i) + r.degree();
    if (t > best_total || (t == best_total && static_cast<int>(i) > best_i)) {
      best_total = t;
      best_i = static_cast<int>(i);
      lead = r.lead();
    }
  }
  return lead;
}

BiPoly normalized(const BiPoly& p) {
  if (p.is_zero()) return p;
  const word_t l = bi_lead(p);
  return l == 1 ? p : p.scaled(p.field()->inv(l));
}

UniPoly content(const BiPoly& p) {
  UniPoly g(p.field());
  for (const auto& r : p.rows()) {
    g = gcd(g, r);
    if (g.degree() == 0) break;
  }
  return g;
}

BiPoly divide_rows(const BiPoly& p, const UniPoly& d) {
  std::vector<UniPoly> r;
  r.reserve(p.rows().size());
  for (const auto& row : p.rows()) r.push_back(exact_div(row, d));
  return BiPoly(p.field(), std::move(r));
}

BiPoly primitive_part(const BiPoly& p) {
  if (p.is_zero()) return p;
  return divide_rows(p, content(p));
}

BiPoly mul_rows(const BiPoly& p, const UniPoly& m) {
  std::vector<UniPoly> r;
  r.reserve(p.rows().size());
  for (const auto& row : p.rows()) r.push_back(row * m);
  return BiPoly(p.field(), std::move(r));
}

// lc(b)^k * a mod b in F[v][u].
BiPoly pseudo_remainder(const BiPoly& a, const BiPoly& b) {
  const int m = b.deg_u();
  const UniPoly lb = b.rows().back();
  std::vector<UniPoly> r = a.rows();
  while (!r.empty() && static_cast<int>(r.size()) - 1 >= m) {
    const int i = static_cast<int>(r.size()) - 1;
    const UniPoly lead = r.back();
    for (auto& row : r) row = row * lb;
    for (int j = 0; j <= m; ++j) r[static_cast<std::size_t>(i - m + j)] += b.rows()[static_cast<std::size_t>(j)] * lead;
    while (!r.empty() && r.back().is_zero()) r.pop_back();
  }
  return BiPoly(a.field(), std::move(r));
}

BiPoly gcd_bi(const BiPoly& a0, const BiPoly& b0) {
  if (a0.is_zero()) return normalized(b0);
  if (b0.is_zero()) return normalized(a0);
  const UniPoly c = gcd(content(a0), content(b0));
  BiPoly a = primitive_part(a0);
  BiPoly b = primitive_part(b0);
  if (a.deg_u() < b.deg_u()) std::swap(a, b);
  while (b.deg_u() > 0) {
    BiPoly r = pseudo_remainder(a, b);
    if (r.is_zero()) break;
    a = std::move(b);
    b = primitive_part(r);
  }
  std::vector<UniPoly> crow{c};
  const BiPoly cb(a0.field(), std::move(crow));
  if (b.deg_u() <= 0) return normalized(cb);
  return normalized(mul_rows(b, c));
}

// Quotient of a by h, h monic in u; nullopt when the remainder is nonzero.
std::optional<BiPoly> divide_monic(const BiPoly& a, const BiPoly& h) {
  const int dh = h.deg_u();
  std::vector<UniPoly> r = a.rows();
  if (static_cast<int>(r.size()) - 1 < dh) {
    if (a.is_zero()) return BiPoly(a.field());
    return std::nullopt;
  }
  std::vector<UniPoly> q(r.size() - static_cast<std::size_t>(dh), UniPoly(a.field()));
  for (int i = static_cast<int>(r.size()) - 1; i >= dh; --i) {
    const UniPoly c = r[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    q[static_cast<std::size_t>(i - dh)] = c;
    for (int j = 0; j <= dh; ++j) r[static_cast<std::size_t>(i - dh + j)] += c * h.rows()[static_cast<std::size_t>(j)];
  }
  for (int j = 0; j < dh; ++j) {
    if (!r[static_cast<std::size_t>(j)].is_zero()) return std::nullopt;
  }
  return BiPoly(a.field(), std::move(q));
}

BiPoly exact_quotient(const BiPoly& a, const BiPoly& b) {
  return BiPoly::from_tri(tp_exact_divide(a.to_tri(0, 1), b.to_tri(0, 1)), 0, 1);
}

std::uint64_t pow2(unsigned bits) { return std::uint64_t{1} << bits; }

// Smallest extension degree t with |F_{q^t}| > need and kt <= 32.
std::optional<unsigned> extension_for(unsigned k, std::uint64_t need, unsigned min_t) {
  for (unsigned t = std::max(1U, min_t); k * t <= Field::kMaxDegree; ++t) {
    if (k * t >= 63 || pow2(k * t) > need) return t;
  }
  return std::nullopt;
}

// Newton interpolation through (i, ys[i]), i = 0..n-1.
UniPoly interpolate(const FieldPtr& fp, const std::vector<word_t>& ys) {
  const Field& f = *fp;
  const std::size_t n = ys.size();
  std::vector<word_t> dd = ys;
  for (std::size_t lvl = 1; lvl < n; ++lvl) {
    for (std::size_t i = n - 1; i >= lvl; --i) {
      const word_t num = dd[i] ^ dd[i - 1];
      const word_t den = static_cast<word_t>(i) ^ static_cast<word_t>(i - lvl);
      dd[i] = f.div(num, den);
    }
  }
  // Horner on the Newton form.
  std::vector<word_t> acc{dd[n - 1]};
  for (std::size_t i = n - 1; i-- > 0;) {
    std::vector<word_t> next(acc.size() + 1, 0);
    const word_t xi = static_cast<word_t>(i);
    for (std::size_t j = 0; j < acc.size(); ++j) {
      next[j + 1] ^= acc[j];
      next[j] ^= f.mul(acc[j], xi);
    }
    next[0] ^= dd[i];
    acc = std::move(next);
  }
  return UniPoly(fp, std::move(acc));
}

word_t resultant_exact(UniPoly a, UniPoly b) {
  const Field& f = *a.field();
  word_t acc = 1;
  for (;;) {
    if (a.degree() == 0) return f.mul(acc, f.pow(a.lead(), static_cast<std::uint64_t>(b.degree())));
    if (b.degree() == 0) return f.mul(acc, f.pow(b.lead(), static_cast<std::uint64_t>(a.degree())));
    UniPoly r = a % b;
    if (r.is_zero()) return 0;
    acc = f.mul(acc, f.pow(b.lead(), static_cast<std::uint64_t>(a.degree() - r.degree())));
    a = std::move(b);
    b = std::move(r);
  }
}

}  // namespace

word_t uni_resultant(const UniPoly& a, int n, const UniPoly& b, int m) {
  const Field& f = *a.field();
  if (n == 0 && m == 0) return 1;
  if (a.is_zero()) return (m == 0) ? f.pow(b.lead(), static_cast<std::uint64_t>(n)) : 0;
  if (b.is_zero()) return (n == 0) ? f.pow(a.lead(), static_cast<std::uint64_t>(m)) : 0;
  const int na = a.degree(), mb = b.degree();
  if (na < n && mb < m) return 0;
  word_t scale = 1;
  if (na < n) scale = f.pow(b.lead(), static_cast<std::uint64_t>(n - na));
  if (mb < m) scale = f.pow(a.lead(), static_cast<std::uint64_t>(m - mb));
  return f.mul(scale, resultant_exact(a, b));
}

TriPoly bi_gcd(const TriPoly& p, const TriPoly& q) {
  require_same_field(*p.field(), *q.field());
  const auto [u, v] = bivariate_vars(p, q);
  return gcd_bi(BiPoly::from_tri(p, u, v), BiPoly::from_tri(q, u, v)).to_tri(u, v);
}

namespace {

std::pair<int, int> resultant_vars(const TriPoly& p, const TriPoly& q, int eliminated) {
  if (eliminated < 0 || eliminated >= kTriVars) throw Error(ErrorCode::InvalidParameters, "bad variable index");
  const unsigned rest = (p.used_vars() | q.used_vars()) & ~(1U << eliminated);
  if (std::popcount(rest) > 1) throw Error(ErrorCode::InvalidParameters, "more than two variables in a resultant");
  int u = rest ? std::countr_zero(rest) : (eliminated == 0 ? 1 : 0);
  return {u, eliminated};
}

}  // namespace

UniPoly bi_resultant(const TriPoly& p, const TriPoly& q, int eliminated_var) {
  require_same_field(*p.field(), *q.field());
  const FieldPtr& fp = p.field();
  const auto [u, v] = resultant_vars(p, q, eliminated_var);
  const BiPoly P = BiPoly::from_tri(p, u, v), Q = BiPoly::from_tri(q, u, v);
  if (P.is_zero() || Q.is_zero()) return UniPoly(fp);
  const int n = P.deg_v(), m = Q.deg_v();
  if (n == 0 && m == 0) return UniPoly::constant(fp, 1);
  const std::uint64_t bound = std::min<std::uint64_t>(
      static_cast<std::uint64_t>(P.deg_u()) * static_cast<std::uint64_t>(m) +
          static_cast<std::uint64_t>(Q.deg_u()) * static_cast<std::uint64_t>(n),
      static_cast<std::uint64_t>(P.total_degree()) * static_cast<std::uint64_t>(Q.total_degree()));
  const auto t = extension_for(fp->m(), bound + 1, 1);
  if (!t) throw Error(ErrorCode::ExtensionTooLarge, "no field large enough for resultant interpolation");
  FieldPtr ep = *t == 1 ? fp : Field::standard(fp->m() * *t);
  std::optional<FieldEmbedding> emb;
  if (*t != 1) emb.emplace(fp, ep);
  auto lift = [&](const BiPoly& x) { return emb ? x.map_coeffs(ep, [&](word_t c) { return (*emb)(c); }) : x; };
  const BiPoly PE = lift(P), QE = lift(Q);
  std::vector<word_t> ys(bound + 1);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const word_t x = static_cast<word_t>(i);
    ys[i] = uni_resultant(PE.eval_u(x), n, QE.eval_u(x), m);
  }
  UniPoly r = interpolate(ep, ys);
  if (!emb) return r;
  std::vector<word_t> back(r.coeffs().size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const auto pre = emb->preimage(r.coeffs()[i]);
    if (!pre) throw Error(ErrorCode::FieldMismatch, "resultant coefficient outside the base field");
    back[i] = *pre;
  }
  return UniPoly(fp, std::move(back));
}

UniPoly bi_resultant_sylvester(const TriPoly& p, const TriPoly& q, int eliminated_var) {
  require_same_field(*p.field(), *q.field());
  const FieldPtr& fp = p.field();
  const auto [u, v] = resultant_vars(p, q, eliminated_var);
  // Rows indexed by powers of the eliminated variable, coefficients in u.
  const BiPoly P = BiPoly::from_tri(p, v, u), Q = BiPoly::from_tri(q, v, u);
  if (P.is_zero() || Q.is_zero()) return UniPoly(fp);
  const int n = P.deg_u(), m = Q.deg_u();
  const int size = n + m;
  if (size == 0) return UniPoly::constant(fp, 1);
  std::vector<std::vector<UniPoly>> M(static_cast<std::size_t>(size), std::vector<UniPoly>(static_cast<std::size_t>(size), UniPoly(fp)));
  for (int r = 0; r < m; ++r)
    for (int j = 0; j <= n; ++j) M[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + j)] = P.row(static_cast<std::size_t>(n - j));
  for (int r = 0; r < n; ++r)
    for (int j = 0; j <= m; ++j) M[static_cast<std::size_t>(m + r)][static_cast<std::size_t>(r + j)] = Q.row(static_cast<std::size_t>(m - j));
  UniPoly prev = UniPoly::constant(fp, 1);
  for (int k = 0; k < size; ++k) {
    const auto K = static_cast<std::size_t>(k);
    if (M[K][K].is_zero()) {
      std::size_t piv = K + 1;
      while (piv < M.size() && M[piv][K].is_zero()) ++piv;
      if (piv == M.size()) return UniPoly(fp);
      std::swap(M[K], M[piv]);
    }
    for (std::size_t i = K + 1; i < M.size(); ++i) {
      for (std::size_t j = K + 1; j < M.size(); ++j) {
        M[i][j] = exact_div(M[K][K] * M[i][j] + M[i][K] * M[K][j], prev);
      }
      M[i][K] = UniPoly(fp);
    }
    prev = M[K][K];
  }
  return M.back().back();
}

bool bi_squarefree(const TriPoly& p) {
  if (p.is_zero()) throw Error(ErrorCode::InvalidParameters, "squarefreeness of zero");
  if (p.is_constant()) return true;
  const auto [u, v] = bivariate_vars(p, p);
  const BiPoly P = BiPoly::from_tri(p, u, v);
  const BiPoly pu = P.partial_u(), pv = P.partial_v();
  if (pu.is_zero() && pv.is_zero()) return false;
  return gcd_bi(gcd_bi(P, pu), pv).is_constant();
}

namespace {

struct Specialization {
  word_t c;
  word_t c0;
  UniFactorization image;
};

class Factorer {
 public:
  explicit Factorer(const BiFactorOptions& opts) : opts_(opts) {}

  std::vector<std::pair<BiPoly, unsigned>> factor(const BiPoly& p) {
    if (p.is_constant()) return {};
    const BiPoly pu = p.partial_u(), pv = p.partial_v();
    if (pu.is_zero() && pv.is_zero()) {
      auto r = factor(p.sqrt());
      for (auto& [g, e] : r) e *= 2;
      return r;
    }
    const BiPoly g = gcd_bi(gcd_bi(p, pu), pv);
    if (g.is_constant()) {
      std::vector<std::pair<BiPoly, unsigned>> out;
      for (auto& h : factor_squarefree(p)) out.emplace_back(std::move(h), 1U);
      return out;
    }
    auto a = factor(g);
    for (auto& [h, e] : factor(exact_quotient(p, g))) {
      auto it = std::find_if(a.begin(), a.end(), [&](const auto& x) { return x.first == h; });
      if (it != a.end()) {
        it->second += e;
      } else {
        a.emplace_back(std::move(h), e);
      }
    }
    return a;
  }

 private:
  std::vector<BiPoly> factor_squarefree(const BiPoly& p) {
    if (p.total_degree() <= 1) return {normalized(p)};
    if (auto r = factor_in_field(p)) return *r;
    const FieldPtr& fp = p.field();
    const unsigned D = static_cast<unsigned>(p.total_degree());
    const auto t = opts_.allow_extension ? extension_for(fp->m(), std::uint64_t{2} * D * D + D + 2, 2) : std::nullopt;
    if (!t) {
      throw Error(ErrorCode::NoGoodEvaluationPoint,
                  "no squarefree specialization over " + fp->describe());
    }
    const FieldPtr ep = Field::standard(fp->m() * *t);
    const FieldEmbedding emb(fp, ep);
    const BiPoly pe = p.map_coeffs(ep, [&](word_t c) { return emb(c); });
    auto over_ext = factor_in_field(pe);
    if (!over_ext) {
      throw Error(ErrorCode::NoGoodEvaluationPoint, "no squarefree specialization over " + ep->describe());
    }
    // Products over Frobenius orbits are defined over the base field.
    const std::uint64_t q = fp->size();
    auto frob = [&](const BiPoly& g) { return g.map_coeffs(ep, [&](word_t c) { return ep->pow(c, q); }); };
    std::vector<bool> used(over_ext->size(), false);
    std::vector<BiPoly> out;
    for (std::size_t i = 0; i < over_ext->size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      BiPoly prod = (*over_ext)[i];
      for (BiPoly h = frob((*over_ext)[i]); !(h == (*over_ext)[i]); h = frob(h)) {
        for (std::size_t j = 0; j < over_ext->size(); ++j) {
          if (!used[j] && (*over_ext)[j] == h) {
            used[j] = true;
            prod = prod * h;
            break;
          }
        }
      }
      prod = normalized(prod);
      out.push_back(prod.map_coeffs(fp, [&](word_t c) {
        const auto pre = emb.preimage(c);
        if (!pre) throw Error(ErrorCode::FieldMismatch, "orbit product not defined over the base field");
        return *pre;
      }));
    }
    return out;
  }

  std::optional<Specialization> choose_point(const BiPoly& p) const {
    const FieldPtr& fp = p.field();
    const Field& f = *fp;
    const int D = p.total_degree();
    // Top form P_D(1, c) as a polynomial in c.
    std::vector<word_t> top(static_cast<std::size_t>(D) + 1, 0);
    for (int i = 0; i <= D; ++i) top[static_cast<std::size_t>(D - i)] = p.coeff(static_cast<std::size_t>(i), static_cast<std::size_t>(D - i));
    const UniPoly topc(fp, std::move(top));
    const std::uint64_t limit = std::min<std::uint64_t>(f.size(), std::uint64_t{2} * D * D + D + 2);
    unsigned shears_tried = 0;
    for (std::uint64_t c = 0; c < f.size() && shears_tried <= static_cast<unsigned>(D) + 1; ++c) {
      if (topc.eval(static_cast<word_t>(c)) == 0) continue;
      ++shears_tried;
      const BiPoly p1 = p.shear(static_cast<word_t>(c), 0);
      std::optional<Specialization> best;
      int valid = 0;
      for (std::uint64_t c0 = 0; c0 < limit && valid < 3; ++c0) {
        const UniPoly img = p1.eval_v(static_cast<word_t>(c0));
        if (img.degree() != D || !is_squarefree(img)) continue;
        ++valid;
        UniFactorization fac = uni_factor(img);
        if (!best || fac.factors.size() < best->image.factors.size()) {
          best = Specialization{static_cast<word_t>(c), static_cast<word_t>(c0), std::move(fac)};
        }
      }
      if (best) return best;
    }
    return std::nullopt;
  }

  std::optional<std::vector<BiPoly>> factor_in_field(const BiPoly& p) const {
    auto pick = choose_point(p);
    if (!pick) return std::nullopt;
    if (pick->image.factors.size() == 1) return std::vector<BiPoly>{normalized(p)};
    const FieldPtr& fp = p.field();
    const Field& f = *fp;
    const int D = p.total_degree();
    BiPoly p2 = p.shear(pick->c, pick->c0);
    p2 = p2.scaled(f.inv(p2.rows().back().lead()));
    const std::size_t K = static_cast<std::size_t>(std::max(0, p2.deg_v())) + 1;

    std::vector<UniPoly> g;
    for (const auto& uf : pick->image.factors) g.push_back(uf.poly);
    const std::size_t r = g.size();
    std::vector<UniPoly> s(r, UniPoly(fp));
    for (std::size_t i = 0; i < r; ++i) {
      UniPoly others = UniPoly::constant(fp, 1);
      for (std::size_t j = 0; j < r; ++j) {
        if (j != i) others = mulmod(others, g[j], g[i]);
      }
      s[i] = ext_gcd(others, g[i]).s;
    }
    auto to_bi = [&](const UniPoly& x) {
      std::vector<UniPoly> rows;
      for (std::size_t i = 0; i < x.coeffs().size(); ++i) rows.push_back(UniPoly::constant(fp, x.coeffs()[i]));
      return BiPoly(fp, std::move(rows));
    };
    std::vector<BiPoly> G;
    for (const auto& gi : g) G.push_back(to_bi(gi));

    // Linear lifting: fix the v^k coefficient of the product one k at a time.
    for (std::size_t k = 1; k < K; ++k) {
      BiPoly prod = G[0];
      for (std::size_t i = 1; i < r; ++i) prod = prod.mul_trunc(G[i], k + 1);
      std::vector<word_t> e(static_cast<std::size_t>(D) + 1, 0);
      for (std::size_t i = 0; i <= static_cast<std::size_t>(D); ++i) e[i] = p2.coeff(i, k) ^ prod.coeff(i, k);
      const UniPoly err(fp, std::move(e));
      if (err.is_zero()) continue;
      for (std::size_t i = 0; i < r; ++i) {
        const UniPoly delta = mulmod(err, s[i], g[i]);
        std::vector<UniPoly> rows = G[i].rows();
        for (std::size_t j = 0; j < delta.coeffs().size(); ++j) {
          rows[j].set_coeff(k, rows[j].coeff(k) ^ delta.coeffs()[j]);
        }
        G[i] = BiPoly(fp, std::move(rows));
      }
    }

    // Subset recombination by trial division.
    std::vector<BiPoly> found;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    BiPoly rest = p2;
    for (std::size_t sz = 1; 2 * sz <= idx.size();) {
      bool hit = false;
      std::vector<std::size_t> pick(sz);
      for (std::size_t i = 0; i < sz; ++i) pick[i] = i;
      for (;;) {
        BiPoly h = G[idx[pick[0]]];
        for (std::size_t i = 1; i < sz; ++i) h = h.mul_trunc(G[idx[pick[i]]], K);
        if (h.total_degree() == h.deg_u()) {
          if (auto quot = divide_monic(rest, h)) {
            found.push_back(std::move(h));
            rest = std::move(*quot);
            for (std::size_t i = sz; i-- > 0;) idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(pick[i]));
            hit = true;
            break;
          }
        }
        // Next combination of sz indices out of idx.size().
        std::size_t i = sz;
        while (i > 0 && pick[i - 1] == idx.size() - sz + (i - 1)) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < sz; ++j) pick[j] = pick[j - 1] + 1;
      }
      if (!hit) ++sz;
    }
    if (rest.deg_u() > 0) found.push_back(std::move(rest));
    std::vector<BiPoly> out;
    for (const auto& h : found) out.push_back(normalized(h.shear(pick->c, pick->c0)));
    return out;
  }

  BiFactorOptions opts_;
};

}  // namespace

BiFactorization bi_factor(const TriPoly& p, const BiFactorOptions& opts) {
  if (p.is_zero()) throw Error(ErrorCode::InvalidParameters, "cannot factor the zero polynomial");
  if (p.total_degree() > static_cast<int>(opts.degree_cap)) {
    throw Error(ErrorCode::DegreeCapExceeded, "total degree " + std::to_string(p.total_degree()) +
                                                  " above cap " + std::to_string(opts.degree_cap));
  }
  const auto [u, v] = bivariate_vars(p, p);
  const BiPoly P = BiPoly::from_tri(p, u, v);
  BiFactorization out;
  out.unit = bi_lead(P);
  Factorer fz(opts);
  for (auto& [h, e] : fz.factor(P)) out.factors.push_back({h.to_tri(u, v), e});
  std::sort(out.factors.begin(), out.factors.end(), [](const BiFactor& a, const BiFactor& b) {
    if (a.poly.total_degree() != b.poly.total_degree()) return a.poly.total_degree() < b.poly.total_degree();
    const std::string sa = a.poly.to_string(), sb = b.poly.to_string();
    if (sa != sb) return sa < sb;
    return a.multiplicity < b.multiplicity;
  });
  return out;
}

}  // namespace apn
