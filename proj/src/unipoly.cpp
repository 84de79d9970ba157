#include "apn/unipoly.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace apn {

UniPoly::UniPoly(FieldPtr field, std::vector<word_t> coeffs)
    : field_(std::move(field)), c_(std::move(coeffs)) {
  trim();
}

UniPoly UniPoly::constant(FieldPtr field, word_t c) {
  return UniPoly(std::move(field), std::vector<word_t>{c});
}

UniPoly UniPoly::monomial(FieldPtr field, word_t c, std::size_t deg) {
  std::vector<word_t> v(deg + 1, 0);
  v[deg] = c;
  return UniPoly(std::move(field), std::move(v));
}

void UniPoly::trim() noexcept {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void UniPoly::set_coeff(std::size_t i, word_t value) {
  if (i >= c_.size()) {
    if (value == 0) return;
    c_.resize(i + 1, 0);
  }
  c_[i] = value;
  trim();
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
  require_same_field(*field_, *o.field_);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] ^= o.c_[i];
  trim();
  return *this;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  UniPoly r = *this;
  r += o;
  return r;
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
  require_same_field(*field_, *o.field_);
  if (c_.empty() || o.c_.empty()) return UniPoly(field_);
  std::vector<word_t> r(c_.size() + o.c_.size() - 1, 0);
  const Field& f = *field_;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const word_t a = c_[i];
    if (a == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] ^= f.mul(a, o.c_[j]);
  }
  return UniPoly(field_, std::move(r));
}

UniPoly UniPoly::scaled(word_t s) const {
  std::vector<word_t> r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = field_->mul(c_[i], s);
  return UniPoly(field_, std::move(r));
}

UniPoly UniPoly::monic() const {
  if (c_.empty() || c_.back() == 1) return *this;
  return scaled(field_->inv(c_.back()));
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return UniPoly(field_);
  std::vector<word_t> r(c_.size() - 1, 0);
  for (std::size_t i = 1; i < c_.size(); i += 2) r[i - 1] = c_[i];
  return UniPoly(field_, std::move(r));
}

UniPoly UniPoly::shifted(std::size_t k) const {
  if (c_.empty()) return *this;
  std::vector<word_t> r(c_.size() + k, 0);
  std::copy(c_.begin(), c_.end(), r.begin() + static_cast<std::ptrdiff_t>(k));
  return UniPoly(field_, std::move(r));
}

UniPoly UniPoly::truncated(std::size_t n) const {
  if (c_.size() <= n) return *this;
  return UniPoly(field_, std::vector<word_t>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(n)));
}

word_t UniPoly::eval(word_t at) const noexcept {
  word_t acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = field_->mul(acc, at) ^ c_[i];
  return acc;
}

bool UniPoly::operator==(const UniPoly& o) const {
  return field_->same_as(*o.field_) && c_ == o.c_;
}

std::string UniPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    const bool show_coeff = c_[i] != 1 || i == 0;
    if (show_coeff) os << std::hex << c_[i] << std::dec;
    if (i > 0) {
      if (show_coeff) os << '*';
      os << var;
      if (i > 1) os << '^' << i;
    }
  }
  return os.str();
}

UniDivMod divmod(const UniPoly& a, const UniPoly& b) {
  require_same_field(*a.field(), *b.field());
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  const Field& f = *a.field();
  const int db = b.degree();
  if (a.degree() < db) return {UniPoly(a.field()), a};
  std::vector<word_t> rem(a.coeffs().begin(), a.coeffs().end());
  std::vector<word_t> quot(static_cast<std::size_t>(a.degree() - db + 1), 0);
  const word_t inv_lead = f.inv(b.lead());
  const auto bc = b.coeffs();
  for (int i = a.degree(); i >= db; --i) {
    const word_t c = rem[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const word_t qc = f.mul(c, inv_lead);
    quot[static_cast<std::size_t>(i - db)] = qc;
    for (int j = 0; j <= db; ++j) {
      rem[static_cast<std::size_t>(i - db + j)] ^= f.mul(qc, bc[static_cast<std::size_t>(j)]);
    }
  }
  rem.resize(static_cast<std::size_t>(db));
  return {UniPoly(a.field(), std::move(quot)), UniPoly(a.field(), std::move(rem))};
}

UniPoly operator%(const UniPoly& a, const UniPoly& b) { return divmod(a, b).rem; }

UniPoly exact_div(const UniPoly& a, const UniPoly& b) {
  auto qr = divmod(a, b);
  if (!qr.rem.is_zero()) {
    throw Error(ErrorCode::NotDivisible, "remainder " + qr.rem.to_string());
  }
  return std::move(qr.quot);
}

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly x = a;
  UniPoly y = b;
  while (!y.is_zero()) {
    UniPoly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

UniExtGcd ext_gcd(const UniPoly& a, const UniPoly& b) {
  const FieldPtr& f = a.field();
  UniPoly r0 = a, r1 = b;
  UniPoly s0 = UniPoly::constant(f, 1), s1(f);
  UniPoly t0(f), t1 = UniPoly::constant(f, 1);
  while (!r1.is_zero()) {
    auto qr = divmod(r0, r1);
    UniPoly s2 = s0 + qr.quot * s1;
    UniPoly t2 = t0 + qr.quot * t1;
    r0 = std::move(r1);
    r1 = std::move(qr.rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const word_t inv = f->inv(r0.lead());
  return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

UniPoly mulmod(const UniPoly& a, const UniPoly& b, const UniPoly& m) { return (a * b) % m; }

UniPoly powmod(const UniPoly& a, std::uint64_t e, const UniPoly& m) {
  UniPoly r = UniPoly::constant(a.field(), 1) % m;
  UniPoly base = a % m;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

UniPoly frobenius_mod(const UniPoly& a, unsigned k, const UniPoly& m) {
  UniPoly r = a % m;
  for (unsigned i = 0; i < k; ++i) r = mulmod(r, r, m);
  return r;
}

namespace {

// p(x)^(1/2) for p with only even-degree terms.
UniPoly poly_sqrt(const UniPoly& p) {
  const Field& f = *p.field();
  std::vector<word_t> r(static_cast<std::size_t>(p.degree() / 2 + 1), 0);
  for (int i = 0; i <= p.degree(); i += 2) r[static_cast<std::size_t>(i / 2)] = f.sqrt(p.coeff(static_cast<std::size_t>(i)));
  return UniPoly(p.field(), std::move(r));
}

void squarefree_decompose(const UniPoly& f, unsigned mult, std::vector<UniFactor>& out) {
  if (f.degree() <= 0) return;
  const UniPoly d = f.derivative();
  if (d.is_zero()) {
    squarefree_decompose(poly_sqrt(f), mult * 2, out);
    return;
  }
  UniPoly c = gcd(f, d);
  UniPoly w = exact_div(f, c);
  unsigned i = 1;
  while (!w.is_one()) {
    UniPoly y = gcd(w, c);
    UniPoly fac = exact_div(w, y);
    if (fac.degree() > 0) out.push_back({fac.monic(), i * mult});
    ++i;
    w = std::move(y);
    c = exact_div(c, w);
  }
  if (c.degree() > 0) squarefree_decompose(poly_sqrt(c.monic()), mult * 2, out);
}

// Pairs (product of all irreducible factors of degree d, d).
std::vector<std::pair<UniPoly, unsigned>> distinct_degree(const UniPoly& f) {
  std::vector<std::pair<UniPoly, unsigned>> out;
  const FieldPtr& fp = f.field();
  const unsigned k = fp->m();
  UniPoly rest = f;
  UniPoly h = UniPoly::x(fp) % rest;
  for (unsigned i = 1; rest.degree() >= static_cast<int>(2 * i); ++i) {
    h = frobenius_mod(h, k, rest);
    UniPoly g = gcd(rest, h + UniPoly::x(fp));
    if (g.degree() > 0) {
      out.emplace_back(g, i);
      rest = exact_div(rest, g);
      h = h % rest;
    }
  }
  if (rest.degree() > 0) out.emplace_back(rest.monic(), static_cast<unsigned>(rest.degree()));
  return out;
}

void equal_degree(const UniPoly& f, unsigned d, std::mt19937_64& rng, std::vector<UniPoly>& out) {
  const int n = f.degree();
  if (n <= static_cast<int>(d)) {
    out.push_back(f.monic());
    return;
  }
  const FieldPtr& fp = f.field();
  const unsigned steps = fp->m() * d;
  std::uniform_int_distribution<std::uint64_t> dist(0, fp->size() - 1);
  for (;;) {
    std::vector<word_t> rc(static_cast<std::size_t>(n));
    for (auto& c : rc) c = static_cast<word_t>(dist(rng));
    UniPoly a(fp, std::move(rc));
    if (a.degree() <= 0) continue;
    // Trace map a + a^2 + ... + a^(2^(kd - 1)) mod f.
    UniPoly t = a;
    UniPoly term = a;
    for (unsigned i = 1; i < steps; ++i) {
      term = mulmod(term, term, f);
      t += term;
    }
    UniPoly g = gcd(f, t);
    if (g.degree() > 0 && g.degree() < n) {
      equal_degree(g, d, rng, out);
      equal_degree(exact_div(f, g), d, rng, out);
      return;
    }
  }
}

bool poly_less(const UniPoly& a, const UniPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    const auto ca = a.coeff(static_cast<std::size_t>(i)), cb = b.coeff(static_cast<std::size_t>(i));
    if (ca != cb) return ca < cb;
  }
  return false;
}

}  // namespace

UniFactorization uni_factor(const UniPoly& p, std::uint64_t seed) {
  if (p.is_zero()) throw Error(ErrorCode::InvalidParameters, "cannot factor the zero polynomial");
  UniFactorization result;
  result.unit = p.lead();
  std::vector<UniFactor> sqf;
  squarefree_decompose(p.monic(), 1, sqf);
  std::mt19937_64 rng(seed);
  for (const auto& [part, mult] : sqf) {
    for (const auto& [block, d] : distinct_degree(part)) {
      std::vector<UniPoly> pieces;
      equal_degree(block, d, rng, pieces);
      for (auto& piece : pieces) result.factors.push_back({std::move(piece), mult});
    }
  }
  std::sort(result.factors.begin(), result.factors.end(), [](const UniFactor& a, const UniFactor& b) {
    if (poly_less(a.poly, b.poly)) return true;
    if (poly_less(b.poly, a.poly)) return false;
    return a.multiplicity < b.multiplicity;
  });
  return result;
}

bool is_squarefree(const UniPoly& p) {
  if (p.degree() <= 0) return true;
  const UniPoly d = p.derivative();
  if (d.is_zero()) return false;
  return gcd(p, d).degree() == 0;
}

bool is_irreducible(const UniPoly& p) {
  if (p.degree() <= 0) return false;
  if (p.degree() == 1) return true;
  if (!is_squarefree(p)) return false;
  const auto dd = distinct_degree(p.monic());
  return dd.size() == 1 && static_cast<int>(dd.front().second) == p.degree();
}

std::vector<word_t> roots(const UniPoly& p, std::uint64_t seed) {
  if (p.is_zero()) throw Error(ErrorCode::InvalidParameters, "roots of the zero polynomial");
  if (p.degree() <= 0) return {};
  const FieldPtr& fp = p.field();
  const UniPoly f = p.monic();
  // Product of the distinct linear factors: gcd(f, x^q - x).
  UniPoly xq = frobenius_mod(UniPoly::x(fp), fp->m(), f);
  UniPoly lin = gcd(f, xq + UniPoly::x(fp));
  std::vector<word_t> out;
  if (lin.degree() <= 0) return out;
  std::mt19937_64 rng(seed);
  std::vector<UniPoly> pieces;
  equal_degree(lin, 1, rng, pieces);
  for (const auto& piece : pieces) out.push_back(piece.coeff(0));  // x + r
  std::sort(out.begin(), out.end());
  return out;
}

FieldEmbedding::FieldEmbedding(FieldPtr from, FieldPtr to) : from_(std::move(from)), to_(std::move(to)) {
  const unsigned k = from_->m();
  if (to_->m() % k != 0) {
    throw Error(ErrorCode::FieldMismatch, from_->describe() + " does not embed in " + to_->describe());
  }
  basis_image_.assign(k, 1);
  if (k > 1) {
    std::vector<word_t> mod(k + 1);
    for (unsigned i = 0; i <= k; ++i) mod[i] = static_cast<word_t>((from_->modulus() >> i) & 1U);
    const auto rs = roots(UniPoly(to_, std::move(mod)));
    if (rs.empty()) throw Error(ErrorCode::FieldMismatch, "source modulus has no root in target");
    for (unsigned i = 1; i < k; ++i) basis_image_[i] = to_->mul(basis_image_[i - 1], rs.front());
  }
  for (unsigned i = 0; i < k; ++i) {
    word_t row = basis_image_[i];
    word_t combo = word_t{1} << i;
    for (const auto& [r, c] : echelon_) {
      if ((row ^ r) < row) {
        row ^= r;
        combo ^= c;
      }
    }
    echelon_.emplace_back(row, combo);
    std::sort(echelon_.begin(), echelon_.end(), std::greater<>());
  }
}

std::optional<word_t> FieldEmbedding::preimage(word_t b) const noexcept {
  word_t acc = 0;
  for (const auto& [r, c] : echelon_) {
    if ((b ^ r) < b) {
      b ^= r;
      acc ^= c;
    }
  }
  if (b != 0) return std::nullopt;
  return acc;
}

word_t FieldEmbedding::operator()(word_t a) const noexcept {
  word_t r = 0;
  for (std::size_t i = 0; a != 0; ++i, a >>= 1) {
    if (a & 1U) r ^= basis_image_[i];
  }
  return r;
}

UniPoly FieldEmbedding::operator()(const UniPoly& p) const {
  require_same_field(*from_, *p.field());
  std::vector<word_t> c(p.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (*this)(p.coeffs()[i]);
  return UniPoly(to_, std::move(c));
}

}  // namespace apn
