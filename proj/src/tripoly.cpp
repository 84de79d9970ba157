#include "apn/tripoly.hpp"

#include <cctype>
#include <limits>
#include <sstream>

namespace apn {

bool Monomial::divides(const Monomial& o) const noexcept {
  for (int i = 0; i < kTriVars; ++i) {
    if (e[i] > o.e[i]) return false;
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kTriVars; ++i) {
    const unsigned s = unsigned{e[i]} + o.e[i];
    if (s > std::numeric_limits<std::uint16_t>::max()) {
      throw Error(ErrorCode::DegreeCapExceeded, "monomial exponent overflow");
    }
    r.e[i] = static_cast<std::uint16_t>(s);
  }
  return r;
}

Monomial Monomial::operator/(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kTriVars; ++i) r.e[i] = static_cast<std::uint16_t>(e[i] - o.e[i]);
  return r;
}

bool GradedLex::operator()(const Monomial& a, const Monomial& b) const noexcept {
  const unsigned ta = a.total(), tb = b.total();
  if (ta != tb) return ta < tb;
  return a.e < b.e;
}

TriPoly TriPoly::constant(FieldPtr field, word_t c) {
  TriPoly p(std::move(field));
  p.add_term(Monomial{}, c);
  return p;
}

TriPoly TriPoly::var(FieldPtr field, int index) {
  Monomial m;
  m.e.at(static_cast<std::size_t>(index)) = 1;
  return term(std::move(field), 1, m);
}

TriPoly TriPoly::term(FieldPtr field, word_t c, Monomial mono) {
  TriPoly p(std::move(field));
  p.add_term(mono, c);
  return p;
}

bool TriPoly::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.total() == 0);
}

word_t TriPoly::coeff(const Monomial& m) const noexcept {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

int TriPoly::total_degree() const noexcept {
  return terms_.empty() ? -1 : static_cast<int>(terms_.rbegin()->first.total());
}

int TriPoly::degree_in(int var) const noexcept {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.e[static_cast<std::size_t>(var)]));
  return d;
}

bool TriPoly::is_homogeneous() const noexcept {
  if (terms_.empty()) return true;
  return terms_.begin()->first.total() == terms_.rbegin()->first.total();
}

unsigned TriPoly::used_vars() const noexcept {
  unsigned mask = 0;
  for (const auto& [m, c] : terms_) {
    for (int i = 0; i < kTriVars; ++i) {
      if (m.e[static_cast<std::size_t>(i)] != 0) mask |= 1U << i;
    }
  }
  return mask;
}

void TriPoly::add_term(const Monomial& m, word_t c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second ^= c;
    if (it->second == 0) terms_.erase(it);
  }
}

TriPoly& TriPoly::operator+=(const TriPoly& o) {
  require_same_field(*field_, *o.field_);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

TriPoly TriPoly::operator+(const TriPoly& o) const {
  TriPoly r = *this;
  r += o;
  return r;
}

TriPoly TriPoly::operator*(const TriPoly& o) const {
  require_same_field(*field_, *o.field_);
  TriPoly r(field_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, field_->mul(ca, cb));
  }
  return r;
}

TriPoly TriPoly::scaled(word_t s) const {
  TriPoly r(field_);
  if (s == 0) return r;
  for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, field_->mul(c, s));
  return r;
}

TriPoly TriPoly::pow(unsigned e) const {
  TriPoly r = constant(field_, 1);
  TriPoly b = *this;
  while (e != 0) {
    if (e & 1U) r = r * b;
    e >>= 1;
    if (e != 0) b = b * b;
  }
  return r;
}

word_t TriPoly::eval(std::span<const word_t> point) const {
  std::array<word_t, kTriVars> pt{};
  for (std::size_t i = 0; i < point.size() && i < pt.size(); ++i) pt[i] = point[i];
  const Field& f = *field_;
  word_t acc = 0;
  for (const auto& [m, c] : terms_) {
    word_t v = c;
    for (std::size_t i = 0; i < pt.size() && v != 0; ++i) {
      if (m.e[i] != 0) v = f.mul(v, f.pow(pt[i], m.e[i]));
    }
    acc ^= v;
  }
  return acc;
}

TriPoly TriPoly::partial(int var) const {
  const auto v = static_cast<std::size_t>(var);
  TriPoly r(field_);
  for (const auto& [m, c] : terms_) {
    if ((m.e[v] & 1U) == 0) continue;
    Monomial d = m;
    d.e[v] = static_cast<std::uint16_t>(d.e[v] - 1);
    r.add_term(d, c);
  }
  return r;
}

TriPoly TriPoly::homogeneous_component(unsigned deg) const {
  TriPoly r(field_);
  for (const auto& [m, c] : terms_) {
    if (m.total() == deg) r.terms_.emplace_hint(r.terms_.end(), m, c);
  }
  return r;
}

TriPoly TriPoly::homogenize(unsigned target_deg) const {
  if (total_degree() > static_cast<int>(target_deg)) {
    throw Error(ErrorCode::DegreeTooSmall, "target degree " + std::to_string(target_deg) +
                                               " below total degree " + std::to_string(total_degree()));
  }
  TriPoly r(field_);
  for (const auto& [m, c] : terms_) {
    Monomial h = m;
    h.e[kZ] = static_cast<std::uint16_t>(h.e[kZ] + target_deg - m.total());
    r.add_term(h, c);
  }
  return r;
}

TriPoly TriPoly::substitute(int var, word_t value) const {
  const auto v = static_cast<std::size_t>(var);
  TriPoly r(field_);
  for (const auto& [m, c] : terms_) {
    Monomial s = m;
    s.e[v] = 0;
    r.add_term(s, field_->mul(c, field_->pow(value, m.e[v])));
  }
  return r;
}

TriPoly TriPoly::swap_vars(int a, int b) const {
  TriPoly r(field_);
  for (const auto& [m, c] : terms_) {
    Monomial s = m;
    std::swap(s.e[static_cast<std::size_t>(a)], s.e[static_cast<std::size_t>(b)]);
    r.add_term(s, c);
  }
  return r;
}

TriPoly TriPoly::frobenius_coeffs() const {
  TriPoly r(field_);
  for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, field_->sqr(c));
  return r;
}

UniPoly TriPoly::to_univariate(int var) const {
  const auto v = static_cast<std::size_t>(var);
  std::vector<word_t> coeffs;
  for (const auto& [m, c] : terms_) {
    if (m.total() != m.e[v]) {
      throw Error(ErrorCode::InvalidParameters, "polynomial is not univariate in the requested variable");
    }
    if (coeffs.size() <= m.e[v]) coeffs.resize(m.e[v] + 1U, 0);
    coeffs[m.e[v]] ^= c;
  }
  return UniPoly(field_, std::move(coeffs));
}

TriPoly TriPoly::from_univariate(const UniPoly& p, int var) {
  TriPoly r(p.field());
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    Monomial m;
    m.e[static_cast<std::size_t>(var)] = static_cast<std::uint16_t>(i);
    r.add_term(m, p.coeffs()[i]);
  }
  return r;
}

bool TriPoly::operator==(const TriPoly& o) const {
  return field_->same_as(*o.field_) && terms_ == o.terms_;
}

std::string TriPoly::to_string() const {
  if (terms_.empty()) return "0";
  static constexpr const char* kNames[kTriVars] = {"x0", "x1", "x2", "z"};
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    if (!first) os << " + ";
    first = false;
    bool need_star = false;
    if (c != 1 || m.total() == 0) {
      os << std::hex << c << std::dec;
      need_star = true;
    }
    for (int i = 0; i < kTriVars; ++i) {
      const unsigned e = m.e[static_cast<std::size_t>(i)];
      if (e == 0) continue;
      if (need_star) os << '*';
      os << kNames[i];
      if (e > 1) os << '^' << e;
      need_star = true;
    }
  }
  return os.str();
}

namespace {

class TriParser {
 public:
  TriParser(FieldPtr field, const std::string& text) : field_(std::move(field)), s_(text) {}

  TriPoly run() {
    TriPoly out(field_);
    skip();
    if (pos_ >= s_.size()) fail("empty polynomial");
    for (;;) {
      out += parse_term();
      skip();
      if (pos_ >= s_.size()) break;
      if (s_[pos_] != '+') fail("expected '+'");
      ++pos_;
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::ParseError, why + " at offset " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  TriPoly parse_term() {
    word_t coeff = 1;
    Monomial mono;
    for (;;) {
      skip();
      if (pos_ >= s_.size()) fail("unexpected end");
      const char ch = s_[pos_];
      if (ch == 'x' || ch == 'z') {
        int idx = kZ;
        ++pos_;
        if (ch == 'x') {
          if (pos_ >= s_.size() || s_[pos_] < '0' || s_[pos_] > '2') fail("expected x0, x1 or x2");
          idx = s_[pos_++] - '0';
        }
        unsigned e = 1;
        skip();
        if (pos_ < s_.size() && s_[pos_] == '^') {
          ++pos_;
          e = parse_decimal();
        }
        mono.e[static_cast<std::size_t>(idx)] = static_cast<std::uint16_t>(mono.e[static_cast<std::size_t>(idx)] + e);
      } else if (std::isxdigit(static_cast<unsigned char>(ch))) {
        coeff = field_->mul(coeff, parse_hex());
      } else {
        fail(std::string("unexpected character '") + ch + "'");
      }
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    return TriPoly::term(field_, coeff, mono);
  }

  unsigned parse_decimal() {
    skip();
    const std::size_t start = pos_;
    unsigned long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + static_cast<unsigned long>(s_[pos_++] - '0');
      if (v > 60000) fail("exponent too large");
    }
    if (pos_ == start) fail("expected exponent");
    return static_cast<unsigned>(v);
  }

  word_t parse_hex() {
    if (s_.compare(pos_, 2, "0x") == 0 || s_.compare(pos_, 2, "0X") == 0) pos_ += 2;
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isxdigit(static_cast<unsigned char>(s_[pos_]))) {
      const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s_[pos_++])));
      v = v * 16 + static_cast<std::uint64_t>(c <= '9' ? c - '0' : c - 'a' + 10);
      if (v > 0xffffffffULL) fail("coefficient too wide");
    }
    if (pos_ == start) fail("expected hex coefficient");
    if (!field_->contains(static_cast<word_t>(v))) fail("coefficient outside the field");
    return static_cast<word_t>(v);
  }

  FieldPtr field_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

TriPoly TriPoly::parse(FieldPtr field, const std::string& text) { return TriParser(std::move(field), text).run(); }

TriPoly tp_exact_divide(const TriPoly& num, const TriPoly& den) {
  require_same_field(*num.field(), *den.field());
  if (den.is_zero()) throw Error(ErrorCode::DivisionByZero, "multivariate division by zero");
  const Field& f = *num.field();
  const auto [lead_mono, lead_coeff] = den.leading();
  const word_t inv_lead = f.inv(lead_coeff);
  TriPoly rem = num;
  TriPoly quot(num.field());
  TriPoly remainder(num.field());
  while (!rem.is_zero()) {
    const auto [m, c] = rem.leading();
    if (lead_mono.divides(m)) {
      const Monomial qm = m / lead_mono;
      const word_t qc = f.mul(c, inv_lead);
      quot.add_term(qm, qc);
      for (const auto& [dm, dc] : den.terms()) rem.add_term(dm * qm, f.mul(qc, dc));
    } else {
      remainder.add_term(m, c);
      rem.add_term(m, c);
    }
  }
  if (!remainder.is_zero()) throw NotDivisibleError(std::move(remainder));
  return quot;
}

TriPoly triple_product(const FieldPtr& field) {
  const TriPoly x0 = TriPoly::var(field, 0), x1 = TriPoly::var(field, 1), x2 = TriPoly::var(field, 2);
  return (x0 + x1) * (x1 + x2) * (x0 + x2);
}

std::vector<std::array<unsigned, 3>> trinomial_support(unsigned r) {
  std::vector<std::array<unsigned, 3>> out;
  // a ranges over submasks of r, b over submasks of r & ~a.
  for (unsigned a = r;; a = (a - 1) & r) {
    const unsigned rest = r & ~a;
    for (unsigned b = rest;; b = (b - 1) & rest) {
      out.push_back({a, b, rest & ~b});
      if (b == 0) break;
    }
    if (a == 0) break;
  }
  return out;
}

}  // namespace apn
