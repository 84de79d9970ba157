#include "apn/funcrep.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace apn {

namespace {

std::uint64_t reduce_exponent(std::uint64_t e, std::uint64_t q) noexcept {
  if (e == 0) return 0;
  return (e - 1) % (q - 1) + 1;
}

}  // namespace

PolyFunc::PolyFunc(FieldPtr field, const Terms& terms) : field_(std::move(field)) {
  const std::uint64_t q = field_->size();
  for (const auto& [e, c] : terms) {
    if (!field_->contains(c)) throw Error(ErrorCode::InvalidParameters, "coefficient outside the field");
    if (c == 0) continue;
    const std::uint64_t r = reduce_exponent(e, q);
    auto [it, fresh] = terms_.try_emplace(r, c);
    if (!fresh) {
      it->second ^= c;
      if (it->second == 0) terms_.erase(it);
    }
  }
}

PolyFunc PolyFunc::monomial(FieldPtr field, std::uint64_t d, word_t c) {
  return PolyFunc(std::move(field), Terms{{d, c}});
}

PolyFunc PolyFunc::from_unipoly(const UniPoly& p) {
  Terms t;
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    if (p.coeffs()[i] != 0) t.emplace(i, p.coeffs()[i]);
  }
  return PolyFunc(p.field(), t);
}

word_t PolyFunc::coeff(std::uint64_t e) const noexcept {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

bool PolyFunc::is_normalized() const noexcept {
  return std::none_of(terms_.begin(), terms_.end(),
                      [](const auto& t) { return t.first == 0 || is_power_of_two(t.first); });
}

word_t PolyFunc::eval(word_t x) const noexcept {
  const Field& f = *field_;
  word_t acc = 0;
  for (const auto& [e, c] : terms_) acc ^= f.mul(c, f.pow(x, e));
  return acc;
}

std::vector<word_t> PolyFunc::values() const {
  if (field_->m() > 24) throw Error(ErrorCode::FieldTooLarge, "value table needs m <= 24");
  const std::uint64_t q = field_->size();
  std::vector<word_t> v(q);
  for (std::uint64_t x = 0; x < q; ++x) v[x] = eval(static_cast<word_t>(x));
  return v;
}

UniPoly PolyFunc::to_unipoly() const {
  if (degree() > (std::int64_t{1} << 24)) throw Error(ErrorCode::FieldTooLarge, "degree too large for a dense polynomial");
  std::vector<word_t> c(static_cast<std::size_t>(degree() + 1), 0);
  for (const auto& [e, v] : terms_) c[e] = v;
  return UniPoly(field_, std::move(c));
}

PolyFunc PolyFunc::operator+(const PolyFunc& o) const {
  require_same_field(*field_, *o.field_);
  Terms t = terms_;
  for (const auto& [e, c] : o.terms_) t[e] ^= c;
  return PolyFunc(field_, t);
}

bool PolyFunc::operator==(const PolyFunc& o) const {
  return field_->same_as(*o.field_) && terms_ == o.terms_;
}

std::string PolyFunc::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto [e, c] = *it;
    if (!first) os << " + ";
    first = false;
    if (c != 1 || e == 0) {
      os << "0x" << std::hex << c << std::dec;
      if (e != 0) os << '*';
    }
    if (e == 1) {
      os << 'x';
    } else if (e > 1) {
      os << "x^" << e;
    }
  }
  return os.str();
}

bool is_power_of_two(std::uint64_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

bool is_q_affine(const PolyFunc& f) noexcept {
  return std::all_of(f.terms().begin(), f.terms().end(),
                     [](const auto& t) { return t.first == 0 || is_power_of_two(t.first); });
}

bool is_q_affine(const UniPoly& p) noexcept {
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    if (p.coeffs()[i] != 0 && i != 0 && !is_power_of_two(i)) return false;
  }
  return true;
}

PolyFunc normalize(const PolyFunc& f) {
  PolyFunc::Terms t;
  for (const auto& [e, c] : f.terms()) {
    if (e != 0 && !is_power_of_two(e)) t.emplace(e, c);
  }
  if (t.empty()) throw Error(ErrorCode::BecameZero, "function is q-affine: " + f.to_string());
  return PolyFunc(f.field(), t);
}

PolyFunc affine_transform(const PolyFunc& f, word_t a, word_t b, word_t c) {
  if (a == 0 || c == 0) throw Error(ErrorCode::ZeroScalar, "affine transform needs a != 0 and c != 0");
  const Field& F = *f.field();
  PolyFunc::Terms out;
  for (const auto& [e, coef] : f.terms()) {
    const word_t ce = F.mul(c, coef);
    // (a x + b)^e: binomial(e, k) is odd exactly for the submasks k of e.
    for (std::uint64_t k = e;; k = (k - 1) & e) {
      out[k] ^= F.mul(ce, F.mul(F.pow(a, k), F.pow(b, e - k)));
      if (k == 0) break;
    }
  }
  return PolyFunc(f.field(), out);
}

PolyFunc make_monic(const PolyFunc& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroScalar, "zero function has no leading coefficient");
  const word_t inv = f.field()->inv(f.lead());
  PolyFunc::Terms t;
  for (const auto& [e, c] : f.terms()) t.emplace(e, f.field()->mul(c, inv));
  return PolyFunc(f.field(), t);
}

PolyFunc frobenius_twist(const PolyFunc& f) {
  PolyFunc::Terms t;
  for (const auto& [e, c] : f.terms()) t.emplace(e, f.field()->sqr(c));
  return PolyFunc(f.field(), t);
}

const char* to_string(ApnFamily family) noexcept {
  switch (family) {
    case ApnFamily::Gold: return "Gold";
    case ApnFamily::Kasami: return "Kasami";
    case ApnFamily::Welch: return "Welch";
    case ApnFamily::Niho: return "Niho";
    case ApnFamily::Inverse: return "Inverse";
    case ApnFamily::Dobbertin: return "Dobbertin";
  }
  return "?";
}

std::optional<ApnFamily> parse_family(std::string_view name) noexcept {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  for (auto fam : {ApnFamily::Gold, ApnFamily::Kasami, ApnFamily::Welch, ApnFamily::Niho, ApnFamily::Inverse,
                   ApnFamily::Dobbertin}) {
    std::string n = to_string(fam);
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (n == lower) return fam;
  }
  return std::nullopt;
}

bool family_takes_h(ApnFamily family) noexcept {
  return family == ApnFamily::Gold || family == ApnFamily::Kasami;
}

std::uint64_t known_apn_exponent(ApnFamily family, unsigned m, std::optional<unsigned> h) {
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::InvalidParameters, std::string(to_string(family)) + " at m = " + std::to_string(m) + ": " + why);
  };
  if (m < 1 || m > 32) throw bad("m must lie in 1..32");
  const auto p2 = [](unsigned k) { return std::uint64_t{1} << k; };
  switch (family) {
    case ApnFamily::Gold:
    case ApnFamily::Kasami: {
      if (!h) throw bad("parameter h required");
      if (*h < 1 || *h > 31 || std::gcd(*h, m) != 1) throw bad("needs gcd(h, m) = 1");
      if (family == ApnFamily::Gold) return p2(*h) + 1;
      if (*h > 15) throw bad("h too large");
      return p2(2 * *h) - p2(*h) + 1;
    }
    case ApnFamily::Welch:
      if (m % 2 == 0) throw bad("needs m odd");
      return p2((m - 1) / 2) + 3;
    case ApnFamily::Niho:
      if (m % 4 == 1) return p2((m - 1) / 2) + p2((m - 1) / 4) - 1;
      if (m % 4 == 3) return p2((m - 1) / 2) + p2((3 * m - 1) / 4) - 1;
      throw bad("needs m odd");
    case ApnFamily::Inverse:
      if (m % 2 == 0) throw bad("needs m odd");
      return p2(m) - 2;
    case ApnFamily::Dobbertin: {
      if (m % 5 != 0) throw bad("needs 5 | m");
      const unsigned k = m / 5;
      return p2(4 * k) + p2(3 * k) + p2(2 * k) + p2(k) - 1;
    }
  }
  throw bad("unknown family");
}

std::vector<CatalogueEntry> apn_catalogue(unsigned m) {
  std::vector<CatalogueEntry> out;
  for (auto fam : {ApnFamily::Gold, ApnFamily::Kasami}) {
    for (unsigned h = 1; h < m && h <= 15; ++h) {
      if (std::gcd(h, m) == 1) out.push_back({fam, m, h, known_apn_exponent(fam, m, h)});
    }
  }
  for (auto fam : {ApnFamily::Welch, ApnFamily::Niho, ApnFamily::Inverse, ApnFamily::Dobbertin}) {
    try {
      out.push_back({fam, m, std::nullopt, known_apn_exponent(fam, m)});
    } catch (const Error&) {
    }
  }
  return out;
}

namespace {

class ExprParser {
 public:
  ExprParser(const FieldPtr& field, std::string_view text, const std::map<std::string, word_t>& named)
      : field_(field), s_(text), named_(named) {}

  PolyExpr run() {
    PolyExpr out;
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    for (;;) {
      out.terms.push_back(term());
      skip();
      if (pos_ >= s_.size()) break;
      if (s_[pos_] != '+') fail("expected '+'");
      ++pos_;
    }
    std::vector<char> ph;
    for (const auto& t : out.terms)
      for (const auto& [c, e] : t.free) ph.push_back(c);
    std::sort(ph.begin(), ph.end());
    ph.erase(std::unique(ph.begin(), ph.end()), ph.end());
    out.placeholders = std::move(ph);
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::ParseError, why + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::uint64_t exponent() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      skip();
      return number(10, "exponent");
    }
    return 1;
  }

  std::uint64_t number(int base, const char* what) {
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < s_.size()) {
      const char ch = s_[pos_];
      int digit;
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        digit = ch - '0';
      } else if (base == 16 && std::isxdigit(static_cast<unsigned char>(ch))) {
        digit = std::tolower(static_cast<unsigned char>(ch)) - 'a' + 10;
      } else {
        break;
      }
      if (v > (~std::uint64_t{0} - static_cast<std::uint64_t>(digit)) / static_cast<std::uint64_t>(base)) fail(std::string(what) + " overflows");
      v = v * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(digit);
      ++pos_;
    }
    if (pos_ == start) fail(std::string("expected ") + what);
    return v;
  }

  word_t coefficient_literal() {
    std::uint64_t v;
    if (s_.substr(pos_, 2) == "0x" || s_.substr(pos_, 2) == "0X") {
      pos_ += 2;
      v = number(16, "hex digits");
    } else {
      v = number(10, "number");
    }
    if (v > 0xffffffffULL || !field_->contains(static_cast<word_t>(v))) fail("coefficient outside the field");
    return static_cast<word_t>(v);
  }

  ExprTerm term() {
    ExprTerm t;
    for (;;) {
      skip();
      if (pos_ >= s_.size()) fail("unexpected end of expression");
      const char ch = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        t.coeff = field_->mul(t.coeff, coefficient_literal());
      } else if (ch == 'x' && (pos_ + 1 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
        ++pos_;
        const std::uint64_t e = exponent();
        if (t.x_exp + e < t.x_exp) fail("exponent overflows");
        t.x_exp += e;
      } else if (std::isupper(static_cast<unsigned char>(ch)) &&
                 (pos_ + 1 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
        ++pos_;
        const std::uint64_t e = exponent();
        if (e > 1000000) fail("placeholder power too large");
        t.free[ch] += static_cast<unsigned>(e);
      } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const std::string name(s_.substr(start, pos_ - start));
        auto it = named_.find(name);
        if (it == named_.end()) {
          pos_ = start;
          fail("unbound coefficient '" + name + "'");
        }
        const std::uint64_t e = exponent();
        t.coeff = field_->mul(t.coeff, field_->pow(it->second, e));
      } else {
        fail(std::string("unexpected character '") + ch + "'");
      }
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        continue;
      }
      return t;
    }
  }

  const FieldPtr& field_;
  std::string_view s_;
  const std::map<std::string, word_t>& named_;
  std::size_t pos_ = 0;
};

}  // namespace

PolyExpr parse_poly_expr(const FieldPtr& field, std::string_view text, const std::map<std::string, word_t>& named) {
  for (const auto& [name, v] : named) {
    if (!field->contains(v)) throw Error(ErrorCode::ParseError, "value of '" + name + "' outside the field");
  }
  return ExprParser(field, text, named).run();
}

PolyFunc instantiate(const FieldPtr& field, const PolyExpr& expr, std::span<const word_t> values) {
  if (values.size() != expr.placeholders.size()) {
    throw Error(ErrorCode::InvalidParameters, "placeholder count mismatch");
  }
  PolyFunc::Terms t;
  for (const auto& term : expr.terms) {
    word_t c = term.coeff;
    for (const auto& [ph, e] : term.free) {
      const auto idx = static_cast<std::size_t>(
          std::lower_bound(expr.placeholders.begin(), expr.placeholders.end(), ph) - expr.placeholders.begin());
      c = field->mul(c, field->pow(values[idx], e));
    }
    const PolyFunc one(field, {{term.x_exp, c}});
    for (const auto& [e, v] : one.terms()) t[e] ^= v;
  }
  return PolyFunc(field, t);
}

PolyFunc parse_function(const FieldPtr& field, std::string_view text, const std::map<std::string, word_t>& named) {
  const PolyExpr e = parse_poly_expr(field, text, named);
  if (!e.placeholders.empty()) {
    throw Error(ErrorCode::ParseError, "unexpected placeholder '" + std::string(1, e.placeholders.front()) + "'");
  }
  return instantiate(field, e, {});
}

}  // namespace apn
