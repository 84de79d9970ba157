#include "apn/gf2m.hpp"

#include <array>
#include <bit>
#include <mutex>
#include <sstream>

namespace apn {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ReduciblePolynomial: return "ReduciblePolynomial";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorCode::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorCode::NoGoodEvaluationPoint: return "NoGoodEvaluationPoint";
    case ErrorCode::ExtensionTooLarge: return "ExtensionTooLarge";
    case ErrorCode::BecameZero: return "BecameZero";
    case ErrorCode::ZeroScalar: return "ZeroScalar";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::FieldTooLarge: return "FieldTooLarge";
    case ErrorCode::QAffineInput: return "QAffineInput";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::DiagonalNotConstant: return "DiagonalNotConstant";
    case ErrorCode::CorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

// Binary polynomials of degree < 32 multiplied without reduction.
std::uint64_t clmul32(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t r = 0;
  while (b != 0) {
    if (b & 1U) r ^= a;
    a <<= 1;
    b >>= 1;
  }
  return r;
}

std::uint64_t reduce(std::uint64_t a, std::uint64_t modulus, int n) noexcept {
  for (int i = gf2_degree(a); i >= n; --i) {
    if ((a >> i) & 1U) a ^= modulus << (i - n);
  }
  return a;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p, int n) noexcept {
  return reduce(clmul32(a, b), p, n);
}

std::uint64_t gcd_gf2(std::uint64_t a, std::uint64_t b) noexcept {
  while (b != 0) {
    const int db = gf2_degree(b);
    while (a != 0 && gf2_degree(a) >= db) a ^= b << (gf2_degree(a) - db);
    std::swap(a, b);
  }
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

int gf2_degree(std::uint64_t poly) noexcept {
  return poly == 0 ? -1 : 63 - std::countl_zero(poly);
}

bool is_irreducible_gf2(std::uint64_t poly) {
  const int n = gf2_degree(poly);
  if (n <= 0) return false;
  if (n == 1) return true;
  if (n > 32) throw Error(ErrorCode::DegreeMismatch, "binary polynomial degree above 32");
  if ((poly & 1U) == 0) return false;  // divisible by x
  // Rabin: x^(2^n) = x mod p, and gcd(x^(2^(n/r)) - x, p) = 1 for primes r | n.
  std::vector<std::uint64_t> frob(static_cast<std::size_t>(n) + 1);
  frob[0] = 2;  // x
  for (int i = 1; i <= n; ++i) frob[i] = mulmod(frob[i - 1], frob[i - 1], poly, n);
  if (frob[n] != 2) return false;
  for (std::uint64_t r : prime_factors(static_cast<std::uint64_t>(n))) {
    const std::uint64_t h = frob[n / r] ^ 2U;
    if (gf2_degree(gcd_gf2(poly, h)) > 0) return false;
  }
  return true;
}

std::uint64_t default_modulus(unsigned m) {
  if (m < 1 || m > Field::kMaxDegree) {
    throw Error(ErrorCode::DegreeMismatch, "field degree must lie in 1..32");
  }
  const std::uint64_t top = std::uint64_t{1} << m;
  for (std::uint64_t low = 1; low < top; low += 2) {
    if (is_irreducible_gf2(top | low)) return top | low;
  }
  throw Error(ErrorCode::ReduciblePolynomial, "no irreducible polynomial found");
}

FieldPtr Field::create(unsigned m, std::optional<std::uint64_t> modulus) {
  if (m < 1 || m > kMaxDegree) {
    throw Error(ErrorCode::DegreeMismatch, "field degree must lie in 1..32, got " + std::to_string(m));
  }
  const std::uint64_t poly = modulus.value_or(default_modulus(m));
  if (gf2_degree(poly) != static_cast<int>(m)) {
    throw Error(ErrorCode::DegreeMismatch, "modulus degree differs from m = " + std::to_string(m));
  }
  if (!is_irreducible_gf2(poly)) {
    std::ostringstream os;
    os << "modulus 0x" << std::hex << poly << " is reducible over F_2";
    throw Error(ErrorCode::ReduciblePolynomial, os.str());
  }
  return std::make_shared<const Field>(m, poly);
}

FieldPtr Field::standard(unsigned m) {
  static std::mutex mu;
  static std::array<FieldPtr, kMaxDegree + 1> cache;
  if (m < 1 || m > kMaxDegree) return create(m);
  std::lock_guard lock(mu);
  if (!cache[m]) cache[m] = create(m);
  return cache[m];
}

Field::Field(unsigned m, std::uint64_t modulus) : m_(m), modulus_(modulus) {
  for (unsigned i = 0; i < m_; ++i) {
    // Tr(x^i) by m squarings of x^i.
    std::uint64_t y = reduce(std::uint64_t{1} << i, modulus_, static_cast<int>(m_));
    std::uint64_t acc = 0;
    for (unsigned k = 0; k < m_; ++k) {
      acc ^= y;
      y = mulmod(y, y, modulus_, static_cast<int>(m_));
    }
    if (acc & 1U) trace_mask_ |= word_t{1} << i;
  }
  generator_ = find_generator();
  if (m_ <= kTableDegree) {
    const std::uint64_t order = size() - 1;
    exp_.resize(2 * order);
    log_.assign(size(), 0);
    word_t g = 1;
    for (std::uint64_t i = 0; i < order; ++i) {
      exp_[i] = g;
      exp_[i + order] = g;
      log_[g] = static_cast<std::uint32_t>(i);
      g = mul_clmul(g, generator_);
    }
  }
}

word_t Field::mul_clmul(word_t a, word_t b) const noexcept {
  return static_cast<word_t>(mulmod(a, b, modulus_, static_cast<int>(m_)));
}

word_t Field::find_generator() const {
  const std::uint64_t order = size() - 1;
  if (order == 1) return 1;
  const auto primes = prime_factors(order);
  auto slow_pow = [&](word_t a, std::uint64_t e) {
    std::uint64_t r = 1, b = a;
    while (e != 0) {
      if (e & 1U) r = mulmod(r, b, modulus_, static_cast<int>(m_));
      b = mulmod(b, b, modulus_, static_cast<int>(m_));
      e >>= 1;
    }
    return static_cast<word_t>(r);
  };
  for (std::uint64_t g = 2; g < size(); ++g) {
    bool ok = true;
    for (std::uint64_t p : primes) {
      if (slow_pow(static_cast<word_t>(g), order / p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return static_cast<word_t>(g);
  }
  return 1;
}

word_t Field::inv(word_t a) const {
  if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  if (has_tables()) {
    const std::uint32_t order = static_cast<std::uint32_t>(size() - 1);
    return exp_[(order - log_[a]) % order];
  }
  return pow(a, size() - 2);
}

word_t Field::pow(word_t a, std::uint64_t e) const noexcept {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (has_tables()) {
    const std::uint64_t order = size() - 1;
    return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % order)) % order];
  }
  word_t r = 1;
  word_t b = a;
  while (e != 0) {
    if (e & 1U) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

std::string Field::describe() const {
  std::ostringstream os;
  os << "GF(2^" << m_ << ") mod 0x" << std::hex << modulus_;
  return os.str();
}

void require_same_field(const Field& a, const Field& b) {
  if (&a != &b && !a.same_as(b)) {
    throw Error(ErrorCode::FieldMismatch, a.describe() + " vs " + b.describe());
  }
}

FieldElement::FieldElement(FieldPtr field, word_t value) : field_(std::move(field)), value_(value) {
  if (!field_->contains(value_)) {
    throw Error(ErrorCode::InvalidParameters, "element wider than the field");
  }
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same_field(*field_, *o.field_);
  return {field_, value_ ^ o.value_};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same_field(*field_, *o.field_);
  return {field_, field_->mul(value_, o.value_)};
}

FieldElement FieldElement::inv() const { return {field_, field_->inv(value_)}; }

FieldElement FieldElement::pow(std::uint64_t e) const { return {field_, field_->pow(value_, e)}; }

FieldElement FieldElement::frobenius() const { return {field_, field_->sqr(value_)}; }

unsigned FieldElement::trace() const { return field_->trace(value_); }

bool FieldElement::operator==(const FieldElement& o) const {
  return field_->same_as(*o.field_) && value_ == o.value_;
}

}  // namespace apn
