#include "mubpp/finite_field.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "mubpp/errors.hpp"

namespace mubpp {

namespace {

using Poly = std::vector<std::uint32_t>;

// Sparsest monic irreducible for each supported proper prime power.
const std::map<std::uint32_t, std::pair<std::uint32_t, Poly>>& builtin_moduli() {
  static const std::map<std::uint32_t, std::pair<std::uint32_t, Poly>> table = {
      {9, {3, {1, 0}}},          // t^2 + 1
      {25, {5, {2, 0}}},         // t^2 + 2
      {49, {7, {1, 0}}},         // t^2 + 1
      {121, {11, {1, 0}}},       // t^2 + 1
      {169, {13, {2, 0}}},       // t^2 + 2
      {27, {3, {1, 2, 0}}},      // t^3 + 2t + 1
      {125, {5, {1, 1, 0}}},     // t^3 + t + 1
      {81, {3, {2, 1, 0, 0}}},   // t^4 + t + 2
  };
  return table;
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1U) result = result * base % p;
    base = base * base % p;
    exp >>= 1U;
  }
  return result;
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo b over Z_p; b must be nonzero.
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const auto lead_inv = mod_pow(b.back(), p - 2, p);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - factor * b[i] % p) % p);
    }
    trim(a);
  }
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = static_cast<std::uint32_t>((out[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    }
  }
  trim(out);
  return out;
}

Poly poly_sub(const Poly& a, const Poly& b, std::uint32_t p) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t x = i < a.size() ? a[i] : 0;
    const std::uint32_t y = i < b.size() ? b[i] : 0;
    out[i] = (x + p - y) % p;
  }
  trim(out);
  return out;
}

// Quotient and remainder of a / b over Z_p.
std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const auto lead_inv = mod_pow(b.back(), p - 2, p);
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - b.size();
    q[shift] = static_cast<std::uint32_t>(factor);
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - factor * b[i] % p) % p);
    }
    trim(a);
  }
  trim(q);
  return {q, a};
}

Poly full_modulus(const FieldSpec& f) {
  Poly m = f.modulus();
  m.push_back(1);
  return m;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& low) {
  Poly f = low;
  f.push_back(1);
  const std::size_t m = low.size();
  for (std::size_t d = 1; d <= m / 2; ++d) {
    // Enumerate monic divisors t^d + g[d-1] t^(d-1) + ... + g[0].
    Poly g(d + 1, 0);
    g[d] = 1;
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t c = 0; c < count; ++c) {
      std::uint64_t v = c;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

FieldSpec::FieldSpec(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus)
    : p_(p), m_(m), order_(1), modulus_(std::move(modulus)) {
  for (std::uint32_t i = 0; i < m; ++i) order_ *= p;
}

FieldPtr FieldSpec::create(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus) {
  if (!is_prime(p)) throw DomainError("characteristic " + std::to_string(p) + " is not prime");
  if (m == 0) throw DomainError("extension degree must be positive");
  if (p == 2 && m > 1) throw DomainError("characteristic-2 extension fields are not supported");
  std::uint64_t order = 1;
  for (std::uint32_t i = 0; i < m; ++i) {
    order *= p;
    if (order > (1U << 16)) throw DomainError("field order too large");
  }
  if (m == 1) {
    modulus.clear();
  } else {
    if (modulus.size() != m) throw UsageError("modulus must list m low coefficients");
    for (auto c : modulus) {
      if (c >= p) throw UsageError("modulus coefficient out of range");
    }
    if (!is_irreducible(p, modulus)) throw DomainError("modulus is reducible over Z_p");
  }
  return FieldPtr(new FieldSpec(p, m, std::move(modulus)));
}

FieldPtr FieldSpec::for_order(std::uint32_t order) {
  if (order >= 2 && is_prime(order)) return create(order, 1);
  const auto& table = builtin_moduli();
  if (auto it = table.find(order); it != table.end()) {
    const auto& [p, modulus] = it->second;
    return create(p, static_cast<std::uint32_t>(modulus.size()), modulus);
  }
  throw DomainError("unsupported dimension " + std::to_string(order) +
                    ": need a prime or an odd prime power with a built-in modulus");
}

FieldElement::FieldElement(FieldPtr field, std::vector<std::uint32_t> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  if (!field_) throw UsageError("field element without a field");
  if (coeffs_.size() != field_->degree()) throw UsageError("coefficient vector has wrong length");
  for (auto c : coeffs_) {
    if (c >= field_->characteristic()) throw UsageError("coefficient out of range");
  }
}

FieldElement FieldElement::from_index(FieldPtr field, std::uint64_t index) {
  if (!field) throw UsageError("field element without a field");
  if (index >= field->order()) throw UsageError("field index out of range");
  std::vector<std::uint32_t> coeffs(field->degree());
  for (auto& c : coeffs) {
    c = static_cast<std::uint32_t>(index % field->characteristic());
    index /= field->characteristic();
  }
  return FieldElement(std::move(field), std::move(coeffs));
}

std::uint64_t FieldElement::index() const noexcept {
  std::uint64_t idx = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    idx = idx * field_->characteristic() + *it;
  }
  return idx;
}

bool FieldElement::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](auto c) { return c == 0; });
}

void FieldElement::require_same_field(const FieldElement& rhs) const {
  if (field_ != rhs.field_ && !(*field_ == *rhs.field_)) {
    throw UsageError("field elements belong to different fields");
  }
}

bool FieldElement::operator==(const FieldElement& rhs) const {
  require_same_field(rhs);
  return coeffs_ == rhs.coeffs_;
}

FieldElement FieldElement::operator+(const FieldElement& rhs) const {
  require_same_field(rhs);
  const auto p = field_->characteristic();
  std::vector<std::uint32_t> out(coeffs_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (coeffs_[i] + rhs.coeffs_[i]) % p;
  return FieldElement(field_, std::move(out));
}

FieldElement FieldElement::operator-(const FieldElement& rhs) const {
  require_same_field(rhs);
  const auto p = field_->characteristic();
  std::vector<std::uint32_t> out(coeffs_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (coeffs_[i] + p - rhs.coeffs_[i]) % p;
  return FieldElement(field_, std::move(out));
}

FieldElement FieldElement::operator-() const {
  return zero(field_) - *this;
}

FieldElement FieldElement::operator*(const FieldElement& rhs) const {
  require_same_field(rhs);
  const auto p = field_->characteristic();
  Poly prod = poly_mul(coeffs_, rhs.coeffs_, p);
  if (field_->degree() > 1) prod = poly_mod(std::move(prod), full_modulus(*field_), p);
  else if (!prod.empty()) prod[0] %= p;
  prod.resize(field_->degree(), 0);
  return FieldElement(field_, std::move(prod));
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw DomainError("division by zero in GF(" + std::to_string(field_->order()) + ")");
  const auto p = field_->characteristic();
  if (field_->degree() == 1) {
    return FieldElement(field_, {static_cast<std::uint32_t>(mod_pow(coeffs_[0], p - 2, p))});
  }
  // Extended Euclid on (modulus, a): track s with s * a = r (mod modulus).
  Poly r0 = full_modulus(*field_);
  Poly r1 = coeffs_;
  trim(r1);
  Poly s0;
  Poly s1 = {1};
  while (!r1.empty()) {
    auto [q, r] = poly_divmod(r0, r1, p);
    Poly s = poly_sub(s0, poly_mul(q, s1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  // r0 is a nonzero constant since the modulus is irreducible.
  const std::uint64_t scale = mod_pow(r0[0], p - 2, p);
  Poly inv = s0;
  for (auto& c : inv) c = static_cast<std::uint32_t>(c * scale % p);
  inv = poly_mod(std::move(inv), full_modulus(*field_), p);
  inv.resize(field_->degree(), 0);
  return FieldElement(field_, std::move(inv));
}

FieldElement FieldElement::operator/(const FieldElement& rhs) const {
  require_same_field(rhs);
  return *this * rhs.inverse();
}

FieldElement FieldElement::pow(std::uint64_t exponent) const {
  FieldElement result = one(field_);
  FieldElement base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    base = base * base;
    exponent >>= 1U;
  }
  return result;
}

std::uint32_t FieldElement::character_exponent() const {
  if (field_->degree() == 1) return coeffs_[0];
  FieldElement sum = *this;
  FieldElement frob = *this;
  for (std::uint32_t i = 1; i < field_->degree(); ++i) {
    frob = frob.pow(field_->characteristic());
    sum = sum + frob;
  }
  // The trace lies in the prime subfield, i.e. only the constant term survives.
  return sum.coeffs_[0];
}

}  // namespace mubpp
