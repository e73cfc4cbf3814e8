#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace mubpp {

class FieldSpec;
using FieldPtr = std::shared_ptr<const FieldSpec>;

/// Parameters of GF(p^m). For m > 1 the field is Z_p[t] / (modulus).
///
/// Elements are indexed 0..N-1 by the base-p value of their coefficient
/// vector (coefficient of t^0 is the least significant digit). Every index
/// used for basis vectors, columns and attack inputs follows this bijection.
class FieldSpec {
 public:
  /// Field of order `order`, using the built-in irreducible modulus when
  /// order is a proper prime power. Throws DomainError when `order` is not
  /// a supported prime power (including 2^m with m > 1).
  static FieldPtr for_order(std::uint32_t order);

  /// `modulus` holds the m low coefficients of the monic modulus
  /// t^m + modulus[m-1] t^(m-1) + ... + modulus[0]. Ignored for m == 1.
  static FieldPtr create(std::uint32_t p, std::uint32_t m,
                         std::vector<std::uint32_t> modulus = {});

  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t degree() const noexcept { return m_; }
  std::uint32_t order() const noexcept { return order_; }
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  bool operator==(const FieldSpec& other) const noexcept {
    return p_ == other.p_ && m_ == other.m_ && modulus_ == other.modulus_;
  }

 private:
  FieldSpec(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus);

  std::uint32_t p_;
  std::uint32_t m_;
  std::uint32_t order_;
  std::vector<std::uint32_t> modulus_;
};

bool is_prime(std::uint64_t n);

/// Returns true iff t^m + low[m-1] t^(m-1) + ... + low[0] has no monic factor
/// of degree 1..m/2 over Z_p. Exhaustive, so only meant for small p^m.
bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& low);

/// Immutable element of GF(p^m).
class FieldElement {
 public:
  FieldElement(FieldPtr field, std::vector<std::uint32_t> coeffs);

  static FieldElement from_index(FieldPtr field, std::uint64_t index);
  static FieldElement zero(FieldPtr field) { return from_index(std::move(field), 0); }
  static FieldElement one(FieldPtr field) { return from_index(std::move(field), 1); }

  const FieldPtr& field() const noexcept { return field_; }
  const std::vector<std::uint32_t>& coeffs() const noexcept { return coeffs_; }
  std::uint64_t index() const noexcept;
  bool is_zero() const noexcept;

  FieldElement operator+(const FieldElement& rhs) const;
  FieldElement operator-(const FieldElement& rhs) const;
  FieldElement operator*(const FieldElement& rhs) const;
  /// Throws DomainError when rhs is zero.
  FieldElement operator/(const FieldElement& rhs) const;
  FieldElement operator-() const;

  FieldElement inverse() const;
  FieldElement pow(std::uint64_t exponent) const;

  /// Exponent of the additive character in Z_p. The value itself when
  /// m == 1, otherwise the absolute trace a + a^p + ... + a^(p^(m-1)).
  std::uint32_t character_exponent() const;

  bool operator==(const FieldElement& rhs) const;

 private:
  void require_same_field(const FieldElement& rhs) const;

  FieldPtr field_;
  std::vector<std::uint32_t> coeffs_;
};

}  // namespace mubpp
