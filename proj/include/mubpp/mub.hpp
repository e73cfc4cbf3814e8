#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "mubpp/finite_field.hpp"
#include "mubpp/matrix.hpp"

namespace mubpp {

/// Orthonormal basis of C^N. Column k of `matrix` is |b_k> written in the
/// computational basis, so matrix(q, k) is the coefficient of |q> in |b_k>.
struct Basis {
  std::size_t label = 0;
  CMatrix matrix;

  std::size_t dim() const noexcept { return matrix.rows(); }
  CVector vector(std::size_t k) const { return matrix.col(k); }
};

struct MubSet {
  std::size_t dim = 0;
  std::vector<Basis> bases;

  std::size_t size() const noexcept { return bases.size(); }
  const Basis& at(std::size_t l) const;
};

/// Complete MUB family for N = p^m. Basis 0 is computational and basis
/// l >= 1 has entries omega^{chi(-k q)} omega^{chi((l-1) q q / 2)} / sqrt(N),
/// where chi is the additive character exponent of the field. For N = 2 the
/// three standard qubit bases (Z, X, Y eigenbases) are returned instead.
MubSet build_mub_set(const FieldPtr& field);
MubSet build_mub_set(std::uint32_t dim);

struct MubCheck {
  double max_deviation = 0.0;
  double max_unitarity_error = 0.0;
  bool pass = false;
};

/// Largest |(|<b^m_k|b^n_l>|^2) - target| over every pair of vectors.
MubCheck verify_mub(const MubSet& set, double tol);

/// Entrywise complex conjugate, i.e. the basis Bob measures in so that his
/// home-qudit outcome matches Alice's travel-qudit outcome.
Basis conjugate_basis(const Basis& b);

/// {"dim": N, "bases": [[[re, im], ...], ...]} with each basis row-major.
nlohmann::json mub_to_json(const MubSet& set);
/// Throws UsageError on malformed input.
MubSet mub_from_json(const nlohmann::json& j);

}  // namespace mubpp
