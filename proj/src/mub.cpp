#include "mubpp/mub.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mubpp/errors.hpp"

namespace mubpp {

const Basis& MubSet::at(std::size_t l) const {
  if (l >= bases.size()) {
    throw UsageError("basis index " + std::to_string(l) + " out of range for a set of " +
                     std::to_string(bases.size()));
  }
  return bases[l];
}

namespace {

MubSet qubit_mubs() {
  const double s = 1.0 / std::numbers::sqrt2;
  const Complex i(0.0, 1.0);
  MubSet set;
  set.dim = 2;
  set.bases.push_back({0, CMatrix::identity(2)});
  set.bases.push_back({1, CMatrix(2, 2, {s, s, s, -s})});
  set.bases.push_back({2, CMatrix(2, 2, {s, s, s * i, -s * i})});
  return set;
}

}  // namespace

MubSet build_mub_set(const FieldPtr& field) {
  if (!field) throw UsageError("build_mub_set: null field");
  const std::uint32_t n = field->order();
  const std::uint32_t p = field->characteristic();
  if (p == 2) {
    if (n == 2) return qubit_mubs();
    throw DomainError("unsupported dimension " + std::to_string(n));
  }

  std::vector<FieldElement> elems;
  elems.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) elems.push_back(FieldElement::from_index(field, i));
  const FieldElement half = FieldElement::one(field) / FieldElement::from_index(field, 2 % p);

  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Complex> roots(p);
  for (std::uint32_t e = 0; e < p; ++e) {
    const double angle = 2.0 * std::numbers::pi * e / p;
    roots[e] = Complex(amp * std::cos(angle), amp * std::sin(angle));
  }

  MubSet set;
  set.dim = n;
  set.bases.reserve(n + 1);
  set.bases.push_back({0, CMatrix::identity(n)});
  for (std::uint32_t l = 1; l <= n; ++l) {
    const FieldElement& shift = elems[l - 1];
    CMatrix m(n, n);
    for (std::uint32_t k = 0; k < n; ++k) {
      const FieldElement neg_k = -elems[k];
      for (std::uint32_t q = 0; q < n; ++q) {
        const std::uint32_t linear = (neg_k * elems[q]).character_exponent();
        const std::uint32_t quadratic = (shift * elems[q] * elems[q] * half).character_exponent();
        m(q, k) = roots[(linear + quadratic) % p];
      }
    }
    set.bases.push_back({l, std::move(m)});
  }
  return set;
}

MubSet build_mub_set(std::uint32_t dim) { return build_mub_set(FieldSpec::for_order(dim)); }

MubCheck verify_mub(const MubSet& set, double tol) {
  MubCheck check;
  const std::size_t n = set.dim;
  const double unbiased = 1.0 / static_cast<double>(n);
  for (const auto& b : set.bases) {
    if (b.matrix.rows() != n || b.matrix.cols() != n) throw UsageError("basis has wrong shape");
    const CMatrix gram = matmul(dagger(b.matrix), b.matrix);
    check.max_unitarity_error =
        std::max(check.max_unitarity_error, max_abs(gram - CMatrix::identity(n)));
  }
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a; b < set.size(); ++b) {
      // Column overlaps of bases a and b are the entries of B_a^dagger B_b.
      const CMatrix overlaps = matmul(dagger(set.bases[a].matrix), set.bases[b].matrix);
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          const double target = a == b ? (k == l ? 1.0 : 0.0) : unbiased;
          check.max_deviation = std::max(check.max_deviation, std::abs(std::norm(overlaps(k, l)) - target));
        }
      }
    }
  }
  check.pass = check.max_deviation <= tol;
  return check;
}

Basis conjugate_basis(const Basis& b) { return {b.label, conjugate(b.matrix)}; }

nlohmann::json mub_to_json(const MubSet& set) {
  nlohmann::json bases = nlohmann::json::array();
  for (const auto& b : set.bases) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& z : b.matrix.entries()) entries.push_back({z.real(), z.imag()});
    bases.push_back(std::move(entries));
  }
  return {{"dim", set.dim}, {"bases", std::move(bases)}};
}

MubSet mub_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("dim") || !j.contains("bases")) {
      throw UsageError("MUB file must be an object with 'dim' and 'bases'");
    }
    const auto dim = j.at("dim").get<std::size_t>();
    if (dim < 2) throw UsageError("MUB file: dim must be at least 2");
    const auto& bases = j.at("bases");
    if (!bases.is_array() || bases.empty()) throw UsageError("MUB file: 'bases' must be a nonempty array");
    MubSet set;
    set.dim = dim;
    for (std::size_t l = 0; l < bases.size(); ++l) {
      const auto& entries = bases[l];
      if (!entries.is_array() || entries.size() != dim * dim) {
        throw UsageError("MUB file: basis " + std::to_string(l) + " must have dim*dim entries");
      }
      std::vector<Complex> values;
      values.reserve(entries.size());
      for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
          throw UsageError("MUB file: entries must be [re, im] number pairs");
        }
        values.emplace_back(e[0].get<double>(), e[1].get<double>());
      }
      set.bases.push_back({l, CMatrix(dim, dim, std::move(values))});
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("MUB file: ") + e.what());
  }
}

}  // namespace mubpp
