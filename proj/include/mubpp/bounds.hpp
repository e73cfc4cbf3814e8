#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mubpp/matrix.hpp"
#include "mubpp/mub.hpp"
#include "mubpp/protocol.hpp"

namespace mubpp {

/// Rows are <b^(m)_alpha| for each control basis m, in subset order.
struct VMatrix {
  std::size_t alpha = 0;
  std::vector<std::size_t> subset;
  CMatrix rows;
};

VMatrix build_v_matrix(std::size_t alpha, const MubSet& set, const std::vector<std::size_t>& subset);

/// W = V V^dagger, (M+1) x (M+1).
CMatrix gram_rows(const VMatrix& v);
/// W = V^dagger V, N x N.
CMatrix gram_columns(const VMatrix& v);

/// Largest d_alpha over all attacks for uniformly chosen bases, and the
/// attack achieving it.
struct OptimalAttack {
  double d_max = 0.0;
  double sigma1_sq = 0.0;
  AttackVector attack;
};

OptimalAttack exact_max_nondetection(const VMatrix& v, PowerIterationOptions opts = {});

/// sigma1^2(V) / (M+1).
double singular_value_bound(const VMatrix& v, PowerIterationOptions opts = {});
/// (1 + M/sqrt N) / (1 + M) for M+1 mutually unbiased control bases.
double mub_schur_bound(std::size_t dim, std::size_t m);
/// mub_schur_bound with the full family, M = N: (1 + sqrt N) / (1 + N).
double full_family_schur_bound(std::size_t dim);
/// 3 / (1 + N); odd N only (DomainError otherwise).
double odd_dimension_bound(std::size_t dim);
/// 2 / N with the computational basis left out; odd N only.
double no_computational_bound(std::size_t dim);
/// (1 + 1/sqrt N) / 2, the two-basis reference.
double two_basis_bound(std::size_t dim);

/// Result of checking the split V^dagger V = P + Q, where P is the
/// computational-basis term and Q the sum over the remaining N bases.
struct PqReport {
  std::size_t alpha = 0;
  double p_deviation = 0.0;  ///< max |P - e_alpha e_alpha^dagger|
  double q_deviation = 0.0;  ///< max ||Q_{mu,nu}| - [(mu-nu)(mu+nu) == 0]|
  double sigma1_q = 0.0;
  bool pass = false;
  std::vector<std::string> failures;
};

/// Requires odd N and the full N+1 set; throws DomainError otherwise.
PqReport verify_pq_structure(const MubSet& set, std::size_t alpha, double tol = 1e-10);

enum class SubsetKind { all, no_computational, explicit_list };

struct BasisSubset {
  SubsetKind kind = SubsetKind::all;
  std::vector<std::size_t> indices;  ///< only for explicit_list

  /// "all", "no-computational", or a comma-separated index list.
  static BasisSubset parse(const std::string& text);
  std::vector<std::size_t> resolve(std::size_t set_size) const;
  std::string descriptor() const;
};

struct BoundReport {
  std::size_t dim = 0;
  std::vector<std::size_t> bases_used;
  std::string subset;
  double d_exact = 0.0;  ///< max over alpha
  double d_min_alpha = 0.0;
  double alpha_spread = 0.0;
  double sigma1_sq = 0.0;  ///< max over alpha
  double bound_thm1 = 0.0;
  double bound_thm2 = 0.0;
  std::optional<double> bound_eq13;
  std::optional<double> bound_thm3;
  std::optional<double> bound_corollary;
  double bound_two_basis = 0.0;
  std::vector<double> d_per_alpha;

  /// Smallest analytic bound that applies to this configuration.
  double tightest_analytic() const;
};

/// Exact optimum for every alpha plus each bound applicable to `subset`.
/// The thm3 column is filled only for the full odd-N family and the
/// corollary column only for "every basis except computational".
BoundReport build_report(const MubSet& set, const BasisSubset& subset, PowerIterationOptions opts = {});

std::string report_csv_header();
std::string report_csv_row(const BoundReport& r);
nlohmann::json report_to_json(const BoundReport& r);

/// Resolves a session's attack field against the built set. "optimal"
/// needs uniform weights and yields the top right singular vector of
/// V^(alpha) for each alpha.
std::optional<AttackPolicy> resolve_attack(const SessionConfig& cfg, const MubSet& set);

}  // namespace mubpp
