#include "mubpp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mubpp/errors.hpp"
#include "mubpp/finite_field.hpp"

namespace mubpp {

VMatrix build_v_matrix(std::size_t alpha, const MubSet& set, const std::vector<std::size_t>& subset) {
  if (subset.empty()) throw UsageError("V matrix needs at least one basis");
  if (alpha >= set.dim) throw UsageError("input index out of range");
  const std::size_t n = set.dim;
  CMatrix rows(subset.size(), n);
  for (std::size_t r = 0; r < subset.size(); ++r) {
    const CMatrix& b = set.at(subset[r]).matrix;
    for (std::size_t j = 0; j < n; ++j) rows(r, j) = std::conj(b(j, alpha));
  }
  return {alpha, subset, std::move(rows)};
}

CMatrix gram_rows(const VMatrix& v) { return matmul(v.rows, dagger(v.rows)); }

CMatrix gram_columns(const VMatrix& v) { return matmul(dagger(v.rows), v.rows); }

OptimalAttack exact_max_nondetection(const VMatrix& v, PowerIterationOptions opts) {
  const SingularPair top = top_singular(v.rows, opts);
  const double sigma_sq = top.sigma1 * top.sigma1;
  return {sigma_sq / static_cast<double>(v.rows.rows()), sigma_sq, AttackVector(v.alpha, top.right_vec.normalized())};
}

double singular_value_bound(const VMatrix& v, PowerIterationOptions opts) {
  const double sigma = top_singular(v.rows, opts).sigma1;
  return sigma * sigma / static_cast<double>(v.rows.rows());
}

double mub_schur_bound(std::size_t dim, std::size_t m) {
  const double n = static_cast<double>(dim);
  const double mm = static_cast<double>(m);
  return (1.0 + mm / std::sqrt(n)) / (1.0 + mm);
}

double full_family_schur_bound(std::size_t dim) {
  const double n = static_cast<double>(dim);
  return (1.0 + std::sqrt(n)) / (1.0 + n);
}

double odd_dimension_bound(std::size_t dim) {
  if (dim % 2 == 0) throw DomainError("bound holds for odd prime-power dimensions only");
  return 3.0 / (1.0 + static_cast<double>(dim));
}

double no_computational_bound(std::size_t dim) {
  if (dim % 2 == 0) throw DomainError("bound holds for odd prime-power dimensions only");
  return 2.0 / static_cast<double>(dim);
}

double two_basis_bound(std::size_t dim) { return (1.0 + 1.0 / std::sqrt(static_cast<double>(dim))) / 2.0; }

PqReport verify_pq_structure(const MubSet& set, std::size_t alpha, double tol) {
  const std::size_t n = set.dim;
  if (n % 2 == 0) throw DomainError("P+Q structure is stated for odd prime-power dimensions only");
  if (set.size() != n + 1) throw DomainError("P+Q structure needs the full N+1 family");
  const FieldPtr field = FieldSpec::for_order(static_cast<std::uint32_t>(n));

  std::vector<std::size_t> rest(n);
  std::iota(rest.begin(), rest.end(), std::size_t{1});
  const CMatrix p = gram_columns(build_v_matrix(alpha, set, {0}));
  const CMatrix q = gram_columns(build_v_matrix(alpha, set, rest));

  PqReport report;
  report.alpha = alpha;
  for (std::size_t mu = 0; mu < n; ++mu) {
    const FieldElement x = FieldElement::from_index(field, mu);
    for (std::size_t nu = 0; nu < n; ++nu) {
      const FieldElement y = FieldElement::from_index(field, nu);
      const double p_target = (mu == alpha && nu == alpha) ? 1.0 : 0.0;
      const double q_target = ((x - y) * (x + y)).is_zero() ? 1.0 : 0.0;
      const double dp = std::abs(p(mu, nu) - p_target);
      const double dq = std::abs(std::abs(q(mu, nu)) - q_target);
      report.p_deviation = std::max(report.p_deviation, dp);
      report.q_deviation = std::max(report.q_deviation, dq);
      if (dp > tol) {
        std::ostringstream msg;
        msg << "P(" << mu << "," << nu << ") = " << p(mu, nu) << ", expected " << p_target;
        report.failures.push_back(msg.str());
      }
      if (dq > tol) {
        std::ostringstream msg;
        msg << "|Q(" << mu << "," << nu << ")| = " << std::abs(q(mu, nu)) << ", expected " << q_target;
        report.failures.push_back(msg.str());
      }
    }
  }
  report.sigma1_q = top_singular(q).sigma1;
  if (report.sigma1_q > 2.0 + 1e-9) {
    report.failures.push_back("sigma1(Q) = " + std::to_string(report.sigma1_q) + " exceeds 2");
  }
  report.pass = report.failures.empty();
  return report;
}

BasisSubset BasisSubset::parse(const std::string& text) {
  if (text == "all") return {SubsetKind::all, {}};
  if (text == "no-computational") return {SubsetKind::no_computational, {}};
  BasisSubset s{SubsetKind::explicit_list, {}};
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("basis subset must be 'all', 'no-computational' or a comma-separated index list, got '" +
                       text + "'");
    }
    s.indices.push_back(std::stoul(token));
  }
  if (s.indices.empty()) throw UsageError("basis subset is empty");
  return s;
}

std::vector<std::size_t> BasisSubset::resolve(std::size_t set_size) const {
  std::vector<std::size_t> out;
  switch (kind) {
    case SubsetKind::all:
      out.resize(set_size);
      std::iota(out.begin(), out.end(), std::size_t{0});
      break;
    case SubsetKind::no_computational:
      out.resize(set_size - 1);
      std::iota(out.begin(), out.end(), std::size_t{1});
      break;
    case SubsetKind::explicit_list:
      out = indices;
      for (auto i : out) {
        if (i >= set_size) throw UsageError("basis index " + std::to_string(i) + " out of range");
      }
      {
        auto sorted = out;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
          throw UsageError("basis subset lists an index twice");
        }
      }
      break;
  }
  return out;
}

std::string BasisSubset::descriptor() const {
  switch (kind) {
    case SubsetKind::all:
      return "all";
    case SubsetKind::no_computational:
      return "no-computational";
    case SubsetKind::explicit_list:
      break;
  }
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(indices[i]);
  }
  return out;
}

double BoundReport::tightest_analytic() const {
  double best = bound_thm2;
  for (const auto& b : {bound_eq13, bound_thm3, bound_corollary}) {
    if (b) best = std::min(best, *b);
  }
  return best;
}

BoundReport build_report(const MubSet& set, const BasisSubset& subset, PowerIterationOptions opts) {
  const std::size_t n = set.dim;
  const auto used = subset.resolve(set.size());
  auto sorted = used;
  std::sort(sorted.begin(), sorted.end());
  const bool full = sorted.size() == set.size();
  const bool no_comp = sorted.size() + 1 == set.size() && sorted.front() == 1;
  const bool odd = n % 2 == 1;

  BoundReport r;
  r.dim = n;
  r.bases_used = used;
  r.subset = subset.descriptor();
  r.d_min_alpha = 2.0;
  for (std::size_t alpha = 0; alpha < n; ++alpha) {
    const OptimalAttack opt = exact_max_nondetection(build_v_matrix(alpha, set, used), opts);
    r.d_per_alpha.push_back(opt.d_max);
    r.d_exact = std::max(r.d_exact, opt.d_max);
    r.d_min_alpha = std::min(r.d_min_alpha, opt.d_max);
    r.sigma1_sq = std::max(r.sigma1_sq, opt.sigma1_sq);
  }
  r.alpha_spread = r.d_exact - r.d_min_alpha;
  r.bound_thm1 = r.sigma1_sq / static_cast<double>(used.size());
  r.bound_thm2 = mub_schur_bound(n, used.size() - 1);
  if (full) r.bound_eq13 = full_family_schur_bound(n);
  if (full && odd) r.bound_thm3 = odd_dimension_bound(n);
  if (no_comp && odd) r.bound_corollary = no_computational_bound(n);
  r.bound_two_basis = two_basis_bound(n);
  return r;
}

std::string report_csv_header() { return "N,bases,subset,d_exact,thm1,thm2,eq13,thm3,corollary,two_basis,sigma1_sq"; }

namespace {

void put(std::ostringstream& out, const std::optional<double>& v) {
  out << ',';
  if (v) out << *v;
  else out << "n/a";
}

}  // namespace

std::string report_csv_row(const BoundReport& r) {
  std::ostringstream out;
  out.precision(15);
  out << r.dim << ',' << r.bases_used.size() << ',' << r.subset;
  put(out, r.d_exact);
  put(out, r.bound_thm1);
  put(out, r.bound_thm2);
  put(out, r.bound_eq13);
  put(out, r.bound_thm3);
  put(out, r.bound_corollary);
  put(out, r.bound_two_basis);
  put(out, r.sigma1_sq);
  return out.str();
}

nlohmann::json report_to_json(const BoundReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json("n/a"); };
  return {{"N", r.dim},
          {"bases", r.bases_used.size()},
          {"subset", r.subset},
          {"d_exact", r.d_exact},
          {"thm1", r.bound_thm1},
          {"thm2", r.bound_thm2},
          {"eq13", opt(r.bound_eq13)},
          {"thm3", opt(r.bound_thm3)},
          {"corollary", opt(r.bound_corollary)},
          {"two_basis", r.bound_two_basis},
          {"sigma1_sq", r.sigma1_sq},
          {"alpha_spread", r.alpha_spread},
          {"d_per_alpha", r.d_per_alpha}};
}

std::optional<AttackPolicy> resolve_attack(const SessionConfig& cfg, const MubSet& set) {
  const std::size_t n = set.dim;
  switch (cfg.attack) {
    case SessionConfig::AttackKind::none:
      return std::nullopt;
    case SessionConfig::AttackKind::optimal: {
      const auto& w = cfg.control.weights;
      for (double x : w) {
        if (std::abs(x - w.front()) > 1e-12) {
          throw UsageError("the optimal attack is defined for uniform basis weights only");
        }
      }
      AttackPolicy policy;
      for (std::size_t alpha = 0; alpha < n; ++alpha) {
        policy.push_back(exact_max_nondetection(build_v_matrix(alpha, set, cfg.control.basis_indices)).attack);
      }
      return policy;
    }
    case SessionConfig::AttackKind::explicit_amps: {
      AttackPolicy policy;
      for (std::size_t alpha = 0; alpha < n; ++alpha) {
        const CVector& amps = cfg.attack_amps.size() == 1 ? cfg.attack_amps.front() : cfg.attack_amps.at(alpha);
        if (amps.dim() != n) throw UsageError("attack amplitudes have wrong dimension");
        policy.emplace_back(alpha, amps);
      }
      return policy;
    }
  }
  return std::nullopt;
}

}  // namespace mubpp
