#include "mubpp/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mubpp/errors.hpp"

namespace mubpp {

namespace {

constexpr double kNormTol = 1e-12;

Complex root_of_unity(std::size_t n, std::size_t power) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(power % n) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

std::size_t sample(const std::vector<double>& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // Rounding left u above the accumulated mass; take the last supported outcome.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return i;
  }
  return probs.size() - 1;
}

EncodingOp best_outcome(const std::vector<double>& dist, std::size_t dim) {
  const auto it = std::max_element(dist.begin(), dist.end());
  const auto idx = static_cast<std::size_t>(it - dist.begin());
  if (*it < 1.0 - 1e-9) {
    std::ostringstream msg;
    msg << "Bell discrimination is ambiguous: best outcome probability " << *it;
    throw AmbiguityError(msg.str(), dist);
  }
  return {idx / dim, idx % dim};
}

}  // namespace

EprState prepare_epr(std::size_t dim) {
  if (dim < 2) throw DomainError("EPR pair needs dimension >= 2");
  EprState s{dim, CVector(dim * dim)};
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t k = 0; k < dim; ++k) s.amplitudes[k * dim + k] = amp;
  return s;
}

CMatrix reduced_travel_density(const EprState& state) {
  const std::size_t n = state.dim;
  CMatrix rho(n, n);
  for (std::size_t h = 0; h < n; ++h) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        rho(i, j) += state.amplitudes[h * n + i] * std::conj(state.amplitudes[h * n + j]);
      }
    }
  }
  return rho;
}

CMatrix encoding_matrix(std::size_t dim, EncodingOp op) {
  if (op.mu >= dim || op.nu >= dim) throw UsageError("encoding indices must lie in [0, N)");
  CMatrix u(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) u((k + op.nu) % dim, k) = root_of_unity(dim, op.mu * k);
  return u;
}

EprState apply_to_travel(const EprState& state, const CMatrix& u) {
  const std::size_t n = state.dim;
  if (u.rows() != n || u.cols() != n) throw UsageError("travel operator has wrong shape");
  EprState out{n, CVector(n * n)};
  for (std::size_t h = 0; h < n; ++h) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = 0.0;
      for (std::size_t t = 0; t < n; ++t) s += u(i, t) * state.amplitudes[h * n + t];
      out.amplitudes[h * n + i] = s;
    }
  }
  return out;
}

CVector bell_state(std::size_t dim, EncodingOp op) {
  return apply_to_travel(prepare_epr(dim), encoding_matrix(dim, op)).amplitudes;
}

std::vector<double> bell_distribution(const CVector& joint, std::size_t dim, std::size_t ancilla_dim) {
  if (joint.dim() != dim * dim * ancilla_dim) throw UsageError("joint state has wrong dimension");
  std::vector<double> dist(dim * dim, 0.0);
  for (std::size_t mu = 0; mu < dim; ++mu) {
    for (std::size_t nu = 0; nu < dim; ++nu) {
      const CVector bell = bell_state(dim, {mu, nu});
      double p = 0.0;
      for (std::size_t e = 0; e < ancilla_dim; ++e) {
        Complex amp = 0.0;
        for (std::size_t ht = 0; ht < dim * dim; ++ht) amp += std::conj(bell[ht]) * joint[ht * ancilla_dim + e];
        p += std::norm(amp);
      }
      dist[mu * dim + nu] = p;
    }
  }
  return dist;
}

EncodingOp encode_decode_roundtrip(const EprState& state, EncodingOp op) {
  const EprState encoded = apply_to_travel(state, encoding_matrix(state.dim, op));
  return best_outcome(bell_distribution(encoded.amplitudes, state.dim), state.dim);
}

AttackVector::AttackVector(std::size_t alpha_in, CVector amps_in) : alpha(alpha_in), amps(std::move(amps_in)) {
  if (amps.dim() == 0) throw UsageError("attack vector is empty");
  if (alpha >= amps.dim()) throw UsageError("attack input index out of range");
  if (std::abs(amps.norm() - 1.0) > kNormTol) throw UsageError("attack vector must have unit norm");
}

AttackPolicy identity_attack(std::size_t dim) {
  AttackPolicy policy;
  for (std::size_t a = 0; a < dim; ++a) policy.emplace_back(a, CVector::basis(dim, a));
  return policy;
}

CVector apply_attack(const EprState& state, const AttackPolicy& policy) {
  const std::size_t n = state.dim;
  if (policy.size() != n) throw UsageError("attack policy needs one vector per input");
  CVector joint(n * n * n);
  for (std::size_t alpha = 0; alpha < n; ++alpha) {
    const AttackVector& a = policy[alpha];
    if (a.alpha != alpha || a.amps.dim() != n) throw UsageError("attack policy entry does not match its input");
    for (std::size_t h = 0; h < n; ++h) {
      const Complex in = state.amplitudes[h * n + alpha];
      if (in == Complex{}) continue;
      for (std::size_t l = 0; l < n; ++l) joint[(h * n + l) * n + alpha] += in * a.amps[l];
    }
  }
  return joint;
}

CVector encode_joint(const CVector& joint, std::size_t dim, std::size_t ancilla_dim, EncodingOp op) {
  if (joint.dim() != dim * dim * ancilla_dim) throw UsageError("joint state has wrong dimension");
  const CMatrix u = encoding_matrix(dim, op);
  CVector out(joint.dim());
  for (std::size_t h = 0; h < dim; ++h) {
    for (std::size_t t = 0; t < dim; ++t) {
      for (std::size_t e = 0; e < ancilla_dim; ++e) {
        const Complex in = joint[(h * dim + t) * ancilla_dim + e];
        if (in == Complex{}) continue;
        // U is a weighted permutation: column t has its only entry in row t + nu.
        const std::size_t i = (t + op.nu) % dim;
        out[(h * dim + i) * ancilla_dim + e] += u(i, t) * in;
      }
    }
  }
  return out;
}

EncodingOp encode_decode_roundtrip(const EprState& state, EncodingOp op, const AttackPolicy& policy) {
  const std::size_t n = state.dim;
  const CVector encoded = encode_joint(apply_attack(state, policy), n, n, op);
  return best_outcome(bell_distribution(encoded, n, n), n);
}

CVector attack_transform(std::size_t alpha, const AttackVector& a, std::size_t basis_index, const MubSet& set) {
  if (a.alpha != alpha) throw UsageError("attack vector belongs to a different input");
  if (alpha >= set.dim) throw UsageError("input index out of range");
  if (a.amps.dim() != set.dim) throw UsageError("attack vector has wrong dimension");
  return apply(dagger(set.at(basis_index).matrix), a.amps);
}

double nondetection_prob(std::size_t alpha, const AttackVector& a, std::size_t basis_index, const MubSet& set) {
  return std::norm(attack_transform(alpha, a, basis_index, set)[alpha]);
}

ControlConfig ControlConfig::uniform(std::vector<std::size_t> indices) {
  ControlConfig cfg;
  cfg.weights.assign(indices.size(), indices.empty() ? 0.0 : 1.0 / static_cast<double>(indices.size()));
  cfg.basis_indices = std::move(indices);
  return cfg;
}

void ControlConfig::validate(std::size_t set_size) const {
  if (basis_indices.empty()) throw UsageError("control config needs at least one basis");
  if (weights.size() != basis_indices.size()) throw UsageError("control config: one weight per basis required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw UsageError("control config: weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw UsageError("control config: weights must sum to 1");
  for (auto idx : basis_indices) {
    if (idx >= set_size) throw UsageError("control config: basis index " + std::to_string(idx) + " out of range");
  }
}

double average_nondetection(std::size_t alpha, const AttackVector& a, const ControlConfig& cfg, const MubSet& set) {
  cfg.validate(set.size());
  double d = 0.0;
  for (std::size_t i = 0; i < cfg.basis_indices.size(); ++i) {
    d += cfg.weights[i] * nondetection_prob(alpha, a, cfg.basis_indices[i], set);
  }
  return d;
}

std::vector<double> alice_outcome_distribution(const EprState& state, const Basis& basis) {
  const std::size_t n = state.dim;
  std::vector<double> dist(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t h = 0; h < n; ++h) {
      Complex amp = 0.0;
      for (std::size_t t = 0; t < n; ++t) amp += std::conj(basis.matrix(t, i)) * state.amplitudes[h * n + t];
      dist[i] += std::norm(amp);
    }
  }
  return dist;
}

std::vector<double> bob_conditional_distribution(const EprState& state, const Basis& basis,
                                                 std::size_t alice_outcome) {
  const std::size_t n = state.dim;
  if (alice_outcome >= n) throw UsageError("outcome out of range");
  // Home-qudit state after Alice's projection onto |b_i>.
  CVector home(n);
  for (std::size_t h = 0; h < n; ++h) {
    for (std::size_t t = 0; t < n; ++t) home[h] += std::conj(basis.matrix(t, alice_outcome)) * state.amplitudes[h * n + t];
  }
  if (home.norm() == 0.0) throw DomainError("Alice's outcome has probability zero");
  home = home.normalized();
  const Basis bob = conjugate_basis(basis);
  std::vector<double> dist(n);
  for (std::size_t j = 0; j < n; ++j) dist[j] = std::norm(inner(bob.vector(j), home));
  return dist;
}

void SessionStats::merge(const SessionStats& other) {
  cycles += other.cycles;
  control_rounds += other.control_rounds;
  detections += other.detections;
  decoded_ok += other.decoded_ok;
  empirical_nondetection.reset();
  if (control_rounds > 0) {
    empirical_nondetection = 1.0 - static_cast<double>(detections) / static_cast<double>(control_rounds);
  }
}

SessionStats run_session(const MubSet& set, const ControlConfig& cfg, const std::optional<AttackPolicy>& attack,
                         const SessionParams& params) {
  const std::size_t n = set.dim;
  cfg.validate(set.size());
  if (params.cycles < 1) throw UsageError("session needs at least one cycle");
  if (!(params.control_fraction >= 0.0 && params.control_fraction <= 1.0)) {
    throw UsageError("control_fraction must lie in [0, 1]");
  }
  if (attack && attack->size() != n) throw UsageError("attack policy needs one vector per input");

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> symbol(0, n - 1);

  const EprState epr = prepare_epr(n);

  // Control-mode outcome tables, per basis slot in cfg.
  std::vector<std::vector<double>> alice_dist;                  // honest
  std::vector<std::vector<std::vector<double>>> bob_dist;       // honest, [slot][alice]
  std::vector<std::vector<std::vector<double>>> attacked_dist;  // attacked, [slot][alpha]
  for (auto m : cfg.basis_indices) {
    const Basis& basis = set.at(m);
    if (attack) {
      std::vector<std::vector<double>> per_alpha;
      for (std::size_t alpha = 0; alpha < n; ++alpha) {
        const CVector c = attack_transform(alpha, (*attack)[alpha], m, set);
        std::vector<double> probs(n);
        for (std::size_t k = 0; k < n; ++k) probs[k] = std::norm(c[k]);
        per_alpha.push_back(std::move(probs));
      }
      attacked_dist.push_back(std::move(per_alpha));
    } else {
      alice_dist.push_back(alice_outcome_distribution(epr, basis));
      std::vector<std::vector<double>> per_outcome;
      for (std::size_t i = 0; i < n; ++i) per_outcome.push_back(bob_conditional_distribution(epr, basis, i));
      bob_dist.push_back(std::move(per_outcome));
    }
  }

  std::optional<CVector> attacked_pair;
  if (attack) attacked_pair = apply_attack(epr, *attack);

  SessionStats stats;
  stats.cycles = params.cycles;
  for (std::uint64_t cycle = 0; cycle < params.cycles; ++cycle) {
    if (unit(rng) < params.control_fraction) {
      ++stats.control_rounds;
      const std::size_t slot = sample(cfg.weights, rng);
      if (attack) {
        const std::size_t alpha = symbol(rng);
        if (sample(attacked_dist[slot][alpha], rng) != alpha) ++stats.detections;
      } else {
        const std::size_t alice = sample(alice_dist[slot], rng);
        if (sample(bob_dist[slot][alice], rng) != alice) ++stats.detections;
      }
    } else {
      const EncodingOp op{symbol(rng), symbol(rng)};
      if (attack) {
        const auto dist = bell_distribution(encode_joint(*attacked_pair, n, n, op), n, n);
        if (sample(dist, rng) == op.mu * n + op.nu) ++stats.decoded_ok;
      } else {
        try {
          const EncodingOp got = encode_decode_roundtrip(epr, op);
          if (got.mu == op.mu && got.nu == op.nu) ++stats.decoded_ok;
        } catch (const AmbiguityError&) {
        }
      }
    }
  }
  if (stats.control_rounds > 0) {
    stats.empirical_nondetection =
        1.0 - static_cast<double>(stats.detections) / static_cast<double>(stats.control_rounds);
  }
  return stats;
}

nlohmann::json stats_to_json(const SessionStats& stats) {
  nlohmann::json j = {{"cycles", stats.cycles},
                      {"control_rounds", stats.control_rounds},
                      {"detections", stats.detections},
                      {"decoded_ok", stats.decoded_ok}};
  j["empirical_nondetection"] =
      stats.empirical_nondetection ? nlohmann::json(*stats.empirical_nondetection) : nlohmann::json(nullptr);
  return j;
}

std::string stats_csv_header() { return "cycles,control_rounds,detections,decoded_ok,empirical_nondetection"; }

std::string stats_csv_row(const SessionStats& stats) {
  std::ostringstream row;
  row.precision(17);
  row << stats.cycles << ',' << stats.control_rounds << ',' << stats.detections << ',' << stats.decoded_ok << ',';
  if (stats.empirical_nondetection) row << *stats.empirical_nondetection;
  else row << "n/a";
  return row.str();
}

namespace {

CVector parse_amps(const nlohmann::json& arr, std::size_t dim) {
  if (!arr.is_array() || arr.size() != dim) throw UsageError("attack amplitudes must list N [re, im] pairs");
  CVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto& e = arr[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw UsageError("attack amplitudes must be [re, im] number pairs");
    }
    v[i] = Complex(e[0].get<double>(), e[1].get<double>());
  }
  if (v.norm() == 0.0) throw UsageError("attack amplitudes must not all be zero");
  return v.normalized();
}

}  // namespace

SessionConfig session_config_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw UsageError("session config must be a JSON object");
    SessionConfig cfg;
    const auto n = j.at("N").get<std::int64_t>();
    if (n < 2) throw UsageError("session config: N must be at least 2");
    cfg.dim = static_cast<std::uint32_t>(n);
    const auto cycles = j.at("cycles").get<std::int64_t>();
    if (cycles < 1) throw UsageError("session config: cycles must be at least 1");
    cfg.params.cycles = static_cast<std::uint64_t>(cycles);
    if (j.contains("control_fraction")) cfg.params.control_fraction = j.at("control_fraction").get<double>();
    if (!(cfg.params.control_fraction >= 0.0 && cfg.params.control_fraction <= 1.0)) {
      throw UsageError("session config: control_fraction must lie in [0, 1]");
    }
    if (j.contains("seed")) {
      cfg.params.seed = j.at("seed").get<std::uint64_t>();
      cfg.seed_given = true;
    }

    const std::size_t set_size = cfg.dim == 2 ? 3 : cfg.dim + 1;
    std::vector<std::size_t> bases;
    if (j.contains("bases")) {
      bases = j.at("bases").get<std::vector<std::size_t>>();
    } else {
      for (std::size_t l = 0; l < set_size; ++l) bases.push_back(l);
    }
    cfg.control = ControlConfig::uniform(bases);
    if (j.contains("weights")) cfg.control.weights = j.at("weights").get<std::vector<double>>();
    cfg.control.validate(set_size);

    if (j.contains("attack")) {
      const auto& attack = j.at("attack");
      if (attack.is_string()) {
        const auto kind = attack.get<std::string>();
        if (kind == "none") cfg.attack = SessionConfig::AttackKind::none;
        else if (kind == "optimal") cfg.attack = SessionConfig::AttackKind::optimal;
        else throw UsageError("session config: attack must be \"none\", \"optimal\" or amplitudes");
      } else if (attack.is_array() && !attack.empty() && attack[0].is_array() && !attack[0].empty() &&
                 attack[0][0].is_array()) {
        cfg.attack = SessionConfig::AttackKind::explicit_amps;
        if (attack.size() != cfg.dim) throw UsageError("session config: per-input attack needs N vectors");
        for (const auto& v : attack) cfg.attack_amps.push_back(parse_amps(v, cfg.dim));
      } else {
        cfg.attack = SessionConfig::AttackKind::explicit_amps;
        cfg.attack_amps.push_back(parse_amps(attack, cfg.dim));
      }
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("session config: ") + e.what());
  }
}

}  // namespace mubpp
