#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "mubpp/matrix.hpp"
#include "mubpp/mub.hpp"

namespace mubpp {

/// Home (first factor) and travel (second factor) qudits, amplitude index
/// home * N + travel.
struct EprState {
  std::size_t dim = 0;
  CVector amplitudes;
};

/// (1/sqrt N) sum_k |k>|k>. Throws DomainError for N < 2.
EprState prepare_epr(std::size_t dim);

/// Partial trace over the home qudit.
CMatrix reduced_travel_density(const EprState& state);

struct EncodingOp {
  std::size_t mu = 0;
  std::size_t nu = 0;
};

/// U_{mu,nu} = sum_k w^{mu k} |k + nu><k| with w = e^{2 pi i / N}.
CMatrix encoding_matrix(std::size_t dim, EncodingOp op);

/// (I (x) U) |state>, acting on the travel qudit.
EprState apply_to_travel(const EprState& state, const CMatrix& u);

/// |psi_{mu,nu}> = (I (x) U_{mu,nu}) |psi_{0,0}>.
CVector bell_state(std::size_t dim, EncodingOp op);

/// Probabilities of the N^2 generalized Bell outcomes (index mu * N + nu)
/// for a home (x) travel (x) ancilla state, the ancilla traced out.
/// `ancilla_dim` is 1 when no eavesdropper is attached.
std::vector<double> bell_distribution(const CVector& joint, std::size_t dim, std::size_t ancilla_dim = 1);

/// Apply U_{mu,nu} to the travel qudit and discriminate in the Bell basis.
/// Throws AmbiguityError (with the outcome distribution) if no outcome has
/// probability >= 1 - 1e-9.
EncodingOp encode_decode_roundtrip(const EprState& state, EncodingOp op);

/// Eve's attack conditioned on input alpha: the travel qudit becomes
/// sum_l amps[l] |l> (with probe states factored out).
struct AttackVector {
  std::size_t alpha = 0;
  CVector amps;

  /// Throws UsageError unless amps has unit norm to 1e-12.
  AttackVector(std::size_t alpha, CVector amps);
};

/// One AttackVector per input alpha = 0..N-1.
using AttackPolicy = std::vector<AttackVector>;

/// Identity-on-branch attack a_alpha = e_alpha for every alpha.
AttackPolicy identity_attack(std::size_t dim);

/// Joint home (x) travel (x) ancilla state after Eve's isometry
/// |alpha>|0>_E -> sum_l a_{alpha,l} |l>|alpha>_E on the travel qudit.
CVector apply_attack(const EprState& state, const AttackPolicy& policy);

/// Apply U_{mu,nu} to the travel factor of a home (x) travel (x) ancilla state.
CVector encode_joint(const CVector& joint, std::size_t dim, std::size_t ancilla_dim, EncodingOp op);

/// Decode after Eve attacked the travel qudit. Throws AmbiguityError
/// whenever the attack disturbs the Bell correlations.
EncodingOp encode_decode_roundtrip(const EprState& state, EncodingOp op, const AttackPolicy& policy);

/// c_k = sum_l a_l <b^(m)_k | l>: the attacked travel state in basis m.
CVector attack_transform(std::size_t alpha, const AttackVector& a, std::size_t basis_index, const MubSet& set);

/// |c_alpha|^2: probability that the check in basis m passes.
double nondetection_prob(std::size_t alpha, const AttackVector& a, std::size_t basis_index, const MubSet& set);

/// Control-mode basis choice: basis_indices[i] is selected with weight weights[i].
struct ControlConfig {
  std::vector<std::size_t> basis_indices;
  std::vector<double> weights;

  static ControlConfig uniform(std::vector<std::size_t> indices);
  /// Throws UsageError for an empty subset, mismatched weights, negative
  /// weights, weights not summing to 1 (within 1e-9), or indices >= set_size.
  void validate(std::size_t set_size) const;
};

/// sum_i weights[i] * nondetection_prob(alpha, a, basis_indices[i]).
double average_nondetection(std::size_t alpha, const AttackVector& a, const ControlConfig& cfg, const MubSet& set);

/// Distribution of Alice's outcome when she measures the travel qudit in `basis`.
std::vector<double> alice_outcome_distribution(const EprState& state, const Basis& basis);

/// Distribution of Bob's outcome in conj(basis) on the home qudit, given
/// Alice obtained `alice_outcome` in `basis`.
std::vector<double> bob_conditional_distribution(const EprState& state, const Basis& basis,
                                                 std::size_t alice_outcome);

struct SessionStats {
  std::uint64_t cycles = 0;
  std::uint64_t control_rounds = 0;
  std::uint64_t detections = 0;
  std::uint64_t decoded_ok = 0;
  /// 1 - detections / control_rounds; empty when there were no control rounds.
  std::optional<double> empirical_nondetection;

  std::uint64_t message_cycles() const noexcept { return cycles - control_rounds; }
  void merge(const SessionStats& other);
};

struct SessionParams {
  std::uint64_t cycles = 0;
  double control_fraction = 0.5;
  std::uint64_t seed = 0;
};

/// Monte Carlo run of the protocol.
///
/// Each cycle is a control round with probability control_fraction, a
/// message round otherwise.
///
/// Control, honest: Alice measures the travel qudit in a basis drawn from
/// cfg, Bob measures the home qudit in its conjugate; a mismatch is a
/// detection.
/// Control, attacked: alpha is uniform, Alice's outcome is drawn from
/// |c_{alpha,k}|^2 and counts as a detection when it differs from alpha.
/// Message: a uniform (mu, nu) is encoded and Bob's Bell measurement is
/// sampled; decoded_ok counts exact recoveries.
SessionStats run_session(const MubSet& set, const ControlConfig& cfg, const std::optional<AttackPolicy>& attack,
                         const SessionParams& params);

nlohmann::json stats_to_json(const SessionStats& stats);
std::string stats_csv_header();
std::string stats_csv_row(const SessionStats& stats);

/// Parsed form of the session config file.
///   {"N": 3, "cycles": 10000, "control_fraction": 0.5, "bases": [0, 1, 2, 3],
///    "weights": [...], "attack": "none" | "optimal" | amps, "seed": 7}
/// `amps` is one vector of N [re, im] pairs used for every alpha, or N such
/// vectors (one per alpha). Explicit amplitudes are normalized on load.
struct SessionConfig {
  enum class AttackKind { none, optimal, explicit_amps };

  std::uint32_t dim = 0;
  SessionParams params;
  ControlConfig control;
  AttackKind attack = AttackKind::none;
  std::vector<CVector> attack_amps;
  bool seed_given = false;
};

/// Missing bases default to every basis of the set, missing weights to
/// uniform. Throws UsageError on malformed or inconsistent fields.
SessionConfig session_config_from_json(const nlohmann::json& j);

}  // namespace mubpp
