#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctxrand/npa.hpp"

namespace ctxrand {

// Outcome distribution of a device for every context of a scenario. For
// context c, probs[c][k] is the chance that member k fires (the sequential
// binary measurements give -1 for it and +1 for the rest); the final entry is
// the chance that no member fires.
struct DeviceBehavior {
  std::string name;
  std::vector<std::vector<double>> probs;
};

// Expected score sum_v w_v p(v), reading p(v) from the first context holding v.
double behavior_score(const ContextualityScenario& s, const DeviceBehavior& b);
// Largest violation of normalization or of context independence of marginals.
double behavior_consistency_error(const ContextualityScenario& s, const DeviceBehavior& b);

// Quantum behavior from the symmetrized optimal theta solution (d = 3 only).
DeviceBehavior honest_device_behavior(int d);
DeviceBehavior honest_device_behavior(const ContextualityScenario& s);
// Deterministic non-contextual strategy firing exactly the vertices of `fired`.
DeviceBehavior deterministic_behavior(const ContextualityScenario& s, const std::vector<Vertex>& fired);
// Best classical strategy: a maximum-weight independent set.
DeviceBehavior classical_device_behavior(const ContextualityScenario& s);

struct ProtocolConfig {
  std::int64_t rounds = 100000;
  double gamma = 0.05;
  double omega_exp = 7.67;
  double delta = 0.05;
  // Security parameters with no fixed values; recorded, not used in the
  // first-order rate.
  double eps_s = 1e-6;
  double eps_ext = 1e-6;
  double eps_eat = 1e-6;
  double l_ext = 0.0;  // extractor loss in bits
  std::uint64_t seed = 0;
  TradeoffFunction f_min;
  bool keep_rounds = true;
};

struct RoundRecord {
  std::int64_t round = 0;
  bool test = false;
  int input = 0;      // context index
  int fired = -1;     // member index that fired, -1 if none
  double score = 0.0; // omega_i on test rounds
};

struct ProtocolTranscript {
  std::vector<RoundRecord> rounds;
  std::int64_t test_rounds = 0;
  double score_sum = 0.0;
  double omega_obs = 0.0;
  bool aborted = false;
  double certified_length = 0.0;   // N f_min(omega_exp - delta) - l_ext, 0 when aborted
  std::int64_t extractable_bits = 0;
  std::vector<std::uint8_t> raw_bits;  // generation-round outputs, 2 bits per symbol for d = 3
  std::int64_t rejected_symbols = 0;
};

ProtocolTranscript simulate_protocol(const ContextualityScenario& s, const ProtocolConfig& cfg,
                                     const DeviceBehavior& device);

// Certified length formula used by the simulator.
double certified_length(const ProtocolConfig& cfg);

// One line per round: round,T,input,outputs,score
void write_transcript(std::ostream& os, const ContextualityScenario& s, const ProtocolTranscript& t);

// Toeplitz hashing over GF(2). seed must hold raw.size() + out_len - 1 bits;
// out[i] = XOR_j seed[i - j + raw.size() - 1] & raw[j].
std::vector<std::uint8_t> toeplitz_extract(const std::vector<std::uint8_t>& raw,
                                           const std::vector<std::uint8_t>& seed, std::int64_t out_len,
                                           std::int64_t certified_bits);

}  // namespace ctxrand
