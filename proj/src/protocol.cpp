#include "ctxrand/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "ctxrand/combinat.hpp"
#include "ctxrand/errors.hpp"
#include "ctxrand/rng.hpp"
#include "ctxrand/theta.hpp"

namespace ctxrand {

namespace {

int star_index(const ContextualityScenario& s) {
  for (std::size_t c = 0; c < s.contexts.size(); ++c)
    if (s.contexts[c] == s.star_context) return static_cast<int>(c);
  throw Error("scenario has no star context");
}

void check_shape(const ContextualityScenario& s, const DeviceBehavior& b) {
  if (b.probs.size() != s.contexts.size()) throw InvalidParameter("behavior has wrong number of contexts");
  for (std::size_t c = 0; c < s.contexts.size(); ++c)
    if (b.probs[c].size() != s.contexts[c].members.size() + 1)
      throw InvalidParameter("behavior context has wrong number of outcomes");
}

DeviceBehavior from_marginals(const ContextualityScenario& s, const std::vector<double>& p,
                              std::string name) {
  DeviceBehavior b;
  b.name = std::move(name);
  for (const auto& ctx : s.contexts) {
    std::vector<double> row;
    double total = 0.0;
    for (Vertex v : ctx.members) {
      row.push_back(p[v]);
      total += p[v];
    }
    row.push_back(std::max(0.0, 1.0 - total));
    b.probs.push_back(std::move(row));
  }
  return b;
}

}  // namespace

double behavior_score(const ContextualityScenario& s, const DeviceBehavior& b) {
  check_shape(s, b);
  std::vector<double> p(s.graph.size(), -1.0);
  for (std::size_t c = 0; c < s.contexts.size(); ++c)
    for (std::size_t k = 0; k < s.contexts[c].members.size(); ++k) {
      const Vertex v = s.contexts[c].members[k];
      if (p[v] < 0) p[v] = b.probs[c][k];
    }
  double omega = 0.0;
  for (Vertex v = 0; v < s.graph.size(); ++v) omega += s.score_weights[v] * std::max(0.0, p[v]);
  return omega;
}

double behavior_consistency_error(const ContextualityScenario& s, const DeviceBehavior& b) {
  check_shape(s, b);
  double err = 0.0;
  std::vector<double> p(s.graph.size(), -1.0);
  for (std::size_t c = 0; c < s.contexts.size(); ++c) {
    double total = 0.0;
    for (double q : b.probs[c]) {
      if (q < 0) err = std::max(err, -q);
      total += q;
    }
    err = std::max(err, std::abs(total - 1.0));
    for (std::size_t k = 0; k < s.contexts[c].members.size(); ++k) {
      const Vertex v = s.contexts[c].members[k];
      if (p[v] < 0) p[v] = b.probs[c][k];
      else err = std::max(err, std::abs(p[v] - b.probs[c][k]));
    }
  }
  return err;
}

DeviceBehavior honest_device_behavior(const ContextualityScenario& s) {
  const ThetaResult th = lovasz_theta(s.graph, 1e-9);
  if (th.status != SolveStatus::optimal) throw Error("theta SDP did not converge");
  std::vector<Permutation> swaps;
  for (int k = 2; k <= s.d; ++k) swaps.push_back(block_swap_permutation(s.d, 1, k));
  const Eigen::MatrixXd x = symmetrize_solution(s.graph, th.moment_matrix, swaps);
  const PsdFactor f = psd_factor(x, 1e-9);
  const Eigen::VectorXd psi = f.vectors.row(0).transpose();
  std::vector<double> p(s.graph.size(), 0.0);
  for (Vertex v = 0; v < s.graph.size(); ++v) {
    const Eigen::VectorXd u = f.vectors.row(v + 1).transpose();
    const double nu = u.norm();
    if (nu == 0.0) continue;
    const double o = psi.dot(u) / (nu * psi.norm());
    p[v] = o * o;
  }
  return from_marginals(s, p, "honest");
}

DeviceBehavior honest_device_behavior(int d) {
  if (d != 3) throw InvalidParameter("honest device is provided for d = 3");
  return honest_device_behavior(make_scenario(d));
}

DeviceBehavior deterministic_behavior(const ContextualityScenario& s, const std::vector<Vertex>& fired) {
  std::vector<double> p(s.graph.size(), 0.0);
  for (Vertex v : fired) p.at(v) = 1.0;
  for (const auto& ctx : s.contexts) {
    int hits = 0;
    for (Vertex v : ctx.members) hits += p[v] > 0 ? 1 : 0;
    if (hits > 1) throw InvalidParameter("deterministic strategy fires two exclusive projectors");
  }
  return from_marginals(s, p, "deterministic");
}

DeviceBehavior classical_device_behavior(const ContextualityScenario& s) {
  DeviceBehavior b = deterministic_behavior(s, weighted_independence_number(s.graph).witness);
  b.name = "classical";
  return b;
}

double certified_length(const ProtocolConfig& cfg) {
  return static_cast<double>(cfg.rounds) * cfg.f_min.f(cfg.omega_exp - cfg.delta) - cfg.l_ext;
}

ProtocolTranscript simulate_protocol(const ContextualityScenario& s, const ProtocolConfig& cfg,
                                     const DeviceBehavior& device) {
  if (cfg.rounds < 1) throw InvalidParameter("protocol needs at least one round");
  if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) throw InvalidParameter("gamma must lie in (0, 1]");
  if (!(cfg.delta > 0.0)) throw InvalidParameter("delta must be positive");
  check_shape(s, device);
  const int star = star_index(s);
  const int num_contexts = static_cast<int>(s.contexts.size());
  int bits_per_symbol = 0;
  while ((1 << bits_per_symbol) < s.d) ++bits_per_symbol;

  std::mt19937_64 rng(cfg.seed);
  ProtocolTranscript t;
  if (cfg.keep_rounds) t.rounds.reserve(static_cast<std::size_t>(cfg.rounds));
  for (std::int64_t i = 1; i <= cfg.rounds; ++i) {
    RoundRecord r;
    r.round = i;
    r.test = uniform01(rng) < cfg.gamma;
    r.input = r.test ? std::min(num_contexts - 1, static_cast<int>(uniform01(rng) * num_contexts)) : star;
    const auto& dist = device.probs[r.input];
    double u = uniform01(rng);
    const int outcomes = static_cast<int>(dist.size()) - 1;
    r.fired = -1;
    for (int k = 0; k < outcomes; ++k) {
      if (u < dist[k]) {
        r.fired = k;
        break;
      }
      u -= dist[k];
    }
    if (r.test) {
      // Unbiased single-round estimate of the score: the context term of I_d
      // rescaled by the number of contexts.
      const double coef = r.input == star ? 2.0 : 1.0;
      const double product = r.fired >= 0 ? -1.0 : 1.0;
      r.score = (s.score_constant - num_contexts * coef * product) / 4.0;
      t.score_sum += r.score;
      ++t.test_rounds;
    } else if (r.fired >= 0) {
      for (int b = bits_per_symbol - 1; b >= 0; --b) t.raw_bits.push_back((r.fired >> b) & 1);
    } else {
      ++t.rejected_symbols;
    }
    if (cfg.keep_rounds) t.rounds.push_back(r);
  }
  t.omega_obs = t.score_sum / (cfg.gamma * static_cast<double>(cfg.rounds));
  t.aborted = !(t.omega_obs > cfg.omega_exp - cfg.delta && t.omega_obs < cfg.omega_exp + cfg.delta);
  if (!t.aborted) {
    t.certified_length = certified_length(cfg);
    t.extractable_bits = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(t.certified_length)));
  }
  return t;
}

void write_transcript(std::ostream& os, const ContextualityScenario& s, const ProtocolTranscript& t) {
  os << "round,T,input,outputs,score\n";
  char buf[64];
  for (const auto& r : t.rounds) {
    const int members = static_cast<int>(s.contexts[r.input].members.size());
    std::string outputs(members, '+');
    if (r.fired >= 0) outputs[r.fired] = '-';
    os << r.round << ',' << (r.test ? 1 : 0) << ',' << r.input << ',' << outputs << ',';
    if (r.test) {
      std::snprintf(buf, sizeof buf, "%.10g", r.score);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace ctxrand
