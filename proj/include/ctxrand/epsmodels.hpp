#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ctxrand/graph.hpp"

namespace ctxrand {

struct QubitFan {
  int n = 0;
  double epsilon = 0.0;              // sin^2(pi / 2n)
  std::vector<Eigen::Vector2d> v0;   // v0[k-1] = |v_k^0>
  std::vector<Eigen::Vector2d> v1;   // v1[k-1] = |v_k^1>
};

QubitFan qubit_fan(int n);

// Vertex 2(k-1)+b is |v_k^b>. Strict edges join v_k^0 and v_k^1; epsilon edges
// join v_k^b with v_{k+1}^{1-b}, plus the wrap-around pairs (v_n^b, v_1^b).
EpsilonGraph fan_epsilon_graph(const QubitFan& fan);

struct QubitGap {
  int n = 0;
  double epsilon = 0.0;
  double quantum_value = 0.0;      // n, from the completeness relation
  double eps_onc_bound = 0.0;      // eps * alpha(G') + (1 - eps) * alpha(G'')
  double completeness_error = 0.0; // max |sum of projectors - n I|
  bool eps_below_half = false;
};

QubitGap qubit_contextuality_gap(int n);

double odd_cycle_threshold(int n);
// Smallest odd n with n >= ceil(pi^2 / (4 (1 - eps))).
int min_admissible_cycle(double epsilon);
// alpha_eps(C_{n,eps}) = (n - 1 + eps) / 2.
double odd_cycle_eps_alpha(int n, double epsilon);

struct AgreementPair {
  double model_prob = 0.0;
  double overlap = 0.0;
};

// Both accept theta_c in (0, pi/2]; theta_c = pi/2 is the boundary case.
AgreementPair ks_model_agreement(double theta_c);
AgreementPair bell_mermin_agreement(double theta_c);

enum class HvModel { ks, bell_mermin };

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Samples hidden variables on the sphere and estimates model_prob. Work is
// split into fixed-size shards with derived seeds, so the result does not
// depend on the number of jobs.
McEstimate monte_carlo_hv_check(HvModel model, double theta_c, std::int64_t samples,
                                std::uint64_t seed, int jobs = 1);

}  // namespace ctxrand
