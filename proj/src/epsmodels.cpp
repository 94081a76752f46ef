#include "ctxrand/epsmodels.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "ctxrand/combinat.hpp"
#include "ctxrand/errors.hpp"
#include "ctxrand/rng.hpp"

namespace ctxrand {

using std::numbers::pi;

QubitFan qubit_fan(int n) {
  if (n < 2) throw DomainError("qubit fan needs n >= 2");
  QubitFan f;
  f.n = n;
  const double s = std::sin(pi / (2.0 * n));
  f.epsilon = s * s;
  for (int k = 1; k <= n; ++k) {
    const double a = k * pi / (2.0 * n);
    f.v0.emplace_back(std::cos(a), std::sin(a));
    f.v1.emplace_back(-std::sin(a), std::cos(a));
  }
  return f;
}

EpsilonGraph fan_epsilon_graph(const QubitFan& fan) {
  const int n = fan.n;
  auto id = [](int k, int b) { return 2 * (k - 1) + b; };
  std::vector<Edge> strict, eps;
  std::vector<std::string> labels(2 * n);
  for (int k = 1; k <= n; ++k) {
    strict.emplace_back(id(k, 0), id(k, 1));
    labels[id(k, 0)] = "v" + std::to_string(k) + "^0";
    labels[id(k, 1)] = "v" + std::to_string(k) + "^1";
    if (k < n) {
      eps.emplace_back(id(k, 0), id(k + 1, 1));
      eps.emplace_back(id(k, 1), id(k + 1, 0));
    }
  }
  eps.emplace_back(id(n, 0), id(1, 0));
  eps.emplace_back(id(n, 1), id(1, 1));
  return EpsilonGraph(2 * n, std::move(strict), std::move(eps),
                      std::vector<Rational>(2 * n, Rational(1)), fan.epsilon, std::move(labels));
}

QubitGap qubit_contextuality_gap(int n) {
  const QubitFan fan = qubit_fan(n);
  QubitGap g;
  g.n = n;
  g.epsilon = fan.epsilon;
  Eigen::Matrix2d sum = Eigen::Matrix2d::Zero();
  for (int k = 0; k < n; ++k) sum += fan.v0[k] * fan.v0[k].transpose() + fan.v1[k] * fan.v1[k].transpose();
  g.completeness_error = (sum - n * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
  // Any unit state sees total probability Tr(rho * sum) = n.
  g.quantum_value = sum.trace() / 2.0;
  g.eps_onc_bound = epsilon_independence_bound(fan_epsilon_graph(fan));
  g.eps_below_half = fan.epsilon < 0.5 - 1e-12;
  return g;
}

double odd_cycle_threshold(int n) {
  if (n < 3 || n % 2 == 0) throw InvalidParameter("odd cycle needs odd n >= 3");
  const double t = std::tan(pi / (2.0 * n));
  const double e = 1.0 - n * t * t;
  return std::abs(e) < 1e-14 ? 0.0 : e;  // n = 3 is exactly zero
}

int min_admissible_cycle(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in [0,1)");
  int n = static_cast<int>(std::ceil(pi * pi / (4.0 * (1.0 - epsilon))));
  if (n < 3) n = 3;
  if (n % 2 == 0) ++n;
  return n;
}

double odd_cycle_eps_alpha(int n, double epsilon) {
  if (n < 3 || n % 2 == 0) throw InvalidParameter("odd cycle needs odd n >= 3");
  return (n - 1 + epsilon) / 2.0;
}

namespace {

void check_angle(double theta_c) {
  if (!(theta_c > 0.0 && theta_c <= pi / 2.0)) throw DomainError("theta_c must lie in (0, pi/2]");
}

}  // namespace

AgreementPair ks_model_agreement(double theta_c) {
  check_angle(theta_c);
  const double c = std::cos(theta_c);
  return {0.5 - 0.5 * c * c, 0.5 - 0.5 * c};
}

AgreementPair bell_mermin_agreement(double theta_c) {
  check_angle(theta_c);
  const double s = std::sin(theta_c);
  return {s, s * s};
}

namespace {

constexpr std::int64_t kShard = 1 << 16;

// State psi is the z axis throughout.
std::int64_t run_shard(HvModel model, double theta_c, std::int64_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double sc = std::sin(theta_c), cc = std::cos(theta_c);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < count; ++i) {
    if (model == HvModel::ks) {
      // Density proportional to (psi . lambda)^+ : cos(polar) = sqrt(u).
      const double cz = std::sqrt(uniform01(rng));
      const double az = 2.0 * pi * uniform01(rng);
      const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
      const double lx = sz * std::cos(az);
      if (cz < sc && lx > 0.0) ++hits;
    } else {
      const double z = 2.0 * uniform01(rng) - 1.0;
      const double az = 2.0 * pi * uniform01(rng);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double lx = r * std::cos(az);
      // Projector direction phi = (cos, 0, sin); response 1 iff phi.(psi + lambda) > 0.
      if (cc * lx + sc * (1.0 + z) > 0.0 && -cc * lx + sc * (1.0 + z) > 0.0) ++hits;
    }
  }
  return hits;
}

}  // namespace

McEstimate monte_carlo_hv_check(HvModel model, double theta_c, std::int64_t samples,
                                std::uint64_t seed, int jobs) {
  check_angle(theta_c);
  if (samples < 10000) throw InvalidParameter("Monte Carlo needs at least 1e4 samples");
  if (jobs < 1) throw InvalidParameter("jobs must be positive");
  const std::int64_t shards = (samples + kShard - 1) / kShard;
  std::vector<std::int64_t> hits(shards, 0);
  auto work = [&](int worker) {
    for (std::int64_t s = worker; s < shards; s += jobs) {
      const std::int64_t count = std::min(kShard, samples - s * kShard);
      hits[s] = run_shard(model, theta_c, count, derive_seed(seed, static_cast<std::uint64_t>(s)));
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work, j);
    for (auto& t : pool) t.join();
  }
  std::int64_t total = 0;
  for (auto h : hits) total += h;
  McEstimate e;
  e.samples = samples;
  e.estimate = static_cast<double>(total) / static_cast<double>(samples);
  e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(samples));
  return e;
}

}  // namespace ctxrand
