#include <cmath>
#include <thread>

#include "ctxrand/errors.hpp"
#include "ctxrand/npa.hpp"

namespace ctxrand {

double TradeoffFunction::f(double omega) const {
  const double v = g(omega);
  if (!(v > 0.0)) throw DomainError("tradeoff function is not positive here");
  return -std::log2(v);
}

TradeoffFunction tradeoff_from(const GuessingResult& r) {
  if (infeasible_detected(r.status)) throw DomainError("anchor score is infeasible");
  return {r.omega, r.lambda0, r.intercept};
}

std::vector<TradeoffFunction> min_tradeoff_family(const MomentRelaxation& r,
                                                  const std::vector<double>& anchors) {
  std::vector<TradeoffFunction> out;
  for (double a : anchors) out.push_back(tradeoff_from(guessing_probability(r, a)));
  return out;
}

std::vector<CurvePoint> min_entropy_curve(const MomentRelaxation& r, const std::vector<double>& grid,
                                          int jobs) {
  if (jobs < 1) throw InvalidParameter("jobs must be positive");
  std::vector<CurvePoint> out(grid.size());
  auto work = [&](int worker) {
    for (std::size_t i = worker; i < grid.size(); i += jobs) {
      GuessingResult g = guessing_probability(r, grid[i]);
      out[i].omega = grid[i];
      out[i].status = g.status;
      out[i].p_guess = g.p_guess;
      out[i].h_min = -std::log2(g.p_guess);
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work, j);
    for (auto& t : pool) t.join();
  }
  return out;
}

}  // namespace ctxrand
