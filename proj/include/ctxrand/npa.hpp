#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctxrand/graph.hpp"
#include "ctxrand/optim.hpp"

namespace ctxrand {

// The G_d test: score omega = sum_v w_v <P_v>, which equals
// ((5d+2) - <I_d>) / 4 for the +-1 expression I_d.
struct ContextualityScenario {
  int d = 0;
  WeightedGraph graph;
  std::vector<Clique> contexts;
  Clique star_context;              // {v_{1,1}, ..., v_{d,1}}
  int eve_outcomes = 0;             // d + 1, the last one pairs with the completion 1 - sum P
  std::vector<double> score_weights;  // w_v
  double score_constant = 0.0;      // 5d + 2

  double score_from_expression(double i_d) const { return (score_constant - i_d) / 4.0; }
  double expression_from_score(double omega) const { return score_constant - 4.0 * omega; }
};

ContextualityScenario make_scenario(int d);

enum class NpaLevel { one, one_ab, two };
std::string to_string(NpaLevel level);
NpaLevel parse_npa_level(const std::string& text);  // "1", "1+AB", "2"

// A word: a product of device projectors followed by at most one Eve
// projector (Eve letters commute with everything, so their position is moot).
struct Word {
  std::vector<Vertex> device;
  int eve = 0;  // 0 = none, a in 1..d = E_a
  auto operator<=>(const Word&) const = default;
};

struct MomentRelaxation {
  static constexpr int kZero = -1;  // entry vanishes by orthogonality
  static constexpr int kOne = -2;   // entry is the normalization <1> = 1

  NpaLevel level = NpaLevel::one_ab;
  std::vector<Word> monomials;     // monomials[0] is the empty word
  std::vector<Word> moments;       // canonical word of each free moment
  Eigen::MatrixXi entry;           // moment index, kZero or kOne
  std::vector<double> objective;   // guessing probability, per moment
  double objective_constant = 0.0;
  std::vector<double> score;       // score functional, per moment

  int dim() const { return static_cast<int>(monomials.size()); }
  int num_moments() const { return static_cast<int>(moments.size()); }
};

// Reduced form of a word, or nullopt-like empty flag when it vanishes.
struct CanonicalWord {
  bool zero = false;
  Word word;
};
CanonicalWord canonicalize(const ContextualityScenario& s, const Word& w);

MomentRelaxation build_moment_relaxation(const ContextualityScenario& s, NpaLevel level);

Eigen::MatrixXd assemble_moment_matrix(const MomentRelaxation& r, const std::vector<double>& moments);
double evaluate_objective(const MomentRelaxation& r, const std::vector<double>& moments);
double evaluate_score(const MomentRelaxation& r, const std::vector<double>& moments);

// Moments of a deterministic non-contextual strategy: the projectors in
// `fired` take value 1, all others 0, and Eve always outputs `eve_outcome`.
std::vector<double> deterministic_moments(const MomentRelaxation& r,
                                          const std::vector<Vertex>& fired, int eve_outcome);

// Guessing SDP in moment form. The free moments are the dual variables of the
// solver, the moment matrix is the dual slack and the primal matrix W is the
// certificate. The score equality is eliminated through the pivot moment.
struct GuessingSdp {
  SdpProblem problem;
  double omega = 0.0;
  int pivot = 0;                 // moment solved for by the score equality
  std::vector<int> free_moments; // moment index of each solver variable
  double offset = 0.0;           // p_guess = offset - (solver dual objective)
};

GuessingSdp build_guessing_sdp(const MomentRelaxation& r, double omega);
GuessingSdp build_guessing_sdp(const ContextualityScenario& s, double omega, NpaLevel level);

struct GuessingResult {
  double omega = 0.0;
  double p_guess = 0.0;        // value at the best moment matrix found
  double upper_bound = 0.0;    // lambda0 * omega + intercept, certified by W
  double lambda0 = 0.0;        // slope of the score multiplier
  double intercept = 0.0;
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<double> moments;
  Eigen::MatrixXd moment_matrix;
  Eigen::MatrixXd certificate;  // W, PSD
};

GuessingResult guessing_probability(const MomentRelaxation& r, double omega, double tol = 1e-8);
GuessingResult guessing_probability(const ContextualityScenario& s, double omega, NpaLevel level,
                                    double tol = 1e-8);

// Affine upper bound g(omega) = lambda0 * omega + intercept on the guessing
// probability; f(omega) = -log2 g(omega) lower bounds the min-entropy.
struct TradeoffFunction {
  double anchor = 0.0;
  double lambda0 = 0.0;
  double intercept = 0.0;
  double g(double omega) const { return lambda0 * omega + intercept; }
  double f(double omega) const;
};

TradeoffFunction tradeoff_from(const GuessingResult& r);
std::vector<TradeoffFunction> min_tradeoff_family(const MomentRelaxation& r,
                                                  const std::vector<double>& anchors);

struct CurvePoint {
  double omega = 0.0;
  double p_guess = 0.0;
  double h_min = 0.0;
  SolveStatus status = SolveStatus::max_iterations;
};

std::vector<CurvePoint> min_entropy_curve(const MomentRelaxation& r, const std::vector<double>& grid,
                                          int jobs = 1);

}  // namespace ctxrand
