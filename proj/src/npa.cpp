#include "ctxrand/npa.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ctxrand/errors.hpp"

namespace ctxrand {

ContextualityScenario make_scenario(int d) {
  ContextualityScenario s;
  s.d = d;
  s.graph = build_gd(d);
  s.contexts = enumerate_maximal_cliques(s.graph);
  for (int i = 1; i <= d; ++i) s.star_context.members.push_back(gd_vertex(i, 1));
  s.eve_outcomes = d + 1;
  s.score_weights = s.graph.real_weights();
  s.score_constant = 5.0 * d + 2.0;
  return s;
}

std::string to_string(NpaLevel level) {
  switch (level) {
    case NpaLevel::one: return "1";
    case NpaLevel::one_ab: return "1+AB";
    case NpaLevel::two: return "2";
  }
  return "?";
}

NpaLevel parse_npa_level(const std::string& text) {
  if (text == "1") return NpaLevel::one;
  if (text == "1+AB" || text == "1+ab") return NpaLevel::one_ab;
  if (text == "2") return NpaLevel::two;
  throw InvalidParameter("unsupported NPA level '" + text + "' (use 1, 1+AB or 2)");
}

CanonicalWord canonicalize(const ContextualityScenario& s, const Word& w) {
  CanonicalWord out;
  out.word.eve = w.eve;
  auto& dev = out.word.device;
  for (Vertex v : w.device) {
    if (!dev.empty() && dev.back() == v) continue;  // idempotence
    if (!dev.empty() && s.graph.adjacent(dev.back(), v)) {
      out.zero = true;
      return out;
    }
    dev.push_back(v);
  }
  // Real relaxation: a word and its adjoint share the same moment.
  std::vector<Vertex> rev(dev.rbegin(), dev.rend());
  if (rev < dev) dev = std::move(rev);
  return out;
}

namespace {

Word product(const Word& left, const Word& right, bool& zero) {
  Word w;
  w.device.assign(left.device.rbegin(), left.device.rend());
  w.device.insert(w.device.end(), right.device.begin(), right.device.end());
  zero = left.eve != 0 && right.eve != 0 && left.eve != right.eve;
  w.eve = std::max(left.eve, right.eve);
  return w;
}

}  // namespace

MomentRelaxation build_moment_relaxation(const ContextualityScenario& s, NpaLevel level) {
  MomentRelaxation r;
  r.level = level;
  const int n = s.graph.size();
  const int d = s.d;
  r.monomials.push_back(Word{});
  for (Vertex v = 0; v < n; ++v) r.monomials.push_back(Word{{v}, 0});
  for (int a = 1; a <= d; ++a) r.monomials.push_back(Word{{}, a});
  if (level == NpaLevel::two) {
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = 0; v < n; ++v)
        if (u != v && !s.graph.adjacent(u, v)) r.monomials.push_back(Word{{u, v}, 0});
  }
  if (level != NpaLevel::one) {
    for (Vertex v = 0; v < n; ++v)
      for (int a = 1; a <= d; ++a) r.monomials.push_back(Word{{v}, a});
  }

  const int m = r.dim();
  r.entry = Eigen::MatrixXi::Constant(m, m, MomentRelaxation::kZero);
  std::map<Word, int> index;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      bool zero = false;
      Word w = product(r.monomials[i], r.monomials[j], zero);
      int code = MomentRelaxation::kZero;
      if (!zero) {
        CanonicalWord c = canonicalize(s, w);
        if (!c.zero) {
          if (c.word.device.empty() && c.word.eve == 0) {
            code = MomentRelaxation::kOne;
          } else {
            auto [it, inserted] = index.emplace(c.word, static_cast<int>(r.moments.size()));
            if (inserted) r.moments.push_back(c.word);
            code = it->second;
          }
        }
      }
      r.entry(i, j) = r.entry(j, i) = code;
    }
  }

  auto moment_of = [&](const Word& w) {
    CanonicalWord c = canonicalize(s, w);
    if (c.zero) throw Error("moment vanishes unexpectedly");
    auto it = index.find(c.word);
    if (it == index.end()) throw Error("moment missing from relaxation");
    return it->second;
  };
  const int k = r.num_moments();
  r.objective.assign(k, 0.0);
  r.score.assign(k, 0.0);
  for (Vertex v = 0; v < n; ++v) r.score[moment_of(Word{{v}, 0})] += s.score_weights[v];

  // sum_a <P_{s_a} E_a> + <(1 - sum_s P_s)(1 - sum_a E_a)>
  r.objective_constant = 1.0;
  const auto& star = s.star_context.members;
  for (Vertex sv : star) r.objective[moment_of(Word{{sv}, 0})] -= 1.0;
  for (int a = 1; a <= d; ++a) {
    r.objective[moment_of(Word{{}, a})] -= 1.0;
    for (Vertex sv : star) r.objective[moment_of(Word{{sv}, a})] += 1.0;
    r.objective[moment_of(Word{{star[a - 1]}, a})] += 1.0;
  }
  return r;
}

Eigen::MatrixXd assemble_moment_matrix(const MomentRelaxation& r, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != r.num_moments()) throw InvalidParameter("moment vector has wrong length");
  const int m = r.dim();
  Eigen::MatrixXd out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int c = r.entry(i, j);
      out(i, j) = c >= 0 ? y[c] : (c == MomentRelaxation::kOne ? 1.0 : 0.0);
    }
  return out;
}

double evaluate_objective(const MomentRelaxation& r, const std::vector<double>& y) {
  double v = r.objective_constant;
  for (int k = 0; k < r.num_moments(); ++k) v += r.objective[k] * y.at(k);
  return v;
}

double evaluate_score(const MomentRelaxation& r, const std::vector<double>& y) {
  double v = 0.0;
  for (int k = 0; k < r.num_moments(); ++k) v += r.score[k] * y.at(k);
  return v;
}

std::vector<double> deterministic_moments(const MomentRelaxation& r, const std::vector<Vertex>& fired,
                                          int eve_outcome) {
  std::vector<double> y(r.num_moments(), 0.0);
  for (int k = 0; k < r.num_moments(); ++k) {
    const Word& w = r.moments[k];
    double v = 1.0;
    for (Vertex u : w.device)
      if (std::find(fired.begin(), fired.end(), u) == fired.end()) v = 0.0;
    if (w.eve != 0 && w.eve != eve_outcome) v = 0.0;
    y[k] = v;
  }
  return y;
}

GuessingSdp build_guessing_sdp(const MomentRelaxation& r, double omega) {
  const int k = r.num_moments();
  const int m = r.dim();
  GuessingSdp g;
  g.omega = omega;
  g.pivot = 0;
  for (int j = 1; j < k; ++j)
    if (std::abs(r.score[j]) > std::abs(r.score[g.pivot])) g.pivot = j;
  const double ap = r.score[g.pivot];
  if (ap == 0.0) throw InvalidParameter("score functional is identically zero");

  std::vector<std::vector<std::pair<int, int>>> pos(k);
  std::vector<std::pair<int, int>> ones;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const int c = r.entry(i, j);
      if (c >= 0) pos[c].emplace_back(i, j);
      else if (c == MomentRelaxation::kOne) ones.emplace_back(i, j);
    }

  SdpProblem& p = g.problem;
  p.blocks.push_back({m, false});
  for (auto [i, j] : ones) p.objective.add(0, i, j, -1.0);
  for (auto [i, j] : pos[g.pivot]) p.objective.add(0, i, j, -omega / ap);
  for (int c = 0; c < k; ++c) {
    if (c == g.pivot) continue;
    SparseBlockMatrix a;
    for (auto [i, j] : pos[c]) a.add(0, i, j, 1.0);
    const double ratio = r.score[c] / ap;
    if (ratio != 0.0)
      for (auto [i, j] : pos[g.pivot]) a.add(0, i, j, -ratio);
    p.add_constraint(std::move(a), -(r.objective[c] - ratio * r.objective[g.pivot]));
    g.free_moments.push_back(c);
  }
  g.offset = r.objective_constant + r.objective[g.pivot] * omega / ap;
  return g;
}

GuessingSdp build_guessing_sdp(const ContextualityScenario& s, double omega, NpaLevel level) {
  return build_guessing_sdp(build_moment_relaxation(s, level), omega);
}

GuessingResult guessing_probability(const MomentRelaxation& r, double omega, double tol) {
  const GuessingSdp g = build_guessing_sdp(r, omega);
  SdpOptions opt;
  opt.tol = tol;
  const SdpSolution sol = solve_sdp(g.problem, opt);

  GuessingResult out;
  out.omega = omega;
  out.status = sol.status;
  if (infeasible_detected(sol.status)) {
    out.p_guess = out.upper_bound = std::nan("");
    return out;
  }
  const int k = r.num_moments();
  out.moments.assign(k, 0.0);
  double rest = 0.0;
  for (std::size_t j = 0; j < g.free_moments.size(); ++j) {
    const int c = g.free_moments[j];
    out.moments[c] = sol.y(static_cast<Eigen::Index>(j));
    rest += r.score[c] * out.moments[c];
  }
  out.moments[g.pivot] = (omega - rest) / r.score[g.pivot];
  out.moment_matrix = assemble_moment_matrix(r, out.moments);
  out.p_guess = evaluate_objective(r, out.moments);

  const Eigen::MatrixXd& w = sol.X.at(0);
  out.certificate = w;
  double tr_pivot = 0.0, tr_one = 0.0;
  const int m = r.dim();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int c = r.entry(i, j);
      if (c == g.pivot) tr_pivot += w(i, j);
      else if (c == MomentRelaxation::kOne) tr_one += w(i, j);
    }
  out.lambda0 = (tr_pivot + r.objective[g.pivot]) / r.score[g.pivot];
  out.intercept = r.objective_constant + tr_one;
  out.upper_bound = out.lambda0 * omega + out.intercept;
  return out;
}

GuessingResult guessing_probability(const ContextualityScenario& s, double omega, NpaLevel level,
                                    double tol) {
  return guessing_probability(build_moment_relaxation(s, level), omega, tol);
}

}  // namespace ctxrand
