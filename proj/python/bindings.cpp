#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>

#include "ctxrand/attacks.hpp"
#include "ctxrand/combinat.hpp"
#include "ctxrand/epsmodels.hpp"
#include "ctxrand/errors.hpp"
#include "ctxrand/graph.hpp"
#include "ctxrand/npa.hpp"
#include "ctxrand/protocol.hpp"
#include "ctxrand/theta.hpp"

namespace py = pybind11;
using namespace ctxrand;

namespace {

py::object fraction(const Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(r.numerator(), r.denominator());
}

EpsEdgeRule parse_rule(const std::string& rule) {
  if (rule == "cross") return EpsEdgeRule::cross_context;
  if (rule == "shared") return EpsEdgeRule::shared_context;
  throw InvalidParameter("rule must be 'cross' or 'shared'");
}

HvModel parse_model(const std::string& model) {
  if (model == "ks") return HvModel::ks;
  if (model == "bell-mermin") return HvModel::bell_mermin;
  throw InvalidParameter("model must be 'ks' or 'bell-mermin'");
}

// Caches one relaxation per (d, level); building it dominates small solves.
const MomentRelaxation& relaxation(int d, const std::string& level) {
  static std::map<std::pair<int, NpaLevel>, MomentRelaxation> cache;
  const auto key = std::make_pair(d, parse_npa_level(level));
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_moment_relaxation(make_scenario(d), key.second)).first;
  return it->second;
}

}  // namespace

PYBIND11_MODULE(_ctxrand, m) {
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NotPsdError>(m, "NotPsdError", base.ptr());
  py::register_exception<VerificationError>(m, "VerificationError", base.ptr());
  py::register_exception<EntropyExhausted>(m, "EntropyExhausted", base.ptr());

  py::class_<WeightedGraph>(m, "WeightedGraph")
      .def_property_readonly("size", &WeightedGraph::size)
      .def_property_readonly("edges", &WeightedGraph::edges)
      .def_property_readonly("weights",
                             [](const WeightedGraph& g) {
                               py::list out;
                               for (const auto& w : g.weights()) out.append(fraction(w));
                               return out;
                             })
      .def("adjacent", &WeightedGraph::adjacent)
      .def("to_text", [](const WeightedGraph& g) { return graph_to_text(g); })
      .def("__repr__", [](const WeightedGraph& g) {
        return "<WeightedGraph n=" + std::to_string(g.size()) + " m=" + std::to_string(g.edges().size()) + ">";
      });

  py::class_<EpsilonGraph>(m, "EpsilonGraph")
      .def_property_readonly("size", &EpsilonGraph::size)
      .def_property_readonly("strict_edges", &EpsilonGraph::strict_edges)
      .def_property_readonly("eps_edges", &EpsilonGraph::eps_edges)
      .def_property_readonly("epsilon", &EpsilonGraph::epsilon)
      .def("to_text", [](const EpsilonGraph& g) { return graph_to_text(g); });

  m.def("build_gd", &build_gd, py::arg("d"));
  m.def("build_odd_cycle", &build_odd_cycle, py::arg("n"));
  m.def("build_cycle", &build_cycle, py::arg("n"));
  m.def("graph_from_text", &graph_from_text, py::arg("text"));
  m.def("maximal_cliques", [](const WeightedGraph& g) {
    std::vector<std::vector<Vertex>> out;
    for (const auto& c : enumerate_maximal_cliques(g)) out.push_back(c.members);
    return out;
  });
  m.def("epsilon_expand", [](const WeightedGraph& g, double eps, const std::string& rule) {
    return epsilon_expand(g, eps, parse_rule(rule));
  }, py::arg("graph"), py::arg("epsilon"), py::arg("rule") = "cross");

  m.def("independence_number", [](const WeightedGraph& g) {
    const auto r = weighted_independence_number(g);
    return py::make_tuple(fraction(r.value), r.witness);
  }, py::arg("graph"), "Exact weighted independence number and a witness set.");
  m.def("fractional_packing_number", [](const WeightedGraph& g) { return fractional_packing_number(g).value; });
  m.def("epsilon_independence", [](const EpsilonGraph& g) {
    const auto r = epsilon_independence(g);
    return py::make_tuple(r.value, fraction(r.alpha_strict), fraction(r.alpha_full));
  });

  m.def("lovasz_theta", [](const WeightedGraph& g, double tol) { return lovasz_theta(g, tol).value; },
        py::arg("graph"), py::arg("tol") = 1e-8);
  m.def("theta_gd_analytic", &theta_gd_analytic, py::arg("d"));
  m.def("theta_odd_cycle_closed", &theta_odd_cycle_closed, py::arg("n"));
  m.def("theta_c5_conditional", [](double t) {
    const auto r = theta_c5_conditional(t);
    return py::make_tuple(r.value, r.argmax);
  });
  m.def("epsilon_theta_relaxation", [](const EpsilonGraph& g) { return epsilon_theta_relaxation(g).value; });

  m.def("qubit_contextuality_gap", [](int n) {
    const auto q = qubit_contextuality_gap(n);
    py::dict d;
    d["n"] = q.n;
    d["epsilon"] = q.epsilon;
    d["quantum_value"] = q.quantum_value;
    d["eps_onc_bound"] = q.eps_onc_bound;
    d["completeness_error"] = q.completeness_error;
    d["eps_below_half"] = q.eps_below_half;
    return d;
  });
  m.def("odd_cycle_threshold", &odd_cycle_threshold, py::arg("n"));
  m.def("odd_cycle_eps_alpha", &odd_cycle_eps_alpha, py::arg("n"), py::arg("epsilon"));
  m.def("min_admissible_cycle", &min_admissible_cycle, py::arg("epsilon"));
  m.def("hv_agreement", [](const std::string& model, double theta_c) {
    const auto p = parse_model(model) == HvModel::ks ? ks_model_agreement(theta_c) : bell_mermin_agreement(theta_c);
    return py::make_tuple(p.model_prob, p.overlap);
  }, py::arg("model"), py::arg("theta_c"));
  m.def("monte_carlo_hv_check", [](const std::string& model, double theta_c, std::int64_t samples,
                                   std::uint64_t seed, int jobs) {
    py::gil_scoped_release release;
    const auto e = monte_carlo_hv_check(parse_model(model), theta_c, samples, seed, jobs);
    return std::make_pair(e.estimate, e.std_error);
  }, py::arg("model"), py::arg("theta_c"), py::arg("samples"), py::arg("seed"), py::arg("jobs") = 1);

  m.def("guessing_probability", [](double omega, int d, const std::string& level) {
    const auto& r = relaxation(d, level);
    const auto g = guessing_probability(r, omega);
    py::dict out;
    out["p_guess"] = g.p_guess;
    out["lambda0"] = g.lambda0;
    out["intercept"] = g.intercept;
    out["status"] = to_string(g.status);
    return out;
  }, py::arg("omega"), py::arg("d") = 3, py::arg("level") = "1+AB");
  m.def("min_entropy_curve", [](const std::vector<double>& grid, int d, const std::string& level) {
    const auto& r = relaxation(d, level);
    std::vector<std::pair<double, double>> out;
    for (const auto& p : min_entropy_curve(r, grid)) out.emplace_back(p.omega, p.h_min);
    return out;
  }, py::arg("grid"), py::arg("d") = 3, py::arg("level") = "1+AB");

  m.def("simulate_protocol", [](std::uint64_t seed, std::int64_t rounds, double gamma, double omega_exp,
                                double delta, double l_ext, const std::string& device) {
    const auto& r = relaxation(3, "1+AB");
    const auto s = make_scenario(3);
    ProtocolConfig cfg;
    cfg.seed = seed;
    cfg.rounds = rounds;
    cfg.gamma = gamma;
    cfg.omega_exp = omega_exp;
    cfg.delta = delta;
    cfg.l_ext = l_ext;
    cfg.keep_rounds = false;
    cfg.f_min = tradeoff_from(guessing_probability(r, omega_exp - delta));
    DeviceBehavior b;
    if (device == "honest")
      b = honest_device_behavior(s);
    else if (device == "classical")
      b = classical_device_behavior(s);
    else
      throw InvalidParameter("device must be 'honest' or 'classical'");
    const auto t = simulate_protocol(s, cfg, b);
    py::dict out;
    out["omega_obs"] = t.omega_obs;
    out["aborted"] = t.aborted;
    out["test_rounds"] = t.test_rounds;
    out["certified_length"] = t.certified_length;
    out["extractable_bits"] = t.extractable_bits;
    out["raw_bits"] = py::bytes(reinterpret_cast<const char*>(t.raw_bits.data()), t.raw_bits.size());
    return out;
  }, py::arg("seed"), py::arg("rounds") = 100000, py::arg("gamma") = 0.05, py::arg("omega_exp") = 7.67,
     py::arg("delta") = 0.05, py::arg("l_ext") = 0.0, py::arg("device") = "honest");
  m.def("toeplitz_extract", &toeplitz_extract, py::arg("raw"), py::arg("seed"), py::arg("out_len"),
        py::arg("certified_bits"));

  m.def("deterministic_context_attack", [](const std::string& target, int context) {
    const auto res = deterministic_context_attack(parse_magic_target(target), context);
    const auto rep = verify_nd_realization(res.arrangement, res.realization);
    py::dict out;
    out["context"] = res.context;
    out["members"] = res.arrangement.hyperedges[context];
    out["predicted"] = res.predicted;
    out["verified"] = rep.ok;
    return out;
  }, py::arg("target"), py::arg("context"));
  m.def("si_c_entangled_check", py::overload_cast<int, const Eigen::VectorXcd&>(&si_c_entangled_check),
        py::arg("d"), py::arg("v"));
}
