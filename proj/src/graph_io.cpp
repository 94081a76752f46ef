#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "ctxrand/errors.hpp"
#include "ctxrand/graph.hpp"

namespace ctxrand {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_body(std::ostream& os, int n, const std::vector<Rational>& weights,
                const std::vector<std::string>& labels, const std::vector<Edge>& strict,
                const std::vector<Edge>& eps) {
  for (int v = 0; v < n; ++v) os << "w " << v << ' ' << to_string(weights[v]) << '\n';
  for (int v = 0; v < static_cast<int>(labels.size()); ++v)
    os << "l " << v << ' ' << labels[v] << '\n';
  for (auto [u, v] : strict) os << "e " << u << ' ' << v << '\n';
  for (auto [u, v] : eps) os << "xe " << u << ' ' << v << '\n';
}

int parse_int(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("line " + std::to_string(line) + ": expected integer, got '" + tok + "'");
  }
}

struct RawGraph {
  int n = 0;
  bool has_eps_value = false;
  double epsilon = 0.0;
  std::vector<Rational> weights;
  std::vector<bool> weight_seen;
  std::vector<std::string> labels;
  std::vector<Edge> strict, eps;
};

RawGraph parse(std::istream& is) {
  RawGraph g;
  std::string line;
  int lineno = 0;
  bool header = false;
  int m_strict = 0, m_eps = 0;
  bool any_label = false;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (!header) {
      if (tok[0] != "graph" || tok.size() != 4) throw ParseError(where + "expected 'graph <n> <m_strict> <m_eps>'");
      g.n = parse_int(tok[1], lineno);
      m_strict = parse_int(tok[2], lineno);
      m_eps = parse_int(tok[3], lineno);
      if (g.n < 0 || m_strict < 0 || m_eps < 0) throw ParseError(where + "negative count");
      g.weights.assign(g.n, Rational(1));
      g.weight_seen.assign(g.n, false);
      g.labels.assign(g.n, "");
      header = true;
      continue;
    }
    const std::string& kind = tok[0];
    if (kind == "eps") {
      if (tok.size() != 2) throw ParseError(where + "expected 'eps <value>'");
      try {
        g.epsilon = std::stod(tok[1]);
      } catch (const std::logic_error&) {
        throw ParseError(where + "bad epsilon");
      }
      g.has_eps_value = true;
    } else if (kind == "w") {
      if (tok.size() != 3) throw ParseError(where + "expected 'w <v> <weight>'");
      int v = parse_int(tok[1], lineno);
      if (v < 0 || v >= g.n) throw ParseError(where + "vertex out of range");
      if (g.weight_seen[v]) throw ParseError(where + "duplicate weight");
      g.weights[v] = parse_rational(tok[2]);
      g.weight_seen[v] = true;
    } else if (kind == "l") {
      if (tok.size() != 3) throw ParseError(where + "expected 'l <v> <label>'");
      int v = parse_int(tok[1], lineno);
      if (v < 0 || v >= g.n) throw ParseError(where + "vertex out of range");
      g.labels[v] = tok[2];
      any_label = true;
    } else if (kind == "e" || kind == "xe") {
      if (tok.size() != 3) throw ParseError(where + "expected '" + kind + " <u> <v>'");
      Edge e{parse_int(tok[1], lineno), parse_int(tok[2], lineno)};
      (kind == "e" ? g.strict : g.eps).push_back(e);
    } else {
      throw ParseError(where + "unknown record '" + kind + "'");
    }
  }
  if (!header) throw ParseError("missing graph header");
  for (int v = 0; v < g.n; ++v)
    if (!g.weight_seen[v]) throw ParseError("missing weight for vertex " + std::to_string(v));
  if (static_cast<int>(g.strict.size()) != m_strict || static_cast<int>(g.eps.size()) != m_eps)
    throw ParseError("edge counts disagree with header");
  if (!any_label) g.labels.clear();
  return g;
}

}  // namespace

void write_graph(std::ostream& os, const WeightedGraph& g) {
  os << "graph " << g.size() << ' ' << g.edges().size() << " 0\n";
  write_body(os, g.size(), g.weights(), g.labels(), g.edges(), {});
}

void write_graph(std::ostream& os, const EpsilonGraph& g) {
  os << "graph " << g.size() << ' ' << g.strict_edges().size() << ' ' << g.eps_edges().size()
     << '\n';
  os << "eps " << format_double(g.epsilon()) << '\n';
  write_body(os, g.size(), g.weights(), g.labels(), g.strict_edges(), g.eps_edges());
}

std::string graph_to_text(const WeightedGraph& g) {
  std::ostringstream os;
  write_graph(os, g);
  return os.str();
}

std::string graph_to_text(const EpsilonGraph& g) {
  std::ostringstream os;
  write_graph(os, g);
  return os.str();
}

EpsilonGraph read_graph(std::istream& is) {
  RawGraph r = parse(is);
  try {
    return EpsilonGraph(r.n, std::move(r.strict), std::move(r.eps), std::move(r.weights),
                        r.epsilon, std::move(r.labels));
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what());
  }
}

EpsilonGraph graph_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_graph(is);
}

WeightedGraph read_weighted_graph(std::istream& is) {
  RawGraph r = parse(is);
  if (!r.eps.empty() || r.has_eps_value) throw ParseError("expected a plain graph, found epsilon data");
  try {
    return WeightedGraph(r.n, std::move(r.strict), std::move(r.weights), std::move(r.labels));
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what());
  }
}

}  // namespace ctxrand
