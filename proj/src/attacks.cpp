#include "ctxrand/attacks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <set>

#include "ctxrand/errors.hpp"

namespace ctxrand {

void SignedArrangement::validate() const {
  if (num_vertices <= 0) throw InvalidParameter("arrangement has no vertices");
  if (labels.size() != hyperedges.size()) throw InvalidParameter("one label per hyperedge required");
  std::vector<int> count(num_vertices, 0);
  for (std::size_t e = 0; e < hyperedges.size(); ++e) {
    if (labels[e] != 1 && labels[e] != -1) throw InvalidParameter("labels must be +1 or -1");
    if (hyperedges[e].empty() || hyperedges[e].size() > 20) throw InvalidParameter("hyperedge size out of range");
    std::set<int> seen;
    for (int v : hyperedges[e]) {
      if (v < 0 || v >= num_vertices) throw InvalidParameter("hyperedge member out of range");
      if (!seen.insert(v).second) throw InvalidParameter("repeated member in hyperedge");
      ++count[v];
    }
  }
  for (int v = 0; v < num_vertices; ++v)
    if (count[v] != 2) throw InvalidParameter("vertex " + std::to_string(v) + " is not in exactly two hyperedges");
  // Connectivity of the hypergraph via its intersection graph.
  const int m = static_cast<int>(hyperedges.size());
  std::vector<char> reached(m, 0);
  std::deque<int> queue{0};
  reached[0] = 1;
  while (!queue.empty()) {
    const int e = queue.front();
    queue.pop_front();
    for (int v : hyperedges[e]) {
      auto [a, b] = incidence(v);
      for (int f : {a, b})
        if (!reached[f]) {
          reached[f] = 1;
          queue.push_back(f);
        }
    }
  }
  if (std::find(reached.begin(), reached.end(), 0) != reached.end())
    throw InvalidParameter("arrangement is not connected");
}

std::pair<int, int> SignedArrangement::incidence(int v) const {
  int first = -1, second = -1;
  for (std::size_t e = 0; e < hyperedges.size(); ++e)
    if (std::find(hyperedges[e].begin(), hyperedges[e].end(), v) != hyperedges[e].end()) {
      if (first < 0) first = static_cast<int>(e);
      else if (second < 0) second = static_cast<int>(e);
      else throw InvalidParameter("vertex in more than two hyperedges");
    }
  if (second < 0) throw InvalidParameter("vertex in fewer than two hyperedges");
  return {first, second};
}

int SignedArrangement::position(int e, int v) const {
  const auto& h = hyperedges.at(e);
  auto it = std::find(h.begin(), h.end(), v);
  return it == h.end() ? -1 : static_cast<int>(it - h.begin());
}

WeightedGraph intersection_graph(const SignedArrangement& a) {
  a.validate();
  std::vector<Edge> edges;
  for (int v = 0; v < a.num_vertices; ++v) edges.push_back(a.incidence(v));
  std::vector<std::string> labels;
  for (int l : a.labels) labels.push_back(l > 0 ? "+1" : "-1");
  const int m = static_cast<int>(a.hyperedges.size());
  return WeightedGraph(m, std::move(edges), std::vector<Rational>(m, Rational(1)), std::move(labels));
}

bool is_magic(const SignedArrangement& a) {
  int p = 1;
  for (int l : a.labels) p *= l;
  return p == -1;
}

namespace {

int parity_of(unsigned mask) { return (std::popcount(mask) % 2 == 0) ? 1 : -1; }

std::vector<Rational> negate_coordinate(const std::vector<Rational>& t, int pos) {
  std::vector<Rational> out(t.size());
  for (unsigned m = 0; m < t.size(); ++m) out[m ^ (1u << pos)] = t[m];
  return out;
}

}  // namespace

Rational minus_marginal(const SignedArrangement& a, const NdRealization& r, int e, int v) {
  const int pos = a.position(e, v);
  if (pos < 0) throw InvalidParameter("vertex not in hyperedge");
  Rational s(0);
  const auto& t = r.tables.at(e);
  for (unsigned m = 0; m < t.size(); ++m)
    if (m & (1u << pos)) s += t[m];
  return s;
}

VerificationReport verify_nd_realization(const SignedArrangement& a, const NdRealization& r, double tol) {
  a.validate();
  if (r.tables.size() != a.hyperedges.size()) throw InvalidParameter("one table per hyperedge required");
  for (std::size_t e = 0; e < a.hyperedges.size(); ++e)
    if (r.tables[e].size() != (std::size_t{1} << a.hyperedges[e].size()))
      throw InvalidParameter("table size does not match hyperedge " + std::to_string(e));

  auto exceeds = [&](const Rational& x) { return std::abs(to_double(x)) > tol && x != Rational(0); };
  VerificationReport rep;
  for (std::size_t e = 0; e < a.hyperedges.size(); ++e) {
    Rational total(0);
    for (unsigned m = 0; m < r.tables[e].size(); ++m) {
      const Rational& p = r.tables[e][m];
      if (p < Rational(0) && exceeds(p)) {
        rep.ok = false;
        rep.violation = "negative entry in hyperedge " + std::to_string(e);
        return rep;
      }
      if (parity_of(m) != a.labels[e] && exceeds(p)) {
        rep.ok = false;
        rep.violation = "parity violation in hyperedge " + std::to_string(e) + " at string " + std::to_string(m);
        return rep;
      }
      total += p;
    }
    if (exceeds(total - Rational(1))) {
      rep.ok = false;
      rep.violation = "hyperedge " + std::to_string(e) + " is not normalized";
      return rep;
    }
  }
  for (int v = 0; v < a.num_vertices; ++v) {
    auto [e, f] = a.incidence(v);
    if (exceeds(minus_marginal(a, r, e, v) - minus_marginal(a, r, f, v))) {
      rep.ok = false;
      rep.violation = "marginal of vertex " + std::to_string(v) + " differs between hyperedges " +
                      std::to_string(e) + " and " + std::to_string(f);
      return rep;
    }
  }
  return rep;
}

namespace {

std::vector<Rational> two_point_table(int size, unsigned mask_a, unsigned mask_b) {
  std::vector<Rational> t(std::size_t{1} << size, Rational(0));
  t[mask_a] = Rational(1, 2);
  t[mask_b] = Rational(1, 2);
  return t;
}

}  // namespace

std::pair<ArrangementCase, ArrangementCase> base_realizations() {
  ArrangementCase k22;
  k22.arrangement.num_vertices = 4;
  k22.arrangement.hyperedges = {{0, 1}, {2, 3}, {0, 2}, {1, 3}};
  k22.arrangement.labels = {1, 1, 1, -1};
  // Equal values on e1..e3; on e4, (v2, v4) = (+1, -1) or (-1, +1).
  k22.realization.tables = {two_point_table(2, 0b00, 0b11), two_point_table(2, 0b00, 0b11),
                            two_point_table(2, 0b00, 0b11), two_point_table(2, 0b10, 0b01)};

  ArrangementCase k3;
  k3.arrangement.num_vertices = 3;
  k3.arrangement.hyperedges = {{0, 1}, {0, 2}, {1, 2}};
  k3.arrangement.labels = {1, 1, -1};
  k3.realization.tables = {two_point_table(2, 0b00, 0b11), two_point_table(2, 0b00, 0b11),
                           two_point_table(2, 0b10, 0b01)};
  return {k22, k3};
}

ArrangementCase flip_labels_along_path(const SignedArrangement& a, const NdRealization& r,
                                       std::pair<int, int> edge_pair) {
  a.validate();
  const int m = static_cast<int>(a.hyperedges.size());
  const auto [from, to] = edge_pair;
  if (from < 0 || to < 0 || from >= m || to >= m || from == to)
    throw InvalidParameter("flip needs two distinct hyperedges");
  if (r.tables.size() != a.hyperedges.size()) throw InvalidParameter("one table per hyperedge required");

  // Shortest chain of hyperedges, recording the pivot vertex of every step.
  std::vector<int> prev(m, -1), pivot(m, -1);
  std::vector<char> seen(m, 0);
  std::deque<int> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    const int e = queue.front();
    queue.pop_front();
    std::vector<int> members = a.hyperedges[e];
    std::sort(members.begin(), members.end());
    for (int v : members) {
      auto [x, y] = a.incidence(v);
      const int f = x == e ? y : x;
      if (!seen[f]) {
        seen[f] = 1;
        prev[f] = e;
        pivot[f] = v;
        queue.push_back(f);
      }
    }
  }
  if (!seen[to]) throw InvalidParameter("no chain joins the hyperedges");

  ArrangementCase out{a, r};
  for (int e = to; e != from; e = prev[e]) {
    const int f = prev[e], v = pivot[e];
    for (int h : {e, f}) {
      out.realization.tables[h] = negate_coordinate(out.realization.tables[h], out.arrangement.position(h, v));
      out.arrangement.labels[h] = -out.arrangement.labels[h];
    }
  }
  return out;
}

namespace {

struct Chain {
  std::vector<int> internal;  // hyperedges strictly inside the chain
};

Chain trace_chain(const SignedArrangement& target, int start_edge, int end_edge, const std::vector<int>& path) {
  Chain c;
  int cur = start_edge;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const int y = path[i];
    if (y < 0 || y >= target.num_vertices) throw InvalidParameter("path vertex out of range");
    if (target.position(cur, y) < 0) throw InvalidParameter("path leaves its hyperedge");
    auto [p, q] = target.incidence(y);
    cur = p == cur ? q : p;
    if (i + 1 < path.size()) c.internal.push_back(cur);
  }
  if (cur != end_edge) throw InvalidParameter("path does not end at the image hyperedge");
  return c;
}

}  // namespace

void validate_embedding(const SignedArrangement& base, const SignedArrangement& target,
                        const MinorEmbedding& emb) {
  base.validate();
  target.validate();
  const int mb = static_cast<int>(base.hyperedges.size());
  const int mt = static_cast<int>(target.hyperedges.size());
  if (static_cast<int>(emb.hyperedge_map.size()) != mb) throw InvalidParameter("hyperedge map has wrong size");
  if (static_cast<int>(emb.vertex_paths.size()) != base.num_vertices)
    throw InvalidParameter("one path per base vertex required");
  std::set<int> images;
  for (int t : emb.hyperedge_map) {
    if (t < 0 || t >= mt) throw InvalidParameter("hyperedge image out of range");
    if (!images.insert(t).second) throw InvalidParameter("hyperedge map is not injective");
  }
  std::set<int> used_vertices, used_internal;
  for (int x = 0; x < base.num_vertices; ++x) {
    const auto& path = emb.vertex_paths[x];
    if (path.empty()) throw InvalidParameter("empty path");
    auto [lo, hi] = base.incidence(x);
    Chain c = trace_chain(target, emb.hyperedge_map[lo], emb.hyperedge_map[hi], path);
    for (int y : path)
      if (!used_vertices.insert(y).second) throw InvalidParameter("paths share a vertex");
    for (int t : c.internal) {
      if (images.count(t)) throw InvalidParameter("path passes through an image hyperedge");
      if (!used_internal.insert(t).second) throw InvalidParameter("paths share an internal hyperedge");
    }
  }
}

NdRealization lift_realization(const ArrangementCase& base, const SignedArrangement& target,
                               const MinorEmbedding& emb) {
  validate_embedding(base.arrangement, target, emb);
  const auto bv = verify_nd_realization(base.arrangement, base.realization);
  if (!bv.ok) throw InvalidParameter("base realization is invalid: " + bv.violation);
  const SignedArrangement& b = base.arrangement;
  const int mt = static_cast<int>(target.hyperedges.size());

  // Normal form: image hyperedges carry the base labels, all others +1.
  SignedArrangement normal = target;
  std::fill(normal.labels.begin(), normal.labels.end(), 1);
  for (std::size_t h = 0; h < b.hyperedges.size(); ++h) normal.labels[emb.hyperedge_map[h]] = b.labels[h];
  int pn = 1, pt = 1;
  for (int i = 0; i < mt; ++i) {
    pn *= normal.labels[i];
    pt *= target.labels[i];
  }
  if (pn != pt) throw InvalidParameter("base and target labelings have different parity");

  NdRealization r;
  for (const auto& h : target.hyperedges) {
    std::vector<Rational> t(std::size_t{1} << h.size(), Rational(0));
    t[0] = Rational(1);
    r.tables.push_back(std::move(t));
  }
  for (std::size_t h = 0; h < b.hyperedges.size(); ++h) {
    const int t = emb.hyperedge_map[h];
    std::vector<int> bitpos;
    for (int x : b.hyperedges[h]) {
      auto [lo, hi] = b.incidence(x);
      const auto& path = emb.vertex_paths[x];
      const int y = static_cast<int>(h) == lo ? path.front() : path.back();
      (void)hi;
      bitpos.push_back(target.position(t, y));
    }
    auto& table = r.tables[t];
    std::fill(table.begin(), table.end(), Rational(0));
    const auto& src = base.realization.tables[h];
    for (unsigned m = 0; m < src.size(); ++m) {
      unsigned tm = 0;
      for (std::size_t k = 0; k < bitpos.size(); ++k)
        if (m & (1u << k)) tm |= 1u << bitpos[k];
      table[tm] += src[m];
    }
  }
  for (int x = 0; x < b.num_vertices; ++x) {
    const auto& path = emb.vertex_paths[x];
    if (path.size() < 2) continue;
    auto [lo, hi] = b.incidence(x);
    const Rational pm = minus_marginal(b, base.realization, lo, x);
    const Chain c = trace_chain(target, emb.hyperedge_map[lo], emb.hyperedge_map[hi], path);
    for (std::size_t i = 0; i < c.internal.size(); ++i) {
      const int t = c.internal[i];
      auto& table = r.tables[t];
      std::fill(table.begin(), table.end(), Rational(0));
      const unsigned both = (1u << target.position(t, path[i])) | (1u << target.position(t, path[i + 1]));
      table[0] = Rational(1) - pm;
      table[both] += pm;
    }
  }

  // Move from the normal form to the target's labels, two hyperedges at a time.
  ArrangementCase cur{normal, r};
  std::vector<int> diff;
  for (int i = 0; i < mt; ++i)
    if (normal.labels[i] != target.labels[i]) diff.push_back(i);
  for (std::size_t i = 0; i + 1 < diff.size(); i += 2)
    cur = flip_labels_along_path(cur.arrangement, cur.realization, {diff[i], diff[i + 1]});
  return cur.realization;
}

SignedArrangement magic_square() {
  SignedArrangement a;
  a.num_vertices = 9;
  for (int r = 0; r < 3; ++r) a.hyperedges.push_back({3 * r, 3 * r + 1, 3 * r + 2});
  for (int c = 0; c < 3; ++c) a.hyperedges.push_back({c, 3 + c, 6 + c});
  a.labels = {1, 1, 1, 1, 1, -1};
  return a;
}

namespace {

int pentagram_vertex(int i, int j) {
  if (i > j) std::swap(i, j);
  int idx = 0;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) {
      if (a == i && b == j) return idx;
      ++idx;
    }
  throw InvalidParameter("bad pentagram line pair");
}

}  // namespace

SignedArrangement magic_pentagram() {
  SignedArrangement a;
  a.num_vertices = 10;
  for (int i = 0; i < 5; ++i) {
    std::vector<int> line;
    for (int j = 0; j < 5; ++j)
      if (j != i) line.push_back(pentagram_vertex(i, j));
    std::sort(line.begin(), line.end());
    a.hyperedges.push_back(line);
  }
  a.labels = {1, 1, 1, 1, -1};
  return a;
}

MagicTarget parse_magic_target(const std::string& text) {
  if (text == "magic-square" || text == "square") return MagicTarget::magic_square;
  if (text == "pentagram" || text == "magic-pentagram") return MagicTarget::pentagram;
  throw InvalidParameter("unknown attack target '" + text + "'");
}

AttackResult deterministic_context_attack(MagicTarget target, int context) {
  auto [k22, k3] = base_realizations();
  AttackResult out;
  out.context = context;
  ArrangementCase base;
  if (target == MagicTarget::magic_square) {
    out.arrangement = magic_square();
    if (context < 0 || context >= 6) throw InvalidParameter("magic square has contexts 0..5");
    std::vector<int> rows, cols;
    for (int i = 0; i < 3; ++i) {
      if (context != i) rows.push_back(i);
      if (context != 3 + i) cols.push_back(i);
    }
    const int a = rows[0], b = rows[1], c = cols[0], d = cols[1];
    auto cell = [](int r, int col) { return 3 * r + col; };
    base = k22;
    // e1 -> R_a, e2 -> R_b, e3 -> C_c, e4 -> C_d.
    out.embedding.hyperedge_map = {a, b, 3 + c, 3 + d};
    out.embedding.vertex_paths = {{cell(a, c)}, {cell(a, d)}, {cell(b, c)}, {cell(b, d)}};
  } else {
    out.arrangement = magic_pentagram();
    if (context < 0 || context >= 5) throw InvalidParameter("pentagram has contexts 0..4");
    std::vector<int> lines;
    for (int i = 0; i < 5; ++i)
      if (i != context) lines.push_back(i);
    const int a = lines[0], b = lines[1], c = lines[2];
    base = k3;
    out.embedding.hyperedge_map = {a, b, c};
    out.embedding.vertex_paths = {{pentagram_vertex(a, b)}, {pentagram_vertex(a, c)}, {pentagram_vertex(b, c)}};
  }
  out.realization = lift_realization(base, out.arrangement, out.embedding);
  const auto& table = out.realization.tables[context];
  int support = -1;
  for (unsigned m = 0; m < table.size(); ++m)
    if (table[m] != Rational(0)) {
      if (support >= 0 || table[m] != Rational(1)) throw Error("context outcome is not deterministic");
      support = static_cast<int>(m);
    }
  for (std::size_t k = 0; k < out.arrangement.hyperedges[context].size(); ++k)
    out.predicted.push_back((support >> k) & 1 ? -1 : 1);
  return out;
}

double si_c_correlation(const Eigen::MatrixXcd& projector, const Eigen::VectorXcd& state) {
  const Eigen::Index d = projector.rows();
  if (projector.cols() != d || state.size() != d * d) throw InvalidParameter("dimension mismatch");
  const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(d, d) - 2.0 * projector;
  Eigen::MatrixXcd aa(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) aa.block(i * d, j * d, d, d) = a(i, j) * a;
  return (state.adjoint() * aa * state)(0, 0).real() / state.squaredNorm();
}

double si_c_entangled_check(int d, const Eigen::VectorXcd& v) {
  if (d < 2) throw InvalidParameter("dimension must be at least 2");
  if (v.size() != d || v.norm() == 0.0) throw InvalidParameter("vector must be a non-zero element of C^d");
  const Eigen::MatrixXcd p = v * v.adjoint() / v.squaredNorm();
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw DomainError("projector differs from its transpose; the maximally entangled state pairs P with P^T");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
  for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return si_c_correlation(p, psi);
}

double si_c_entangled_check(int d, const Eigen::VectorXd& v) {
  return si_c_entangled_check(d, Eigen::VectorXcd(v.cast<std::complex<double>>()));
}

}  // namespace ctxrand
