#include <istream>
#include <ostream>
#include <sstream>

#include "ctxrand/attacks.hpp"
#include "ctxrand/errors.hpp"

namespace ctxrand {

void write_arrangement(std::ostream& os, const SignedArrangement& a) {
  os << "arrangement " << a.num_vertices << ' ' << a.hyperedges.size() << '\n';
  for (std::size_t e = 0; e < a.hyperedges.size(); ++e) {
    os << "he " << (a.labels[e] > 0 ? "+1" : "-1");
    for (int v : a.hyperedges[e]) os << ' ' << v;
    os << '\n';
  }
}

SignedArrangement read_arrangement(std::istream& is) {
  SignedArrangement a;
  std::string line;
  bool header = false;
  std::size_t expected = 0;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (!header) {
      if (kind != "arrangement" || !(ls >> a.num_vertices >> expected))
        throw ParseError(where + "expected 'arrangement <n_vertices> <n_hyperedges>'");
      header = true;
      continue;
    }
    if (kind != "he") throw ParseError(where + "unknown record '" + kind + "'");
    std::string label;
    if (!(ls >> label) || (label != "+1" && label != "-1" && label != "1"))
      throw ParseError(where + "label must be +1 or -1");
    a.labels.push_back(label == "-1" ? -1 : 1);
    std::vector<int> members;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        members.push_back(std::stoi(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::logic_error&) {
        throw ParseError(where + "bad vertex '" + tok + "'");
      }
    }
    a.hyperedges.push_back(std::move(members));
  }
  if (!header) throw ParseError("missing arrangement header");
  if (a.hyperedges.size() != expected) throw ParseError("hyperedge count disagrees with header");
  try {
    a.validate();
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what());
  }
  return a;
}

}  // namespace ctxrand
