#include "gdiam/geom.hpp"

namespace gdiam {

char rel_char(Rel r) { return r == Rel::LT ? '<' : r == Rel::GT ? '>' : '*'; }

GeneralizedDominance::GeneralizedDominance(std::initializer_list<Rel> rels) {
  axis.fill(Rel::ANY);
  if (rels.size() < 1 || rels.size() > kMaxDim) throw DimensionError("relation dimension out of range");
  dim = static_cast<int>(rels.size());
  int i = 0;
  for (Rel r : rels) axis[i++] = r;
}

bool GeneralizedDominance::operator==(const GeneralizedDominance& o) const {
  if (dim != o.dim) return false;
  for (int i = 0; i < dim; ++i)
    if (axis[i] != o.axis[i]) return false;
  return true;
}

std::string GeneralizedDominance::str() const {
  std::string s;
  for (int i = 0; i < dim; ++i) s += rel_char(axis[i]);
  return s;
}

GeneralizedDominance flip(const GeneralizedDominance& g) {
  GeneralizedDominance f = g;
  for (int i = 0; i < g.dim; ++i) f[i] = flip(g[i]);
  return f;
}

GeneralizedDominance dominance_rel_for_cells(std::span<const std::int64_t> alphaP,
                                             std::span<const std::int64_t> alphaQ) {
  require_same_dim(static_cast<int>(alphaP.size()), static_cast<int>(alphaQ.size()));
  if (alphaP.empty() || alphaP.size() > kMaxDim) throw DimensionError("cell dimension out of range");
  GeneralizedDominance g;
  g.dim = static_cast<int>(alphaP.size());
  for (int i = 0; i < g.dim; ++i) {
    std::int64_t d = alphaQ[i] - alphaP[i];
    if (d == 0) g[i] = Rel::ANY;
    else if (d == 1) g[i] = Rel::GT;  // q' + 1 - p' <= 1  <=>  q' <= p'
    else if (d == -1) g[i] = Rel::LT;
    else throw std::invalid_argument("cells farther than 1 apart have no dominance relation");
  }
  return g;
}

std::pair<Rat, Rat> rational_circle_point(const Rat& t) {
  if (!(t > 0 && t < 1)) throw std::invalid_argument("circle parameter must lie in (0,1)");
  Rat tc = t;
  tc.canonicalize();
  Rat t2 = tc * tc;
  Rat den = 1 + t2;
  Rat b = 2 * tc / den;
  Rat w = (1 - t2) / den;
  return {b, w};
}

}  // namespace gdiam
