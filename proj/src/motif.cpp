#include "hgat/motif.hpp"

#include <algorithm>

namespace hgat {

namespace {

MotifSpec make_spec(int id, std::initializer_list<std::pair<int, int>> edges) {
  MotifSpec s;
  s.id = id;
  s.name = "M" + std::to_string(id);
  for (auto [a, b] : edges) s.edges[a][b] = true;
  return s;
}

// All six permutations of three labels.
constexpr std::array<std::array<int, 3>, 6> kPerms{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

// The motif's edge set pulled back through sigma: edge (a,b) present iff
// (sigma[a], sigma[b]) is a motif edge.
std::array<std::array<bool, 3>, 3> pattern_of(const MotifSpec& spec,
                                              const std::array<int, 3>& sigma) {
  std::array<std::array<bool, 3>, 3> p{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      p[a][b] = spec.edges[sigma[a]][sigma[b]];
    }
  }
  return p;
}

PairClass class_of(const std::array<std::array<bool, 3>, 3>& edges, int a, int b) {
  bool fwd = edges[a][b], rev = edges[b][a];
  if (fwd && rev) return PairClass::dual;
  if (fwd || rev) return PairClass::single;
  return PairClass::empty;
}

Tensor transpose(const Tensor& m) {
  const std::size_t r = m.extent(0), c = m.extent(1);
  Tensor out({c, r});
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out.at(j, i) = m.at(i, j);
  }
  return out;
}

// Indicator and weight matrices for one slot pair of a pattern, oriented so
// that lookups are [row-slot vertex][col-slot vertex].
struct SlotPairMatrices {
  Tensor j;
  Tensor w;
};

SlotPairMatrices slot_pair_matrices(const std::array<std::array<bool, 3>, 3>& pattern,
                                    int a, int b, const IndicatorMatrices& ind,
                                    const WeightMatrices& wm) {
  switch (class_of(pattern, a, b)) {
    case PairClass::empty:
      return {ind.j_0, Tensor::zeros_like(wm.w)};
    case PairClass::dual:
      return {ind.j_d, wm.w_d};
    case PairClass::single:
      if (pattern[a][b]) return {ind.j_s, wm.w_s};
      return {transpose(ind.j_s), transpose(wm.w_s)};
  }
  throw UsageError("slot_pair_matrices: unreachable");
}

}  // namespace

PairClass MotifSpec::pair_class(int a, int b) const { return class_of(edges, a, b); }

int MotifSpec::edge_total() const {
  int n = 0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (edges[a][b]) ++n;
    }
  }
  return n;
}

const std::vector<MotifSpec>& motif_catalog() {
  // Closed triads M1-M7 followed by open triads M8-M13. Anchors are always
  // {k1, k3}; open triads keep the empty pair on the anchors with k2 as the
  // shared middle vertex.
  static const std::vector<MotifSpec> catalog = [] {
    std::vector<MotifSpec> c;
    c.push_back(make_spec(1, {{0, 1}, {1, 2}, {2, 0}}));                  // cycle
    c.push_back(make_spec(2, {{0, 2}, {2, 0}, {0, 1}, {1, 2}}));          // cycle + anchor double
    c.push_back(make_spec(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}})); // two doubles + single
    c.push_back(make_spec(4, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}));  // complete
    c.push_back(make_spec(5, {{0, 1}, {1, 2}, {0, 2}}));                  // feedforward
    c.push_back(make_spec(6, {{0, 2}, {2, 0}, {0, 1}, {2, 1}}));          // double, both into middle
    c.push_back(make_spec(7, {{0, 2}, {2, 0}, {1, 0}, {1, 2}}));          // double, both out of middle
    c.push_back(make_spec(8, {{1, 0}, {1, 2}}));                          // out-star
    c.push_back(make_spec(9, {{0, 1}, {1, 2}}));                          // directed path
    c.push_back(make_spec(10, {{0, 1}, {2, 1}}));                         // in-star
    c.push_back(make_spec(11, {{0, 1}, {1, 0}, {1, 2}}));                 // double + outgoing single
    c.push_back(make_spec(12, {{0, 1}, {1, 0}, {2, 1}}));                 // double + incoming single
    c.push_back(make_spec(13, {{0, 1}, {1, 0}, {1, 2}, {2, 1}}));         // two doubles
    return c;
  }();
  return catalog;
}

const MotifSpec& motif_by_name(const std::string& name) {
  for (const MotifSpec& s : motif_catalog()) {
    if (s.name == name) return s;
  }
  throw ValidationError("unknown motif '" + name + "' (expected M1..M13)");
}

AnchoredAutomorphismSet anchored_automorphisms(const MotifSpec& spec) {
  AnchoredAutomorphismSet out;
  out.motif_id = spec.id;
  std::vector<std::array<std::array<bool, 3>, 3>> seen;
  for (const auto& sigma : kPerms) {
    // Anchor set {k1, k3} must be preserved.
    bool anchored = (sigma[0] == 0 && sigma[2] == 2) || (sigma[0] == 2 && sigma[2] == 0);
    if (!anchored) continue;
    auto pattern = pattern_of(spec, sigma);
    // Two anchored permutations are equivalent under motif automorphism
    // exactly when they pull back to the same pattern.
    if (std::find(seen.begin(), seen.end(), pattern) != seen.end()) continue;
    seen.push_back(pattern);
    out.representatives.push_back(sigma);
  }
  return out;
}

bool anchor_swap_is_automorphism(const MotifSpec& spec) {
  return anchored_automorphisms(spec).representatives.size() == 1;
}

MotifAdjacency motif_adjacency(const DirectedWeightedGraph& g, const MotifSpec& spec) {
  if (g.edge_count() == 0) {
    throw NumericError("motif_adjacency: graph has no edges, normalization by |edges| is undefined");
  }
  const std::size_t n = g.n();
  const IndicatorMatrices ind = indicator_matrices(g);
  const WeightMatrices wm = weight_matrices(g);

  Tensor acc({n, n});
  for (const auto& sigma : anchored_automorphisms(spec).representatives) {
    auto pattern = pattern_of(spec, sigma);
    // Slot layout: slot 0 = row vertex i, slot 1 = middle vertex, slot 2 =
    // column vertex j. With zero-diagonal indicator matrices the products
    // below enumerate exactly the vertex-distinct middle sums:
    //   sum_k J01[i,k] J12[k,j] J02[i,j] (W01[i,k] + W12[k,j] + W02[i,j]).
    SlotPairMatrices m01 = slot_pair_matrices(pattern, 0, 1, ind, wm);
    SlotPairMatrices m12 = slot_pair_matrices(pattern, 1, 2, ind, wm);
    SlotPairMatrices m02 = slot_pair_matrices(pattern, 0, 2, ind, wm);

    Tensor weighted_left = ops::matmul(ops::mul(m01.j, m01.w), m12.j);
    Tensor weighted_right = ops::matmul(m01.j, ops::mul(m12.j, m12.w));
    Tensor path_count = ops::matmul(m01.j, m12.j);
    Tensor term = ops::mul(m02.j, ops::add(weighted_left, weighted_right));
    term = ops::add(term, ops::mul(ops::mul(m02.j, m02.w), path_count));
    acc = ops::add(acc, term);
  }
  acc = ops::scale(acc, 1.0 / static_cast<double>(g.edge_count()));

  MotifAdjacency result;
  result.motif_id = spec.id;
  result.matrix = std::move(acc);
  result.graph_fingerprint = g.fingerprint();
  return result;
}

MotifAdjacency motif_adjacency_oracle(const DirectedWeightedGraph& g, const MotifSpec& spec) {
  const std::size_t n = g.n();
  if (n > 64) {
    throw ValidationError("motif_adjacency_oracle: refusing graphs with more than 64 vertices");
  }
  if (g.edge_count() == 0) {
    throw NumericError("motif_adjacency_oracle: graph has no edges, normalization by |edges| is undefined");
  }

  const auto reps = anchored_automorphisms(spec).representatives;
  Tensor acc({n, n});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double total = 0.0;
      for (const auto& sigma : reps) {
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          const std::size_t slot[3] = {i, k, j};
          bool match = true;
          double weight = 0.0;
          for (int a = 0; a < 3 && match; ++a) {
            for (int b = a + 1; b < 3 && match; ++b) {
              std::size_t va = slot[a], vb = slot[b];
              bool m_fwd = spec.edges[sigma[a]][sigma[b]];
              bool m_rev = spec.edges[sigma[b]][sigma[a]];
              bool g_fwd = g.has_edge(va, vb);
              bool g_rev = g.has_edge(vb, va);
              if (m_fwd && m_rev) {
                if (!(g_fwd && g_rev)) { match = false; break; }
                weight += g.weight(va, vb) + g.weight(vb, va);
              } else if (m_fwd) {
                if (!(g_fwd && !g_rev)) { match = false; break; }
                weight += g.weight(va, vb);
              } else if (m_rev) {
                if (!(g_rev && !g_fwd)) { match = false; break; }
                weight += g.weight(vb, va);
              } else {
                if (g_fwd || g_rev) { match = false; break; }
              }
            }
          }
          if (match) total += weight;
        }
      }
      acc.at(i, j) = total / static_cast<double>(g.edge_count());
    }
  }

  MotifAdjacency result;
  result.motif_id = spec.id;
  result.matrix = std::move(acc);
  result.graph_fingerprint = g.fingerprint();
  return result;
}

Tensor motif_channels(const DirectedWeightedGraph& g, const std::vector<MotifSpec>& selected) {
  if (selected.empty()) throw UsageError("motif_channels: empty motif selection");
  const std::size_t n = g.n();
  Tensor out({n, n, selected.size()});
  for (std::size_t c = 0; c < selected.size(); ++c) {
    MotifAdjacency adj = motif_adjacency(g, selected[c]);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out.at(i, j, c) = adj.matrix.at(i, j);
    }
  }
  return out;
}

MotifDensityReport motif_density(const DirectedWeightedGraph& g) {
  const auto& catalog = motif_catalog();

  // Canonical classification table over the 64 possible edge codes of an
  // ordered triple (a, b, c): bit r*2+d per pair, see encode below.
  static const std::array<int, 64> kClassByCode = [] {
    std::array<int, 64> table{};
    table.fill(0);
    for (const MotifSpec& spec : motif_catalog()) {
      for (const auto& sigma : kPerms) {
        auto pattern = pattern_of(spec, sigma);
        int code = 0;
        int bit = 0;
        for (int a = 0; a < 3; ++a) {
          for (int b = a + 1; b < 3; ++b) {
            if (pattern[a][b]) code |= 1 << bit;
            if (pattern[b][a]) code |= 1 << (bit + 1);
            bit += 2;
          }
        }
        table[code] = spec.id;
      }
    }
    return table;
  }();

  const std::size_t n = g.n();
  MotifDensityReport report;
  report.counts.assign(catalog.size(), 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        int code = 0;
        int bit = 0;
        const std::size_t v[3] = {a, b, c};
        int connected_pairs = 0;
        for (int p = 0; p < 3; ++p) {
          for (int q = p + 1; q < 3; ++q) {
            bool fwd = g.has_edge(v[p], v[q]);
            bool rev = g.has_edge(v[q], v[p]);
            if (fwd) code |= 1 << bit;
            if (rev) code |= 1 << (bit + 1);
            if (fwd || rev) ++connected_pairs;
            bit += 2;
          }
        }
        if (connected_pairs < 2) continue;  // not a connected triad
        int id = kClassByCode[code];
        ++report.counts[id - 1];
        ++report.connected_triads;
      }
    }
  }
  if (report.connected_triads == 0) {
    throw NumericError("motif_density: graph has no connected triads, densities are undefined");
  }
  report.densities.resize(catalog.size());
  for (std::size_t m = 0; m < catalog.size(); ++m) {
    report.densities[m] =
        static_cast<double>(report.counts[m]) / static_cast<double>(report.connected_triads);
  }
  return report;
}

std::vector<MotifSpec> default_motif_selection(const DirectedWeightedGraph& g) {
  MotifDensityReport report = motif_density(g);
  std::vector<MotifSpec> selected;
  for (const MotifSpec& s : motif_catalog()) {
    if (report.counts[s.id - 1] > 0) selected.push_back(s);
  }
  return selected;
}

}  // namespace hgat
