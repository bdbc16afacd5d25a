#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hgat/graph.hpp"
#include "hgat/tensor.hpp"

namespace hgat {

enum class PairClass { empty, single, dual };

// One of the 13 directed third-order structures, laid out on labels
// (k1, k2, k3) = (0, 1, 2) with anchor set {k1, k3}. The unordered pairs
// (k1,k2), (k1,k3), (k2,k3) are each classified as empty, unilateral (with a
// direction) or bilateral. This table is the single source of truth for the
// catalog; see motif_catalog() for the layout convention.
struct MotifSpec {
  int id = 0;                                   // 1..13
  std::string name;                             // "M1".."M13"
  std::array<std::array<bool, 3>, 3> edges{};   // edges[a][b]: directed a->b

  bool has_edge(int a, int b) const { return edges[a][b]; }
  PairClass pair_class(int a, int b) const;
  // Number of ordered edges in the motif.
  int edge_total() const;
};

// The fixed catalog: M1-M7 closed triads, M8-M13 open triads, M4 fully
// bilateral, M13 the bilateral open triad with non-adjacent anchors.
const std::vector<MotifSpec>& motif_catalog();
const MotifSpec& motif_by_name(const std::string& name);

// Anchor-preserving vertex permutations quotiented by motif automorphism.
// A representative is stored as the image array (sigma[0], sigma[1], sigma[2]).
struct AnchoredAutomorphismSet {
  int motif_id = 0;
  std::vector<std::array<int, 3>> representatives;
};

AnchoredAutomorphismSet anchored_automorphisms(const MotifSpec& spec);

// Whether the anchor swap (k1 <-> k3) is a motif automorphism; such motifs
// produce symmetric adjacency matrices.
bool anchor_swap_is_automorphism(const MotifSpec& spec);

struct MotifAdjacency {
  int motif_id = 0;
  Tensor matrix;                   // n*n, zero diagonal, nonnegative
  std::uint64_t graph_fingerprint = 0;
};

// Higher-order adjacency matrix: for each ordered anchored pair (i, j) the
// edge-count-normalized sum of matched instance weights over all anchored
// representatives and middle vertices. Fast path via dense indicator/weight
// matrix products.
MotifAdjacency motif_adjacency(const DirectedWeightedGraph& g, const MotifSpec& spec);

// Independent brute-force route: enumerates ordered vertex triples and tests
// the pair classifications literally against the spec under each anchored
// representative. Limited to n <= 64.
MotifAdjacency motif_adjacency_oracle(const DirectedWeightedGraph& g, const MotifSpec& spec);

// Stacks the selected motifs' adjacency matrices into an n*n*K channel tensor.
Tensor motif_channels(const DirectedWeightedGraph& g, const std::vector<MotifSpec>& selected);

struct MotifDensityReport {
  std::vector<std::uint64_t> counts;    // per catalog motif (index = id - 1)
  std::vector<double> densities;        // counts / connected_triads
  std::uint64_t connected_triads = 0;   // induced triads with >= 2 connected pairs
};

// Census of induced 3-node subgraphs over the catalog. Requires at least one
// connected triad.
MotifDensityReport motif_density(const DirectedWeightedGraph& g);

// Catalog motifs with nonzero density in g, in catalog order. This is the
// default channel selection.
std::vector<MotifSpec> default_motif_selection(const DirectedWeightedGraph& g);

}  // namespace hgat
