#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hgat/tensor.hpp"

namespace hgat {

// Ordered ticker universe. The ordering is the canonical tie-break order for
// every downstream ranking.
struct StockUniverse {
  std::vector<std::string> tickers;
  std::unordered_map<std::string, std::size_t> index;

  // Sorts and validates; duplicate tickers are rejected.
  static StockUniverse from_tickers(std::vector<std::string> names);

  std::size_t size() const { return tickers.size(); }
  bool contains(const std::string& t) const { return index.count(t) > 0; }
  std::size_t require(const std::string& t) const;
};

enum class RelationCategory { wiki, industry };

std::string to_string(RelationCategory c);
RelationCategory relation_category_from_string(const std::string& s);

// N x N x C multi-hot encoding of typed relations within one category.
// Diagonal pairs are structurally zero.
class RelationTensor {
 public:
  RelationTensor(RelationCategory category, std::vector<std::string> channel_names,
                 std::size_t n);

  void set(std::size_t i, std::size_t j, std::size_t channel);
  bool get(std::size_t i, std::size_t j, std::size_t channel) const;
  // Sum over channels at (i, j).
  double pair_total(std::size_t i, std::size_t j) const;

  std::size_t n() const { return n_; }
  std::size_t channels() const { return channel_names_.size(); }
  const std::vector<std::string>& channel_names() const { return channel_names_; }
  RelationCategory category() const { return category_; }

 private:
  RelationCategory category_;
  std::vector<std::string> channel_names_;
  std::size_t n_;
  std::vector<std::uint8_t> values_;  // n*n*c multi-hot
};

// Directed weighted graph with positive edge weights and no self-loops.
class DirectedWeightedGraph {
 public:
  explicit DirectedWeightedGraph(std::size_t n);

  void add_edge(std::size_t i, std::size_t j, double weight);
  bool has_edge(std::size_t i, std::size_t j) const;
  double weight(std::size_t i, std::size_t j) const;  // 0 when absent

  std::size_t n() const { return n_; }
  std::size_t edge_count() const { return edge_count_; }
  // Stable hash of n and the full edge/weight set.
  std::uint64_t fingerprint() const;

 private:
  std::size_t n_;
  std::size_t edge_count_ = 0;
  std::vector<double> weights_;  // dense n*n, 0 = absent
};

// Eq-style 0/1 indicator matrices: any edge (j), single (j_s), double (j_d),
// no edge (j_0) and vertex-distinct (j_n).
struct IndicatorMatrices {
  Tensor j, j_s, j_d, j_0, j_n;
};

// Weight matrices aligned with the indicators: w for every edge, w_s on
// single pairs, w_d = w + w^T on double pairs.
struct WeightMatrices {
  Tensor w, w_s, w_d;
};

// Union of relation channels into one weighted digraph: edge (i,j) exists iff
// the weighted channel sum is positive, with that sum as its weight.
DirectedWeightedGraph build_union_graph(const RelationTensor& rel,
                                        const std::vector<double>& channel_weights = {});
DirectedWeightedGraph build_union_graph(const std::vector<const RelationTensor*>& rels,
                                        const std::vector<double>& channel_weights = {});

IndicatorMatrices indicator_matrices(const DirectedWeightedGraph& g);
WeightMatrices weight_matrices(const DirectedWeightedGraph& g);

}  // namespace hgat
