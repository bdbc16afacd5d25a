#include "hgat/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "hgat/rng.hpp"

namespace hgat {

StockUniverse StockUniverse::from_tickers(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  for (std::size_t i = 1; i < names.size(); ++i) {
    if (names[i] == names[i - 1]) {
      throw ValidationError("universe: duplicate ticker '" + names[i] + "'");
    }
  }
  StockUniverse u;
  u.tickers = std::move(names);
  for (std::size_t i = 0; i < u.tickers.size(); ++i) u.index[u.tickers[i]] = i;
  return u;
}

std::size_t StockUniverse::require(const std::string& t) const {
  auto it = index.find(t);
  if (it == index.end()) throw ValidationError("universe: unknown ticker '" + t + "'");
  return it->second;
}

std::string to_string(RelationCategory c) {
  return c == RelationCategory::wiki ? "wiki" : "industry";
}

RelationCategory relation_category_from_string(const std::string& s) {
  if (s == "wiki") return RelationCategory::wiki;
  if (s == "industry") return RelationCategory::industry;
  throw ValidationError("relation category must be 'wiki' or 'industry', got '" + s + "'");
}

RelationTensor::RelationTensor(RelationCategory category,
                               std::vector<std::string> channel_names, std::size_t n)
    : category_(category),
      channel_names_(std::move(channel_names)),
      n_(n),
      values_(n * n * channel_names_.size(), 0) {}

void RelationTensor::set(std::size_t i, std::size_t j, std::size_t channel) {
  if (i >= n_ || j >= n_ || channel >= channels()) {
    throw DimensionError("relation tensor: index out of range");
  }
  if (i == j) throw ValidationError("relation tensor: self-relation is not allowed");
  values_[(i * n_ + j) * channels() + channel] = 1;
}

bool RelationTensor::get(std::size_t i, std::size_t j, std::size_t channel) const {
  return values_[(i * n_ + j) * channels() + channel] != 0;
}

double RelationTensor::pair_total(std::size_t i, std::size_t j) const {
  double total = 0.0;
  const std::uint8_t* base = values_.data() + (i * n_ + j) * channels();
  for (std::size_t c = 0; c < channels(); ++c) total += base[c];
  return total;
}

DirectedWeightedGraph::DirectedWeightedGraph(std::size_t n)
    : n_(n), weights_(n * n, 0.0) {}

void DirectedWeightedGraph::add_edge(std::size_t i, std::size_t j, double weight) {
  if (i >= n_ || j >= n_) throw DimensionError("graph: vertex out of range");
  if (i == j) throw ValidationError("graph: self-loop rejected");
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw ValidationError("graph: edge weight must be a finite positive number");
  }
  double& slot = weights_[i * n_ + j];
  if (slot == 0.0) ++edge_count_;
  slot = weight;
}

bool DirectedWeightedGraph::has_edge(std::size_t i, std::size_t j) const {
  return weights_[i * n_ + j] != 0.0;
}

double DirectedWeightedGraph::weight(std::size_t i, std::size_t j) const {
  return weights_[i * n_ + j];
}

std::uint64_t DirectedWeightedGraph::fingerprint() const {
  std::uint64_t h = fnv1a64(&n_, sizeof(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      double w = weights_[i * n_ + j];
      if (w == 0.0) continue;
      std::uint64_t payload[3];
      payload[0] = i;
      payload[1] = j;
      std::memcpy(&payload[2], &w, sizeof(double));
      h ^= fnv1a64(payload, sizeof(payload));
      h *= 0x100000001B3ULL;
    }
  }
  return h;
}

DirectedWeightedGraph build_union_graph(const RelationTensor& rel,
                                        const std::vector<double>& channel_weights) {
  return build_union_graph(std::vector<const RelationTensor*>{&rel}, channel_weights);
}

DirectedWeightedGraph build_union_graph(const std::vector<const RelationTensor*>& rels,
                                        const std::vector<double>& channel_weights) {
  if (rels.empty()) throw UsageError("build_union_graph: no relation tensors");
  std::size_t n = rels.front()->n();
  std::size_t total_channels = 0;
  for (const RelationTensor* r : rels) {
    if (r->n() != n) throw DimensionError("build_union_graph: node counts disagree");
    total_channels += r->channels();
  }
  std::vector<double> weights = channel_weights;
  if (weights.empty()) weights.assign(total_channels, 1.0);
  if (weights.size() != total_channels) {
    throw DimensionError("build_union_graph: expected " + std::to_string(total_channels) +
                         " channel weights, got " + std::to_string(weights.size()));
  }
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) {
      throw ValidationError("build_union_graph: channel weights must be nonnegative");
    }
  }

  DirectedWeightedGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double total = 0.0;
      std::size_t base = 0;
      for (const RelationTensor* r : rels) {
        for (std::size_t c = 0; c < r->channels(); ++c) {
          if (r->get(i, j, c)) total += weights[base + c];
        }
        base += r->channels();
      }
      if (total > 0.0) g.add_edge(i, j, total);
    }
  }
  return g;
}

IndicatorMatrices indicator_matrices(const DirectedWeightedGraph& g) {
  const std::size_t n = g.n();
  IndicatorMatrices m{Tensor({n, n}), Tensor({n, n}), Tensor({n, n}), Tensor({n, n}),
                      Tensor({n, n})};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool fwd = g.has_edge(i, j);
      bool rev = g.has_edge(j, i);
      m.j.at(i, j) = fwd ? 1.0 : 0.0;
      m.j_s.at(i, j) = (fwd && !rev) ? 1.0 : 0.0;
      m.j_d.at(i, j) = (fwd && rev) ? 1.0 : 0.0;
      m.j_0.at(i, j) = (!fwd && !rev) ? 1.0 : 0.0;
      m.j_n.at(i, j) = 1.0;
    }
  }
  return m;
}

WeightMatrices weight_matrices(const DirectedWeightedGraph& g) {
  const std::size_t n = g.n();
  WeightMatrices m{Tensor({n, n}), Tensor({n, n}), Tensor({n, n})};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool fwd = g.has_edge(i, j);
      bool rev = g.has_edge(j, i);
      if (fwd) m.w.at(i, j) = g.weight(i, j);
      if (fwd && !rev) m.w_s.at(i, j) = g.weight(i, j);
      if (fwd && rev) m.w_d.at(i, j) = g.weight(i, j) + g.weight(j, i);
    }
  }
  return m;
}

}  // namespace hgat
