#pragma once

#include <string>
#include <vector>

#include "hgat/autograd.hpp"
#include "hgat/graph.hpp"
#include "hgat/rng.hpp"

namespace hgat {

// Static per-pair relation features: for every ordered pair (i, j) with a
// positive raw channel sum, the concatenated wiki + industry + motif channel
// vector. Neighborhoods and degrees come from these raw channels only, so the
// graph is fixed across training steps.
struct RelationField {
  std::size_t n = 0;
  std::vector<std::string> channel_names;         // C1 + C2 + K_h entries
  std::vector<std::size_t> offsets;               // n + 1; receiver i owns [offsets[i], offsets[i+1])
  std::vector<std::size_t> receiver;              // P pair receivers (i)
  std::vector<std::size_t> neighbor;              // P pair neighbors (j)
  Tensor raw;                                     // P x C raw channel vectors
  std::vector<std::size_t> degree;                // per node: own neighbor-list length
  Tensor inv_source_degree;                       // P x 1: 1 / max(degree[neighbor], 1)

  std::size_t pair_count() const { return receiver.size(); }
  std::size_t channels() const { return channel_names.size(); }
  std::vector<std::size_t> neighbors_of(std::size_t i) const;
};

// motif_channels may be empty (rank-0 tensor) to build a field without
// higher-order channels.
RelationField build_relation_field(const RelationTensor& wiki, const RelationTensor& industry,
                                   const Tensor& motif_channels,
                                   const std::vector<std::string>& motif_names);

// Learned parts of the relational layer: the shared channel compressor
// (affine C -> d_r) and K attention heads with weight vectors of length
// 2u + d_r and scalar biases.
struct RelationalParams {
  std::size_t embed_dim = 0;     // u
  std::size_t relation_dim = 0;  // d_r
  Parameter compress_w;          // d_r x C
  Parameter compress_b;          // d_r
  std::vector<Parameter> head_w; // K of 1 x (2u + d_r)
  std::vector<Parameter> head_b; // K of 1

  RelationalParams(std::size_t u, std::size_t channels, std::size_t d_r, std::size_t heads,
                   Rng rng);
  std::vector<Parameter*> parameters();
  std::size_t head_count() const { return head_w.size(); }
};

struct RelationalVars {
  Tape::Var compress_w, compress_b;
  std::vector<Tape::Var> head_w, head_b;
};

RelationalVars bind_relational(Tape& tape, RelationalParams& params);

// Fused per-pair relation vectors a_ij = compressor(raw_ij); P x d_r.
Tape::Var compress_channels(Tape& tape, const RelationalVars& vars, const RelationField& field);

// Per-head attention distribution over each receiver's neighbor list:
// softmax_j of w_k^T [e_i, e_j, a_ij] + b_k, flattened per pair.
Tape::Var attention_scores(Tape& tape, const RelationalVars& vars, const RelationField& field,
                           Tape::Var seq_embed, Tape::Var fused_pairs, std::size_t head);

// K-head propagation: for each receiver i,
//   e_r[i] = sum_j sigmoid(mean_k score_k(i,j)) / degree(j) * e_s[j];
// isolated nodes keep the zero row.
Tape::Var propagate(Tape& tape, const RelationField& field, Tape::Var seq_embed,
                    const std::vector<Tape::Var>& head_scores);

// compress + score + propagate in one call.
Tape::Var relational_embed(Tape& tape, const RelationalParams& params, const RelationalVars& vars,
                           const RelationField& field, Tape::Var seq_embed);

}  // namespace hgat
