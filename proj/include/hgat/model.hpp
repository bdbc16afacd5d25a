#pragma once

#include <optional>
#include <vector>

#include "hgat/attention.hpp"
#include "hgat/lstm.hpp"

namespace hgat {

struct ModelDims {
  std::size_t feature_dim = 10;   // D
  std::size_t hidden = 16;        // u
  std::size_t relation_dim = 8;   // d_r
  std::size_t heads = 2;          // K
  std::size_t channels = 0;       // C1 + C2 + K_h
};

// All trainable state: LSTM gates, relation compressor, attention heads and
// the affine prediction head over [e_i, e_r_i].
struct HgatModel {
  ModelDims dims;
  LstmParams lstm;
  RelationalParams relational;
  Parameter pred_w;  // 1 x 2u
  Parameter pred_b;  // 1

  HgatModel(const ModelDims& dims, Rng rng);
  std::vector<Parameter*> parameters();
};

struct ModelVars {
  LstmVars lstm;
  RelationalVars relational;
  Tape::Var pred_w, pred_b;
};

ModelVars bind_model(Tape& tape, HgatModel& model);

// Affine map over the concatenated embeddings; one score per stock (N x 1).
Tape::Var predict(Tape& tape, const ModelVars& vars, Tape::Var seq_embed, Tape::Var rel_embed);

// Full forward pass: features (N x S x D) -> predicted next-day returns.
Tape::Var model_forward(Tape& tape, HgatModel& model, ModelVars& vars, const Tensor& features,
                        const RelationField& field);

// ||pred - target||^2 + alpha * sum_{i,j} max(0, -(p_i - p_j)(t_i - t_j)).
Tape::Var combined_loss(Tape& tape, Tape::Var predictions, const Tensor& targets, double alpha);

// Untaped loss value for evaluation paths.
double combined_loss_value(const Tensor& predictions, const Tensor& targets, double alpha);

struct RankedList {
  std::vector<std::size_t> order;  // stock indices, best first
  std::vector<double> scores;      // scores in ranked order
};

// Stable descending sort; ties broken by canonical universe order. NaN scores
// are an error naming the stock.
RankedList rank_stocks(const Tensor& scores, const StockUniverse* universe = nullptr);

}  // namespace hgat
