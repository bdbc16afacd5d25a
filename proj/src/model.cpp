#include "hgat/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hgat {

namespace {

Tensor init_head(std::size_t u, Rng rng) {
  Tensor w({1, 2 * u});
  double bound = 1.0 / std::sqrt(static_cast<double>(2 * u));
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.uniform(-bound, bound);
  return w;
}

}  // namespace

HgatModel::HgatModel(const ModelDims& d, Rng rng)
    : dims(d),
      lstm(d.hidden, d.feature_dim, rng.split("lstm")),
      relational(d.hidden, d.channels, d.relation_dim, d.heads, rng.split("relational")),
      pred_w("prediction.w", init_head(d.hidden, rng.split("prediction"))),
      pred_b("prediction.b", Tensor({1})) {}

std::vector<Parameter*> HgatModel::parameters() {
  std::vector<Parameter*> out = lstm.parameters();
  for (Parameter* p : relational.parameters()) out.push_back(p);
  out.push_back(&pred_w);
  out.push_back(&pred_b);
  return out;
}

ModelVars bind_model(Tape& tape, HgatModel& model) {
  ModelVars v;
  v.lstm = bind_lstm(tape, model.lstm);
  v.relational = bind_relational(tape, model.relational);
  v.pred_w = tape.parameter(model.pred_w);
  v.pred_b = tape.parameter(model.pred_b);
  return v;
}

Tape::Var predict(Tape& tape, const ModelVars& vars, Tape::Var seq_embed, Tape::Var rel_embed) {
  Tape::Var both = tape.concat_cols({seq_embed, rel_embed});
  return tape.linear(both, vars.pred_w, vars.pred_b);
}

Tape::Var model_forward(Tape& tape, HgatModel& model, ModelVars& vars, const Tensor& features,
                        const RelationField& field) {
  if (features.extent(0) != field.n) {
    throw DimensionError("model_forward: feature stock count does not match relation field");
  }
  Tape::Var seq = sequence_embed(tape, model.lstm, vars.lstm, features);
  Tape::Var rel = relational_embed(tape, model.relational, vars.relational, field, seq);
  return predict(tape, vars, seq, rel);
}

Tape::Var combined_loss(Tape& tape, Tape::Var predictions, const Tensor& targets, double alpha) {
  if (alpha < 0.0) throw ValidationError("combined_loss: alpha must be nonnegative");
  const Tensor& pred = tape.value(predictions);
  if (pred.size() != targets.size()) {
    throw DimensionError("combined_loss: prediction count " + std::to_string(pred.size()) +
                         " does not match target count " + std::to_string(targets.size()));
  }
  Tensor target_shaped(pred.shape(), std::vector<double>(targets.data(),
                                                         targets.data() + targets.size()));
  Tape::Var diff = tape.sub(predictions, tape.constant(target_shaped));
  Tape::Var regression = tape.sum(tape.mul(diff, diff));
  Tape::Var ranking = tape.rank_hinge(predictions, targets);
  return tape.add(regression, tape.scale(ranking, alpha));
}

double combined_loss_value(const Tensor& predictions, const Tensor& targets, double alpha) {
  Tape tape;
  Tape::Var pred = tape.constant(predictions);
  return tape.value(combined_loss(tape, pred, targets, alpha)).item();
}

RankedList rank_stocks(const Tensor& scores, const StockUniverse* universe) {
  const std::size_t n = scores.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(scores[i])) {
      std::string who = universe != nullptr && i < universe->size()
                            ? universe->tickers[i]
                            : "stock index " + std::to_string(i);
      throw NumericError("rank_stocks: NaN score for " + who);
    }
  }
  RankedList ranked;
  ranked.order.resize(n);
  std::iota(ranked.order.begin(), ranked.order.end(), 0);
  std::stable_sort(ranked.order.begin(), ranked.order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  ranked.scores.reserve(n);
  for (std::size_t idx : ranked.order) ranked.scores.push_back(scores[idx]);
  return ranked;
}

}  // namespace hgat
