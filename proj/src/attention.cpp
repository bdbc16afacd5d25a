#include "hgat/attention.hpp"

#include <cmath>

namespace hgat {

std::vector<std::size_t> RelationField::neighbors_of(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) out.push_back(neighbor[p]);
  return out;
}

RelationField build_relation_field(const RelationTensor& wiki, const RelationTensor& industry,
                                   const Tensor& motif_channels,
                                   const std::vector<std::string>& motif_names) {
  const std::size_t n = wiki.n();
  if (industry.n() != n) throw DimensionError("relation field: node counts disagree");
  std::size_t k_h = 0;
  if (motif_channels.size() > 0) {
    if (motif_channels.rank() != 3 || motif_channels.extent(0) != n ||
        motif_channels.extent(1) != n) {
      throw DimensionError("relation field: motif channels must be n x n x K");
    }
    k_h = motif_channels.extent(2);
  }
  if (motif_names.size() != k_h) {
    throw DimensionError("relation field: motif channel names do not match channel count");
  }

  RelationField field;
  field.n = n;
  for (const std::string& c : wiki.channel_names()) field.channel_names.push_back("wiki:" + c);
  for (const std::string& c : industry.channel_names()) {
    field.channel_names.push_back("industry:" + c);
  }
  for (const std::string& m : motif_names) field.channel_names.push_back("motif:" + m);
  const std::size_t channels = field.channel_names.size();

  // Pair scan in canonical receiver-major order.
  std::vector<double> raw_rows;
  field.offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    field.offsets[i] = field.receiver.size();
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double total = 0.0;
      std::vector<double> row(channels, 0.0);
      std::size_t c = 0;
      for (std::size_t w = 0; w < wiki.channels(); ++w, ++c) {
        row[c] = wiki.get(i, j, w) ? 1.0 : 0.0;
        total += row[c];
      }
      for (std::size_t w = 0; w < industry.channels(); ++w, ++c) {
        row[c] = industry.get(i, j, w) ? 1.0 : 0.0;
        total += row[c];
      }
      for (std::size_t m = 0; m < k_h; ++m, ++c) {
        double v = motif_channels.at(i, j, m);
        if (v < 0.0) throw ValidationError("relation field: negative motif channel value");
        row[c] = v;
        total += v;
      }
      if (total > 0.0) {
        field.receiver.push_back(i);
        field.neighbor.push_back(j);
        raw_rows.insert(raw_rows.end(), row.begin(), row.end());
      }
    }
  }
  field.offsets[n] = field.receiver.size();

  const std::size_t pairs = field.receiver.size();
  field.raw = pairs > 0 ? Tensor({pairs, channels}, std::move(raw_rows)) : Tensor();
  field.degree.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) field.degree[i] = field.offsets[i + 1] - field.offsets[i];
  if (pairs > 0) {
    field.inv_source_degree = Tensor({pairs, 1});
    for (std::size_t p = 0; p < pairs; ++p) {
      // Degree of the source node j; clamped to 1 for pure-sink neighbors so
      // the division is defined (never triggers on symmetric-support graphs).
      std::size_t deg = std::max<std::size_t>(field.degree[field.neighbor[p]], 1);
      field.inv_source_degree.at(p, 0) = 1.0 / static_cast<double>(deg);
    }
  }
  return field;
}

RelationalParams::RelationalParams(std::size_t u, std::size_t channels, std::size_t d_r,
                                   std::size_t heads, Rng rng)
    : embed_dim(u),
      relation_dim(d_r),
      compress_w("relation.compress_w", Tensor({d_r, channels})),
      compress_b("relation.compress_b", Tensor({d_r})) {
  if (heads == 0) throw DimensionError("relational params: at least one attention head required");
  if (u == 0 || d_r == 0 || channels == 0) {
    throw DimensionError("relational params: dimensions must be positive");
  }
  double cb = 1.0 / std::sqrt(static_cast<double>(channels));
  Rng crng = rng.split("compress");
  for (std::size_t i = 0; i < compress_w.value.size(); ++i) {
    compress_w.value[i] = crng.uniform(-cb, cb);
  }
  double hb = 1.0 / std::sqrt(static_cast<double>(2 * u + d_r));
  for (std::size_t k = 0; k < heads; ++k) {
    Tensor w({1, 2 * u + d_r});
    Rng hrng = rng.split("head", k);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = hrng.uniform(-hb, hb);
    head_w.emplace_back("attention.head" + std::to_string(k) + ".w", std::move(w));
    head_b.emplace_back("attention.head" + std::to_string(k) + ".b", Tensor({1}));
  }
}

std::vector<Parameter*> RelationalParams::parameters() {
  std::vector<Parameter*> out{&compress_w, &compress_b};
  for (std::size_t k = 0; k < head_w.size(); ++k) {
    out.push_back(&head_w[k]);
    out.push_back(&head_b[k]);
  }
  return out;
}

RelationalVars bind_relational(Tape& tape, RelationalParams& params) {
  RelationalVars v;
  v.compress_w = tape.parameter(params.compress_w);
  v.compress_b = tape.parameter(params.compress_b);
  for (std::size_t k = 0; k < params.head_count(); ++k) {
    v.head_w.push_back(tape.parameter(params.head_w[k]));
    v.head_b.push_back(tape.parameter(params.head_b[k]));
  }
  return v;
}

Tape::Var compress_channels(Tape& tape, const RelationalVars& vars, const RelationField& field) {
  if (field.pair_count() == 0) {
    throw UsageError("compress_channels: relation field has no pairs");
  }
  return tape.linear(tape.constant(field.raw), vars.compress_w, vars.compress_b);
}

Tape::Var attention_scores(Tape& tape, const RelationalVars& vars, const RelationField& field,
                           Tape::Var seq_embed, Tape::Var fused_pairs, std::size_t head) {
  if (head >= vars.head_w.size()) throw UsageError("attention_scores: head index out of range");
  Tape::Var e_recv = tape.gather_rows(seq_embed, field.receiver);
  Tape::Var e_nbr = tape.gather_rows(seq_embed, field.neighbor);
  Tape::Var pair_feat = tape.concat_cols({e_recv, e_nbr, fused_pairs});
  Tape::Var score = tape.linear(pair_feat, vars.head_w[head], vars.head_b[head]);  // P x 1
  return tape.segment_softmax(score, field.offsets);
}

Tape::Var propagate(Tape& tape, const RelationField& field, Tape::Var seq_embed,
                    const std::vector<Tape::Var>& head_scores) {
  if (head_scores.empty()) throw UsageError("propagate: no head scores");
  Tape::Var mean = head_scores.front();
  for (std::size_t k = 1; k < head_scores.size(); ++k) {
    mean = tape.add(mean, head_scores[k]);
  }
  mean = tape.scale(mean, 1.0 / static_cast<double>(head_scores.size()));
  Tape::Var coeff = tape.mul_const(tape.sigmoid(mean), field.inv_source_degree);
  return tape.scatter_rows_weighted(coeff, seq_embed, field.neighbor, field.receiver, field.n);
}

Tape::Var relational_embed(Tape& tape, const RelationalParams& params, const RelationalVars& vars,
                           const RelationField& field, Tape::Var seq_embed) {
  if (field.pair_count() == 0) {
    // Graph with no relations at all: every node is isolated.
    const Tensor& e = tape.value(seq_embed);
    return tape.constant(Tensor({field.n, e.extent(1)}));
  }
  Tape::Var fused = compress_channels(tape, vars, field);
  std::vector<Tape::Var> scores;
  for (std::size_t k = 0; k < params.head_count(); ++k) {
    scores.push_back(attention_scores(tape, vars, field, seq_embed, fused, k));
  }
  return propagate(tape, field, seq_embed, scores);
}

}  // namespace hgat
