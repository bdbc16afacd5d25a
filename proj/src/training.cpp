#include "hgat/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "hgat/adam.hpp"
#include "hgat/motif.hpp"

namespace hgat {

namespace {

template <typename T>
bool in_set(const T& v, std::initializer_list<T> allowed) {
  for (const T& a : allowed) {
    if (v == a) return true;
  }
  return false;
}

}  // namespace

void TrainConfig::validate() const {
  if (!seed_set) throw ValidationError("train config: seed is mandatory");
  if (!allow_off_grid) {
    if (!in_set<std::size_t>(window, {2, 4, 8, 16, 32})) {
      throw ValidationError("train config: window length must come from {2,4,8,16,32}");
    }
    if (!in_set<std::size_t>(hidden, {16, 32, 64, 128, 256})) {
      throw ValidationError("train config: hidden units must come from {16,32,64,128,256}");
    }
    if (!in_set<double>(alpha, {0.1, 1.0, 5.0, 10.0, 15.0, 20.0})) {
      throw ValidationError("train config: alpha must come from {0.1,1,5,10,15,20}");
    }
    if (heads < 1 || heads > 8) {
      throw ValidationError("train config: attention heads must be in 1..8");
    }
  }
  if (heads == 0) throw ValidationError("train config: at least one attention head");
  if (epochs == 0) throw ValidationError("train config: epochs must be positive");
  if (!(learning_rate >= 0.0)) throw ValidationError("train config: invalid learning rate");
  if (relation_dim == 0) throw ValidationError("train config: relation_dim must be positive");
  if (top_k == 0) throw ValidationError("train config: top_k must be positive");
}

DayDataset::DayDataset(std::vector<FeatureDay> train, std::vector<FeatureDay> validation,
                       std::vector<FeatureDay> test, StockUniverse universe,
                       std::vector<std::string> feature_names)
    : train_(std::move(train)),
      validation_(std::move(validation)),
      test_(std::move(test)),
      universe_(std::move(universe)),
      feature_names_(std::move(feature_names)) {}

const std::vector<FeatureDay>& DayDataset::days(Split s) const {
  switch (s) {
    case Split::train: return train_;
    case Split::validation: return validation_;
    case Split::test: return test_;
  }
  throw UsageError("dataset: bad split");
}

const FeatureDay& DayDataset::day(Split s, std::size_t i) const {
  const auto& list = days(s);
  if (i >= list.size()) throw UsageError("dataset: day index out of range");
  ++reads_[static_cast<std::size_t>(s)];
  return list[i];
}

DayDataset build_day_dataset(const DatasetBundle& bundle, std::size_t window,
                             std::size_t train_end, std::size_t val_end,
                             int statement_lag_days, const UniverseCriteria& criteria) {
  auto filter = filter_universe(bundle.prices, bundle.statements, criteria);
  PricePanel prices = subset_prices(bundle.prices, filter.survivors);
  FundamentalPanel statements = subset_statements(bundle.statements, filter.survivors);

  prices.close = forward_fill(prices.close, 5);
  PricePanel normalized = normalize_prices(prices);

  std::vector<Panel> mas;
  for (std::size_t w : kMovingAverageWindows) {
    mas.push_back(moving_average(normalized.close, w));
  }
  // Target availability follows the pre-fill presence.
  PricePanel raw_subset = subset_prices(bundle.prices, filter.survivors);
  Panel targets = one_day_return_targets(raw_subset.close);

  FactorTable factors = fundamental_factors(statements);
  std::vector<Panel> daily;
  for (std::size_t f = 0; f < kFundamentalFactorCount; ++f) {
    daily.push_back(align_quarterly_to_daily(factors, normalized.calendar, f,
                                             statement_lag_days));
  }

  AssembleResult assembled = assemble_features(normalized, mas, targets, daily, window);
  SplitRanges ranges = chronological_split(normalized.calendar, train_end, val_end);

  std::vector<FeatureDay> train, validation, test;
  for (FeatureDay& day : assembled.days) {
    if (day.day_index < ranges.train_end) {
      train.push_back(std::move(day));
    } else if (day.day_index < ranges.val_end) {
      validation.push_back(std::move(day));
    } else {
      test.push_back(std::move(day));
    }
  }
  return DayDataset(std::move(train), std::move(validation), std::move(test),
                    normalized.universe, assembled.feature_names);
}

RelationSetup build_relation_setup(const DatasetBundle& bundle, const StockUniverse& universe,
                                   const std::vector<std::string>& motif_selection) {
  // Relations are loaded over the full file universe; restrict to survivors.
  const StockUniverse& full = bundle.prices.universe;
  RelationTensor wiki(RelationCategory::wiki, bundle.wiki.channel_names(), universe.size());
  RelationTensor industry(RelationCategory::industry, bundle.industry.channel_names(),
                          universe.size());
  for (std::size_t i = 0; i < universe.size(); ++i) {
    std::size_t fi = full.require(universe.tickers[i]);
    for (std::size_t j = 0; j < universe.size(); ++j) {
      if (i == j) continue;
      std::size_t fj = full.require(universe.tickers[j]);
      for (std::size_t c = 0; c < wiki.channels(); ++c) {
        if (bundle.wiki.get(fi, fj, c)) wiki.set(i, j, c);
      }
      for (std::size_t c = 0; c < industry.channels(); ++c) {
        if (bundle.industry.get(fi, fj, c)) industry.set(i, j, c);
      }
    }
  }

  DirectedWeightedGraph graph = build_union_graph({&wiki, &industry});
  std::vector<MotifSpec> selected;
  if (motif_selection.empty()) {
    selected = default_motif_selection(graph);
  } else {
    for (const std::string& name : motif_selection) selected.push_back(motif_by_name(name));
  }

  RelationSetup setup;
  Tensor channels;
  for (const MotifSpec& s : selected) setup.motif_names.push_back(s.name);
  if (!selected.empty()) channels = motif_channels(graph, selected);
  setup.field = build_relation_field(wiki, industry, channels, setup.motif_names);
  return setup;
}

namespace {

struct EvalMetrics {
  double loss = 0.0;
  double mrr_value = 0.0;
  double irr_value = 0.0;
};

std::vector<EvalDay> predictions_for_split(HgatModel& model, const DayDataset& dataset,
                                           const RelationSetup& relations, Split split) {
  std::vector<EvalDay> days;
  for (std::size_t d = 0; d < dataset.count(split); ++d) {
    const FeatureDay& fd = dataset.day(split, d);
    Tape tape;
    ModelVars vars = bind_model(tape, model);
    Tape::Var pred = model_forward(tape, model, vars, fd.features, relations.field);
    const Tensor& scores = tape.value(pred);
    EvalDay day;
    day.date = fd.date;
    day.predictions = Tensor({dataset.stock_count()});
    for (std::size_t i = 0; i < dataset.stock_count(); ++i) day.predictions[i] = scores.at(i, 0);
    day.realized = fd.targets;
    days.push_back(std::move(day));
  }
  return days;
}

EvalMetrics evaluate_metrics(HgatModel& model, const DayDataset& dataset,
                             const RelationSetup& relations, Split split, double alpha,
                             std::size_t top_k) {
  std::vector<EvalDay> days = predictions_for_split(model, dataset, relations, split);
  EvalMetrics m;
  if (days.empty()) return m;
  for (const EvalDay& day : days) {
    m.loss += combined_loss_value(day.predictions, day.realized, alpha);
  }
  m.loss /= static_cast<double>(days.size());
  TradingConfig tc;
  tc.top_k = top_k;
  BacktestReport report = simulate(days, tc);
  m.mrr_value = report.mrr;
  m.irr_value = report.irr_cumulative;
  return m;
}

std::vector<Tensor> snapshot_values(const std::vector<Parameter*>& params) {
  std::vector<Tensor> out;
  out.reserve(params.size());
  for (Parameter* p : params) out.push_back(p->value);
  return out;
}

void restore_values(const std::vector<Parameter*>& params, const std::vector<Tensor>& values) {
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = values[i];
}

}  // namespace

std::vector<EvalDay> evaluate_split(HgatModel& model, const DayDataset& dataset,
                                    const RelationSetup& relations, Split split) {
  return predictions_for_split(model, dataset, relations, split);
}

TrainResult train(const TrainConfig& config, const DayDataset& dataset,
                  const RelationSetup& relations) {
  config.validate();
  if (dataset.count(Split::train) == 0) throw ValidationError("train: no training days");

  ModelDims dims;
  dims.feature_dim = dataset.day(Split::train, 0).features.extent(2);
  dims.hidden = config.hidden;
  dims.relation_dim = config.relation_dim;
  dims.heads = config.heads;
  dims.channels = relations.field.channels();

  TrainResult result;
  result.model = std::make_unique<HgatModel>(dims, Rng(config.seed));
  HgatModel& model = *result.model;
  std::vector<Parameter*> params = model.parameters();

  AdamConfig adam_config;
  adam_config.learning_rate = config.learning_rate;
  AdamState adam(params, adam_config);

  double best_irr = -1e300;
  std::size_t best_epoch = 0;
  std::vector<Tensor> best_values = snapshot_values(params);
  std::size_t stalled = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    auto started = std::chrono::steady_clock::now();
    double train_loss = 0.0;
    for (std::size_t d = 0; d < dataset.count(Split::train); ++d) {
      const FeatureDay& day = dataset.day(Split::train, d);
      zero_gradients(params);
      Tape tape;
      ModelVars vars = bind_model(tape, model);
      try {
        Tape::Var pred = model_forward(tape, model, vars, day.features, relations.field);
        Tape::Var loss = combined_loss(tape, pred, day.targets, config.alpha);
        train_loss += tape.value(loss).item();
        tape.backward(loss);
        adam.step();
      } catch (const NumericError& e) {
        throw NumericError("train: numeric failure on day " + day.date + " (epoch " +
                           std::to_string(epoch + 1) + "): " + e.what());
      }
    }
    train_loss /= static_cast<double>(dataset.count(Split::train));

    EvalMetrics val = evaluate_metrics(model, dataset, relations, Split::validation,
                                       config.alpha, config.top_k);
    EpochStats stats;
    stats.train_loss = train_loss;
    stats.val_loss = val.loss;
    stats.val_mrr = val.mrr_value;
    stats.val_irr = val.irr_value;
    stats.seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - started).count();
    result.history.epochs.push_back(stats);

    if (val.irr_value > best_irr) {
      best_irr = val.irr_value;
      best_epoch = epoch;
      best_values = snapshot_values(params);
      stalled = 0;
    } else if (++stalled >= config.patience) {
      break;
    }
  }

  restore_values(params, best_values);
  result.history.best_epoch = best_epoch;
  return result;
}

nlohmann::json checkpoint_to_json(HgatModel& model, const TrainConfig& config) {
  nlohmann::json params = nlohmann::json::object();
  for (Parameter* p : model.parameters()) {
    nlohmann::json entry;
    entry["shape"] = p->value.shape();
    entry["data"] = std::vector<double>(p->value.data(), p->value.data() + p->value.size());
    params[p->name] = std::move(entry);
  }
  nlohmann::json out;
  out["format"] = "hgat-checkpoint-v1";
  out["params"] = std::move(params);
  out["config"] = {{"window", config.window},
                   {"hidden", config.hidden},
                   {"alpha", config.alpha},
                   {"heads", config.heads},
                   {"relation_dim", config.relation_dim},
                   {"seed", config.seed},
                   {"motifs", config.motifs}};
  return out;
}

void load_checkpoint_params(const nlohmann::json& checkpoint, HgatModel& model) {
  if (!checkpoint.contains("params")) {
    throw ValidationError("checkpoint: missing 'params' object");
  }
  const nlohmann::json& params = checkpoint.at("params");
  for (Parameter* p : model.parameters()) {
    if (!params.contains(p->name)) {
      throw ValidationError("checkpoint: missing parameter '" + p->name + "'");
    }
    const nlohmann::json& entry = params.at(p->name);
    std::vector<std::size_t> shape = entry.at("shape").get<std::vector<std::size_t>>();
    std::vector<double> data = entry.at("data").get<std::vector<double>>();
    if (shape != p->value.shape()) {
      throw ValidationError("checkpoint: parameter '" + p->name + "' has shape mismatch");
    }
    p->value = Tensor(shape, std::move(data));
    p->zero_grad();
  }
}

GridSearchResult grid_search(const std::vector<TrainConfig>& cells, const DayDataset& dataset,
                             const RelationSetup& relations,
                             const std::vector<std::uint64_t>& seeds) {
  if (cells.empty()) throw ValidationError("grid_search: empty grid");
  if (seeds.empty()) throw ValidationError("grid_search: need at least one seed");

  GridSearchResult result;
  for (const TrainConfig& cell : cells) {
    GridCellResult r;
    r.config = cell;
    for (std::uint64_t seed : seeds) {
      TrainConfig run = cell;
      run.seed = seed;
      run.seed_set = true;
      TrainResult trained = train(run, dataset, relations);
      const EpochStats& best = trained.history.epochs[trained.history.best_epoch];
      r.val_irr_per_seed.push_back(best.val_irr);
      r.val_mrr_per_seed.push_back(best.val_mrr);
    }
    auto mean_std = [](const std::vector<double>& v) {
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      var = v.size() > 1 ? var / static_cast<double>(v.size() - 1) : 0.0;
      return std::pair<double, double>{mean, std::sqrt(var)};
    };
    std::tie(r.mean_val_irr, r.std_val_irr) = mean_std(r.val_irr_per_seed);
    std::tie(r.mean_val_mrr, r.std_val_mrr) = mean_std(r.val_mrr_per_seed);
    result.cells.push_back(std::move(r));
  }
  for (std::size_t i = 1; i < result.cells.size(); ++i) {
    if (result.cells[i].mean_val_irr > result.cells[result.best_index].mean_val_irr) {
      result.best_index = i;
    }
  }
  return result;
}

std::vector<TrainConfig> make_grid(const TrainConfig& base, const std::vector<std::size_t>& windows,
                                   const std::vector<std::size_t>& hiddens,
                                   const std::vector<double>& alphas,
                                   const std::vector<std::size_t>& heads) {
  std::vector<TrainConfig> cells;
  for (std::size_t l : windows.empty() ? std::vector<std::size_t>{base.window} : windows) {
    for (std::size_t u : hiddens.empty() ? std::vector<std::size_t>{base.hidden} : hiddens) {
      for (double a : alphas.empty() ? std::vector<double>{base.alpha} : alphas) {
        for (std::size_t k : heads.empty() ? std::vector<std::size_t>{base.heads} : heads) {
          TrainConfig cell = base;
          cell.window = l;
          cell.hidden = u;
          cell.alpha = a;
          cell.heads = k;
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

nlohmann::json sensitivity_table(const GridSearchResult& result, const std::string& axis) {
  nlohmann::json rows = nlohmann::json::array();
  for (const GridCellResult& cell : result.cells) {
    double value;
    if (axis == "window") {
      value = static_cast<double>(cell.config.window);
    } else if (axis == "hidden") {
      value = static_cast<double>(cell.config.hidden);
    } else if (axis == "alpha") {
      value = cell.config.alpha;
    } else if (axis == "heads") {
      value = static_cast<double>(cell.config.heads);
    } else {
      throw ValidationError("sensitivity_table: unknown axis '" + axis + "'");
    }
    rows.push_back({{"value", value},
                    {"mean_val_irr", cell.mean_val_irr},
                    {"std_val_irr", cell.std_val_irr},
                    {"mean_val_mrr", cell.mean_val_mrr},
                    {"std_val_mrr", cell.std_val_mrr}});
  }
  return nlohmann::json{{"axis", axis}, {"cells", rows}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  c.prices_path = j.at("prices").get<std::string>();
  c.statements_path = j.at("statements").get<std::string>();
  c.relations_path = j.at("relations").get<std::string>();
  if (j.contains("train_fraction")) c.train_fraction = j.at("train_fraction").get<double>();
  if (j.contains("val_fraction")) c.val_fraction = j.at("val_fraction").get<double>();
  if (j.contains("model")) {
    const nlohmann::json& m = j.at("model");
    if (m.contains("window")) c.train.window = m.at("window").get<std::size_t>();
    if (m.contains("hidden")) c.train.hidden = m.at("hidden").get<std::size_t>();
    if (m.contains("alpha")) c.train.alpha = m.at("alpha").get<double>();
    if (m.contains("heads")) c.train.heads = m.at("heads").get<std::size_t>();
    if (m.contains("learning_rate")) c.train.learning_rate = m.at("learning_rate").get<double>();
    if (m.contains("epochs")) c.train.epochs = m.at("epochs").get<std::size_t>();
    if (m.contains("patience")) c.train.patience = m.at("patience").get<std::size_t>();
    if (m.contains("relation_dim")) c.train.relation_dim = m.at("relation_dim").get<std::size_t>();
    if (m.contains("motifs")) c.train.motifs = m.at("motifs").get<std::vector<std::string>>();
    if (m.contains("statement_lag_days")) {
      c.train.statement_lag_days = m.at("statement_lag_days").get<int>();
    }
    if (m.contains("allow_off_grid")) c.train.allow_off_grid = m.at("allow_off_grid").get<bool>();
    if (m.contains("seed")) {
      c.train.seed = m.at("seed").get<std::uint64_t>();
      c.train.seed_set = true;
    }
  }
  if (j.contains("trading")) {
    const nlohmann::json& t = j.at("trading");
    if (t.contains("top_k")) {
      c.trading.top_k = t.at("top_k").get<std::size_t>();
      c.train.top_k = c.trading.top_k;
    }
    if (t.contains("principal")) c.trading.principal = t.at("principal").get<double>();
    if (t.contains("risk_free_daily")) {
      c.trading.risk_free_daily = t.at("risk_free_daily").get<double>();
    }
    if (t.contains("annualization")) c.trading.annualization = t.at("annualization").get<double>();
  }
  if (!(c.train_fraction > 0.0 && c.val_fraction > 0.0 &&
        c.train_fraction + c.val_fraction < 1.0)) {
    throw ValidationError("run config: split fractions must be positive and sum below 1");
  }
  return c;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["prices"] = prices_path;
  j["statements"] = statements_path;
  j["relations"] = relations_path;
  j["train_fraction"] = train_fraction;
  j["val_fraction"] = val_fraction;
  j["model"] = {{"window", train.window},
                {"hidden", train.hidden},
                {"alpha", train.alpha},
                {"heads", train.heads},
                {"learning_rate", train.learning_rate},
                {"epochs", train.epochs},
                {"patience", train.patience},
                {"relation_dim", train.relation_dim},
                {"motifs", train.motifs},
                {"statement_lag_days", train.statement_lag_days},
                {"allow_off_grid", train.allow_off_grid}};
  if (train.seed_set) j["model"]["seed"] = train.seed;
  j["trading"] = {{"top_k", trading.top_k},
                  {"principal", trading.principal},
                  {"risk_free_daily", trading.risk_free_daily},
                  {"annualization", trading.annualization}};
  return j;
}

std::pair<std::size_t, std::size_t> RunConfig::boundaries(std::size_t calendar_days) const {
  auto b1 = static_cast<std::size_t>(train_fraction * static_cast<double>(calendar_days));
  auto b2 = static_cast<std::size_t>((train_fraction + val_fraction) *
                                     static_cast<double>(calendar_days));
  return {b1, b2};
}

}  // namespace hgat
