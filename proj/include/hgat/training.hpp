#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "hgat/backtest.hpp"
#include "hgat/data_io.hpp"
#include "hgat/model.hpp"

namespace hgat {

// Hyperparameters. Values outside the search grids are rejected by validate()
// unless allow_off_grid is set.
struct TrainConfig {
  std::size_t window = 4;         // l in {2,4,8,16,32}
  std::size_t hidden = 16;        // u in {16,32,64,128,256}
  double alpha = 1.0;             // in {0.1,1,5,10,15,20}
  std::size_t heads = 2;          // K in 1..8
  double learning_rate = 0.001;
  std::size_t epochs = 50;
  std::size_t patience = 10;      // early stop on stalled validation IRR
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<std::string> motifs;  // empty = motifs present in the graph
  std::size_t relation_dim = 8;     // d_r
  std::size_t top_k = 1;            // validation portfolio size
  int statement_lag_days = 0;
  bool allow_off_grid = false;

  void validate() const;
};

enum class Split { train, validation, test };

// Feature days grouped by chronological split, with read counters so tests
// can prove the test split is untouched before final evaluation.
class DayDataset {
 public:
  DayDataset(std::vector<FeatureDay> train, std::vector<FeatureDay> validation,
             std::vector<FeatureDay> test, StockUniverse universe,
             std::vector<std::string> feature_names);

  std::size_t count(Split s) const { return days(s).size(); }
  const FeatureDay& day(Split s, std::size_t i) const;
  std::uint64_t reads(Split s) const { return reads_[static_cast<std::size_t>(s)]; }
  void reset_read_counters() const { reads_ = {0, 0, 0}; }

  const StockUniverse& universe() const { return universe_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  std::size_t stock_count() const { return universe_.size(); }

 private:
  const std::vector<FeatureDay>& days(Split s) const;

  std::vector<FeatureDay> train_, validation_, test_;
  StockUniverse universe_;
  std::vector<std::string> feature_names_;
  mutable std::array<std::uint64_t, 3> reads_{0, 0, 0};
};

// Feature-engineering front end: universe filter, normalization, moving
// averages, fundamental alignment, windowing and the chronological split
// (boundaries as calendar indices).
DayDataset build_day_dataset(const DatasetBundle& bundle, std::size_t window,
                             std::size_t train_end, std::size_t val_end,
                             int statement_lag_days = 0,
                             const UniverseCriteria& criteria = {});

// Precomputed relation structure for the model: union graph, selected motif
// channels, raw pair field.
struct RelationSetup {
  std::vector<std::string> motif_names;
  RelationField field;
};

RelationSetup build_relation_setup(const DatasetBundle& bundle, const StockUniverse& universe,
                                   const std::vector<std::string>& motif_selection);

struct EpochStats {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_mrr = 0.0;
  double val_irr = 0.0;
  double seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;  // 0-based index into epochs
};

struct TrainResult {
  std::unique_ptr<HgatModel> model;
  TrainHistory history;
};

// Day-batch training with Adam; chronological epochs, model selection by
// validation IRR, early stop after `patience` stalled epochs. Deterministic
// for a fixed seed and config.
TrainResult train(const TrainConfig& config, const DayDataset& dataset,
                  const RelationSetup& relations);

// Predictions for one split, day by day (no gradients).
std::vector<EvalDay> evaluate_split(HgatModel& model, const DayDataset& dataset,
                                    const RelationSetup& relations, Split split);

// ---- checkpoints -------------------------------------------------------------

nlohmann::json checkpoint_to_json(HgatModel& model, const TrainConfig& config);
void load_checkpoint_params(const nlohmann::json& checkpoint, HgatModel& model);

// ---- grid search -------------------------------------------------------------

struct GridCellResult {
  TrainConfig config;
  std::vector<double> val_irr_per_seed;
  std::vector<double> val_mrr_per_seed;
  double mean_val_irr = 0.0;
  double std_val_irr = 0.0;
  double mean_val_mrr = 0.0;
  double std_val_mrr = 0.0;
};

struct GridSearchResult {
  std::vector<GridCellResult> cells;
  std::size_t best_index = 0;  // highest mean validation IRR
};

// Trains every cell for every seed; selection by mean validation IRR.
GridSearchResult grid_search(const std::vector<TrainConfig>& cells, const DayDataset& dataset,
                             const RelationSetup& relations,
                             const std::vector<std::uint64_t>& seeds);

// Cartesian product of the axis values over a base config.
std::vector<TrainConfig> make_grid(const TrainConfig& base, const std::vector<std::size_t>& windows,
                                   const std::vector<std::size_t>& hiddens,
                                   const std::vector<double>& alphas,
                                   const std::vector<std::size_t>& heads);

// Per-axis sensitivity table (one row per value of the swept axis).
nlohmann::json sensitivity_table(const GridSearchResult& result, const std::string& axis);

// ---- run configuration --------------------------------------------------------

// One JSON document mirroring TrainConfig + TradingConfig + data paths;
// every field has a default except the seed and the data paths.
struct RunConfig {
  std::string prices_path, statements_path, relations_path;
  TrainConfig train;
  TradingConfig trading;
  double train_fraction = 0.6;
  double val_fraction = 0.2;

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  // Split boundaries for a given calendar length.
  std::pair<std::size_t, std::size_t> boundaries(std::size_t calendar_days) const;
};

}  // namespace hgat
