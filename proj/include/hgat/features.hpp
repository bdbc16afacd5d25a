#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hgat/graph.hpp"
#include "hgat/tensor.hpp"

namespace hgat {

// Strictly increasing trading calendar.
struct Calendar {
  std::vector<std::string> dates;
  std::vector<int> serials;
  std::unordered_map<std::string, std::size_t> index;

  static Calendar from_dates(std::vector<std::string> dates);
  std::size_t size() const { return dates.size(); }
  std::size_t require(const std::string& date) const;
};

// Tickers x days matrix with explicit missing markers.
class Panel {
 public:
  Panel() = default;
  Panel(std::size_t rows, std::size_t cols);

  double value(std::size_t i, std::size_t t) const;
  bool present(std::size_t i, std::size_t t) const { return mask_[i * cols_ + t] != 0; }
  void set(std::size_t i, std::size_t t, double v);
  void clear(std::size_t i, std::size_t t);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool operator==(const Panel&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
};

struct PricePanel {
  StockUniverse universe;
  Calendar calendar;
  Panel close;
};

struct StatementRow {
  std::string quarter_end;
  int serial = 0;
  double gp = 0, revenue = 0, ni = 0, psd = 0, aos = 0, assets = 0, liabilities = 0,
         equity = 0;

  bool operator==(const StatementRow&) const = default;
};

struct FundamentalPanel {
  StockUniverse universe;
  std::vector<std::vector<StatementRow>> rows;  // per ticker, quarter-end ascending
};

// ---- price-side transforms -------------------------------------------------

// Divides each ticker's series by its own maximum over the full period.
// Rejects all-missing tickers by name.
PricePanel normalize_prices(const PricePanel& panel);

// Forward-fills gaps of up to max_gap consecutive missing days per ticker;
// longer gaps (and days before the first observation) stay missing.
Panel forward_fill(const Panel& panel, std::size_t max_gap = 5);

// Trailing simple moving average; the first window-1 positions per ticker are
// unavailable. Throws if the panel is shorter than the window.
Panel moving_average(const Panel& series, std::size_t window);

constexpr std::array<std::size_t, 4> kMovingAverageWindows{5, 10, 20, 30};

// r = (p_next - p) / p.
double one_day_return(double p, double p_next);

// Per (ticker, day t): return from t to t+1, present only where both days are
// present in `panel` (pre-fill presence decides availability).
Panel one_day_return_targets(const Panel& panel);

// ---- fundamentals ----------------------------------------------------------

constexpr std::size_t kFundamentalFactorCount = 5;
// GPM, EPS, GPG, ALR, Leverage.
extern const std::array<const char*, kFundamentalFactorCount> kFundamentalFactorNames;

struct FactorQuarter {
  std::string quarter_end;
  int serial = 0;
  std::array<std::optional<double>, kFundamentalFactorCount> values;
};

struct FactorTable {
  std::vector<std::vector<FactorQuarter>> rows;  // per ticker
};

// The five statement ratios; entries with zero denominators (or no prior
// quarter, for growth) are left missing for imputation downstream.
FactorTable fundamental_factors(const FundamentalPanel& panel);

// Step-function alignment: each factor value applies from quarter_end +
// lag_days onward until superseded; days before the first available value use
// the first value.
Panel align_quarterly_to_daily(const FactorTable& table, const Calendar& calendar,
                               std::size_t factor, int lag_days = 0);

// ---- assembly --------------------------------------------------------------

struct FeatureDay {
  std::size_t day_index = 0;  // calendar position of the anchor day t
  std::string date;
  Tensor features;  // N x S x D
  Tensor targets;   // N (next-day return ratios)
};

struct AssembleResult {
  std::vector<FeatureDay> days;
  std::vector<std::string> feature_names;  // D entries, tagged by treatment
  std::vector<std::string> skipped_days;   // log of skipped anchor days
};

// Builds the windowed feature tensor per anchor day: 5 technical features in
// normalized-price units plus 5 fundamental factors z-scored cross-sectionally
// per day (missing factor values imputed with that day's cross-sectional
// median first). A day is emitted only when every stock has a complete
// window and a target.
AssembleResult assemble_features(const PricePanel& normalized,
                                 const std::vector<Panel>& moving_averages,
                                 const Panel& targets,
                                 const std::vector<Panel>& daily_factors,
                                 std::size_t window);

// ---- universe filtering and splits ------------------------------------------

struct UniverseCriteria {
  double min_price = 5.0;       // never trading below this
  double min_coverage = 0.98;   // share of calendar days with a record
  bool require_full_statements = true;
};

struct UniverseFilterReport {
  StockUniverse survivors;
  std::size_t excluded_price = 0;
  std::size_t excluded_coverage = 0;
  std::size_t excluded_statements = 0;
  std::vector<std::string> excluded_tickers;
};

UniverseFilterReport filter_universe(const PricePanel& prices, const FundamentalPanel& statements,
                                     const UniverseCriteria& criteria = {});

// Restrict panels to a survivor universe.
PricePanel subset_prices(const PricePanel& panel, const StockUniverse& survivors);
FundamentalPanel subset_statements(const FundamentalPanel& panel, const StockUniverse& survivors);

struct SplitRanges {
  std::size_t train_begin = 0, train_end = 0;
  std::size_t val_end = 0;
  std::size_t test_end = 0;
};

// Disjoint, ordered, exhaustive [0, b1) / [b1, b2) / [b2, size) ranges.
SplitRanges chronological_split(const Calendar& calendar, std::size_t b1, std::size_t b2);

}  // namespace hgat
