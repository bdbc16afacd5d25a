#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hgat/model.hpp"

namespace hgat {

struct TradingConfig {
  std::size_t top_k = 1;
  double principal = 1000.0;        // currency units, fixed (simple interest)
  double risk_free_daily = 0.0;
  double annualization = 252.0;
};

struct DayTrade {
  std::string date;
  std::vector<std::size_t> selected;  // stock indices, rank order
  double day_return = 0.0;            // equal-weight mean of selected returns
  double cumulative = 0.0;            // running simple-interest sum
};

struct BacktestReport {
  std::vector<DayTrade> days;
  double mse = 0.0;
  double mrr = 0.0;
  double irr_cumulative = 0.0;        // sum of daily portfolio returns
  std::optional<double> sharpe;       // absent when undefined (zero variance)
  std::size_t trade_count = 0;
  std::size_t excluded_days = 0;      // days dropped for missing realized returns
};

// One evaluation day: predictions and realized next-day returns per stock.
// A realized return may be missing (NaN is not used; presence flags instead).
struct EvalDay {
  std::string date;
  Tensor predictions;                 // N
  Tensor realized;                    // N
  std::vector<std::uint8_t> realized_present;  // N (empty = all present)
};

// Equal-weight top-k portfolio per day, no commissions, no reinvestment.
// Days where a selected stock lacks a realized return are excluded (counted).
BacktestReport simulate(const std::vector<EvalDay>& days, const TradingConfig& config,
                        const StockUniverse* universe = nullptr);

double mse(const std::vector<double>& predicted, const std::vector<double>& actual);

// Mean over days of 1 / rank of the day's true-best stock (ties toward the
// lowest canonical index).
double mrr(const std::vector<EvalDay>& days);

double npv(const std::vector<double>& cashflows, double rate);
// Bisection on (-0.999, 10) to |NPV| < 1e-9; requires a sign change in the
// cashflow sequence.
double irr_solve(const std::vector<double>& cashflows);

// (mean excess daily return / sample standard deviation) * sqrt(annualization).
double sharpe(const std::vector<double>& daily_returns, double risk_free_daily,
              double annualization);

// Analytic MRR of a uniformly random ranking of n stocks.
double random_ranking_mrr(std::size_t n);

}  // namespace hgat
