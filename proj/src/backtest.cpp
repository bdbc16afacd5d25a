#include "hgat/backtest.hpp"

#include <cmath>

namespace hgat {

namespace {

bool realized_ok(const EvalDay& day, std::size_t stock) {
  return day.realized_present.empty() || day.realized_present[stock] != 0;
}

}  // namespace

BacktestReport simulate(const std::vector<EvalDay>& days, const TradingConfig& config,
                        const StockUniverse* universe) {
  if (config.top_k == 0) throw ValidationError("simulate: top_k must be at least 1");
  if (!(config.principal > 0.0)) throw ValidationError("simulate: principal must be positive");

  BacktestReport report;
  std::vector<double> predicted_all, actual_all;
  std::vector<double> portfolio_returns;
  double cumulative = 0.0;

  for (const EvalDay& day : days) {
    const std::size_t n = day.predictions.size();
    if (day.realized.size() != n) {
      throw DimensionError("simulate: prediction and return lengths disagree on " + day.date);
    }
    RankedList ranked = rank_stocks(day.predictions, universe);
    std::size_t k = std::min(config.top_k, n);

    bool complete = true;
    for (std::size_t r = 0; r < k; ++r) {
      if (!realized_ok(day, ranked.order[r])) complete = false;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (realized_ok(day, i)) {
        predicted_all.push_back(day.predictions[i]);
        actual_all.push_back(day.realized[i]);
      }
    }
    if (!complete) {
      ++report.excluded_days;
      continue;
    }

    DayTrade trade;
    trade.date = day.date;
    double total = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
      trade.selected.push_back(ranked.order[r]);
      total += day.realized[ranked.order[r]];
    }
    trade.day_return = total / static_cast<double>(k);
    cumulative += trade.day_return;
    trade.cumulative = cumulative;
    portfolio_returns.push_back(trade.day_return);
    report.trade_count += k;
    report.days.push_back(std::move(trade));
  }

  report.irr_cumulative = cumulative;
  if (!predicted_all.empty()) report.mse = mse(predicted_all, actual_all);
  std::vector<EvalDay> traded_days;
  for (const EvalDay& day : days) {
    // MRR over the days actually traded (same exclusion rule).
    RankedList ranked = rank_stocks(day.predictions, universe);
    std::size_t k = std::min(config.top_k, day.predictions.size());
    bool complete = true;
    for (std::size_t r = 0; r < k; ++r) {
      if (!realized_ok(day, ranked.order[r])) complete = false;
    }
    if (complete) traded_days.push_back(day);
  }
  if (!traded_days.empty()) report.mrr = mrr(traded_days);
  if (portfolio_returns.size() >= 2) {
    try {
      report.sharpe = sharpe(portfolio_returns, config.risk_free_daily, config.annualization);
    } catch (const NumericError&) {
      report.sharpe.reset();
    }
  }
  return report;
}

double mse(const std::vector<double>& predicted, const std::vector<double>& actual) {
  if (predicted.empty() || predicted.size() != actual.size()) {
    throw ValidationError("mse: inputs must be nonempty and aligned");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    double d = predicted[i] - actual[i];
    acc += d * d;
  }
  return acc / static_cast<double>(predicted.size());
}

double mrr(const std::vector<EvalDay>& days) {
  if (days.empty()) throw ValidationError("mrr: no evaluation days");
  double total = 0.0;
  for (const EvalDay& day : days) {
    const std::size_t n = day.predictions.size();
    // True best = highest realized return among stocks with realized data;
    // ties break toward the lowest canonical index.
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!realized_ok(day, i)) continue;
      if (best == n || day.realized[i] > day.realized[best]) best = i;
    }
    if (best == n) throw ValidationError("mrr: day " + day.date + " has no realized returns");
    RankedList ranked = rank_stocks(day.predictions);
    std::size_t rank = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (ranked.order[r] == best) {
        rank = r + 1;
        break;
      }
    }
    total += 1.0 / static_cast<double>(rank);
  }
  return total / static_cast<double>(days.size());
}

double npv(const std::vector<double>& cashflows, double rate) {
  if (rate <= -1.0) throw ValidationError("npv: rate must exceed -1");
  double acc = 0.0;
  double discount = 1.0;
  for (std::size_t t = 0; t < cashflows.size(); ++t) {
    if (t > 0) discount *= 1.0 + rate;
    acc += cashflows[t] / discount;
  }
  if (!std::isfinite(acc)) throw NumericError("npv: non-finite result");
  return acc;
}

double irr_solve(const std::vector<double>& cashflows) {
  if (cashflows.size() < 2) throw ValidationError("irr_solve: need at least two cashflows");
  bool pos = false, neg = false;
  for (double c : cashflows) {
    if (c > 0) pos = true;
    if (c < 0) neg = true;
  }
  if (!pos || !neg) {
    throw ValidationError("irr_solve: cashflows must change sign at least once");
  }
  double lo = -0.999, hi = 10.0;
  double f_lo = npv(cashflows, lo), f_hi = npv(cashflows, hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0) == (f_hi > 0)) {
    throw NumericError("irr_solve: no root bracketed in (-0.999, 10)");
  }
  double mid = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    double f_mid = npv(cashflows, mid);
    if (std::fabs(f_mid) < 1e-9) return mid;
    if ((f_mid > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  double f_mid = npv(cashflows, mid);
  if (std::fabs(f_mid) >= 1e-9) {
    throw NumericError("irr_solve: bisection did not reach |NPV| < 1e-9");
  }
  return mid;
}

double sharpe(const std::vector<double>& daily_returns, double risk_free_daily,
              double annualization) {
  if (daily_returns.size() < 2) {
    throw ValidationError("sharpe: need at least two daily returns");
  }
  double mean = 0.0;
  for (double r : daily_returns) mean += r;
  mean /= static_cast<double>(daily_returns.size());
  double var = 0.0;
  for (double r : daily_returns) var += (r - mean) * (r - mean);
  var /= static_cast<double>(daily_returns.size() - 1);
  double sd = std::sqrt(var);
  if (sd == 0.0) throw NumericError("sharpe: zero return variance, ratio undefined");
  return (mean - risk_free_daily) / sd * std::sqrt(annualization);
}

double random_ranking_mrr(std::size_t n) {
  if (n == 0) throw ValidationError("random_ranking_mrr: empty universe");
  double h = 0.0;
  for (std::size_t k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
  return h / static_cast<double>(n);
}

}  // namespace hgat
