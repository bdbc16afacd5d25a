#include "hgat/features.hpp"

#include <algorithm>
#include <cmath>

#include "hgat/dates.hpp"

namespace hgat {

Calendar Calendar::from_dates(std::vector<std::string> dates) {
  Calendar c;
  c.dates = std::move(dates);
  if (c.dates.empty()) throw ValidationError("calendar: no dates");
  c.serials.reserve(c.dates.size());
  for (std::size_t i = 0; i < c.dates.size(); ++i) {
    int serial = days_from_civil(parse_date(c.dates[i]));
    if (i > 0 && serial <= c.serials.back()) {
      throw ValidationError("calendar: dates must be strictly increasing at '" +
                            c.dates[i] + "'");
    }
    c.serials.push_back(serial);
    c.index[c.dates[i]] = i;
  }
  return c;
}

std::size_t Calendar::require(const std::string& date) const {
  auto it = index.find(date);
  if (it == index.end()) throw ValidationError("calendar: unknown date '" + date + "'");
  return it->second;
}

Panel::Panel(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0), mask_(rows * cols, 0) {}

double Panel::value(std::size_t i, std::size_t t) const {
  if (!present(i, t)) throw UsageError("panel: reading a missing entry");
  return values_[i * cols_ + t];
}

void Panel::set(std::size_t i, std::size_t t, double v) {
  if (!std::isfinite(v)) throw NumericError("panel: non-finite value");
  values_[i * cols_ + t] = v;
  mask_[i * cols_ + t] = 1;
}

void Panel::clear(std::size_t i, std::size_t t) {
  values_[i * cols_ + t] = 0.0;
  mask_[i * cols_ + t] = 0;
}

PricePanel normalize_prices(const PricePanel& panel) {
  PricePanel out = panel;
  const std::size_t n = panel.universe.size(), t_count = panel.calendar.size();
  for (std::size_t i = 0; i < n; ++i) {
    double mx = 0.0;
    bool any = false;
    for (std::size_t t = 0; t < t_count; ++t) {
      if (!panel.close.present(i, t)) continue;
      double p = panel.close.value(i, t);
      if (p <= 0.0) {
        throw ValidationError("normalize_prices: nonpositive price for '" +
                              panel.universe.tickers[i] + "' on " + panel.calendar.dates[t]);
      }
      mx = std::max(mx, p);
      any = true;
    }
    if (!any) {
      throw ValidationError("normalize_prices: ticker '" + panel.universe.tickers[i] +
                            "' has no observed prices");
    }
    for (std::size_t t = 0; t < t_count; ++t) {
      if (panel.close.present(i, t)) out.close.set(i, t, panel.close.value(i, t) / mx);
    }
  }
  return out;
}

Panel forward_fill(const Panel& panel, std::size_t max_gap) {
  Panel out = panel;
  for (std::size_t i = 0; i < panel.rows(); ++i) {
    std::size_t gap = 0;
    bool seen = false;
    double last = 0.0;
    for (std::size_t t = 0; t < panel.cols(); ++t) {
      if (panel.present(i, t)) {
        last = panel.value(i, t);
        seen = true;
        gap = 0;
      } else if (seen && ++gap <= max_gap) {
        out.set(i, t, last);
      }
    }
  }
  return out;
}

Panel moving_average(const Panel& series, std::size_t window) {
  if (window == 0) throw UsageError("moving_average: window must be positive");
  if (series.cols() < window) {
    throw ValidationError("moving_average: series length " + std::to_string(series.cols()) +
                          " shorter than window " + std::to_string(window));
  }
  Panel out(series.rows(), series.cols());
  for (std::size_t i = 0; i < series.rows(); ++i) {
    for (std::size_t t = window - 1; t < series.cols(); ++t) {
      double acc = 0.0;
      bool complete = true;
      for (std::size_t k = t + 1 - window; k <= t; ++k) {
        if (!series.present(i, k)) {
          complete = false;
          break;
        }
        acc += series.value(i, k);
      }
      if (complete) out.set(i, t, acc / static_cast<double>(window));
    }
  }
  return out;
}

double one_day_return(double p, double p_next) {
  if (!(p > 0.0)) throw ValidationError("one_day_return: price must be positive");
  return (p_next - p) / p;
}

Panel one_day_return_targets(const Panel& panel) {
  Panel out(panel.rows(), panel.cols());
  for (std::size_t i = 0; i < panel.rows(); ++i) {
    for (std::size_t t = 0; t + 1 < panel.cols(); ++t) {
      if (panel.present(i, t) && panel.present(i, t + 1)) {
        out.set(i, t, one_day_return(panel.value(i, t), panel.value(i, t + 1)));
      }
    }
  }
  return out;
}

const std::array<const char*, kFundamentalFactorCount> kFundamentalFactorNames{
    "gpm", "eps", "gpg", "alr", "leverage"};

FactorTable fundamental_factors(const FundamentalPanel& panel) {
  FactorTable table;
  table.rows.resize(panel.rows.size());
  for (std::size_t i = 0; i < panel.rows.size(); ++i) {
    const auto& statements = panel.rows[i];
    for (std::size_t q = 0; q < statements.size(); ++q) {
      const StatementRow& s = statements[q];
      FactorQuarter fq;
      fq.quarter_end = s.quarter_end;
      fq.serial = s.serial;
      if (s.revenue != 0.0) fq.values[0] = s.gp / s.revenue;
      if (s.aos != 0.0) fq.values[1] = (s.ni - s.psd) / s.aos;
      if (q > 0 && statements[q - 1].gp != 0.0) {
        fq.values[2] = (s.gp - statements[q - 1].gp) / statements[q - 1].gp;
      }
      if (s.liabilities != 0.0) fq.values[3] = s.assets / s.liabilities;
      if (s.equity != 0.0) fq.values[4] = s.assets / s.equity;
      table.rows[i].push_back(std::move(fq));
    }
  }
  return table;
}

Panel align_quarterly_to_daily(const FactorTable& table, const Calendar& calendar,
                               std::size_t factor, int lag_days) {
  if (factor >= kFundamentalFactorCount) throw UsageError("align: factor index out of range");
  Panel out(table.rows.size(), calendar.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    // Availability points: (serial + lag, value), keeping missing values out.
    std::vector<std::pair<int, double>> steps;
    for (const FactorQuarter& q : table.rows[i]) {
      if (q.values[factor].has_value()) steps.emplace_back(q.serial + lag_days, *q.values[factor]);
    }
    if (steps.empty()) continue;
    for (std::size_t t = 0; t < calendar.size(); ++t) {
      int day = calendar.serials[t];
      // Last step at or before this day; days before the first step backfill
      // the first available value.
      double v = steps.front().second;
      for (const auto& [serial, value] : steps) {
        if (serial <= day) v = value;
      }
      out.set(i, t, v);
    }
  }
  return out;
}

AssembleResult assemble_features(const PricePanel& normalized,
                                 const std::vector<Panel>& moving_averages,
                                 const Panel& targets,
                                 const std::vector<Panel>& daily_factors,
                                 std::size_t window) {
  if (window == 0) throw UsageError("assemble_features: window must be positive");
  if (moving_averages.size() != kMovingAverageWindows.size()) {
    throw DimensionError("assemble_features: expected 4 moving-average panels");
  }
  if (daily_factors.size() != kFundamentalFactorCount) {
    throw DimensionError("assemble_features: expected 5 fundamental factor panels");
  }
  const std::size_t n = normalized.universe.size();
  const std::size_t t_count = normalized.calendar.size();
  const std::size_t d = 5 + kFundamentalFactorCount;

  AssembleResult result;
  result.feature_names = {"close_norm",   "ma5_norm", "ma10_norm", "ma20_norm", "ma30_norm",
                          "gpm_zscore",   "eps_zscore", "gpg_zscore", "alr_zscore",
                          "leverage_zscore"};

  // Per-day fundamental cross sections: impute missing entries with the day's
  // cross-sectional median, then z-score (population std; zero variance -> 0).
  std::vector<Panel> factor_z;
  factor_z.reserve(kFundamentalFactorCount);
  for (std::size_t f = 0; f < kFundamentalFactorCount; ++f) {
    Panel z(n, t_count);
    for (std::size_t t = 0; t < t_count; ++t) {
      std::vector<double> present;
      for (std::size_t i = 0; i < n; ++i) {
        if (daily_factors[f].present(i, t)) present.push_back(daily_factors[f].value(i, t));
      }
      std::vector<double> filled(n, 0.0);
      if (!present.empty()) {
        std::vector<double> sorted = present;
        std::sort(sorted.begin(), sorted.end());
        double median = (sorted.size() % 2 == 1)
                            ? sorted[sorted.size() / 2]
                            : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
        for (std::size_t i = 0; i < n; ++i) {
          filled[i] = daily_factors[f].present(i, t) ? daily_factors[f].value(i, t) : median;
        }
      }
      double mean = 0.0;
      for (double v : filled) mean += v;
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (double v : filled) var += (v - mean) * (v - mean);
      var /= static_cast<double>(n);
      double sd = std::sqrt(var);
      for (std::size_t i = 0; i < n; ++i) {
        z.set(i, t, sd > 0.0 ? (filled[i] - mean) / sd : 0.0);
      }
    }
    factor_z.push_back(std::move(z));
  }

  auto window_complete = [&](std::size_t i, std::size_t t) {
    for (std::size_t s = t + 1 - window; s <= t; ++s) {
      if (!normalized.close.present(i, s)) return false;
      for (const Panel& ma : moving_averages) {
        if (!ma.present(i, s)) return false;
      }
    }
    return true;
  };

  for (std::size_t t = window - 1; t < t_count; ++t) {
    bool ok = true;
    std::string reason;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!window_complete(i, t)) {
        ok = false;
        reason = "incomplete feature window for " + normalized.universe.tickers[i];
      } else if (!targets.present(i, t)) {
        ok = false;
        reason = "missing next-day return for " + normalized.universe.tickers[i];
      }
    }
    if (!ok) {
      result.skipped_days.push_back(normalized.calendar.dates[t] + ": " + reason);
      continue;
    }
    FeatureDay day;
    day.day_index = t;
    day.date = normalized.calendar.dates[t];
    day.features = Tensor({n, window, d});
    day.targets = Tensor({n});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t s = 0; s < window; ++s) {
        std::size_t tt = t + 1 - window + s;
        day.features.at(i, s, 0) = normalized.close.value(i, tt);
        for (std::size_t m = 0; m < moving_averages.size(); ++m) {
          day.features.at(i, s, 1 + m) = moving_averages[m].value(i, tt);
        }
        for (std::size_t f = 0; f < kFundamentalFactorCount; ++f) {
          day.features.at(i, s, 5 + f) = factor_z[f].value(i, tt);
        }
      }
      day.targets[i] = targets.value(i, t);
    }
    day.features.require_finite("assemble_features");
    result.days.push_back(std::move(day));
  }
  return result;
}

UniverseFilterReport filter_universe(const PricePanel& prices, const FundamentalPanel& statements,
                                     const UniverseCriteria& criteria) {
  const std::size_t n = prices.universe.size();
  const std::size_t t_count = prices.calendar.size();

  // Quarters that intersect the calendar range.
  int first_q = quarter_index(civil_from_days(prices.calendar.serials.front()));
  int last_q = quarter_index(civil_from_days(prices.calendar.serials.back()));

  UniverseFilterReport report;
  std::vector<std::string> survivors;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t observed = 0;
    bool below_min = false;
    for (std::size_t t = 0; t < t_count; ++t) {
      if (!prices.close.present(i, t)) continue;
      ++observed;
      if (prices.close.value(i, t) < criteria.min_price) below_min = true;
    }
    bool coverage_ok =
        static_cast<double>(observed) >= criteria.min_coverage * static_cast<double>(t_count);
    bool statements_ok = true;
    if (criteria.require_full_statements) {
      std::vector<bool> seen(static_cast<std::size_t>(last_q - first_q + 1), false);
      for (const StatementRow& row : statements.rows[i]) {
        int q = quarter_index(civil_from_days(row.serial));
        if (q >= first_q && q <= last_q) seen[static_cast<std::size_t>(q - first_q)] = true;
      }
      statements_ok = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    }
    if (below_min) ++report.excluded_price;
    if (!coverage_ok) ++report.excluded_coverage;
    if (!statements_ok) ++report.excluded_statements;
    if (!below_min && coverage_ok && statements_ok) {
      survivors.push_back(prices.universe.tickers[i]);
    } else {
      report.excluded_tickers.push_back(prices.universe.tickers[i]);
    }
  }
  if (survivors.empty()) {
    throw ValidationError("filter_universe: no stock satisfies the selection criteria");
  }
  report.survivors = StockUniverse::from_tickers(std::move(survivors));
  return report;
}

PricePanel subset_prices(const PricePanel& panel, const StockUniverse& survivors) {
  PricePanel out;
  out.universe = survivors;
  out.calendar = panel.calendar;
  out.close = Panel(survivors.size(), panel.calendar.size());
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    std::size_t src = panel.universe.require(survivors.tickers[i]);
    for (std::size_t t = 0; t < panel.calendar.size(); ++t) {
      if (panel.close.present(src, t)) out.close.set(i, t, panel.close.value(src, t));
    }
  }
  return out;
}

FundamentalPanel subset_statements(const FundamentalPanel& panel, const StockUniverse& survivors) {
  FundamentalPanel out;
  out.universe = survivors;
  out.rows.resize(survivors.size());
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    out.rows[i] = panel.rows[panel.universe.require(survivors.tickers[i])];
  }
  return out;
}

SplitRanges chronological_split(const Calendar& calendar, std::size_t b1, std::size_t b2) {
  if (!(b1 > 0 && b1 < b2 && b2 < calendar.size())) {
    throw ValidationError("chronological_split: boundaries must satisfy 0 < b1 < b2 < " +
                          std::to_string(calendar.size()));
  }
  SplitRanges r;
  r.train_begin = 0;
  r.train_end = b1;
  r.val_end = b2;
  r.test_end = calendar.size();
  return r;
}

}  // namespace hgat
