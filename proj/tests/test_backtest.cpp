#include <cmath>

#include "doctest.h"
#include "hgat/backtest.hpp"
#include "hgat/rng.hpp"

using namespace hgat;

namespace {

EvalDay make_day(const std::string& date, std::vector<double> pred, std::vector<double> real) {
  EvalDay day;
  day.date = date;
  const std::size_t np = pred.size(), nr = real.size();
  day.predictions = Tensor({np}, std::move(pred));
  day.realized = Tensor({nr}, std::move(real));
  return day;
}

}  // namespace

TEST_CASE("simulate: top-1 cumulative, whole-market baseline, top-2 mean") {
  // Three days, the selected stock (index 0 by prediction) realizes the fixture returns.
  std::vector<EvalDay> days{
      make_day("d1", {1.0, 0.0, -1.0}, {0.01, 0.0, 0.0}),
      make_day("d2", {1.0, 0.0, -1.0}, {-0.005, 0.1, 0.1}),
      make_day("d3", {1.0, 0.0, -1.0}, {0.02, -0.1, -0.1})};
  auto report = simulate(days, TradingConfig{.top_k = 1});
  CHECK(report.irr_cumulative == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(report.days.size() == 3);
  CHECK(report.trade_count == 3);

  // top_k = n on uniform zero returns gives zero cumulative return.
  std::vector<EvalDay> flat{make_day("d1", {0.3, 0.2, 0.1}, {0.0, 0.0, 0.0}),
                            make_day("d2", {0.1, 0.2, 0.3}, {0.0, 0.0, 0.0})};
  auto market = simulate(flat, TradingConfig{.top_k = 3});
  CHECK(market.irr_cumulative == 0.0);

  // top_k = n equals the equal-weight market return.
  std::vector<EvalDay> mkt{make_day("d1", {0.3, 0.2, 0.1}, {0.01, 0.02, 0.06})};
  auto eq = simulate(mkt, TradingConfig{.top_k = 3});
  CHECK(eq.days[0].day_return == doctest::Approx(0.03).epsilon(1e-12));

  std::vector<EvalDay> pair{make_day("d1", {1.0, 0.9, 0.0}, {0.02, 0.04, -0.5})};
  auto two = simulate(pair, TradingConfig{.top_k = 2});
  CHECK(two.days[0].day_return == doctest::Approx(0.03).epsilon(1e-12));
}

TEST_CASE("simulate: missing realized return excludes the day with a count") {
  EvalDay incomplete = make_day("d1", {1.0, 0.0}, {0.01, 0.0});
  incomplete.realized_present = {0, 1};  // selected stock's return missing
  EvalDay fine = make_day("d2", {1.0, 0.0}, {0.02, 0.0});
  auto report = simulate({incomplete, fine}, TradingConfig{.top_k = 1});
  CHECK(report.excluded_days == 1);
  CHECK(report.days.size() == 1);
  CHECK(report.irr_cumulative == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("mse fixtures and naive loop oracle") {
  CHECK(mse({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(mse({1.0, 2.0}, {0.0, 0.0}) == doctest::Approx(2.5).epsilon(1e-15));
  Rng rng(4);
  std::vector<double> a, b;
  for (int i = 0; i < 100; ++i) {
    a.push_back(rng.uniform(-1, 1));
    b.push_back(rng.uniform(-1, 1));
  }
  double acc = 0;
  for (int i = 0; i < 100; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  CHECK(mse(a, b) == doctest::Approx(acc / 100.0).epsilon(1e-15));
  CHECK_THROWS_AS(mse({}, {}), ValidationError);
}

TEST_CASE("mrr: perfect ranking, 3-then-1 fixture, random-rank analytic limit") {
  std::vector<EvalDay> perfect{make_day("d1", {0.3, 0.2, 0.1}, {0.05, 0.0, -0.1}),
                               make_day("d2", {0.1, 0.5, 0.2}, {-0.1, 0.2, 0.0})};
  CHECK(mrr(perfect) == 1.0);

  // True best ranked 3rd then 1st.
  std::vector<EvalDay> mixed{make_day("d1", {0.3, 0.2, 0.1}, {-0.1, 0.0, 0.5}),
                             make_day("d2", {0.3, 0.2, 0.1}, {0.5, 0.0, -0.1})};
  CHECK(mrr(mixed) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  // Uniform random rankings approach H_n / n.
  Rng rng(8);
  std::vector<EvalDay> random_days;
  for (int d = 0; d < 4000; ++d) {
    std::vector<double> pred, real;
    for (int i = 0; i < 10; ++i) {
      pred.push_back(rng.uniform(-1, 1));
      real.push_back(rng.uniform(-1, 1));
    }
    random_days.push_back(make_day("d", pred, real));
  }
  double expect = random_ranking_mrr(10);
  CHECK(expect == doctest::Approx(0.2929).epsilon(1e-3));
  CHECK(mrr(random_days) == doctest::Approx(expect).epsilon(0.05));

  CHECK_THROWS_AS(mrr({}), ValidationError);
}

TEST_CASE("npv and irr_solve fixtures") {
  CHECK(npv({-1000, 600, 600}, 0.0) == doctest::Approx(200.0).epsilon(1e-12));

  double r = irr_solve({-1000, 1100});
  CHECK(std::fabs(r - 0.10) < 1e-9);
  CHECK(std::fabs(npv({-1000, 1100}, r)) < 1e-9);

  // Dense grid-scan oracle for the two-period case.
  double best_rate = 0.0, best_abs = 1e18;
  for (double rate = -0.5; rate <= 1.0; rate += 1e-6) {
    double v = std::fabs(npv({-1000, 600, 600}, rate));
    if (v < best_abs) {
      best_abs = v;
      best_rate = rate;
    }
  }
  CHECK(std::fabs(irr_solve({-1000, 600, 600}) - best_rate) < 1e-6);

  CHECK_THROWS_AS(irr_solve({-1000, -10}), ValidationError);
  CHECK_THROWS_AS(irr_solve({5, 10}), ValidationError);
}

TEST_CASE("sharpe fixtures") {
  // Mean 0.001, sample std 0.01 exactly: alternate 0.011 and -0.009.
  std::vector<double> returns;
  for (int i = 0; i < 100; ++i) returns.push_back(i % 2 == 0 ? 0.011 : -0.009);
  double mean = 0.001;
  double sd = 0.0;
  for (double r : returns) sd += (r - mean) * (r - mean);
  sd = std::sqrt(sd / 99.0);
  double expect = mean / sd * std::sqrt(252.0);
  double got = sharpe(returns, 0.0, 252.0);
  CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  // Reference value for mean/std = 0.1 annualized over 252 days.
  CHECK(0.1 * std::sqrt(252.0) == doctest::Approx(1.5875).epsilon(1e-4));

  CHECK_THROWS_AS(sharpe({0.01, 0.01, 0.01}, 0.0, 252.0), NumericError);

  // Alternating returns with mean equal to the risk-free rate: zero ratio.
  std::vector<double> flat{0.02, 0.0, 0.02, 0.0};
  CHECK(sharpe(flat, 0.01, 252.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("simulate report carries mse, mrr and sharpe together") {
  Rng rng(77);
  std::vector<EvalDay> days;
  for (int d = 0; d < 30; ++d) {
    std::vector<double> pred, real;
    for (int i = 0; i < 5; ++i) {
      double signal = rng.uniform(-0.02, 0.02);
      pred.push_back(signal);
      real.push_back(signal + rng.uniform(-0.01, 0.01));
    }
    days.push_back(make_day("d" + std::to_string(d), pred, real));
  }
  auto report = simulate(days, TradingConfig{.top_k = 2});
  CHECK(report.mse > 0.0);
  CHECK(report.mrr > 0.0);
  CHECK(report.mrr <= 1.0);
  CHECK(report.sharpe.has_value());
  CHECK(report.days.back().cumulative == doctest::Approx(report.irr_cumulative).epsilon(1e-12));
}
