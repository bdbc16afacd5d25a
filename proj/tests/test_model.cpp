#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "hgat/gradcheck.hpp"
#include "hgat/model.hpp"
#include "hgat/motif.hpp"
#include "hgat/rng.hpp"

using namespace hgat;

namespace {

struct ModelFixture {
  RelationTensor wiki;
  RelationTensor industry;
  RelationField field;
  ModelDims dims;

  explicit ModelFixture(std::size_t n)
      : wiki(RelationCategory::wiki, {"P1"}, n),
        industry(RelationCategory::industry, {"gics"}, n) {}

  void finish(std::size_t hidden = 3, std::size_t d_r = 2, std::size_t heads = 2) {
    field = build_relation_field(wiki, industry, Tensor(), {});
    dims.feature_dim = 4;
    dims.hidden = hidden;
    dims.relation_dim = d_r;
    dims.heads = heads;
    dims.channels = field.channels();
  }
};

double rank_hinge_value(const Tensor& pred, const Tensor& target) {
  Tape tape;
  return tape.value(tape.rank_hinge(tape.constant(pred), target)).item();
}

}  // namespace

TEST_CASE("predict: zero head yields zero scores; hand fixture") {
  ModelFixture fx(3);
  fx.industry.set(0, 1, 0);
  fx.industry.set(1, 0, 0);
  fx.finish();
  HgatModel model(fx.dims, Rng(7));
  model.pred_w.value.fill(0.0);
  model.pred_b.value.fill(0.0);

  Tape tape;
  ModelVars vars = bind_model(tape, model);
  Tensor es({3, 3}, {0.1, 0.2, 0.3, -0.1, 0.0, 0.4, 0.2, 0.2, 0.2});
  Tensor er({3, 3}, {0.0, 0.1, 0.0, 0.3, -0.2, 0.1, 0.0, 0.0, 0.0});
  auto out = predict(tape, vars, tape.constant(es), tape.constant(er));
  for (std::size_t i = 0; i < 3; ++i) CHECK(tape.value(out).at(i, 0) == 0.0);

  // Hand fixture: w picks e[0] + 2 * er[2], bias 0.5.
  model.pred_w.value.fill(0.0);
  model.pred_w.value.at(0, 0) = 1.0;
  model.pred_w.value.at(0, 5) = 2.0;
  model.pred_b.value[0] = 0.5;
  Tape t2;
  ModelVars v2 = bind_model(t2, model);
  auto out2 = predict(t2, v2, t2.constant(es), t2.constant(er));
  for (std::size_t i = 0; i < 3; ++i) {
    double expect = es.at(i, 0) + 2.0 * er.at(i, 2) + 0.5;
    CHECK(t2.value(out2).at(i, 0) == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("combined loss: zero at equality, pinned fixture, alpha scaling") {
  Tensor equal({3}, {0.1, -0.2, 0.05});
  CHECK(combined_loss_value(equal, equal, 1.0) == 0.0);

  Tensor pred({2}, {0.1, 0.2});
  Tensor target({2}, {0.3, 0.1});
  double loss = combined_loss_value(pred, target, 1.0);
  CHECK(loss == doctest::Approx(0.09).epsilon(1e-12));

  // alpha = 0 reduces to the squared error.
  CHECK(combined_loss_value(pred, target, 0.0) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK_THROWS_AS(combined_loss_value(pred, target, -1.0), ValidationError);
  CHECK_THROWS_AS(combined_loss_value(pred, Tensor({3}), 1.0), DimensionError);
}

TEST_CASE("loss is nonnegative and zero only at equality") {
  Rng rng(3);
  for (int iter = 0; iter < 50; ++iter) {
    Tensor pred({5}), target({5});
    for (std::size_t i = 0; i < 5; ++i) {
      pred[i] = rng.uniform(-0.1, 0.1);
      target[i] = rng.uniform(-0.1, 0.1);
    }
    double loss = combined_loss_value(pred, target, 1.0);
    CHECK(loss >= 0.0);
    if (loss == 0.0) {
      for (std::size_t i = 0; i < 5; ++i) CHECK(pred[i] == target[i]);
    }
  }
}

TEST_CASE("ranking term: shift invariance, weak-order agreement, regression term moves") {
  Rng rng(9);
  Tensor pred({6}), target({6});
  for (std::size_t i = 0; i < 6; ++i) {
    pred[i] = rng.uniform(-0.1, 0.1);
    target[i] = rng.uniform(-0.1, 0.1);
  }
  double base = rank_hinge_value(pred, target);
  Tensor shifted = pred;
  for (std::size_t i = 0; i < 6; ++i) shifted[i] += 0.37;
  CHECK(std::fabs(rank_hinge_value(shifted, target) - base) < 1e-12);

  double reg_base = combined_loss_value(pred, target, 0.0);
  double reg_shift = combined_loss_value(shifted, target, 0.0);
  CHECK(std::fabs(reg_shift - reg_base) > 1e-6);

  // Any monotone transform of the targets ranks identically: zero hinge.
  Tensor monotone({6});
  for (std::size_t i = 0; i < 6; ++i) monotone[i] = 3.0 * target[i] + 0.2;
  CHECK(rank_hinge_value(monotone, target) == 0.0);
}

TEST_CASE("ranking hinge gradient passes finite differences away from kinks") {
  Rng rng(13);
  Tensor target({5});
  for (std::size_t i = 0; i < 5; ++i) target[i] = rng.uniform(-0.1, 0.1);
  Parameter pred("pred", Tensor({5}));
  for (std::size_t i = 0; i < 5; ++i) pred.value[i] = rng.uniform(-0.1, 0.1);
  // Perturbations of 1e-5 must not cross a kink: the fixture values above are
  // generic (no ties, margins far above the step).
  auto report = grad_check([&](Tape& t, const std::vector<Tape::Var>& v) {
    return t.rank_hinge(v[0], target);
  }, {&pred});
  CHECK(report.max_rel_error < 1e-6);
}

TEST_CASE("rank_stocks: ordering, ties, oracle, NaN") {
  RankedList r = rank_stocks(Tensor({3}, {0.3, 0.1, 0.2}));
  CHECK(r.order == std::vector<std::size_t>{0, 2, 1});

  RankedList ties = rank_stocks(Tensor({4}, {0.5, 0.5, 0.5, 0.5}));
  CHECK(ties.order == std::vector<std::size_t>{0, 1, 2, 3});

  Rng rng(21);
  Tensor scores({20});
  for (std::size_t i = 0; i < 20; ++i) scores[i] = rng.uniform(-1.0, 1.0);
  RankedList ranked = rank_stocks(scores);
  // Independent comparison-sort oracle.
  std::vector<std::size_t> oracle(20);
  for (std::size_t i = 0; i < 20; ++i) oracle[i] = i;
  std::sort(oracle.begin(), oracle.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  CHECK(ranked.order == oracle);
  for (std::size_t i = 1; i < 20; ++i) CHECK(ranked.scores[i - 1] >= ranked.scores[i]);

  Tensor bad({2}, {0.1, 0.1});
  bad[1] = std::nan("");
  auto universe = StockUniverse::from_tickers({"AAA", "BBB"});
  try {
    rank_stocks(bad, &universe);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("BBB") != std::string::npos);
  }
}

TEST_CASE("full model gradients pass finite differences end to end") {
  Rng rng(31);
  ModelFixture fx(4);
  fx.industry.set(0, 1, 0);
  fx.industry.set(1, 0, 0);
  fx.industry.set(1, 2, 0);
  fx.industry.set(2, 1, 0);
  fx.wiki.set(0, 3, 0);
  fx.finish();

  HgatModel model(fx.dims, Rng(41));
  Tensor chi({4, 3, 4});
  for (std::size_t i = 0; i < chi.size(); ++i) chi[i] = rng.uniform(-0.5, 0.5);
  Tensor targets({4});
  for (std::size_t i = 0; i < 4; ++i) targets[i] = rng.uniform(-0.05, 0.05);

  auto inputs = model.parameters();
  auto build = [&](Tape& tape, const std::vector<Tape::Var>& bound) {
    ModelVars vars;
    std::size_t at = 0;
    vars.lstm = LstmVars{bound[0], bound[1], bound[2], bound[3],
                         bound[4], bound[5], bound[6], bound[7]};
    at = 8;
    vars.relational.compress_w = bound[at++];
    vars.relational.compress_b = bound[at++];
    for (std::size_t k = 0; k < model.relational.head_count(); ++k) {
      vars.relational.head_w.push_back(bound[at++]);
      vars.relational.head_b.push_back(bound[at++]);
    }
    vars.pred_w = bound[at++];
    vars.pred_b = bound[at++];
    Tape::Var pred = model_forward(tape, model, vars, chi, fx.field);
    return combined_loss(tape, pred, targets, 1.0);
  };
  auto report = grad_check(build, inputs);
  CHECK(report.max_rel_error < 1e-4);
}

TEST_CASE("model predictions flow gradients into the prediction head") {
  ModelFixture fx(3);
  fx.industry.set(0, 1, 0);
  fx.industry.set(1, 0, 0);
  fx.finish();
  HgatModel model(fx.dims, Rng(5));
  Rng rng(6);
  Tensor chi({3, 2, 4});
  for (std::size_t i = 0; i < chi.size(); ++i) chi[i] = rng.uniform(-0.5, 0.5);
  Tensor targets({3}, {0.01, -0.02, 0.005});

  zero_gradients(model.parameters());
  Tape tape;
  ModelVars vars = bind_model(tape, model);
  Tape::Var pred = model_forward(tape, model, vars, chi, fx.field);
  tape.backward(combined_loss(tape, pred, targets, 1.0));
  double norm = 0.0;
  for (std::size_t i = 0; i < model.pred_w.gradient.size(); ++i) {
    norm += std::fabs(model.pred_w.gradient[i]);
  }
  CHECK(norm > 0.0);
}
