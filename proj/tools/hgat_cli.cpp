// Command-line front end for the stock-selection pipeline: synthetic data
// generation, motif matrices, training, backtesting, ranking and the
// gradient-check battery.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hgat/backtest.hpp"
#include "hgat/data_io.hpp"
#include "hgat/gradcheck.hpp"
#include "hgat/motif.hpp"
#include "hgat/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw hgat::ValidationError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw hgat::ValidationError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw hgat::ValidationError(path.string() + ": " + e.what());
  }
}

void write_manifest(const fs::path& out_dir, const std::string& command, const json& config,
                    const std::vector<fs::path>& inputs, const std::vector<std::string>& outputs) {
  json manifest;
  manifest["command"] = command;
  manifest["config"] = config;
  json digests = json::object();
  for (const fs::path& p : inputs) digests[p.string()] = hgat::digest_hex(hgat::file_digest(p));
  manifest["inputs"] = digests;
  manifest["outputs"] = outputs;
  write_json_file(out_dir / "manifest.json", manifest);
}

struct LoadedPipeline {
  hgat::DatasetBundle bundle;
  hgat::DayDataset dataset;
  hgat::RelationSetup relations;
};

LoadedPipeline load_pipeline(const hgat::RunConfig& config) {
  hgat::DatasetBundle bundle =
      hgat::load_bundle(config.prices_path, config.statements_path, config.relations_path);
  auto [b1, b2] = config.boundaries(bundle.prices.calendar.size());
  hgat::DayDataset dataset = hgat::build_day_dataset(bundle, config.train.window, b1, b2,
                                                     config.train.statement_lag_days);
  hgat::RelationSetup relations =
      hgat::build_relation_setup(bundle, dataset.universe(), config.train.motifs);
  return LoadedPipeline{std::move(bundle), std::move(dataset), std::move(relations)};
}

hgat::TrainConfig config_from_checkpoint(const json& checkpoint, hgat::TrainConfig base) {
  const json& c = checkpoint.at("config");
  base.window = c.at("window").get<std::size_t>();
  base.hidden = c.at("hidden").get<std::size_t>();
  base.alpha = c.at("alpha").get<double>();
  base.heads = c.at("heads").get<std::size_t>();
  base.relation_dim = c.at("relation_dim").get<std::size_t>();
  base.motifs = c.at("motifs").get<std::vector<std::string>>();
  base.seed = c.at("seed").get<std::uint64_t>();
  base.seed_set = true;
  return base;
}

json report_to_json(const hgat::BacktestReport& report, const hgat::StockUniverse& universe,
                    std::size_t top_k) {
  json days = json::array();
  for (const hgat::DayTrade& day : report.days) {
    json selected = json::array();
    for (std::size_t idx : day.selected) selected.push_back(universe.tickers[idx]);
    days.push_back({{"date", day.date},
                    {"selected", selected},
                    {"day_return", day.day_return},
                    {"cumulative", day.cumulative}});
  }
  json j;
  j["top_k"] = top_k;
  j["mse"] = report.mse;
  j["mrr"] = report.mrr;
  j["irr_cumulative"] = report.irr_cumulative;
  if (report.sharpe.has_value()) {
    j["sharpe"] = *report.sharpe;
  } else {
    j["sharpe"] = nullptr;
  }
  j["trade_count"] = report.trade_count;
  j["excluded_days"] = report.excluded_days;
  j["days"] = days;
  return j;
}

void write_day_csv(const fs::path& path, const hgat::BacktestReport& report,
                   const hgat::StockUniverse& universe) {
  std::ofstream out(path);
  out << "date,selected,day_return,cumulative\n";
  for (const hgat::DayTrade& day : report.days) {
    out << day.date << ',';
    for (std::size_t r = 0; r < day.selected.size(); ++r) {
      out << (r ? ";" : "") << universe.tickers[day.selected[r]];
    }
    out << ',' << day.day_return << ',' << day.cumulative << '\n';
  }
}

// ---- subcommands ------------------------------------------------------------

int run_generate(const fs::path& out_dir, const hgat::SyntheticSpec& spec) {
  fs::create_directories(out_dir);
  hgat::generate_synthetic(spec, out_dir);
  json config{{"stocks", spec.stocks},
              {"days", spec.days},
              {"seed", spec.seed},
              {"wiki_channels", spec.wiki_channels},
              {"industry_channels", spec.industry_channels},
              {"edge_density", spec.edge_density},
              {"signal_self", spec.signal_self},
              {"signal_spillover", spec.signal_spillover},
              {"quality_weight", spec.quality_weight},
              {"noise", spec.noise}};
  write_manifest(out_dir, "generate", config,
                 {out_dir / "prices.csv", out_dir / "statements.csv", out_dir / "relations.csv"},
                 {"prices.csv", "statements.csv", "relations.csv"});
  std::cout << "generated " << spec.stocks << " stocks x " << spec.days << " days in "
            << out_dir.string() << "\n";
  return kExitOk;
}

int run_motif(const fs::path& relations_path, const std::string& prices_path,
              const std::string& motif_list, const fs::path& out_dir) {
  std::optional<hgat::StockUniverse> universe;
  if (!prices_path.empty()) {
    hgat::RelationsFile probe;  // universe comes from the price file
    std::ifstream in(prices_path);
    if (!in) throw hgat::ValidationError("cannot open '" + prices_path + "'");
    std::string line;
    std::getline(in, line);  // header
    std::set<std::string> tickers;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto first = line.find(',');
      auto second = line.find(',', first + 1);
      if (first == std::string::npos || second == std::string::npos) {
        throw hgat::ValidationError(prices_path + ":" + std::to_string(line_no) +
                                    ": malformed price row");
      }
      tickers.insert(line.substr(first + 1, second - first - 1));
    }
    universe = hgat::StockUniverse::from_tickers({tickers.begin(), tickers.end()});
  }

  hgat::RelationsFile rel =
      hgat::load_relations_file(relations_path, universe ? &*universe : nullptr);
  auto graph = hgat::build_union_graph({&rel.wiki, &rel.industry});

  std::vector<hgat::MotifSpec> selected;
  if (motif_list.empty()) {
    selected = hgat::default_motif_selection(graph);
  } else {
    std::string token;
    std::istringstream is(motif_list);
    while (std::getline(is, token, ',')) selected.push_back(hgat::motif_by_name(token));
  }
  if (selected.empty()) throw hgat::ValidationError("motif: no motifs selected");

  fs::create_directories(out_dir);
  std::vector<std::string> outputs;
  for (const hgat::MotifSpec& spec : selected) {
    hgat::MotifAdjacency adj = hgat::motif_adjacency(graph, spec);
    std::string name = "motif_" + spec.name + ".csv";
    std::ofstream out(out_dir / name);
    out << "ticker";
    for (const std::string& t : rel.universe.tickers) out << ',' << t;
    out << '\n';
    for (std::size_t i = 0; i < rel.universe.size(); ++i) {
      out << rel.universe.tickers[i];
      for (std::size_t j = 0; j < rel.universe.size(); ++j) {
        out << ',' << adj.matrix.at(i, j);
      }
      out << '\n';
    }
    outputs.push_back(name);
  }

  hgat::MotifDensityReport density = hgat::motif_density(graph);
  json dens;
  dens["connected_triads"] = density.connected_triads;
  json d = json::object(), counts = json::object();
  for (const hgat::MotifSpec& spec : hgat::motif_catalog()) {
    d[spec.name] = density.densities[spec.id - 1];
    counts[spec.name] = density.counts[spec.id - 1];
  }
  dens["densities"] = d;
  dens["counts"] = counts;
  json sel = json::array();
  for (const hgat::MotifSpec& spec : selected) sel.push_back(spec.name);
  dens["selected"] = sel;
  write_json_file(out_dir / "density.json", dens);
  outputs.push_back("density.json");

  write_manifest(out_dir, "motif", {{"motifs", sel}}, {relations_path}, outputs);
  std::cout << "wrote " << outputs.size() << " files to " << out_dir.string() << "\n";
  return kExitOk;
}

int run_train(const fs::path& config_path, std::uint64_t seed, bool seed_given,
              const fs::path& out_dir) {
  json config_json = read_json_file(config_path);
  hgat::RunConfig config = hgat::RunConfig::from_json(config_json);
  if (seed_given) {
    config.train.seed = seed;
    config.train.seed_set = true;
  }
  config.train.validate();

  LoadedPipeline p = load_pipeline(config);
  hgat::TrainResult result = hgat::train(config.train, p.dataset, p.relations);

  fs::create_directories(out_dir);
  hgat::TrainConfig final_config = config.train;
  final_config.motifs = p.relations.motif_names;  // resolved selection
  write_json_file(out_dir / "checkpoint.json",
                  hgat::checkpoint_to_json(*result.model, final_config));

  json history;
  history["best_epoch"] = result.history.best_epoch;
  json epochs = json::array();
  for (const hgat::EpochStats& e : result.history.epochs) {
    epochs.push_back({{"train_loss", e.train_loss},
                      {"val_loss", e.val_loss},
                      {"val_mrr", e.val_mrr},
                      {"val_irr", e.val_irr},
                      {"seconds", e.seconds}});
  }
  history["epochs"] = epochs;
  write_json_file(out_dir / "history.json", history);

  write_manifest(out_dir, "train", config.to_json(),
                 {config.prices_path, config.statements_path, config.relations_path},
                 {"checkpoint.json", "history.json"});
  const hgat::EpochStats& best = result.history.epochs[result.history.best_epoch];
  std::cout << "trained " << result.history.epochs.size() << " epochs; best epoch "
            << result.history.best_epoch + 1 << " val_irr " << best.val_irr << " val_mrr "
            << best.val_mrr << "\n";
  return kExitOk;
}

int run_backtest(const fs::path& config_path, const fs::path& checkpoint_path,
                 std::size_t top_k, bool top_k_given, const fs::path& out_dir) {
  json config_json = read_json_file(config_path);
  hgat::RunConfig config = hgat::RunConfig::from_json(config_json);
  json checkpoint = read_json_file(checkpoint_path);
  config.train = config_from_checkpoint(checkpoint, config.train);
  if (top_k_given) config.trading.top_k = top_k;

  LoadedPipeline p = load_pipeline(config);
  hgat::ModelDims dims;
  dims.feature_dim = 10;
  dims.hidden = config.train.hidden;
  dims.relation_dim = config.train.relation_dim;
  dims.heads = config.train.heads;
  dims.channels = p.relations.field.channels();
  hgat::HgatModel model(dims, hgat::Rng(config.train.seed));
  hgat::load_checkpoint_params(checkpoint, model);

  auto days = hgat::evaluate_split(model, p.dataset, p.relations, hgat::Split::test);
  if (days.empty()) throw hgat::ValidationError("backtest: test split has no usable days");
  hgat::BacktestReport report = hgat::simulate(days, config.trading, &p.dataset.universe());

  fs::create_directories(out_dir);
  write_json_file(out_dir / "backtest.json",
                  report_to_json(report, p.dataset.universe(), config.trading.top_k));
  write_day_csv(out_dir / "backtest_days.csv", report, p.dataset.universe());
  write_manifest(out_dir, "backtest", config.to_json(),
                 {config.prices_path, config.statements_path, config.relations_path,
                  checkpoint_path},
                 {"backtest.json", "backtest_days.csv"});
  std::cout << "backtest: days " << report.days.size() << " irr " << report.irr_cumulative
            << " mrr " << report.mrr << " mse " << report.mse << "\n";
  return kExitOk;
}

int run_rank(const fs::path& config_path, const fs::path& checkpoint_path,
             const std::string& date, std::size_t top_k) {
  json config_json = read_json_file(config_path);
  hgat::RunConfig config = hgat::RunConfig::from_json(config_json);
  json checkpoint = read_json_file(checkpoint_path);
  config.train = config_from_checkpoint(checkpoint, config.train);

  LoadedPipeline p = load_pipeline(config);
  hgat::ModelDims dims;
  dims.feature_dim = 10;
  dims.hidden = config.train.hidden;
  dims.relation_dim = config.train.relation_dim;
  dims.heads = config.train.heads;
  dims.channels = p.relations.field.channels();
  hgat::HgatModel model(dims, hgat::Rng(config.train.seed));
  hgat::load_checkpoint_params(checkpoint, model);

  const hgat::FeatureDay* found = nullptr;
  for (hgat::Split split : {hgat::Split::train, hgat::Split::validation, hgat::Split::test}) {
    for (std::size_t i = 0; i < p.dataset.count(split); ++i) {
      const hgat::FeatureDay& day = p.dataset.day(split, i);
      if (day.date == date) found = &day;
    }
  }
  if (found == nullptr) {
    throw hgat::ValidationError("rank: date '" + date + "' is not a usable feature day");
  }

  hgat::Tape tape;
  hgat::ModelVars vars = hgat::bind_model(tape, model);
  hgat::Tape::Var pred = hgat::model_forward(tape, model, vars, found->features,
                                             p.relations.field);
  hgat::Tensor scores({p.dataset.stock_count()});
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = tape.value(pred).at(i, 0);
  hgat::RankedList ranked = hgat::rank_stocks(scores, &p.dataset.universe());

  json out;
  out["date"] = date;
  json top = json::array();
  for (std::size_t r = 0; r < std::min(top_k, ranked.order.size()); ++r) {
    top.push_back({{"rank", r + 1},
                   {"ticker", p.dataset.universe().tickers[ranked.order[r]]},
                   {"score", ranked.scores[r]}});
  }
  out["top"] = top;
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int run_gradcheck(std::uint64_t seed) {
  using hgat::Parameter;
  using hgat::Tape;
  using hgat::Tensor;

  hgat::Rng rng(seed);
  auto random_tensor = [&](std::vector<std::size_t> shape, double lo = -1.0, double hi = 1.0) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
    return t;
  };

  struct Row {
    std::string name;
    double error;
    double threshold;
  };
  std::vector<Row> rows;

  auto check = [&](const std::string& name, double threshold, const hgat::LossBuilder& build,
                   std::vector<Parameter*> inputs) {
    auto report = hgat::grad_check(build, std::move(inputs));
    rows.push_back({name, report.max_rel_error, threshold});
  };

  {
    Parameter a("a", random_tensor({3, 4})), b("b", random_tensor({4, 2}));
    Tensor dir = random_tensor({3, 2});
    check("matmul", 1e-6, [&](Tape& t, const std::vector<Tape::Var>& v) {
      return t.sum(t.mul_const(t.matmul(v[0], v[1]), dir));
    }, {&a, &b});
  }
  {
    Parameter x("x", random_tensor({4, 3}));
    Tensor dir = random_tensor({4, 3});
    check("sigmoid", 1e-6, [&](Tape& t, const std::vector<Tape::Var>& v) {
      return t.sum(t.mul_const(t.sigmoid(v[0]), dir));
    }, {&x});
    check("tanh", 1e-6, [&](Tape& t, const std::vector<Tape::Var>& v) {
      return t.sum(t.mul_const(t.tanh(v[0]), dir));
    }, {&x});
    check("softmax", 1e-6, [&](Tape& t, const std::vector<Tape::Var>& v) {
      return t.sum(t.mul_const(t.softmax(v[0], 1), dir));
    }, {&x});
  }
  {
    Parameter x("x", random_tensor({5, 3})), w("w", random_tensor({2, 3})),
        b("b", random_tensor({2}));
    Tensor dir = random_tensor({5, 2});
    check("linear", 1e-6, [&](Tape& t, const std::vector<Tape::Var>& v) {
      return t.sum(t.mul_const(t.linear(v[0], v[1], v[2]), dir));
    }, {&x, &w, &b});
  }
  {
    Parameter x("x", random_tensor({7}));
    Tensor dir = random_tensor({7});
    std::vector<std::size_t> offsets{0, 3, 3, 7};
    check("segment_softmax", 1e-6, [&](Tape& t, const std::vector<Tape::Var>& v) {
      return t.sum(t.mul_const(t.segment_softmax(v[0], offsets), dir));
    }, {&x});
  }
  {
    Parameter c("coeff", random_tensor({4})), vals("values", random_tensor({3, 2}));
    std::vector<std::size_t> src{0, 2, 1, 2}, dst{1, 0, 2, 2};
    Tensor dir = random_tensor({3, 2});
    check("scatter_rows_weighted", 1e-6, [&](Tape& t, const std::vector<Tape::Var>& v) {
      return t.sum(t.mul_const(t.scatter_rows_weighted(v[0], v[1], src, dst, 3), dir));
    }, {&c, &vals});
  }
  {
    Parameter pred("pred", random_tensor({6}, -0.1, 0.1));
    Tensor target = random_tensor({6}, -0.1, 0.1);
    check("rank_hinge", 1e-6, [&](Tape& t, const std::vector<Tape::Var>& v) {
      return t.rank_hinge(v[0], target);
    }, {&pred});
  }
  {
    hgat::LstmParams lstm(4, 3, hgat::Rng(seed + 1));
    Tensor chi = random_tensor({2, 32, 3}, -0.8, 0.8);
    Tensor dir = random_tensor({2, 4});
    check("lstm_bptt_32", 1e-4, [&](Tape& t, const std::vector<Tape::Var>& v) {
      hgat::LstmVars vars{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
      return t.sum(t.mul_const(hgat::sequence_embed(t, lstm, vars, chi), dir));
    }, lstm.parameters());
  }
  {
    hgat::RelationTensor wiki(hgat::RelationCategory::wiki, {"P1"}, 4);
    hgat::RelationTensor industry(hgat::RelationCategory::industry, {"gics"}, 4);
    industry.set(0, 1, 0);
    industry.set(1, 0, 0);
    industry.set(1, 2, 0);
    industry.set(2, 1, 0);
    wiki.set(0, 3, 0);
    hgat::RelationField field = hgat::build_relation_field(wiki, industry, Tensor(), {});
    hgat::RelationalParams rel(3, field.channels(), 2, 2, hgat::Rng(seed + 2));
    Parameter embed("seq_embed", random_tensor({4, 3}, -0.8, 0.8));
    Tensor dir = random_tensor({4, 3});
    std::vector<Parameter*> inputs = rel.parameters();
    inputs.push_back(&embed);
    check("attention_stack", 1e-4, [&](Tape& t, const std::vector<Tape::Var>& v) {
      hgat::RelationalVars rv;
      rv.compress_w = v[0];
      rv.compress_b = v[1];
      rv.head_w = {v[2], v[4]};
      rv.head_b = {v[3], v[5]};
      return t.sum(t.mul_const(hgat::relational_embed(t, rel, rv, field, v.back()), dir));
    }, inputs);
  }
  {
    hgat::RelationTensor wiki(hgat::RelationCategory::wiki, {"P1"}, 4);
    hgat::RelationTensor industry(hgat::RelationCategory::industry, {"gics"}, 4);
    industry.set(0, 1, 0);
    industry.set(1, 0, 0);
    industry.set(2, 3, 0);
    industry.set(3, 2, 0);
    hgat::RelationField field = hgat::build_relation_field(wiki, industry, Tensor(), {});
    hgat::ModelDims dims{4, 3, 2, 2, field.channels()};
    hgat::HgatModel model(dims, hgat::Rng(seed + 3));
    Tensor chi = random_tensor({4, 3, 4}, -0.5, 0.5);
    Tensor targets = random_tensor({4}, -0.05, 0.05);
    check("model_end_to_end", 1e-4, [&](Tape& t, const std::vector<Tape::Var>& v) {
      hgat::ModelVars vars;
      vars.lstm = hgat::LstmVars{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
      std::size_t at = 8;
      vars.relational.compress_w = v[at++];
      vars.relational.compress_b = v[at++];
      for (std::size_t k = 0; k < model.relational.head_count(); ++k) {
        vars.relational.head_w.push_back(v[at++]);
        vars.relational.head_b.push_back(v[at++]);
      }
      vars.pred_w = v[at++];
      vars.pred_b = v[at++];
      Tape::Var pred = hgat::model_forward(t, model, vars, chi, field);
      return hgat::combined_loss(t, pred, targets, 1.0);
    }, model.parameters());
  }

  bool all_pass = true;
  std::printf("%-24s %14s %12s %8s\n", "operation", "max_rel_err", "threshold", "status");
  for (const Row& row : rows) {
    bool pass = row.error < row.threshold;
    all_pass = all_pass && pass;
    std::printf("%-24s %14.3e %12.0e %8s\n", row.name.c_str(), row.error, row.threshold,
                pass ? "PASS" : "FAIL");
  }
  return all_pass ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order graph attention stock selection pipeline"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "write a seeded synthetic market");
  std::string gen_out = "dataset";
  hgat::SyntheticSpec spec;
  std::uint64_t gen_seed = 0;
  generate->add_option("--out", gen_out, "output directory");
  generate->add_option("--stocks", spec.stocks, "number of stocks");
  generate->add_option("--days", spec.days, "number of trading days");
  generate->add_option("--seed", gen_seed, "generator seed")->required();
  generate->add_option("--wiki-channels", spec.wiki_channels, "wiki relation channels");
  generate->add_option("--industry-channels", spec.industry_channels,
                       "industry relation channels");
  generate->add_option("--edge-density", spec.edge_density, "random edge density");
  generate->add_option("--signal-self", spec.signal_self, "own-momentum coefficient");
  generate->add_option("--signal-spillover", spec.signal_spillover,
                       "motif-neighbor momentum coefficient");
  generate->add_option("--quality-weight", spec.quality_weight, "persistent quality coefficient");
  generate->add_option("--noise", spec.noise, "return noise scale");

  // motif
  auto* motif = app.add_subcommand("motif", "emit motif adjacency matrices and densities");
  std::string motif_relations, motif_prices, motif_list, motif_out = "motifs";
  motif->add_option("--relations", motif_relations, "relations CSV")->required();
  motif->add_option("--prices", motif_prices, "optional prices CSV fixing the universe");
  motif->add_option("--motifs", motif_list, "comma-separated motif names (default: present)");
  motif->add_option("--out", motif_out, "output directory");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model from a run config");
  std::string train_config, train_out = "run";
  std::uint64_t train_seed = 0;
  bool train_seed_given = false;
  train_cmd->add_option("--config", train_config, "run config JSON")->required();
  auto* seed_opt = train_cmd->add_option("--seed", train_seed, "seed override");
  train_cmd->add_option("--out", train_out, "output directory");

  // backtest
  auto* backtest = app.add_subcommand("backtest", "run the trading simulation on the test split");
  std::string bt_config, bt_checkpoint, bt_out = "backtest";
  std::size_t bt_top_k = 1;
  bool bt_top_k_given = false;
  backtest->add_option("--config", bt_config, "run config JSON")->required();
  backtest->add_option("--checkpoint", bt_checkpoint, "checkpoint JSON")->required();
  auto* topk_opt = backtest->add_option("--top-k", bt_top_k, "portfolio size");
  backtest->add_option("--out", bt_out, "output directory");

  // rank
  auto* rank = app.add_subcommand("rank", "print the top-k ranking for one day");
  std::string rank_config, rank_checkpoint, rank_date;
  std::size_t rank_top_k = 10;
  rank->add_option("--config", rank_config, "run config JSON")->required();
  rank->add_option("--checkpoint", rank_checkpoint, "checkpoint JSON")->required();
  rank->add_option("--date", rank_date, "trading day (YYYY-MM-DD)")->required();
  rank->add_option("--top-k", rank_top_k, "list length");

  // gradcheck
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference battery over all layers");
  std::uint64_t gc_seed = 12345;
  gradcheck->add_option("--seed", gc_seed, "battery seed");

  try {
    app.parse(argc, argv);
    train_seed_given = seed_opt->count() > 0;
    bt_top_k_given = topk_opt->count() > 0;

    if (*generate) {
      spec.seed = gen_seed;
      spec.seed_set = true;
      return run_generate(gen_out, spec);
    }
    if (*motif) return run_motif(motif_relations, motif_prices, motif_list, motif_out);
    if (*train_cmd) return run_train(train_config, train_seed, train_seed_given, train_out);
    if (*backtest) {
      return run_backtest(bt_config, bt_checkpoint, bt_top_k, bt_top_k_given, bt_out);
    }
    if (*rank) return run_rank(rank_config, rank_checkpoint, rank_date, rank_top_k);
    if (*gradcheck) return run_gradcheck(gc_seed);
    return kExitValidation;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << nlohmann::json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
    return kExitValidation;
  } catch (const hgat::NumericError& e) {
    std::cerr << nlohmann::json{{"error", "numeric"}, {"message", e.what()}}.dump() << "\n";
    return kExitNumeric;
  } catch (const hgat::ValidationError& e) {
    std::cerr << nlohmann::json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return kExitNumeric;
  }
}
