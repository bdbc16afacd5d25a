#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hgat/data_io.hpp"

using namespace hgat;
namespace fs = std::filesystem;

namespace {

fs::path cli_dir(const std::string& name) {
  fs::path dir = fs::path(HGAT_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, const fs::path& cwd) {
  std::string cmd = "cd " + cwd.string() + " && " + HGAT_CLI_PATH + " " + args +
                    " > cli_stdout.txt 2> cli_stderr.txt";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_run_config(const fs::path& path, std::size_t epochs, std::uint64_t seed) {
  std::ofstream out(path);
  out << R"({
  "prices": "data/prices.csv",
  "statements": "data/statements.csv",
  "relations": "data/relations.csv",
  "train_fraction": 0.7,
  "val_fraction": 0.15,
  "model": {"window": 2, "hidden": 16, "alpha": 1.0, "heads": 2, "epochs": )"
      << epochs << R"(, "seed": )" << seed << R"(},
  "trading": {"top_k": 1}
})";
}

}  // namespace

TEST_CASE("cli: motif subcommand emits matrix CSVs and the density report") {
  fs::path dir = cli_dir("cli_motif");
  REQUIRE(run_cli("generate --out data --stocks 10 --days 60 --seed 5", dir) == 0);
  CHECK(run_cli("motif --relations data/relations.csv --motifs M4,M13 --out motifs", dir) == 0);
  CHECK(fs::exists(dir / "motifs/motif_M4.csv"));
  CHECK(fs::exists(dir / "motifs/motif_M13.csv"));
  CHECK(fs::exists(dir / "motifs/density.json"));
  CHECK(fs::exists(dir / "motifs/manifest.json"));
}

TEST_CASE("cli: identical seeds give identical checkpoints; backtest IRR is positive") {
  fs::path dir = cli_dir("cli_train");
  REQUIRE(run_cli("generate --out data --stocks 12 --days 120 --seed 42", dir) == 0);
  write_run_config(dir / "run.json", 4, 7);

  REQUIRE(run_cli("train --config run.json --seed 7 --out run_a", dir) == 0);
  REQUIRE(run_cli("train --config run.json --seed 7 --out run_b", dir) == 0);
  CHECK(file_digest(dir / "run_a/checkpoint.json") == file_digest(dir / "run_b/checkpoint.json"));

  REQUIRE(run_cli("backtest --config run.json --checkpoint run_a/checkpoint.json "
                  "--top-k 1 --out bt", dir) == 0);
  std::ifstream in(dir / "bt/backtest.json");
  std::string report((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto irr_at = report.find("\"irr_cumulative\": ");
  REQUIRE(irr_at != std::string::npos);
  double irr = std::stod(report.substr(irr_at + 18));
  CHECK(irr > 0.0);
  CHECK(fs::exists(dir / "bt/backtest_days.csv"));
}

TEST_CASE("cli: exit codes distinguish validation and numeric failures") {
  fs::path dir = cli_dir("cli_errors");
  // Missing input file -> validation error (2).
  CHECK(run_cli("motif --relations nope.csv --out m", dir) == 2);

  // A relation graph without a single connected triad has undefined motif
  // densities -> numeric failure (3).
  std::ofstream rel(dir / "lonely.csv");
  rel << "source_ticker,target_ticker,relation_id,category,directed\n"
      << "AAA,BBB,gics,industry,0\n";
  rel.close();
  CHECK(run_cli("motif --relations lonely.csv --out m2", dir) == 3);

  // Unknown flags and missing required options are validation errors too.
  CHECK(run_cli("train --config missing.json --out r", dir) == 2);
  CHECK(run_cli("nonsense", dir) == 2);
}

TEST_CASE("cli: manifests record config, seed and input digests") {
  fs::path dir = cli_dir("cli_manifest");
  REQUIRE(run_cli("generate --out data --stocks 10 --days 60 --seed 11", dir) == 0);
  std::ifstream in(dir / "data/manifest.json");
  std::string manifest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(manifest.find("\"command\": \"generate\"") != std::string::npos);
  CHECK(manifest.find("\"seed\": 11") != std::string::npos);
  CHECK(manifest.find("prices.csv") != std::string::npos);
}
