#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hgat/features.hpp"
#include "hgat/graph.hpp"

namespace hgat {

// Parsed input files: raw close prices, quarterly statements and the two
// typed relation tensors, all aligned to one universe and calendar.
struct DatasetBundle {
  PricePanel prices;  // unnormalized close
  FundamentalPanel statements;
  RelationTensor wiki{RelationCategory::wiki, {}, 0};
  RelationTensor industry{RelationCategory::industry, {}, 0};
  std::vector<std::pair<std::string, std::uint64_t>> source_digests;
};

// CSV schemas (UTF-8, header row required):
//   prices.csv:     date,ticker,close
//   statements.csv: ticker,quarter_end,gp,revenue,ni,psd,aos,assets,liabilities,equity
//   relations.csv:  source_ticker,target_ticker,relation_id,category,directed
// directed=0 rows expand to both directions at load; self-relations and
// unknown tickers are rejected with the offending line number.
DatasetBundle load_bundle(const std::filesystem::path& prices,
                          const std::filesystem::path& statements,
                          const std::filesystem::path& relations);

// Writes prices.csv / statements.csv / relations.csv into dir. Doubles are
// emitted shortest-round-trip so a rewritten bundle reloads bit-identically.
void write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir);

std::uint64_t file_digest(const std::filesystem::path& path);
std::string digest_hex(std::uint64_t digest);

// Seeded synthetic market. Prices follow a mean-reverting walk whose next-day
// returns are planted as
//   r = signal_self * momentum + signal_spillover * mean(momentum of motif
//       co-anchors) + quality_weight * quality
//       + market_noise * common shock + noise * idiosyncratic shock
// where momentum = close / MA5 - 1 is recoverable from the emitted features
// and quality is a persistent per-stock level surfaced through the gross
// profit margin. The common shock moves every stock identically, so it leaves
// cross-sectional ranks intact. The relation graph always contains at least
// one fully bilateral triangle and one bilateral open triad.
struct SyntheticSpec {
  std::size_t stocks = 30;
  std::size_t days = 400;
  std::uint64_t seed = 0;
  bool seed_set = false;

  std::size_t wiki_channels = 2;
  std::size_t industry_channels = 2;
  double edge_density = 0.04;      // random directed wiki edges
  double signal_self = -0.5;
  double signal_spillover = 0.5;
  double quality_weight = 0.005;
  double market_noise = 0.004;     // common daily shock
  double noise = 0.001;            // idiosyncratic daily shock

  void validate() const;
};

// Generates the market, writes the three CSV files into out_dir and reloads
// them, so the returned bundle is exactly what a consumer will parse.
DatasetBundle generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& out_dir);

// Relations file on its own; the universe defaults to the tickers appearing
// in the file (sorted) when no explicit universe is supplied.
struct RelationsFile {
  StockUniverse universe;
  RelationTensor wiki{RelationCategory::wiki, {}, 0};
  RelationTensor industry{RelationCategory::industry, {}, 0};
};

RelationsFile load_relations_file(const std::filesystem::path& path,
                                  const StockUniverse* universe = nullptr);

}  // namespace hgat
