#include "hgat/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "hgat/dates.hpp"
#include "hgat/motif.hpp"
#include "hgat/rng.hpp"

namespace hgat {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericError("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(where + ": '" + s + "' is not a number");
  }
  if (!std::isfinite(v)) throw ValidationError(where + ": non-finite number");
  return v;
}

struct CsvFile {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  fields.push_back(field);
  return fields;
}

CsvFile read_csv(const std::filesystem::path& path, const std::vector<std::string>& expected_header) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  CsvFile file;
  file.path = path.string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = split_csv_line(line);
    if (line_no == 1) {
      if (fields != expected_header) {
        std::ostringstream os;
        os << file.path << ":1: header mismatch, expected ";
        for (std::size_t i = 0; i < expected_header.size(); ++i) {
          os << (i ? "," : "") << expected_header[i];
        }
        throw ValidationError(os.str());
      }
      file.header = fields;
      continue;
    }
    if (fields.size() != expected_header.size()) {
      throw ValidationError(file.path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(expected_header.size()) + " columns, got " +
                            std::to_string(fields.size()));
    }
    file.rows.push_back(std::move(fields));
    file.line_numbers.push_back(line_no);
  }
  if (file.header.empty()) throw ValidationError(file.path + ": missing header row");
  return file;
}

std::string at_line(const CsvFile& f, std::size_t row) {
  return f.path + ":" + std::to_string(f.line_numbers[row]);
}

const std::vector<std::string> kPricesHeader{"date", "ticker", "close"};
const std::vector<std::string> kStatementsHeader{
    "ticker", "quarter_end", "gp", "revenue", "ni", "psd", "aos", "assets",
    "liabilities", "equity"};
const std::vector<std::string> kRelationsHeader{"source_ticker", "target_ticker",
                                                "relation_id", "category", "directed"};

PricePanel load_prices(const std::filesystem::path& path) {
  CsvFile file = read_csv(path, kPricesHeader);
  if (file.rows.empty()) throw ValidationError(file.path + ": no price rows");

  std::set<std::string> ticker_set, date_set;
  for (const auto& row : file.rows) {
    date_set.insert(row[0]);
    ticker_set.insert(row[1]);
  }
  PricePanel panel;
  panel.universe = StockUniverse::from_tickers({ticker_set.begin(), ticker_set.end()});
  panel.calendar = Calendar::from_dates({date_set.begin(), date_set.end()});
  panel.close = Panel(panel.universe.size(), panel.calendar.size());

  std::vector<int> last_serial(panel.universe.size(), INT32_MIN);
  for (std::size_t r = 0; r < file.rows.size(); ++r) {
    const auto& row = file.rows[r];
    int serial = days_from_civil(parse_date(row[0]));
    std::size_t i = panel.universe.require(row[1]);
    if (serial <= last_serial[i]) {
      throw ValidationError(at_line(file, r) + ": dates for ticker '" + row[1] +
                            "' must be strictly increasing");
    }
    last_serial[i] = serial;
    double close = parse_double(row[2], at_line(file, r) + " column close");
    if (!(close > 0.0)) {
      throw ValidationError(at_line(file, r) + ": close price must be positive");
    }
    panel.close.set(i, panel.calendar.require(row[0]), close);
  }
  return panel;
}

FundamentalPanel load_statements(const std::filesystem::path& path, const StockUniverse& universe) {
  CsvFile file = read_csv(path, kStatementsHeader);
  FundamentalPanel panel;
  panel.universe = universe;
  panel.rows.resize(universe.size());
  std::vector<int> last_serial(universe.size(), INT32_MIN);
  for (std::size_t r = 0; r < file.rows.size(); ++r) {
    const auto& row = file.rows[r];
    if (!universe.contains(row[0])) {
      throw ValidationError(at_line(file, r) + ": unknown ticker '" + row[0] + "'");
    }
    std::size_t i = universe.require(row[0]);
    StatementRow s;
    s.quarter_end = row[1];
    s.serial = days_from_civil(parse_date(row[1]));
    if (s.serial <= last_serial[i]) {
      throw ValidationError(at_line(file, r) + ": quarter_end dates for '" + row[0] +
                            "' must be strictly increasing");
    }
    last_serial[i] = s.serial;
    const char* names[] = {"gp", "revenue", "ni", "psd", "aos", "assets", "liabilities", "equity"};
    double* slots[] = {&s.gp, &s.revenue, &s.ni, &s.psd, &s.aos, &s.assets, &s.liabilities,
                       &s.equity};
    for (std::size_t c = 0; c < 8; ++c) {
      *slots[c] = parse_double(row[2 + c], at_line(file, r) + " column " + names[c]);
    }
    if (!(s.aos > 0.0)) {
      throw ValidationError(at_line(file, r) + ": aos must be positive");
    }
    panel.rows[i].push_back(std::move(s));
  }
  return panel;
}

void load_relations(const std::filesystem::path& path, const StockUniverse& universe,
                    RelationTensor& wiki, RelationTensor& industry) {
  CsvFile file = read_csv(path, kRelationsHeader);

  std::set<std::string> wiki_ids, industry_ids;
  for (std::size_t r = 0; r < file.rows.size(); ++r) {
    const auto& row = file.rows[r];
    RelationCategory cat;
    try {
      cat = relation_category_from_string(row[3]);
    } catch (const ValidationError& e) {
      throw ValidationError(at_line(file, r) + ": " + e.what());
    }
    (cat == RelationCategory::wiki ? wiki_ids : industry_ids).insert(row[2]);
  }
  wiki = RelationTensor(RelationCategory::wiki, {wiki_ids.begin(), wiki_ids.end()},
                        universe.size());
  industry = RelationTensor(RelationCategory::industry,
                            {industry_ids.begin(), industry_ids.end()}, universe.size());

  auto channel_of = [](const RelationTensor& t, const std::string& id) {
    const auto& names = t.channel_names();
    return static_cast<std::size_t>(
        std::lower_bound(names.begin(), names.end(), id) - names.begin());
  };

  for (std::size_t r = 0; r < file.rows.size(); ++r) {
    const auto& row = file.rows[r];
    if (!universe.contains(row[0]) || !universe.contains(row[1])) {
      throw ValidationError(at_line(file, r) + ": unknown ticker in relation row");
    }
    std::size_t i = universe.require(row[0]);
    std::size_t j = universe.require(row[1]);
    if (i == j) {
      throw ValidationError(at_line(file, r) + ": self-relation '" + row[0] + "' rejected");
    }
    if (row[4] != "0" && row[4] != "1") {
      throw ValidationError(at_line(file, r) + ": directed must be 0 or 1");
    }
    RelationCategory cat = relation_category_from_string(row[3]);
    RelationTensor& tensor = cat == RelationCategory::wiki ? wiki : industry;
    std::size_t c = channel_of(tensor, row[2]);
    tensor.set(i, j, c);
    if (row[4] == "0") tensor.set(j, i, c);
  }
}

void write_relations(const RelationTensor& tensor, std::ofstream& out,
                     const StockUniverse& universe) {
  const std::string cat = to_string(tensor.category());
  for (std::size_t c = 0; c < tensor.channels(); ++c) {
    for (std::size_t i = 0; i < tensor.n(); ++i) {
      for (std::size_t j = i + 1; j < tensor.n(); ++j) {
        bool fwd = tensor.get(i, j, c), rev = tensor.get(j, i, c);
        if (fwd && rev) {
          out << universe.tickers[i] << ',' << universe.tickers[j] << ','
              << tensor.channel_names()[c] << ',' << cat << ",0\n";
        } else if (fwd) {
          out << universe.tickers[i] << ',' << universe.tickers[j] << ','
              << tensor.channel_names()[c] << ',' << cat << ",1\n";
        } else if (rev) {
          out << universe.tickers[j] << ',' << universe.tickers[i] << ','
              << tensor.channel_names()[c] << ',' << cat << ",1\n";
        }
      }
    }
  }
}

}  // namespace

RelationsFile load_relations_file(const std::filesystem::path& path,
                                  const StockUniverse* universe) {
  RelationsFile out;
  if (universe != nullptr) {
    out.universe = *universe;
  } else {
    CsvFile file = read_csv(path, kRelationsHeader);
    std::set<std::string> tickers;
    for (const auto& row : file.rows) {
      tickers.insert(row[0]);
      tickers.insert(row[1]);
    }
    if (tickers.empty()) throw ValidationError(path.string() + ": no relation rows");
    out.universe = StockUniverse::from_tickers({tickers.begin(), tickers.end()});
  }
  load_relations(path, out.universe, out.wiki, out.industry);
  return out;
}

std::uint64_t file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "' for digest");
  std::ostringstream os;
  os << in.rdbuf();
  std::string bytes = os.str();
  return fnv1a64(bytes.data(), bytes.size());
}

std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

DatasetBundle load_bundle(const std::filesystem::path& prices,
                          const std::filesystem::path& statements,
                          const std::filesystem::path& relations) {
  DatasetBundle bundle;
  bundle.prices = load_prices(prices);
  bundle.statements = load_statements(statements, bundle.prices.universe);
  load_relations(relations, bundle.prices.universe, bundle.wiki, bundle.industry);
  bundle.source_digests = {{prices.string(), file_digest(prices)},
                           {statements.string(), file_digest(statements)},
                           {relations.string(), file_digest(relations)}};
  return bundle;
}

void write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "prices.csv");
    out << "date,ticker,close\n";
    for (std::size_t t = 0; t < bundle.prices.calendar.size(); ++t) {
      for (std::size_t i = 0; i < bundle.prices.universe.size(); ++i) {
        if (!bundle.prices.close.present(i, t)) continue;
        out << bundle.prices.calendar.dates[t] << ',' << bundle.prices.universe.tickers[i] << ','
            << format_double(bundle.prices.close.value(i, t)) << '\n';
      }
    }
  }
  {
    std::ofstream out(dir / "statements.csv");
    out << "ticker,quarter_end,gp,revenue,ni,psd,aos,assets,liabilities,equity\n";
    for (std::size_t i = 0; i < bundle.statements.universe.size(); ++i) {
      for (const StatementRow& s : bundle.statements.rows[i]) {
        out << bundle.statements.universe.tickers[i] << ',' << s.quarter_end << ','
            << format_double(s.gp) << ',' << format_double(s.revenue) << ','
            << format_double(s.ni) << ',' << format_double(s.psd) << ','
            << format_double(s.aos) << ',' << format_double(s.assets) << ','
            << format_double(s.liabilities) << ',' << format_double(s.equity) << '\n';
      }
    }
  }
  {
    std::ofstream out(dir / "relations.csv");
    out << "source_ticker,target_ticker,relation_id,category,directed\n";
    write_relations(bundle.wiki, out, bundle.prices.universe);
    write_relations(bundle.industry, out, bundle.prices.universe);
  }
}

void SyntheticSpec::validate() const {
  if (!seed_set) throw ValidationError("synthetic spec: seed is mandatory");
  if (stocks < 3) throw ValidationError("synthetic spec: need at least 3 stocks");
  if (days < 40) throw ValidationError("synthetic spec: need at least 40 days");
  if (wiki_channels == 0 || industry_channels < 2) {
    throw ValidationError("synthetic spec: need wiki channels and two industry channels");
  }
  if (edge_density < 0.0 || edge_density > 0.5) {
    throw ValidationError("synthetic spec: edge density out of range [0, 0.5]");
  }
  if (noise < 0.0 || market_noise < 0.0) {
    throw ValidationError("synthetic spec: noise scales must be nonnegative");
  }
}

DatasetBundle generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& out_dir) {
  spec.validate();
  Rng root(spec.seed);
  const std::size_t n = spec.stocks;

  DatasetBundle bundle;
  std::vector<std::string> tickers;
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "S%03zu", i);
    tickers.emplace_back(buf);
  }
  bundle.prices.universe = StockUniverse::from_tickers(tickers);

  // Trading calendar: weekdays from 2015-01-02.
  {
    std::vector<std::string> dates;
    int serial = days_from_civil(parse_date("2015-01-02"));
    while (dates.size() < spec.days) {
      if (!is_weekend(serial)) dates.push_back(format_date(civil_from_days(serial)));
      ++serial;
    }
    bundle.prices.calendar = Calendar::from_dates(std::move(dates));
  }

  // Relations. Planted structures use disjoint triples: triangle at 6k,
  // open triad at 6k+3.
  std::vector<std::string> wiki_names, industry_names;
  for (std::size_t c = 0; c < spec.wiki_channels; ++c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "W%02zu", c);
    wiki_names.emplace_back(buf);
  }
  for (std::size_t c = 0; c < spec.industry_channels; ++c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "I%02zu", c);
    industry_names.emplace_back(buf);
  }
  bundle.wiki = RelationTensor(RelationCategory::wiki, wiki_names, n);
  bundle.industry = RelationTensor(RelationCategory::industry, industry_names, n);

  std::vector<int> triple_of(n, -1);
  std::size_t groups = std::max<std::size_t>(1, n / 6);
  std::size_t planted_triangles = 0, planted_paths = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    std::size_t tri = 6 * g;
    if (tri + 2 < n) {
      bundle.industry.set(tri, tri + 1, 0);
      bundle.industry.set(tri + 1, tri, 0);
      bundle.industry.set(tri, tri + 2, 0);
      bundle.industry.set(tri + 2, tri, 0);
      bundle.industry.set(tri + 1, tri + 2, 0);
      bundle.industry.set(tri + 2, tri + 1, 0);
      triple_of[tri] = triple_of[tri + 1] = triple_of[tri + 2] = static_cast<int>(2 * g);
      ++planted_triangles;
    }
    std::size_t path = 6 * g + 3;
    if (path + 2 < n) {
      bundle.industry.set(path, path + 1, 1);
      bundle.industry.set(path + 1, path, 1);
      bundle.industry.set(path + 1, path + 2, 1);
      bundle.industry.set(path + 2, path + 1, 1);
      triple_of[path] = triple_of[path + 1] = triple_of[path + 2] = static_cast<int>(2 * g + 1);
      ++planted_paths;
    }
  }
  if (planted_triangles == 0 || (n >= 6 && planted_paths == 0)) {
    // Fallback for tiny universes: n in [3, 6) holds a triangle only.
    if (planted_triangles == 0) {
      throw ValidationError("synthetic spec: universe too small to plant structures");
    }
  }

  Rng edge_rng = root.split("edges");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (triple_of[i] >= 0 && triple_of[i] == triple_of[j]) continue;  // protect planted triples
      if (edge_rng.uniform() < spec.edge_density) {
        std::size_t c = edge_rng.below(spec.wiki_channels);
        bundle.wiki.set(i, j, c);
        if (edge_rng.uniform() < 0.5) bundle.wiki.set(j, i, c);
      }
    }
  }
  // Bilateral industry distractor pairs on the triangle channel: membership in
  // channel I00 alone does not reveal which pairs sit inside a bilateral
  // triangle, so the higher-order channel carries real information.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (triple_of[i] >= 0 && triple_of[i] == triple_of[j]) continue;
      if (edge_rng.uniform() < spec.edge_density) {
        bundle.industry.set(i, j, 0);
        bundle.industry.set(j, i, 0);
      }
    }
  }

  // Spillover neighborhoods: pairs co-anchored by the fully bilateral triangle
  // motif in the union graph.
  auto union_graph = build_union_graph({&bundle.wiki, &bundle.industry});
  MotifAdjacency m4 = motif_adjacency(union_graph, motif_by_name("M4"));
  std::vector<std::vector<std::size_t>> spill_neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m4.matrix.at(i, j) > 0.0) spill_neighbors[i].push_back(j);
    }
  }

  // Persistent quality, surfaced through the gross profit margin.
  Rng quality_rng = root.split("quality");
  std::vector<double> quality(n);
  for (std::size_t i = 0; i < n; ++i) quality[i] = quality_rng.uniform(-1.0, 1.0);

  // Prices.
  const std::size_t t_count = bundle.prices.calendar.size();
  std::vector<std::vector<double>> prices(n, std::vector<double>(t_count, 0.0));
  Rng price_rng = root.split("prices");
  Rng market_rng = root.split("market");
  std::vector<Rng> noise_rng;
  for (std::size_t i = 0; i < n; ++i) noise_rng.push_back(root.split("noise", i));
  for (std::size_t i = 0; i < n; ++i) prices[i][0] = price_rng.uniform(50.0, 90.0);

  auto momentum = [&](std::size_t i, std::size_t t) {
    double ma = 0.0;
    for (std::size_t k = t - 4; k <= t; ++k) ma += prices[i][k];
    ma /= 5.0;
    double mom = prices[i][t] / ma - 1.0;
    return std::clamp(mom, -0.1, 0.1);
  };

  for (std::size_t t = 0; t + 1 < t_count; ++t) {
    std::vector<double> mom(n, 0.0);
    if (t >= 4) {
      for (std::size_t i = 0; i < n; ++i) mom[i] = momentum(i, t);
    }
    double market = spec.market_noise * market_rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
      double r;
      if (t < 4) {
        r = 0.003 * noise_rng[i].normal();
      } else {
        double spill = 0.0;
        if (!spill_neighbors[i].empty()) {
          for (std::size_t j : spill_neighbors[i]) spill += mom[j];
          spill /= static_cast<double>(spill_neighbors[i].size());
        }
        r = spec.signal_self * mom[i] + spec.signal_spillover * spill +
            spec.quality_weight * quality[i] + market + spec.noise * noise_rng[i].normal();
      }
      r = std::clamp(r, -0.08, 0.08);
      if (prices[i][t] * (1.0 + r) < 8.0) r = 0.02;  // floor guard; unreachable at defaults
      prices[i][t + 1] = prices[i][t] * (1.0 + r);
    }
  }
  bundle.prices.close = Panel(n, t_count);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < t_count; ++t) bundle.prices.close.set(i, t, prices[i][t]);
  }

  // Quarterly statements covering every quarter that intersects the calendar,
  // plus the quarter ending just before it so factors exist from day one.
  bundle.statements.universe = bundle.prices.universe;
  bundle.statements.rows.resize(n);
  {
    Date first = civil_from_days(bundle.prices.calendar.serials.front());
    Date last = civil_from_days(bundle.prices.calendar.serials.back());
    int q_begin = quarter_index(first) - 1;
    int q_end = quarter_index(last);
    Rng phase_rng = root.split("statements");
    std::vector<double> phase(n);
    for (std::size_t i = 0; i < n; ++i) phase[i] = phase_rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
      int k = 0;
      for (int q = q_begin; q <= q_end; ++q, ++k) {
        int year = q / 4;
        int quarter = q % 4;
        static const char* ends[] = {"-03-31", "-06-30", "-09-30", "-12-31"};
        StatementRow row;
        row.quarter_end = std::to_string(year) + ends[quarter];
        row.serial = days_from_civil(parse_date(row.quarter_end));
        double wiggle = 1.0 + 0.04 * std::sin(0.6 * k + phase[i]);
        row.gp = 100.0 * wiggle;
        double gpm = 0.3 + 0.08 * quality[i];
        row.revenue = row.gp / gpm;
        row.ni = 0.5 * row.gp * (1.0 + 0.02 * std::sin(1.1 * k + phase[i]));
        row.psd = 0.05 * row.ni;
        row.aos = 50.0 + static_cast<double>(i);
        row.assets = 10.0 * row.gp * (1.0 + 0.1 * std::sin(0.3 * k + phase[i]));
        row.liabilities = 0.55 * row.assets;
        row.equity = row.assets - row.liabilities;
        bundle.statements.rows[i].push_back(std::move(row));
      }
    }
  }

  write_bundle(bundle, out_dir);
  return load_bundle(out_dir / "prices.csv", out_dir / "statements.csv",
                     out_dir / "relations.csv");
}

}  // namespace hgat
