#include <cmath>

#include "doctest.h"
#include "hgat/motif.hpp"
#include "hgat/rng.hpp"

using namespace hgat;

namespace {

DirectedWeightedGraph bilateral_triangle(double w = 1.0) {
  DirectedWeightedGraph g(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) g.add_edge(i, j, w);
    }
  }
  return g;
}

DirectedWeightedGraph bilateral_path(double w = 1.0) {
  DirectedWeightedGraph g(3);
  g.add_edge(0, 1, w);
  g.add_edge(1, 0, w);
  g.add_edge(1, 2, w);
  g.add_edge(2, 1, w);
  return g;
}

DirectedWeightedGraph random_graph(std::size_t n, double density, Rng& rng,
                                   bool unit_weights = false) {
  DirectedWeightedGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && rng.uniform() < density) {
        g.add_edge(i, j, unit_weights ? 1.0 : rng.uniform(0.5, 4.0));
      }
    }
  }
  return g;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  double mx = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mx = std::max(mx, std::fabs(a[i] - b[i]));
  return mx;
}

}  // namespace

TEST_CASE("catalog has 13 motifs with the pinned anchors") {
  const auto& catalog = motif_catalog();
  CHECK(catalog.size() == 13);

  const MotifSpec& m4 = motif_by_name("M4");
  CHECK(m4.pair_class(0, 1) == PairClass::dual);
  CHECK(m4.pair_class(0, 2) == PairClass::dual);
  CHECK(m4.pair_class(1, 2) == PairClass::dual);

  const MotifSpec& m13 = motif_by_name("M13");
  CHECK(m13.pair_class(0, 1) == PairClass::dual);
  CHECK(m13.pair_class(1, 2) == PairClass::dual);
  CHECK(m13.pair_class(0, 2) == PairClass::empty);

  // Closed triads first, open triads last; open triads keep the empty pair on
  // the anchors.
  for (const MotifSpec& s : catalog) {
    int connected = 0;
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        if (s.pair_class(a, b) != PairClass::empty) ++connected;
      }
    }
    if (s.id <= 7) {
      CHECK(connected == 3);
    } else {
      CHECK(connected == 2);
      CHECK(s.pair_class(0, 2) == PairClass::empty);
    }
  }
}

TEST_CASE("anchored automorphism representatives match exhaustive permutation check") {
  // Independent route: for each motif count the distinct relabelings induced
  // by the two anchor-preserving permutations.
  for (const MotifSpec& s : motif_catalog()) {
    auto reps = anchored_automorphisms(s).representatives;

    auto apply = [&](const std::array<int, 3>& sigma, int a, int b) {
      return s.edges[sigma[a]][sigma[b]];
    };
    const std::array<int, 3> id{0, 1, 2}, swap{2, 1, 0};
    bool same = true;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (apply(id, a, b) != apply(swap, a, b)) same = false;
      }
    }
    CHECK(reps.size() == (same ? 1u : 2u));
    CHECK(reps.front() == id);
  }

  CHECK(anchored_automorphisms(motif_by_name("M4")).representatives.size() == 1);
  CHECK(anchored_automorphisms(motif_by_name("M13")).representatives.size() == 1);
  // Fully asymmetric closed triad (one bilateral, one unilateral, one empty is
  // M2's relative; M2 itself is asymmetric under the anchor swap).
  CHECK(anchored_automorphisms(motif_by_name("M2")).representatives.size() == 2);
}

TEST_CASE("M4 on the bilateral triangle and M13 on the bilateral path") {
  auto tri = bilateral_triangle();
  auto a4 = motif_adjacency(tri, motif_by_name("M4"));
  CHECK(a4.matrix.at(0, 2) == 1.0);       // J = 1, W = 6, one representative, |edges| = 6
  CHECK(a4.matrix.at(2, 0) == 1.0);
  CHECK(a4.matrix.at(0, 0) == 0.0);

  auto path = bilateral_path();
  auto a13 = motif_adjacency(path, motif_by_name("M13"));
  CHECK(a13.matrix.at(0, 2) == 1.0);      // W = 4, |edges| = 4
  CHECK(a13.matrix.at(0, 1) == 0.0);

  // Oracle agrees exactly on both fixtures.
  CHECK(max_abs_diff(a4.matrix, motif_adjacency_oracle(tri, motif_by_name("M4")).matrix) == 0.0);
  CHECK(max_abs_diff(a13.matrix, motif_adjacency_oracle(path, motif_by_name("M13")).matrix) == 0.0);
}

TEST_CASE("graph without the motif yields the zero matrix") {
  DirectedWeightedGraph g(4);
  g.add_edge(0, 1, 2.0);  // single edge: no 3-node structure anywhere
  for (const MotifSpec& s : motif_catalog()) {
    auto a = motif_adjacency(g, s);
    for (std::size_t i = 0; i < a.matrix.size(); ++i) CHECK(a.matrix[i] == 0.0);
    auto o = motif_adjacency_oracle(g, s);
    for (std::size_t i = 0; i < o.matrix.size(); ++i) CHECK(o.matrix[i] == 0.0);
  }
}

TEST_CASE("empty edge set is a normalization error; oracle guards its scale") {
  DirectedWeightedGraph g(5);
  CHECK_THROWS_AS(motif_adjacency(g, motif_by_name("M4")), NumericError);
  CHECK_THROWS_AS(motif_adjacency_oracle(g, motif_by_name("M4")), NumericError);
  DirectedWeightedGraph big(65);
  big.add_edge(0, 1, 1.0);
  CHECK_THROWS_AS(motif_adjacency_oracle(big, motif_by_name("M4")), ValidationError);
}

TEST_CASE("fast path equals oracle on seeded random graphs") {
  Rng rng(1234);
  for (int iter = 0; iter < 25; ++iter) {
    std::size_t n = 3 + rng.below(28);
    auto g = random_graph(n, 0.05 + 0.25 * rng.uniform(), rng);
    if (g.edge_count() == 0) continue;
    for (const MotifSpec& s : motif_catalog()) {
      auto fast = motif_adjacency(g, s);
      auto slow = motif_adjacency_oracle(g, s);
      CHECK(max_abs_diff(fast.matrix, slow.matrix) <= 1e-12);
    }
  }
}

TEST_CASE("linearity: doubling all weights doubles the adjacency exactly") {
  Rng rng(55);
  auto g1 = random_graph(10, 0.25, rng, true);
  DirectedWeightedGraph g2(10);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 10; ++j) {
      if (g1.has_edge(i, j)) g2.add_edge(i, j, 2.0);
    }
  }
  if (g1.edge_count() == 0) return;
  for (const MotifSpec& s : motif_catalog()) {
    auto a1 = motif_adjacency_oracle(g1, s);
    auto a2 = motif_adjacency_oracle(g2, s);
    for (std::size_t i = 0; i < a1.matrix.size(); ++i) {
      CHECK(a2.matrix[i] == 2.0 * a1.matrix[i]);
    }
  }
}

TEST_CASE("anchor-swap motifs produce symmetric matrices; all motifs nonnegative, zero diagonal") {
  Rng rng(90);
  for (int iter = 0; iter < 6; ++iter) {
    auto g = random_graph(12, 0.3, rng);
    if (g.edge_count() == 0) continue;
    for (const MotifSpec& s : motif_catalog()) {
      auto a = motif_adjacency(g, s);
      for (std::size_t i = 0; i < 12; ++i) {
        CHECK(a.matrix.at(i, i) == 0.0);
        for (std::size_t j = 0; j < 12; ++j) {
          CHECK(a.matrix.at(i, j) >= 0.0);
          if (anchor_swap_is_automorphism(s)) {
            CHECK(a.matrix.at(i, j) == doctest::Approx(a.matrix.at(j, i)).epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("motif channels stack per-motif matrices; disjoint graphs stay block-diagonal") {
  auto path = bilateral_path();
  auto one = motif_channels(path, {motif_by_name("M13")});
  CHECK(one.shape() == std::vector<std::size_t>{3, 3, 1});
  CHECK(one.at(0, 2, 0) == motif_adjacency(path, motif_by_name("M13")).matrix.at(0, 2));

  // Two disjoint components: triangle on {0,1,2}, path on {3,4,5}.
  DirectedWeightedGraph g(6);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) g.add_edge(i, j, 1.0);
    }
  }
  g.add_edge(3, 4, 1.0);
  g.add_edge(4, 3, 1.0);
  g.add_edge(4, 5, 1.0);
  g.add_edge(5, 4, 1.0);
  auto channels = motif_channels(g, {motif_by_name("M4"), motif_by_name("M13")});
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      bool cross = (i < 3) != (j < 3);
      if (cross) {
        CHECK(channels.at(i, j, 0) == 0.0);
        CHECK(channels.at(i, j, 1) == 0.0);
      }
    }
  }
  // Component results equal the isolated fixtures (oracle route).
  auto tri_alone = motif_adjacency_oracle(bilateral_triangle(), motif_by_name("M4"));
  // Same numerator but |edges| differs (10 vs 6), so compare un-normalized.
  CHECK(channels.at(0, 2, 0) * 10.0 == doctest::Approx(tri_alone.matrix.at(0, 2) * 6.0).epsilon(1e-12));
}

TEST_CASE("density fixtures: pure triangle and pure path") {
  auto tri_report = motif_density(bilateral_triangle());
  CHECK(tri_report.densities[3] == 1.0);  // M4
  for (std::size_t m = 0; m < 13; ++m) {
    if (m != 3) CHECK(tri_report.densities[m] == 0.0);
  }

  auto path_report = motif_density(bilateral_path());
  CHECK(path_report.densities[12] == 1.0);  // M13
  CHECK(path_report.connected_triads == 1);
}

TEST_CASE("density matches per-triple classification oracle and sums to 1") {
  Rng rng(404);
  auto g = random_graph(12, 0.3, rng);
  auto report = motif_density(g);

  // Oracle: classify each unordered triple by testing every motif under every
  // vertex permutation.
  std::vector<std::uint64_t> counts(13, 0);
  std::uint64_t connected = 0;
  const std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (std::size_t a = 0; a < 12; ++a) {
    for (std::size_t b = a + 1; b < 12; ++b) {
      for (std::size_t c = b + 1; c < 12; ++c) {
        const std::size_t v[3] = {a, b, c};
        int matched = 0;
        for (const MotifSpec& s : motif_catalog()) {
          bool any = false;
          for (const auto& p : perms) {
            bool ok = true;
            for (int x = 0; x < 3 && ok; ++x) {
              for (int y = 0; y < 3 && ok; ++y) {
                if (x == y) continue;
                if (s.edges[p[x]][p[y]] != g.has_edge(v[x], v[y])) ok = false;
              }
            }
            if (ok) { any = true; break; }
          }
          if (any) {
            ++counts[s.id - 1];
            ++matched;
          }
        }
        CHECK(matched <= 1);
        if (matched == 1) ++connected;
      }
    }
  }
  CHECK(report.connected_triads == connected);
  for (std::size_t m = 0; m < 13; ++m) CHECK(report.counts[m] == counts[m]);
  double total = 0.0;
  for (double d : report.densities) total += d;
  CHECK(std::fabs(total - 1.0) < 1e-9);
}

TEST_CASE("density requires a connected triad") {
  DirectedWeightedGraph g(4);
  g.add_edge(0, 1, 1.0);
  g.add_edge(2, 3, 1.0);
  CHECK_THROWS_AS(motif_density(g), NumericError);
}

TEST_CASE("default selection counts channels for market-like fixtures") {
  // Disjoint 3-node components realize exactly the motifs reported for the
  // two markets: {M3, M4, M8, M10, M13} and the same plus M11.
  auto add_component = [](DirectedWeightedGraph& g, std::size_t base,
                          std::initializer_list<std::pair<int, int>> edges) {
    for (auto [a, b] : edges) {
      g.add_edge(base + static_cast<std::size_t>(a), base + static_cast<std::size_t>(b), 1.0);
    }
  };

  DirectedWeightedGraph nasdaq_like(15);
  add_component(nasdaq_like, 0, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}});  // M4
  add_component(nasdaq_like, 3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}});                  // M13
  add_component(nasdaq_like, 6, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}});          // M3
  add_component(nasdaq_like, 9, {{1, 0}, {1, 2}});                                  // M8
  add_component(nasdaq_like, 12, {{0, 1}, {2, 1}});                                 // M10
  auto nasdaq_sel = default_motif_selection(nasdaq_like);
  CHECK(nasdaq_sel.size() == 5);
  CHECK(motif_channels(nasdaq_like, nasdaq_sel).extent(2) == 5);

  DirectedWeightedGraph nyse_like(18);
  add_component(nyse_like, 0, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}});
  add_component(nyse_like, 3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}});
  add_component(nyse_like, 6, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}});
  add_component(nyse_like, 9, {{1, 0}, {1, 2}});
  add_component(nyse_like, 12, {{0, 1}, {2, 1}});
  add_component(nyse_like, 15, {{0, 1}, {1, 0}, {1, 2}});                           // M11
  auto nyse_sel = default_motif_selection(nyse_like);
  CHECK(nyse_sel.size() == 6);
  CHECK(motif_channels(nyse_like, nyse_sel).extent(2) == 6);
}
