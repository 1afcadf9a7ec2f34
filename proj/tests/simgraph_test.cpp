#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lohi/lohi.hpp"
#include "support.hpp"

using namespace lohi;

namespace {

Fingerprint bits(std::initializer_list<std::size_t> on) {
  Fingerprint fp(64);
  for (std::size_t b : on) fp.set(b);
  return fp;
}

Fingerprint range_bits(std::initializer_list<std::pair<std::size_t, std::size_t>> ranges) {
  Fingerprint fp(64);
  for (auto [lo, hi] : ranges) {
    for (std::size_t b = lo; b < hi; ++b) fp.set(b);
  }
  return fp;
}

}  // namespace

TEST(NeighborhoodGraph, IdenticalMoleculesComplete) {
  const std::vector<Fingerprint> fps(6, bits({1, 5, 9}));
  const SimGraph g = build_neighborhood_graph(fps, 0.4);
  EXPECT_EQ(g.edge_count(), 15u);
  for (std::size_t v = 0; v < 6; ++v) EXPECT_EQ(g.degree(v), 5u);
}

TEST(NeighborhoodGraph, DisjointEmpty) {
  std::vector<Fingerprint> fps;
  for (std::size_t i = 0; i < 8; ++i) fps.push_back(bits({i * 2, i * 2 + 1}));
  EXPECT_EQ(build_neighborhood_graph(fps, 0.4).edge_count(), 0u);
}

TEST(NeighborhoodGraph, HandCountedSimilarities) {
  const Fingerprint a = range_bits({{0, 12}});
  const Fingerprint b = range_bits({{0, 9}, {12, 18}});
  const Fingerprint c = range_bits({{0, 3}, {9, 20}});
  ASSERT_DOUBLE_EQ(tanimoto(a, b), 0.5);   // 9 / 18
  ASSERT_DOUBLE_EQ(tanimoto(a, c), 0.3);   // 6 / 20
  ASSERT_DOUBLE_EQ(tanimoto(b, c), 0.45);  // 9 / 20
  const SimGraph g = build_neighborhood_graph(std::vector<Fingerprint>{a, b, c}, 0.4);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_FALSE(g.has_edge(0, 2));
}

TEST(NeighborhoodGraph, ThresholdIsInclusive) {
  const std::vector<Fingerprint> fps{bits({0, 1}), bits({0, 1, 2, 3, 4})};  // 2/5
  EXPECT_TRUE(build_neighborhood_graph(fps, 0.4).has_edge(0, 1));
  EXPECT_FALSE(build_neighborhood_graph(fps, 0.41).has_edge(0, 1));
}

TEST(NeighborhoodGraph, MatchesAllPairsOracle) {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 5; ++round) {
    std::vector<Fingerprint> fps;
    const Fingerprint base = synth::random_bits(rng, 1024, 40);
    for (int i = 0; i < 150; ++i) {
      fps.push_back(i % 3 == 0 ? synth::random_bits(rng, 1024, 5 + rng() % 80)
                               : synth::perturb(rng, base, 0.6, rng() % 40));
    }
    for (unsigned threads : {1u, 3u}) {
      const SimGraph g = build_neighborhood_graph(fps, 0.4, {true, threads});
      std::size_t edges = 0;
      for (std::size_t u = 0; u < fps.size(); ++u) {
        for (std::size_t v = u + 1; v < fps.size(); ++v) {
          const bool want = tanimoto(fps[u], fps[v]) >= 0.4;
          edges += want;
          EXPECT_EQ(g.has_edge(u, v), want);
        }
      }
      EXPECT_EQ(g.edge_count(), edges);
    }
    const SimGraph unfiltered = build_neighborhood_graph(fps, 0.4, {false, 1});
    EXPECT_EQ(unfiltered.edge_count(), build_neighborhood_graph(fps, 0.4).edge_count());
  }
}

TEST(NeighborhoodGraph, RejectsBadThreshold) {
  const std::vector<Fingerprint> fps{bits({1})};
  EXPECT_THROW(build_neighborhood_graph(fps, 0.0), InputError);
  EXPECT_THROW(build_neighborhood_graph(fps, 1.5), InputError);
}

TEST(NeighborhoodGraph, EdgeListExport) {
  const std::vector<Fingerprint> fps{bits({0, 1}), bits({0, 1}), bits({9})};
  std::ostringstream out;
  build_neighborhood_graph(fps, 0.4).write_edge_list(out);
  EXPECT_EQ(out.str(), "u,v,similarity\n0,1,1\n");
}

TEST(Components, Examples) {
  EXPECT_EQ(connected_components(SimGraph::from_edges(5, {}, {}, 0.4)),
            (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  const std::vector<std::pair<std::size_t, std::size_t>> path{{0, 1}, {1, 2}, {2, 3}};
  const std::vector<double> s3(3, 0.5);
  EXPECT_EQ(connected_components(SimGraph::from_edges(4, path, s3, 0.4)),
            (std::vector<std::size_t>{0, 0, 0, 0}));
  const std::vector<std::pair<std::size_t, std::size_t>> triangles{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
  const std::vector<double> s6(6, 0.5);
  EXPECT_EQ(connected_components(SimGraph::from_edges(6, triangles, s6, 0.4)),
            (std::vector<std::size_t>{0, 0, 0, 1, 1, 1}));
}
