/*
 * Copyright 2026 The CHC Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "chc/error.hpp"
#include "chc/placement.hpp"
#include "chc/trace.hpp"
#include "test_support.hpp"

namespace chc {
namespace {

using Files = std::vector<FileIndex>;

Model single_edge(std::vector<double> p, Bytes slots) {
  Model m;
  m.topology.num_cells = 1;
  m.topology.users_per_cell = {1};
  m.topology.edge_capacity = {slots};
  m.topology.cloud_capacity = 0;
  m.cost.fronthaul = {20};
  m.cost.origin = 100;
  m.catalog = Catalog::uniform(std::move(p), 1);
  return m;
}

Model uniform_cells(std::uint32_t R, std::vector<double> p, Bytes edge,
                    Bytes cloud) {
  Model m;
  m.topology.num_cells = R;
  m.topology.users_per_cell.assign(R, 10);
  m.topology.edge_capacity.assign(R, edge);
  m.topology.cloud_capacity = cloud;
  m.cost.fronthaul.assign(R, 20);
  m.cost.origin = 100;
  m.catalog = Catalog::uniform(std::move(p), 1);
  return m;
}

double saving(const CachePlacement& p, const Model& m,
              ArchitectureMode mode = ArchitectureMode::kChc) {
  return delay_saving(p, m, mode);
}

TEST(Pcd, SingleEdgeTakesMostPopular) {
  const auto m = single_edge({0.5, 0.3, 0.2}, 2);
  const auto p = pcd_greedy(m, ArchitectureMode::kChc);
  EXPECT_EQ(p.files(CacheId::edge(0)), (Files{0, 1}));
  EXPECT_EQ(p.file_count(CacheId::cloud()), 0u);
  EXPECT_EQ(p, brute_force_optimal(m, ArchitectureMode::kChc));
}

TEST(Pcd, ZeroCapacityGivesEmptyPlacement) {
  const auto m = uniform_cells(3, {0.4, 0.3, 0.2, 0.1}, 0, 0);
  const auto p = pcd_greedy(m, ArchitectureMode::kChc);
  for (std::uint32_t s = 0; s < p.num_slots(); ++s) {
    EXPECT_EQ(p.file_count(CacheId::from_slot(s)), 0u);
  }
  EXPECT_EQ(saving(p, m), 0);
  EXPECT_EQ(brute_force_optimal(m, ArchitectureMode::kChc), p);
}

TEST(Pcd, CloudResidentFileStillGoesToEdges) {
  const auto m = uniform_cells(2, {0.9, 0.1}, 1, 1);
  const auto p = pcd_greedy(m, ArchitectureMode::kChc);
  // Cloud and edge gains for file 1 tie at 1440; the cloud slot wins, and
  // the local copies are still worth 180 each against 160 for file 2.
  EXPECT_EQ(p.files(CacheId::cloud()), (Files{0}));
  EXPECT_EQ(p.files(CacheId::edge(0)), (Files{0}));
  EXPECT_EQ(p.files(CacheId::edge(1)), (Files{0}));

  const auto wide = uniform_cells(2, {0.6, 0.4}, 2, 2);
  const auto q = pcd_greedy(wide, ArchitectureMode::kChc);
  for (std::uint32_t s = 0; s < q.num_slots(); ++s) {
    EXPECT_LE(q.file_count(CacheId::from_slot(s)), 2u);
  }
  EXPECT_TRUE(q.contains(CacheId::edge(0), 0));
  EXPECT_TRUE(q.contains(CacheId::edge(1), 0));
}

TEST(Pcd, DensityGreedyWithMixedSizes) {
  Model m = single_edge({0.5, 0.3, 0.2}, 10);
  m.catalog.file_size = {10, 5, 5};
  const auto p = pcd_greedy(m, ArchitectureMode::kChc);
  EXPECT_EQ(p.files(CacheId::edge(0)), (Files{1, 2}));
  EXPECT_EQ(p, pcd_greedy(m, ArchitectureMode::kChc, {.lazy = false}));
}

TEST(Pcd, HalfOfOptimumOnTwoCellInstances) {
  std::mt19937_64 rng(101);
  double worst = 1;
  for (int round = 0; round < 200; ++round) {
    testing::RandomModelSpec spec;
    spec.max_cells = 2;
    spec.max_files = 6;
    auto m = testing::random_model(rng, spec);
    const auto greedy = pcd_greedy(m, ArchitectureMode::kChc);
    const auto best = brute_force_optimal(m, ArchitectureMode::kChc);
    const double opt = saving(best, m);
    const double got = saving(greedy, m);
    ASSERT_LE(got, opt + 1e-9);
    if (opt > 0) worst = std::min(worst, got / opt);
  }
  EXPECT_GE(worst, 0.5);
}

TEST(Pcd, LazyMatchesNaive) {
  std::mt19937_64 rng(202);
  for (int round = 0; round < 300; ++round) {
    testing::RandomModelSpec spec;
    spec.max_cells = 5;
    spec.max_files = 30;
    spec.max_slots = 8;
    auto m = testing::random_model(rng, spec);
    if (round % 3 == 0) {
      for (auto& s : m.catalog.file_size) s = 1 + rng() % 4;
    }
    for (auto mode : {ArchitectureMode::kChc, ArchitectureMode::kNonCoop,
                      ArchitectureMode::kEdgeOnly, ArchitectureMode::kCloudOnly}) {
      ASSERT_EQ(pcd_greedy(m, mode, {.lazy = true}),
                pcd_greedy(m, mode, {.lazy = false}))
          << "round " << round;
    }
  }
}

TEST(Pcd, LazyMatchesNaiveWithTiedGains) {
  // Uniform popularity and identical cells produce many exact ties.
  const auto m = uniform_cells(4, std::vector<double>(40, 1.0 / 40), 3, 12);
  EXPECT_EQ(pcd_greedy(m, ArchitectureMode::kChc, {.lazy = true}),
            pcd_greedy(m, ArchitectureMode::kChc, {.lazy = false}));
}

TEST(Pcd, EqualsOptimumOnSingleCacheInstances) {
  std::mt19937_64 rng(303);
  for (int round = 0; round < 100; ++round) {
    testing::RandomModelSpec spec;
    spec.max_cells = 3;
    auto m = testing::random_model(rng, spec);
    m.topology.edge_capacity.assign(m.topology.num_cells, 0);
    const auto greedy = pcd_greedy(m, ArchitectureMode::kChc);
    const auto best = brute_force_optimal(m, ArchitectureMode::kChc);
    ASSERT_NEAR(saving(greedy, m), saving(best, m), 1e-9);
  }
}

TEST(Pcd, SavingGrowsWithCapacityWhereGreedyIsExact) {
  std::mt19937_64 rng(404);
  for (int round = 0; round < 200; ++round) {
    testing::RandomModelSpec spec;
    spec.max_files = 10;
    auto m = testing::random_model(rng, spec);
    // Every edge is its own problem under edge-only, and cloud-only has a
    // single cache, so greedy is optimal in both.
    const bool edge = round % 2 == 0;
    const auto mode = edge ? ArchitectureMode::kEdgeOnly : ArchitectureMode::kCloudOnly;
    const auto slot =
        edge ? 1 + static_cast<std::uint32_t>(rng() % m.topology.num_cells) : 0u;
    double last = -1;
    for (Bytes cap = 0; cap <= m.catalog.num_files(); ++cap) {
      if (slot == 0) {
        m.topology.cloud_capacity = cap;
      } else {
        m.topology.edge_capacity[slot - 1] = cap;
      }
      const double s = saving(pcd_greedy(m, mode), m, mode);
      ASSERT_GE(s, last - 1e-9) << "round " << round << " cap " << cap;
      last = s;
    }
  }
}

TEST(Pcd, ExtraCapacityCanCostCooperativeGreedy) {
  // Cells of one user each, p = (0.3, 0.7). Without a cloud the greedy
  // saves 112 + 48 + 28 = 188. With one cloud slot the cloud and edge gains
  // for file 2 tie at 112, the cloud wins, and the rest adds only
  // 48 + 14 + 12 for 186.
  Model m;
  m.topology.num_cells = 2;
  m.topology.users_per_cell = {1, 1};
  m.topology.edge_capacity = {1, 2};
  m.topology.cloud_capacity = 0;
  m.cost.fronthaul = {20, 20};
  m.cost.origin = 100;
  m.catalog = Catalog::uniform({0.3, 0.7}, 1);
  const double without = saving(pcd_greedy(m, ArchitectureMode::kChc), m);
  const double opt_without = saving(brute_force_optimal(m, ArchitectureMode::kChc), m);
  m.topology.cloud_capacity = 1;
  const auto p = pcd_greedy(m, ArchitectureMode::kChc);
  const double with = saving(p, m);
  EXPECT_NEAR(without, 188, 1e-9);
  EXPECT_NEAR(with, 186, 1e-9);
  EXPECT_EQ(write_placement(p), "cloud\t2\nedge1\t1\nedge2\t1\nedge2\t2\n");
  EXPECT_NEAR(opt_without, 188, 1e-9);
  EXPECT_GE(with, 0.5 * saving(brute_force_optimal(m, ArchitectureMode::kChc), m));
}

TEST(Pcd, HalfOfOptimumAcrossCapacitySweeps) {
  std::mt19937_64 rng(405);
  for (int round = 0; round < 60; ++round) {
    testing::RandomModelSpec spec;
    spec.max_cells = 2;
    spec.max_files = 6;
    auto m = testing::random_model(rng, spec);
    for (Bytes cap = 0; cap <= 4; ++cap) {
      m.topology.cloud_capacity = cap;
      const double got = saving(pcd_greedy(m, ArchitectureMode::kChc), m);
      const double opt = saving(brute_force_optimal(m, ArchitectureMode::kChc), m);
      ASSERT_GE(got, 0.5 * opt - 1e-9);
    }
  }
}

TEST(Pcd, Deterministic) {
  std::mt19937_64 rng(505);
  const auto m = testing::random_model(rng);
  EXPECT_EQ(write_placement(pcd_greedy(m, ArchitectureMode::kChc)),
            write_placement(pcd_greedy(m, ArchitectureMode::kChc)));
}

TEST(BruteForce, SingleCacheKeepsTopK) {
  const auto m = single_edge({0.1, 0.35, 0.05, 0.3, 0.2}, 3);
  const auto p = brute_force_optimal(m, ArchitectureMode::kChc);
  EXPECT_EQ(p.files(CacheId::edge(0)), (Files{1, 3, 4}));
}

TEST(BruteForce, RefusesLargeInstances) {
  const auto m = uniform_cells(2, std::vector<double>(17, 1.0 / 17), 4, 4);
  try {
    brute_force_optimal(m, ArchitectureMode::kChc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInstanceTooLarge);
  }
  const auto wide = uniform_cells(4, std::vector<double>(12, 1.0 / 12), 6, 6);
  EXPECT_THROW(brute_force_optimal(wide, ArchitectureMode::kChc,
                                   {.max_placements = 1000}),
               Error);
}

TEST(BruteForce, BeatsEveryRandomFeasiblePlacement) {
  std::mt19937_64 rng(606);
  testing::RandomModelSpec spec;
  spec.max_cells = 3;
  for (int round = 0; round < 50; ++round) {
    const auto m = testing::random_model(rng, spec);
    const double opt = saving(brute_force_optimal(m, ArchitectureMode::kChc), m);
    for (int k = 0; k < 20; ++k) {
      const auto p = testing::random_placement(rng, m, 0.6);
      ASSERT_LE(testing::oracle_saving(p, m, ArchitectureMode::kChc), opt + 1e-9);
    }
  }
}

TEST(Capacity, SplitKeepsCloudRatio) {
  Topology base{4, {0, 0, 0, 0}, 0, {1, 1, 1, 1}};
  const auto t = split_total_capacity(base, 400 * kGigabyte, 4);
  EXPECT_EQ(t.cloud_capacity, 200 * kGigabyte);
  EXPECT_EQ(t.edge_capacity, std::vector<Bytes>(4, 50 * kGigabyte));

  const auto odd = split_total_capacity(base, 1003, 4);
  EXPECT_EQ(odd.total_capacity(), 1003u);
  EXPECT_EQ(odd.edge_capacity[0], 125u);
}

TEST(Capacity, RedistributionPreservesTotal) {
  Topology base{3, {7, 8, 9}, 31, {1, 1, 1}};
  EXPECT_EQ(redistribute_to_edges(base).total_capacity(), 55u);
  EXPECT_EQ(redistribute_to_edges(base).edge_capacity,
            (std::vector<Bytes>{19, 18, 18}));
  EXPECT_EQ(redistribute_to_cloud(base).cloud_capacity, 55u);
  for (auto mode : {ArchitectureMode::kChc, ArchitectureMode::kNonCoop,
                    ArchitectureMode::kEdgeOnly, ArchitectureMode::kCloudOnly}) {
    EXPECT_EQ(architecture_topology(base, mode).total_capacity(), 55u);
  }
}

TEST(Baselines, EdgeOnlySymmetricCells) {
  auto m = uniform_cells(3, zipf_popularity(10, 0.8), 1, 3);
  const auto p = edge_only_placement(m);
  EXPECT_EQ(p.capacity(CacheId::cloud()), 0u);
  for (CellIndex r = 0; r < 3; ++r) {
    EXPECT_EQ(p.files(CacheId::edge(r)), (Files{0, 1}));
  }
  Model flat = m;
  flat.topology = redistribute_to_edges(m.topology);
  EXPECT_NEAR(saving(p, flat, ArchitectureMode::kEdgeOnly),
              saving(brute_force_optimal(flat, ArchitectureMode::kEdgeOnly), flat,
                     ArchitectureMode::kEdgeOnly),
              1e-9);
}

TEST(Baselines, CloudOnlyWithWholeCatalog) {
  auto m = uniform_cells(2, {0.5, 0.3, 0.2}, 1, 1);
  m.topology.users_per_cell = {3, 4};
  const auto p = cloud_only_placement(m);
  EXPECT_EQ(p.files(CacheId::cloud()), (Files{0, 1, 2}));
  EXPECT_EQ(total_expected_delay(p, m.topology, m.catalog, m.cost,
                                 ArchitectureMode::kCloudOnly),
            7 * 20.0);
}

TEST(Baselines, MpcExExcludesEdgeFilesFromCloud) {
  auto m = uniform_cells(4, zipf_popularity(20, 0.8), 2, 8);
  const auto p = mpc_ex_placement(m);
  for (CellIndex r = 0; r < 4; ++r) {
    EXPECT_EQ(p.files(CacheId::edge(r)), (Files{0, 1}));
  }
  EXPECT_EQ(p.files(CacheId::cloud()), (Files{2, 3, 4, 5, 6, 7, 8, 9}));
}

TEST(Baselines, MpcExWithoutCloudIsMostPopular) {
  auto m = uniform_cells(3, zipf_popularity(12, 1.1), 4, 0);
  EXPECT_EQ(mpc_ex_placement(m),
            most_popular_placement(m, ArchitectureMode::kNonCoop));
}

TEST(Baselines, MpcExNeverDuplicatesAcrossTiers) {
  std::mt19937_64 rng(707);
  for (int round = 0; round < 100; ++round) {
    const auto m = testing::random_model(rng);
    const auto p = mpc_ex_placement(m);
    for (auto f : p.files(CacheId::cloud())) {
      for (CellIndex r = 0; r < m.topology.num_cells; ++r) {
        ASSERT_FALSE(p.contains(CacheId::edge(r), f));
      }
    }
  }
}

TEST(Baselines, FemtoXSingleCellMatchesEdgeOnly) {
  std::mt19937_64 rng(808);
  for (int round = 0; round < 50; ++round) {
    testing::RandomModelSpec spec;
    spec.max_cells = 1;
    const auto m = testing::random_model(rng, spec);
    ASSERT_EQ(femto_x_placement(m), edge_only_placement(m));
  }
}

TEST(Baselines, FemtoXMatchesEnumerationOnTwoCells) {
  Model m;
  m.topology.num_cells = 2;
  m.topology.users_per_cell = {5, 3};
  m.topology.edge_capacity = {1, 1};
  m.topology.cloud_capacity = 2;
  m.cost.fronthaul = {10, 35};
  m.cost.origin = 100;
  m.catalog = Catalog::uniform({0.4, 0.25, 0.15, 0.1, 0.06, 0.04}, 1);
  const auto p = femto_x_placement(m);
  EXPECT_EQ(p.capacity(CacheId::cloud()), 0u);
  EXPECT_EQ(p.capacity(CacheId::edge(0)) + p.capacity(CacheId::edge(1)),
            m.topology.total_capacity());

  Model flat = m;
  flat.topology = redistribute_to_edges(m.topology);
  const auto best = brute_force_optimal(flat, ArchitectureMode::kChc);
  EXPECT_NEAR(saving(p, flat), saving(best, flat), 1e-9);
  // Diversity wins here: no file is held twice.
  EXPECT_EQ(p.files(CacheId::edge(0)), (Files{0, 1}));
  EXPECT_EQ(p.files(CacheId::edge(1)), (Files{2, 3}));
}

TEST(Baselines, ComputePlacementRespectsModeTiers) {
  const auto m = uniform_cells(3, zipf_popularity(30, 0.8), 2, 8);
  for (auto algo : {PlacementAlgorithm::kPcd, PlacementAlgorithm::kMpcEx,
                    PlacementAlgorithm::kFemtoX, PlacementAlgorithm::kPopular}) {
    const auto eo = compute_placement(m, ArchitectureMode::kEdgeOnly, algo);
    EXPECT_EQ(eo.file_count(CacheId::cloud()), 0u);
    const auto co = compute_placement(m, ArchitectureMode::kCloudOnly, algo);
    EXPECT_EQ(co.capacity(CacheId::cloud()), m.topology.total_capacity());
    for (CellIndex r = 0; r < 3; ++r) {
      EXPECT_EQ(co.file_count(CacheId::edge(r)), 0u);
    }
  }
  EXPECT_EQ(parse_placement_algorithm("femtox"), PlacementAlgorithm::kFemtoX);
  EXPECT_THROW(parse_placement_algorithm("optimal"), Error);
}

TEST(PlacementText, RoundTrip) {
  std::mt19937_64 rng(909);
  for (int round = 0; round < 50; ++round) {
    const auto m = testing::random_model(rng);
    const auto p = testing::random_placement(rng, m, 0.5);
    const auto text = write_placement(p);
    EXPECT_EQ(read_placement(text, m.topology, m.catalog), p);
  }
}

TEST(PlacementText, SortedCloudFirst) {
  const auto m = uniform_cells(2, {0.4, 0.3, 0.3}, 2, 2);
  CachePlacement p(m.topology, m.catalog);
  p.insert(CacheId::edge(1), 2);
  p.insert(CacheId::edge(1), 0);
  p.insert(CacheId::cloud(), 1);
  EXPECT_EQ(write_placement(p), "cloud\t2\nedge2\t1\nedge2\t3\n");
}

TEST(PlacementText, ErrorsCarryLineNumbers) {
  const auto m = uniform_cells(2, {0.5, 0.5}, 1, 1);
  auto expect_line = [&](const std::string& text, const std::string& line) {
    try {
      read_placement(text, m.topology, m.catalog);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find(line), std::string::npos) << e.what();
    }
  };
  expect_line("cloud\t1\nedge3\t1\n", "line 2");
  expect_line("cloud\t3\n", "line 1");
  expect_line("cloud\t1\ncloud\t2\n", "line 2");
  expect_line("edge1 1\n", "line 1");
}

}  // namespace
}  // namespace chc
