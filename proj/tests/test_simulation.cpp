#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fpp/errors.hpp"
#include "fpp/simulation.hpp"
#include "fpp/weights.hpp"

using namespace fpp;

TEST(Weights, Exponential) {
  const WeightModel m = make_weight_model("exp:1");
  for (double t : {0.0, 0.3, 2.0, 10.0}) EXPECT_DOUBLE_EQ(m.h(t), t);
  EXPECT_DOUBLE_EQ(m.rho, 1.0);
  EXPECT_DOUBLE_EQ(make_weight_model("exp:2.5").rho, 2.5);
}

TEST(Weights, Uniform) {
  const WeightModel u1 = make_weight_model("uniform:0,1");
  const WeightModel u2 = make_weight_model("uniform:0,2");
  for (double t : {0.0, 0.4, 3.0}) {
    EXPECT_NEAR(u1.h(t), 1.0 - std::exp(-t), 1e-15);
    EXPECT_NEAR(u2.h(t), 2.0 * (1.0 - std::exp(-t)), 1e-15);
  }
  EXPECT_DOUBLE_EQ(u1.rho, 1.0);
  EXPECT_DOUBLE_EQ(u2.rho, 0.5);
  EXPECT_DOUBLE_EQ(make_weight_model("uniform:1,2").rho, 0.0);
}

TEST(Weights, Table) {
  const WeightModel lin = table_model({{0.0, 0.0}, {1.0, 1.0}});
  EXPECT_NEAR(lin.h(0.5), 1.0 - std::exp(-0.5), 1e-15);
  EXPECT_DOUBLE_EQ(lin.rho, 1.0);
  const WeightModel point = table_model({{0.0, 1.0}, {1.0, 1.0}});
  EXPECT_DOUBLE_EQ(point.h(0.0), 1.0);
  EXPECT_DOUBLE_EQ(point.h(5.0), 1.0);
  EXPECT_DOUBLE_EQ(point.rho, 0.0);
  const WeightModel steep = table_model({{0.0, 0.0}, {0.5, 0.25}, {1.0, 3.0}});
  EXPECT_DOUBLE_EQ(steep.rho, 2.0);
  double prev = 0.0;
  for (int i = 0; i < 100; ++i) {
    EXPECT_GE(steep.h(0.05 * i), prev);
    prev = steep.h(0.05 * i);
  }
}

TEST(Weights, Invalid) {
  for (const char* spec : {"exp:0", "exp:-1", "uniform:2,1", "uniform:-1,1", "normal:0,1", "exp:x", "exp"}) {
    try {
      make_weight_model(spec);
      ADD_FAILURE() << spec;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidDistribution) << spec;
    }
  }
  EXPECT_THROW(table_model({{0.0, 1.0}, {1.0, 0.5}}), Error);
  EXPECT_THROW(table_model({{0.1, 0.0}, {1.0, 1.0}}), Error);
}

TEST(Simulation, DirectedEdgeIsItsWeight) {
  const BaseGraph d = builtin::directed_edge();
  const WeightModel m = exponential_model(1.0);
  const PassageResult r = first_passage_time(d, 1, "0", "1", m, 77);
  const PowerVertex from = encode_power_vertex(d, {"0"});
  EXPECT_EQ(r.time, power_edge_weight(d, from, 0, d.out_arcs(0)[0], m, 77, 0));
  EXPECT_EQ(r.geodesic_length, 1);
}

TEST(Simulation, Deterministic) {
  const BaseGraph k2 = builtin::complete(2);
  const WeightModel m = exponential_model(1.0);
  const PassageResult a = first_passage_time(k2, 8, "0", "1", m, 5, 3);
  const PassageResult b = first_passage_time(k2, 8, "0", "1", m, 5, 3);
  EXPECT_EQ(a.time, b.time);
  EXPECT_EQ(a.geodesic_length, b.geodesic_length);
  EXPECT_NE(a.time, first_passage_time(k2, 8, "0", "1", m, 5, 4).time);
}

TEST(Simulation, UndirectedWeightIsSymmetric) {
  const BaseGraph g = builtin::paw();
  const WeightModel m = exponential_model(1.0);
  const PowerVertex x = encode_power_vertex(g, {"a", "v", "w"});
  for (std::size_t c = 0; c < 3; ++c) {
    const auto xi = static_cast<std::size_t>(static_cast<unsigned char>(x[c]));
    for (const Arc& arc : g.out_arcs(xi)) {
      PowerVertex y = x;
      y[c] = static_cast<char>(arc.to);
      const Arc* back = nullptr;
      for (const Arc& b : g.out_arcs(arc.to)) {
        if (b.to == xi && b.edge == arc.edge) back = &b;
      }
      ASSERT_NE(back, nullptr);
      EXPECT_EQ(power_edge_weight(g, x, c, arc, m, 9, 0), power_edge_weight(g, y, c, *back, m, 9, 0));
    }
  }
}

TEST(Simulation, PointMassGivesGraphDistance) {
  const BaseGraph k2 = builtin::complete(2);
  const WeightModel point = table_model({{0.0, 1.0}, {1.0, 1.0}});
  const PassageResult r = first_passage_time(k2, 2, "0", "1", point, 1);
  EXPECT_DOUBLE_EQ(r.time, 2.0);
  EXPECT_EQ(r.geodesic_length, 2);
}

TEST(Simulation, CouplingIsMonotone) {
  const BaseGraph k2 = builtin::complete(2);
  const WeightModel low = uniform_model(0.0, 1.0);  // h(t) = 1 - e^{-t} <= t
  const WeightModel high = exponential_model(1.0);
  for (std::uint64_t r = 0; r < 20; ++r) {
    EXPECT_LE(first_passage_time(k2, 6, "0", "1", low, 3, r).time,
              first_passage_time(k2, 6, "0", "1", high, 3, r).time);
  }
}

TEST(Simulation, GeodesicLengthAtLeastNTimesDistance) {
  const BaseGraph p = builtin::path(2);
  for (std::uint64_t r = 0; r < 10; ++r) {
    EXPECT_GE(first_passage_time(p, 3, "0", "2", exponential_model(1.0), 8, r).geodesic_length, 6);
  }
}

TEST(Simulation, LowerBoundOnCdf) {
  EnsembleConfig c;
  c.base = builtin::complete(2);
  c.n = 4;
  c.v = "0";
  c.w = "1";
  c.model = exponential_model(1.0);
  c.replicas = 1000;
  c.seed = 21;
  c.cdf_times = {0.3, 0.6, 0.9};
  const SimulationSummary s = run_ensemble(c);
  for (const auto& [t, p] : s.cdf_points) {
    const double bound = std::min(1.0, std::pow(std::sinh(t), 4));
    EXPECT_LE(p, bound + 3.0 * std::sqrt(bound * (1 - bound) / 1000.0) + 1e-12);
  }
}

TEST(Simulation, EnsembleSummary) {
  EnsembleConfig c;
  c.base = builtin::complete(2);
  c.graph_label = "K2";
  c.n = 6;
  c.v = "0";
  c.w = "1";
  c.model = exponential_model(1.0);
  c.replicas = 50;
  c.seed = 4;
  c.hamming_k = 3;
  const SimulationSummary a = run_ensemble(c);
  const SimulationSummary b = run_ensemble(c);
  EXPECT_EQ(a.replica_times, b.replica_times);
  EXPECT_GE(a.times.mean, 0.0);
  for (int i = 1; i < 5; ++i) EXPECT_LE(a.times.quantiles[i - 1], a.times.quantiles[i]);
  for (std::size_t i = 1; i < a.cdf_points.size(); ++i) {
    EXPECT_LE(a.cdf_points[i - 1].second, a.cdf_points[i].second);
  }
  for (int len : a.replica_lengths) EXPECT_GE(len, 3);
  EXPECT_EQ(a.cdf_points.back().second, 1.0);
}

TEST(Simulation, Budget) {
  SearchOptions tight;
  tight.max_pops = 10;
  try {
    first_passage_time(builtin::complete(2), 10, "0", "1", exponential_model(1.0), 1, 0, tight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FrontierExhausted);
  }
}

TEST(Simulation, Unsupported) {
  EXPECT_THROW(first_passage_time(builtin::integer_chain(), 2, "0", "1", exponential_model(1.0), 1), Error);
  EXPECT_THROW(first_passage_time(builtin::directed_edge(), 2, "1", "0", exponential_model(1.0), 1), Error);
}

TEST(Simulation, ExponentialSums) {
  RandomStream rng(2);
  const Estimate e = exponential_sum_probability(5, 2.0, 200000, rng);
  // Exact: P(Poisson(2) >= 5).
  const double exact = 1.0 - std::exp(-2.0) * (1 + 2 + 2 + 4.0 / 3 + 2.0 / 3);
  EXPECT_NEAR(e.estimate, exact, 4 * e.stderr_);
}
