#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpp/graph.hpp"
#include "fpp/rng.hpp"
#include "fpp/walk.hpp"
#include "fpp/weights.hpp"

namespace fpp {

// A vertex of the n-th power: one byte per coordinate (base index < 255).
using PowerVertex = std::string;

struct SearchOptions {
  std::uint64_t max_pops = 50'000'000;
};

struct PassageResult {
  double time = 0.0;
  int geodesic_length = 0;
  std::uint64_t pops = 0;
};

PowerVertex encode_power_vertex(const BaseGraph& base, const std::vector<VertexId>& coords);

// Weight of the power-graph edge that moves `from` along base edge `edge`.
// Undirected edges give the same value from either endpoint.
double power_edge_weight(const BaseGraph& base, const PowerVertex& from, std::size_t coordinate,
                         const Arc& arc, const WeightModel& model, std::uint64_t seed,
                         std::uint64_t replica);

// Lazy shortest-path search on the implicit n-th power of a finite base graph.
PassageResult first_passage_time(const BaseGraph& base, const PowerVertex& source,
                                 const PowerVertex& target, const WeightModel& model,
                                 std::uint64_t seed, std::uint64_t replica = 0,
                                 const SearchOptions& options = {});

// Diagonal endpoints (v, ..., v) and (w, ..., w).
PassageResult first_passage_time(const BaseGraph& base, int n, const VertexId& v,
                                 const VertexId& w, const WeightModel& model, std::uint64_t seed,
                                 std::uint64_t replica = 0, const SearchOptions& options = {});

struct SampleSummary {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::array<double, 5> quantiles{};  // 5, 25, 50, 75, 95 %
};

SampleSummary summarize(std::vector<double> values);

struct EnsembleConfig {
  BaseGraph base;
  std::string graph_label;
  int n = 1;
  VertexId v;
  VertexId w;
  WeightModel model;
  int replicas = 1;
  std::uint64_t seed = 0;
  // Hamming mode: the target differs from (v, ..., v) in the first k coordinates.
  std::optional<int> hamming_k;
  // Points for the empirical CDF; empty picks 21 evenly spaced points up to the maximum.
  std::vector<double> cdf_times;
  SearchOptions search;
};

struct SimulationSummary {
  int replicas = 0;
  SampleSummary times;
  SampleSummary geodesic_lengths;
  std::vector<std::pair<double, double>> cdf_points;
  std::vector<double> replica_times;          // in replica order
  std::vector<int> replica_lengths;
  // Config echo.
  std::string graph_label;
  int n = 0;
  VertexId v, w;
  std::optional<int> hamming_k;
  std::uint64_t seed = 0;
  std::string model;
  double rho = 0.0;
};

SimulationSummary run_ensemble(const EnsembleConfig& config);

// Empirical P(E_1 + ... + E_k <= t) for iid Exp(1) draws.
Estimate exponential_sum_probability(int k, double t, std::size_t samples, RandomStream& rng);

}  // namespace fpp
