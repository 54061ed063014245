#include "fpp/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <unordered_map>

#include "fpp/errors.hpp"

namespace fpp {

namespace {

void check_base(const BaseGraph& base) {
  if (!base.is_finite()) {
    throw Error(ErrorKind::OracleGraphUnsupported, "simulation needs a finite base graph");
  }
  if (base.num_vertices() > 255) {
    throw Error(ErrorKind::TooLarge, "simulation supports at most 255 base vertices");
  }
}

std::span<const std::uint8_t> bytes_of(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (pos - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

}  // namespace

PowerVertex encode_power_vertex(const BaseGraph& base, const std::vector<VertexId>& coords) {
  check_base(base);
  PowerVertex out;
  for (const auto& c : coords) {
    if (!base.has_vertex(c)) throw Error(ErrorKind::UnknownVertex, "'" + c + "'");
    out.push_back(static_cast<char>(base.index_of(c)));
  }
  return out;
}

double power_edge_weight(const BaseGraph& base, const PowerVertex& from, std::size_t coordinate,
                         const Arc& arc, const WeightModel& model, std::uint64_t seed,
                         std::uint64_t replica) {
  PowerVertex to = from;
  to[coordinate] = static_cast<char>(arc.to);
  std::string id;
  if (!arc.oriented && to < from) {
    id = to + from;
  } else {
    id = from + to;
  }
  for (int i = 0; i < 4; ++i) id.push_back(static_cast<char>(arc.edge >> (8 * i)));
  const std::uint64_t h = hash_bytes(bytes_of(id), base.num_vertices());
  const PhiloxCounter counter{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                              static_cast<std::uint32_t>(replica),
                              static_cast<std::uint32_t>(replica >> 32)};
  const PhiloxKey key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const PhiloxCounter r = philox4x32(counter, key);
  const double u = to_open_unit(static_cast<std::uint64_t>(r[0]) | (static_cast<std::uint64_t>(r[1]) << 32));
  return model.h(-std::log(u) / arc.intensity);
}

PassageResult first_passage_time(const BaseGraph& base, const PowerVertex& source,
                                 const PowerVertex& target, const WeightModel& model,
                                 std::uint64_t seed, std::uint64_t replica,
                                 const SearchOptions& options) {
  check_base(base);
  if (source.size() != target.size() || source.empty()) {
    throw Error(ErrorKind::PreconditionViolated, "endpoints must have the same positive dimension");
  }
  struct Entry {
    double dist;
    int hops;
    PowerVertex vertex;
    bool operator>(const Entry& o) const {
      return dist > o.dist || (dist == o.dist && (hops > o.hops || (hops == o.hops && vertex > o.vertex)));
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::unordered_map<PowerVertex, std::pair<double, int>> best;
  std::unordered_map<PowerVertex, char> done;
  heap.push({0.0, 0, source});
  best[source] = {0.0, 0};
  PassageResult result;
  while (!heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (done.count(top.vertex)) continue;
    if (++result.pops > options.max_pops) {
      throw Error(ErrorKind::FrontierExhausted,
                  "node-pop budget of " + std::to_string(options.max_pops) + " exhausted");
    }
    if (top.vertex == target) {
      result.time = top.dist;
      result.geodesic_length = top.hops;
      return result;
    }
    done[top.vertex] = 1;
    for (std::size_t c = 0; c < top.vertex.size(); ++c) {
      const auto x = static_cast<std::size_t>(static_cast<unsigned char>(top.vertex[c]));
      for (const Arc& arc : base.out_arcs(x)) {
        PowerVertex next = top.vertex;
        next[c] = static_cast<char>(arc.to);
        if (done.count(next)) continue;
        const double d = top.dist + power_edge_weight(base, top.vertex, c, arc, model, seed, replica);
        auto it = best.find(next);
        if (it == best.end() || d < it->second.first) {
          best[next] = {d, top.hops + 1};
          heap.push({d, top.hops + 1, std::move(next)});
        }
      }
    }
  }
  throw Error(ErrorKind::Unreachable, "target not reachable in the power graph");
}

PassageResult first_passage_time(const BaseGraph& base, int n, const VertexId& v,
                                 const VertexId& w, const WeightModel& model, std::uint64_t seed,
                                 std::uint64_t replica, const SearchOptions& options) {
  if (n < 1 || n > 64) throw Error(ErrorKind::PreconditionViolated, "n must be in [1, 64]");
  const auto nn = static_cast<std::size_t>(n);
  return first_passage_time(base, encode_power_vertex(base, std::vector<VertexId>(nn, v)),
                            encode_power_vertex(base, std::vector<VertexId>(nn, w)), model, seed,
                            replica, options);
}

SampleSummary summarize(std::vector<double> values) {
  SampleSummary s;
  if (values.empty()) return s;
  // Fixed-order compensated sums.
  double sum = 0.0, comp = 0.0;
  for (double x : values) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  const double n = static_cast<double>(values.size());
  s.mean = (sum + comp) / n;
  double ss = 0.0;
  for (double x : values) ss += (x - s.mean) * (x - s.mean);
  s.stderr_ = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  std::sort(values.begin(), values.end());
  const double ps[] = {0.05, 0.25, 0.5, 0.75, 0.95};
  for (int i = 0; i < 5; ++i) s.quantiles[static_cast<std::size_t>(i)] = quantile_sorted(values, ps[i]);
  return s;
}

SimulationSummary run_ensemble(const EnsembleConfig& config) {
  if (config.replicas < 1) throw Error(ErrorKind::PreconditionViolated, "replicas must be >= 1");
  if (config.n < 1 || config.n > 64) throw Error(ErrorKind::PreconditionViolated, "n must be in [1, 64]");
  const auto n = static_cast<std::size_t>(config.n);
  std::vector<VertexId> from(n, config.v);
  std::vector<VertexId> to(n, config.w);
  if (config.hamming_k) {
    const int k = *config.hamming_k;
    if (k < 0 || k > config.n) throw Error(ErrorKind::PreconditionViolated, "hamming k must be in [0, n]");
    to.assign(n, config.v);
    std::fill(to.begin(), to.begin() + k, config.w);
  }
  const PowerVertex source = encode_power_vertex(config.base, from);
  const PowerVertex target = encode_power_vertex(config.base, to);

  SimulationSummary out;
  out.replicas = config.replicas;
  for (int r = 0; r < config.replicas; ++r) {
    const auto replica = static_cast<std::uint64_t>(r);
    const PassageResult p = first_passage_time(config.base, source, target, config.model,
                                               derive_seed(config.seed, replica), replica,
                                               config.search);
    out.replica_times.push_back(p.time);
    out.replica_lengths.push_back(p.geodesic_length);
  }
  out.times = summarize(out.replica_times);
  out.geodesic_lengths =
      summarize(std::vector<double>(out.replica_lengths.begin(), out.replica_lengths.end()));

  std::vector<double> grid = config.cdf_times;
  if (grid.empty()) {
    const double hi = *std::max_element(out.replica_times.begin(), out.replica_times.end());
    for (int i = 0; i <= 20; ++i) grid.push_back(hi * i / 20.0);
  }
  std::sort(grid.begin(), grid.end());
  std::vector<double> sorted = out.replica_times;
  std::sort(sorted.begin(), sorted.end());
  for (double t : grid) {
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    out.cdf_points.emplace_back(t, static_cast<double>(count) / static_cast<double>(sorted.size()));
  }
  out.graph_label = config.graph_label;
  out.n = config.n;
  out.v = config.v;
  out.w = config.w;
  out.hamming_k = config.hamming_k;
  out.seed = config.seed;
  out.model = config.model.describe();
  out.rho = config.model.rho;
  return out;
}

Estimate exponential_sum_probability(int k, double t, std::size_t samples, RandomStream& rng) {
  if (k < 1) throw Error(ErrorKind::PreconditionViolated, "k must be >= 1");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += rng.exponential();
    if (s <= t) ++hits;
  }
  Estimate e;
  e.samples = samples;
  e.estimate = samples ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
  e.stderr_ = samples ? std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(samples)) : 0.0;
  return e;
}

}  // namespace fpp
