#include "fpp/walk.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fpp/critical.hpp"
#include "fpp/errors.hpp"
#include "fpp/genfun.hpp"

namespace fpp {

namespace {

// Welford running mean and variance.
struct Running {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  Estimate result() const {
    Estimate e;
    e.estimate = mean;
    e.samples = n;
    e.stderr_ = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    return e;
  }
};

void require_finite(const BaseGraph& g, const char* what) {
  if (!g.is_finite()) {
    throw Error(ErrorKind::OracleGraphUnsupported, std::string(what) + " needs a finite graph");
  }
}

constexpr double kSeriesTol = 1e-13;

Eigen::MatrixXd exp_values(const Eigen::MatrixXd& a, double rate, double t) {
  return exp_matrix(a, t, rate, kSeriesTol).value;
}

}  // namespace

const WalkState& WalkSample::state_at(double time) const {
  const auto k = std::upper_bound(jump_times.begin(), jump_times.end(), time) - jump_times.begin();
  return states[static_cast<std::size_t>(k)];
}

bool WalkSample::self_avoiding() const {
  std::set<WalkState> seen(states.begin(), states.end());
  return seen.size() == states.size();
}

WalkSampler::WalkSampler(const BaseGraph& g, const VertexId& v, const VertexId& w, double t_star,
                         double tail_tol)
    : host_(g), t_star_(t_star) {
  if (!(t_star >= 0.0) || !std::isfinite(t_star)) {
    throw Error(ErrorKind::PreconditionViolated, "t* must be finite and nonnegative");
  }
  if (!g.has_vertex(v)) throw Error(ErrorKind::UnknownVertex, "'" + v + "'");
  if (!g.has_vertex(w)) throw Error(ErrorKind::UnknownVertex, "'" + w + "'");

  const SeriesPlan plan = plan_series(g.delta_out(), t_star, tail_tol);
  const int max_length = t_star == 0.0 ? 0 : plan.order;
  if (!g.is_finite()) host_ = ball(g, v, max_length);
  if (!host_.has_vertex(w)) {
    throw Error(ErrorKind::Unreachable, "'" + w + "' is not within reach of '" + v + "'");
  }
  v_ = static_cast<int>(host_.index_of(v));
  w_ = static_cast<int>(host_.index_of(w));

  // paths_to_w_[j] holds N_j(., w) t*^j / j!, which keeps the entries O(1).
  const Eigen::MatrixXd a = host_.adjacency();
  Eigen::VectorXd cur = Eigen::VectorXd::Zero(a.rows());
  cur(w_) = 1.0;
  paths_to_w_.push_back(cur);
  for (int j = 1; j <= max_length; ++j) {
    cur = (a * cur) * (t_star / j);
    paths_to_w_.push_back(cur);
  }
  double total = 0.0;
  for (const auto& p : paths_to_w_) total += p(v_);
  if (!(total > 0.0)) {
    throw Error(ErrorKind::Unreachable, "no path of length <= " + std::to_string(max_length));
  }
  double acc = 0.0;
  for (const auto& p : paths_to_w_) {
    law_.probabilities.push_back(p(v_) / total);
    acc += p(v_);
    cumulative_.push_back(acc / total);
  }
  cumulative_.back() = 1.0;
  law_.tail_mass = t_star == 0.0 ? 0.0 : plan.tail_bound;
}

WalkSample WalkSampler::sample(RandomStream& rng) const {
  const double u = rng.uniform();
  const int length =
      static_cast<int>(std::lower_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());

  WalkSample out;
  out.states.push_back({v_});
  int x = v_;
  for (int remaining = length; remaining > 0; --remaining) {
    const Eigen::VectorXd& next = paths_to_w_[static_cast<std::size_t>(remaining - 1)];
    const auto arcs = host_.out_arcs(static_cast<std::size_t>(x));
    double total = 0.0;
    for (const Arc& arc : arcs) total += arc.intensity * next(static_cast<Eigen::Index>(arc.to));
    double pick = rng.uniform() * total;
    int chosen = -1;
    for (const Arc& arc : arcs) {
      const double weight = arc.intensity * next(static_cast<Eigen::Index>(arc.to));
      if (weight <= 0.0) continue;
      chosen = static_cast<int>(arc.to);
      pick -= weight;
      if (pick < 0.0) break;
    }
    x = chosen;
    out.states.push_back({x});
    out.coordinates.push_back(0);
  }
  for (int i = 0; i < length; ++i) out.jump_times.push_back(rng.uniform() * t_star_);
  std::sort(out.jump_times.begin(), out.jump_times.end());
  return out;
}

JumpLengthLaw jump_length_law(const BaseGraph& g, const VertexId& v, const VertexId& w,
                              double t_star, double tail_tol) {
  return WalkSampler(g, v, w, t_star, tail_tol).law();
}

WalkSample sample_conditioned_walk(const BaseGraph& g, const VertexId& v, const VertexId& w,
                                   double t_star, RandomStream& rng) {
  return WalkSampler(g, v, w, t_star).sample(rng);
}

WalkSample sample_power_walk(const WalkSampler& base, int n, RandomStream& rng) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolated, "n must be >= 1");
  struct Event {
    double time;
    int coordinate;
    int to;
  };
  std::vector<Event> events;
  for (int k = 0; k < n; ++k) {
    const WalkSample walk = base.sample(rng);
    for (std::size_t i = 0; i < walk.jumps(); ++i) {
      events.push_back({walk.jump_times[i], k, walk.states[i + 1][0]});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.time < b.time || (a.time == b.time && a.coordinate < b.coordinate);
  });
  WalkSample out;
  WalkState state(static_cast<std::size_t>(n), base.source());
  out.states.push_back(state);
  for (const Event& e : events) {
    state[static_cast<std::size_t>(e.coordinate)] = e.to;
    out.states.push_back(state);
    out.jump_times.push_back(e.time);
    out.coordinates.push_back(e.coordinate);
  }
  return out;
}

WalkSample sample_power_walk(const BaseGraph& base, const VertexId& v, const VertexId& w, int n,
                             double t_star, RandomStream& rng) {
  return sample_power_walk(WalkSampler(base, v, w, t_star), n, rng);
}

int sample_unconditioned_endpoint(const BaseGraph& g, int start, double time, RandomStream& rng) {
  require_finite(g, "the unconditioned walk");
  const double rate = g.delta_out();
  int x = start;
  if (rate <= 0.0) return x;
  double clock = rng.exponential() / rate;
  while (clock <= time) {
    double pick = rng.uniform() * rate;
    int next = -1;
    for (const Arc& arc : g.out_arcs(static_cast<std::size_t>(x))) {
      pick -= arc.intensity;
      if (pick < 0.0) {
        next = static_cast<int>(arc.to);
        break;
      }
    }
    if (next < 0) return -1;
    x = next;
    clock += rng.exponential() / rate;
  }
  return x;
}

Estimate mc_f_estimate(const BaseGraph& g, const VertexId& v, const VertexId& w, double s,
                       double t, std::size_t samples, RandomStream& rng) {
  require_finite(g, "mc_f_estimate");
  const double t_star = critical_time(g, v, w, {.tol = 1e-12}).t_star;
  if (s < 0.0 || t < 0.0 || s + t > t_star * (1.0 + 1e-12)) {
    throw Error(ErrorKind::PreconditionViolated, "(s, t) outside the triangle s + t <= t*");
  }
  const WalkSampler sampler(g, v, w, t_star);
  const Eigen::MatrixXd m = exp_values(g.adjacency(), std::min(g.delta_out(), g.delta_in()), t);
  Running acc;
  for (std::size_t i = 0; i < samples; ++i) {
    const WalkSample walk = sampler.sample(rng);
    const int x = walk.state_at(s)[0];
    const int y = walk.state_at(s + t)[0];
    acc.add(t == 0.0 ? 0.0 : std::log(m(x, y)));
  }
  return acc.result();
}

Estimate entropy_estimate(const BaseGraph& g, const VertexId& v, const VertexId& w, double time,
                          std::size_t samples, RandomStream& rng) {
  require_finite(g, "entropy_estimate");
  const double t_star = critical_time(g, v, w, {.tol = 1e-12}).t_star;
  if (time < 0.0 || time > t_star) {
    throw Error(ErrorKind::PreconditionViolated, "time must lie in [0, t*]");
  }
  const WalkSampler sampler(g, v, w, t_star);
  const Eigen::MatrixXd a = g.adjacency();
  const auto vi = static_cast<Eigen::Index>(g.index_of(v));
  const auto wi = static_cast<Eigen::Index>(g.index_of(w));
  const Eigen::VectorXd before = exp_values(a, g.delta_out(), time).row(vi).transpose();
  const Eigen::VectorXd after = exp_values(a, g.delta_in(), t_star - time).col(wi);
  Running acc;
  for (std::size_t i = 0; i < samples; ++i) {
    const int x = sampler.sample(rng).state_at(time)[0];
    acc.add(-std::log(before(x) * after(x)));
  }
  return acc.result();
}

Estimate success_lower_bound(const BaseGraph& base, const VertexId& v, const VertexId& w, int n,
                             double t_star, std::size_t samples, RandomStream& rng) {
  require_finite(base, "success_lower_bound");
  const WalkSampler sampler(base, v, w, t_star);
  const Eigen::MatrixXd a = base.adjacency();
  const double rate = std::min(base.delta_out(), base.delta_in());
  Running acc;
  for (std::size_t k = 0; k < samples; ++k) {
    const WalkSample walk = sample_power_walk(sampler, n, rng);
    if (!walk.self_avoiding()) {
      acc.add(0.0);
      continue;
    }
    // Jump gaps are continuous and never repeat, so each pair gets its own
    // base-graph exponential.
    std::vector<double> times{0.0};
    times.insert(times.end(), walk.jump_times.begin(), walk.jump_times.end());
    double cost = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      for (std::size_t j = i + 1; j < times.size(); ++j) {
        const Eigen::MatrixXd m = exp_values(a, rate, times[j] - times[i]);
        double prod = 1.0;
        for (int c = 0; c < n; ++c) {
          prod *= m(walk.states[i][static_cast<std::size_t>(c)], walk.states[j][static_cast<std::size_t>(c)]);
        }
        cost += prod;
      }
    }
    acc.add(std::exp(-cost));
  }
  return acc.result();
}

double self_avoiding_mass(const BaseGraph& g, const VertexId& v, const VertexId& w, double t) {
  require_finite(g, "self_avoiding_mass");
  if (g.num_vertices() > 16) throw Error(ErrorKind::TooLarge, "enumeration needs <= 16 vertices");
  const auto target = g.index_of(w);
  std::vector<char> on_path(g.num_vertices(), 0);
  double total = 0.0;
  auto dfs = [&](auto&& self, std::size_t x, int length, double weight) -> void {
    if (x == target) {
      total += weight * std::pow(t, length) / std::tgamma(length + 1.0);
      return;
    }
    on_path[x] = 1;
    for (const Arc& arc : g.out_arcs(x)) {
      if (!on_path[arc.to]) self(self, arc.to, length + 1, weight * arc.intensity);
    }
    on_path[x] = 0;
  };
  dfs(dfs, g.index_of(v), 0, 1.0);
  return total;
}

}  // namespace fpp
