#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "fpp/graph.hpp"
#include "fpp/rng.hpp"

namespace fpp {

// A state is one base-graph vertex index per coordinate (a single entry for
// walks on the base graph itself). Indices refer to WalkSampler::host().
using WalkState = std::vector<int>;

struct WalkSample {
  std::vector<WalkState> states;     // L + 1 entries, states[0] = v, states[L] = w
  std::vector<double> jump_times;    // L entries, increasing in (0, t*)
  std::vector<int> coordinates;      // coordinate changed at each jump (power walks)

  std::size_t jumps() const { return jump_times.size(); }
  const WalkState& state_at(double time) const;
  bool self_avoiding() const;
};

struct JumpLengthLaw {
  std::vector<double> probabilities;  // index = length
  double tail_mass = 0.0;             // bound on P(L > max_length)
  int max_length() const { return static_cast<int>(probabilities.size()) - 1; }
};

struct Estimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

// Exact sampler for the walk conditioned to sit at w at time t*. Oracle
// graphs are replaced by a ball holding every path of length <= max_length.
class WalkSampler {
 public:
  WalkSampler(const BaseGraph& g, const VertexId& v, const VertexId& w, double t_star,
              double tail_tol = 1e-9);

  const BaseGraph& host() const { return host_; }
  const JumpLengthLaw& law() const { return law_; }
  double t_star() const { return t_star_; }
  int source() const { return v_; }
  int target() const { return w_; }

  WalkSample sample(RandomStream& rng) const;

 private:
  BaseGraph host_;
  int v_ = 0;
  int w_ = 0;
  double t_star_ = 0.0;
  JumpLengthLaw law_;
  std::vector<double> cumulative_;             // cumulative law of L
  std::vector<Eigen::VectorXd> paths_to_w_;    // paths_to_w_[j](x) = N_j(x, w)
};

JumpLengthLaw jump_length_law(const BaseGraph& g, const VertexId& v, const VertexId& w,
                              double t_star, double tail_tol = 1e-9);

WalkSample sample_conditioned_walk(const BaseGraph& g, const VertexId& v, const VertexId& w,
                                   double t_star, RandomStream& rng);

// n independent coordinate walks merged by jump time.
WalkSample sample_power_walk(const WalkSampler& base, int n, RandomStream& rng);
WalkSample sample_power_walk(const BaseGraph& base, const VertexId& v, const VertexId& w, int n,
                             double t_star, RandomStream& rng);

// Walk at rate delta_out that follows an arc with probability
// intensity / delta_out and otherwise fails. Returns the final vertex, or -1
// once failed.
int sample_unconditioned_endpoint(const BaseGraph& g, int start, double time, RandomStream& rng);

// Mean of ln m(X_s, X_{s+t}, t) over conditioned walks.
Estimate mc_f_estimate(const BaseGraph& g, const VertexId& v, const VertexId& w, double s,
                       double t, std::size_t samples, RandomStream& rng);

// Mean of -ln P(X_time = x) at the sampled position, an unbiased estimate of
// the entropy of X_time.
Estimate entropy_estimate(const BaseGraph& g, const VertexId& v, const VertexId& w, double time,
                          std::size_t samples, RandomStream& rng);

// Mean of 1{self-avoiding} exp(-C(X)) for the merged walk on the n-th power.
Estimate success_lower_bound(const BaseGraph& base, const VertexId& v, const VertexId& w, int n,
                             double t_star, std::size_t samples, RandomStream& rng);

// Exact sum over self-avoiding paths of (product of intensities) t^|path| / |path|!
// on a finite graph (depth-first enumeration).
double self_avoiding_mass(const BaseGraph& g, const VertexId& v, const VertexId& w, double t);

}  // namespace fpp
