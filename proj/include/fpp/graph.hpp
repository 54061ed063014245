#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fpp {

using VertexId = std::string;

// One edge of a finite base graph. Undirected edges are stored once and
// expanded to both directions by the adjacency lists.
struct Edge {
  std::size_t tail = 0;
  std::size_t head = 0;
  bool oriented = false;
  double intensity = 1.0;
  int multiplicity = 1;
};

// A directed adjacency entry. `edge` is the index of the owning Edge for
// finite graphs (and an oracle-local label otherwise); parallel copies of
// an edge are folded into `intensity`.
struct Arc {
  std::size_t to = 0;
  double intensity = 1.0;
  std::uint32_t edge = 0;
  bool oriented = false;
};

struct OracleArc {
  std::int64_t to = 0;
  double intensity = 1.0;
  std::uint32_t edge = 0;
  bool oriented = false;
};

// Neighbor oracle for countably infinite graphs. Both functions must be pure.
struct NeighborOracle {
  std::string name;
  std::function<std::vector<OracleArc>(std::int64_t)> out;
  std::function<std::vector<OracleArc>(std::int64_t)> in;
};

struct EdgeSpec {
  VertexId from;
  VertexId to;
  bool directed = false;
  double intensity = 1.0;
  int multiplicity = 1;
};

// Declarative graph description, either an explicit finite graph or one of
// the built-in families.
struct GraphSpec {
  std::vector<VertexId> vertices;
  std::vector<EdgeSpec> edges;
  std::optional<std::string> builtin;  // "Z", "Zdir", "Kq", "path", "directed_edge", "calibrated_chain"
  // Builtin parameters: q for Kq, k for path, l and lambda for calibrated_chain.
  int q = 2;
  int k = 1;
  int l = 1;
  double lambda = 1.0;
};

class BaseGraph {
 public:
  enum class Kind { Finite, Oracle };

  // Validates and normalizes (multiplicity folded into intensity).
  static BaseGraph finite(std::vector<VertexId> vertices, std::vector<EdgeSpec> edges);
  static BaseGraph from_oracle(NeighborOracle oracle, double delta, double delta_out,
                               double delta_in);

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  const std::string& name() const { return name_; }

  // Declared or computed degree bounds. delta counts incident edges with
  // multiplicity; delta_out/delta_in are maximal total intensities.
  double delta() const { return delta_; }
  double delta_out() const { return delta_out_; }
  double delta_in() const { return delta_in_; }

  // Finite-graph accessors.
  std::size_t num_vertices() const { return names_.size(); }
  const std::vector<VertexId>& vertex_names() const { return names_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Arc> out_arcs(std::size_t x) const { return out_[x]; }
  std::span<const Arc> in_arcs(std::size_t x) const { return in_[x]; }
  std::size_t index_of(const VertexId& id) const;
  bool has_vertex(const VertexId& id) const;

  // Weighted adjacency matrix, A(x, y) = total intensity of arcs x -> y.
  Eigen::MatrixXd adjacency() const;

  // Oracle accessors.
  std::vector<OracleArc> oracle_out(std::int64_t x) const { return oracle_->out(x); }
  std::vector<OracleArc> oracle_in(std::int64_t x) const { return oracle_->in(x); }
  static std::int64_t parse_oracle_vertex(const VertexId& id);

  // Vertex ids as they would be written in a graph file.
  GraphSpec to_spec() const;
  void set_builtin_spec(GraphSpec spec) { builtin_spec_ = std::move(spec); }

 private:
  Kind kind_ = Kind::Finite;
  std::string name_;
  double delta_ = 0.0;
  double delta_out_ = 0.0;
  double delta_in_ = 0.0;

  std::vector<VertexId> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
  std::shared_ptr<const NeighborOracle> oracle_;
  std::optional<GraphSpec> builtin_spec_;
};

BaseGraph build_graph(const GraphSpec& spec);

BaseGraph cartesian_product(const BaseGraph& g1, const BaseGraph& g2);

// Induced subgraph on the union of the out-ball and in-ball of `center`.
BaseGraph ball(const BaseGraph& g, const VertexId& center, int radius);

// Induced subgraph on everything within `radius` undirected steps of any
// center. A superset of ball() used to host series computations.
BaseGraph neighborhood(const BaseGraph& g, const std::vector<VertexId>& centers, int radius);

// Returns true if `to` can be reached from `from` within max_steps steps.
bool reachable(const BaseGraph& g, const VertexId& from, const VertexId& to, int max_steps);

// Directed graph distance, or -1 when unreachable within max_steps.
int distance(const BaseGraph& g, const VertexId& from, const VertexId& to, int max_steps);

namespace builtin {

BaseGraph integer_chain();           // Z with nearest-neighbour undirected edges
BaseGraph directed_integer_chain();  // Z with edges x -> x + 1
BaseGraph complete(int q);           // K_q, vertices "0".."q-1"
BaseGraph path(int length);          // undirected path "0".."length"
BaseGraph directed_edge();           // "0" -> "1"
// Directed path "0" -> ... -> "l" with common intensity lambda.
BaseGraph calibrated_chain(int l, double lambda);
// lambda = (l!)^(1/l) / t_star, the intensity matching a critical time.
double calibrated_intensity(int l, double t_star);
BaseGraph paw();  // triangle {a, b, v} with pendant w on a

}  // namespace builtin

}  // namespace fpp
