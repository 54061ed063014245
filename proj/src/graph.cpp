#include "fpp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "fpp/errors.hpp"

namespace fpp {

namespace {

std::string int_id(std::int64_t x) { return std::to_string(x); }

}  // namespace

BaseGraph BaseGraph::finite(std::vector<VertexId> vertices, std::vector<EdgeSpec> edges) {
  BaseGraph g;
  g.kind_ = Kind::Finite;
  g.name_ = "finite";
  std::unordered_map<VertexId, std::size_t> index;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!index.emplace(vertices[i], i).second) {
      throw Error(ErrorKind::InvalidSpec, "duplicate vertex '" + vertices[i] + "'");
    }
  }
  g.names_ = std::move(vertices);
  g.out_.resize(g.names_.size());
  g.in_.resize(g.names_.size());

  std::vector<double> degree(g.names_.size(), 0.0);
  for (const EdgeSpec& e : edges) {
    auto tail = index.find(e.from);
    auto head = index.find(e.to);
    if (tail == index.end()) throw Error(ErrorKind::UnknownVertex, "'" + e.from + "'");
    if (head == index.end()) throw Error(ErrorKind::UnknownVertex, "'" + e.to + "'");
    if (tail->second == head->second) throw Error(ErrorKind::LoopEdge, "at '" + e.from + "'");
    if (!(e.intensity > 0.0) || !std::isfinite(e.intensity)) {
      throw Error(ErrorKind::NonpositiveIntensity, e.from + " -> " + e.to);
    }
    if (e.multiplicity < 1) {
      throw Error(ErrorKind::NonpositiveIntensity, "multiplicity of " + e.from + " -> " + e.to);
    }
    Edge edge{tail->second, head->second, e.directed, e.intensity * e.multiplicity, 1};
    auto id = static_cast<std::uint32_t>(g.edges_.size());
    g.edges_.push_back(edge);
    g.out_[edge.tail].push_back({edge.head, edge.intensity, id, edge.oriented});
    g.in_[edge.head].push_back({edge.tail, edge.intensity, id, edge.oriented});
    if (!edge.oriented) {
      g.out_[edge.head].push_back({edge.tail, edge.intensity, id, false});
      g.in_[edge.tail].push_back({edge.head, edge.intensity, id, false});
    }
    degree[edge.tail] += e.multiplicity;
    degree[edge.head] += e.multiplicity;
  }

  for (std::size_t x = 0; x < g.names_.size(); ++x) {
    double out = 0.0;
    double in = 0.0;
    for (const Arc& a : g.out_[x]) out += a.intensity;
    for (const Arc& a : g.in_[x]) in += a.intensity;
    g.delta_out_ = std::max(g.delta_out_, out);
    g.delta_in_ = std::max(g.delta_in_, in);
    g.delta_ = std::max(g.delta_, degree[x]);
  }
  return g;
}

BaseGraph BaseGraph::from_oracle(NeighborOracle oracle, double delta, double delta_out,
                                 double delta_in) {
  BaseGraph g;
  g.kind_ = Kind::Oracle;
  g.name_ = oracle.name;
  g.delta_ = delta;
  g.delta_out_ = delta_out;
  g.delta_in_ = delta_in;
  g.oracle_ = std::make_shared<const NeighborOracle>(std::move(oracle));
  return g;
}

std::size_t BaseGraph::index_of(const VertexId& id) const {
  if (!is_finite()) throw Error(ErrorKind::OracleGraphUnsupported, "index_of on " + name_);
  auto it = std::find(names_.begin(), names_.end(), id);
  if (it == names_.end()) throw Error(ErrorKind::UnknownVertex, "'" + id + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

bool BaseGraph::has_vertex(const VertexId& id) const {
  if (!is_finite()) {
    std::int64_t x = 0;
    auto res = std::from_chars(id.data(), id.data() + id.size(), x);
    return res.ec == std::errc() && res.ptr == id.data() + id.size();
  }
  return std::find(names_.begin(), names_.end(), id) != names_.end();
}

std::int64_t BaseGraph::parse_oracle_vertex(const VertexId& id) {
  std::int64_t x = 0;
  auto res = std::from_chars(id.data(), id.data() + id.size(), x);
  if (res.ec != std::errc() || res.ptr != id.data() + id.size()) {
    throw Error(ErrorKind::UnknownVertex, "'" + id + "' is not an integer vertex");
  }
  return x;
}

Eigen::MatrixXd BaseGraph::adjacency() const {
  if (!is_finite()) throw Error(ErrorKind::OracleGraphUnsupported, "adjacency of " + name_);
  const auto n = static_cast<Eigen::Index>(names_.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t x = 0; x < out_.size(); ++x) {
    for (const Arc& arc : out_[x]) {
      a(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(arc.to)) += arc.intensity;
    }
  }
  return a;
}

GraphSpec BaseGraph::to_spec() const {
  if (builtin_spec_) return *builtin_spec_;
  if (!is_finite()) throw Error(ErrorKind::OracleGraphUnsupported, "serializing " + name_);
  GraphSpec spec;
  spec.vertices = names_;
  for (const Edge& e : edges_) {
    spec.edges.push_back({names_[e.tail], names_[e.head], e.oriented, e.intensity, 1});
  }
  return spec;
}

BaseGraph build_graph(const GraphSpec& spec) {
  if (!spec.builtin) return BaseGraph::finite(spec.vertices, spec.edges);
  const std::string& b = *spec.builtin;
  if (b == "Z") return builtin::integer_chain();
  if (b == "Zdir") return builtin::directed_integer_chain();
  if (b == "Kq") return builtin::complete(spec.q);
  if (b == "path") return builtin::path(spec.k);
  if (b == "directed_edge") return builtin::directed_edge();
  if (b == "paw") return builtin::paw();
  if (b == "calibrated_chain") return builtin::calibrated_chain(spec.l, spec.lambda);
  throw Error(ErrorKind::InvalidSpec, "unknown builtin '" + b + "'");
}

BaseGraph cartesian_product(const BaseGraph& g1, const BaseGraph& g2) {
  if (!g1.is_finite() || !g2.is_finite()) {
    throw Error(ErrorKind::OracleGraphUnsupported, "cartesian_product needs finite factors");
  }
  const auto& n1 = g1.vertex_names();
  const auto& n2 = g2.vertex_names();
  auto pair_id = [&](std::size_t a, std::size_t b) { return "(" + n1[a] + "," + n2[b] + ")"; };

  std::vector<VertexId> vertices;
  vertices.reserve(n1.size() * n2.size());
  for (std::size_t a = 0; a < n1.size(); ++a) {
    for (std::size_t b = 0; b < n2.size(); ++b) vertices.push_back(pair_id(a, b));
  }
  std::vector<EdgeSpec> edges;
  for (const Edge& e : g1.edges()) {
    for (std::size_t b = 0; b < n2.size(); ++b) {
      edges.push_back({pair_id(e.tail, b), pair_id(e.head, b), e.oriented, e.intensity, 1});
    }
  }
  for (std::size_t a = 0; a < n1.size(); ++a) {
    for (const Edge& e : g2.edges()) {
      edges.push_back({pair_id(a, e.tail), pair_id(a, e.head), e.oriented, e.intensity, 1});
    }
  }
  return BaseGraph::finite(std::move(vertices), std::move(edges));
}

namespace {

// Generic BFS over vertex ids in either the finite or the oracle representation.
// `directions` selects out (1), in (2) or both (3) arcs.
std::set<VertexId> bfs(const BaseGraph& g, const std::vector<VertexId>& centers, int radius,
                       int directions) {
  std::set<VertexId> seen;
  std::deque<std::pair<VertexId, int>> queue;
  for (const auto& c : centers) {
    if (!g.has_vertex(c)) throw Error(ErrorKind::UnknownVertex, "'" + c + "'");
    if (seen.insert(c).second) queue.emplace_back(c, 0);
  }
  auto visit = [&](const VertexId& id, int d) {
    if (seen.insert(id).second) queue.emplace_back(id, d);
  };
  while (!queue.empty()) {
    auto [x, d] = queue.front();
    queue.pop_front();
    if (d >= radius) continue;
    if (g.is_finite()) {
      const std::size_t xi = g.index_of(x);
      if (directions & 1) {
        for (const Arc& a : g.out_arcs(xi)) visit(g.vertex_names()[a.to], d + 1);
      }
      if (directions & 2) {
        for (const Arc& a : g.in_arcs(xi)) visit(g.vertex_names()[a.to], d + 1);
      }
    } else {
      const std::int64_t xi = BaseGraph::parse_oracle_vertex(x);
      if (directions & 1) {
        for (const OracleArc& a : g.oracle_out(xi)) visit(int_id(a.to), d + 1);
      }
      if (directions & 2) {
        for (const OracleArc& a : g.oracle_in(xi)) visit(int_id(a.to), d + 1);
      }
    }
  }
  return seen;
}

BaseGraph induced(const BaseGraph& g, const std::set<VertexId>& keep) {
  std::vector<VertexId> vertices;
  if (g.is_finite()) {
    for (const auto& name : g.vertex_names()) {
      if (keep.count(name)) vertices.push_back(name);
    }
    std::vector<EdgeSpec> edges;
    for (const Edge& e : g.edges()) {
      const auto& t = g.vertex_names()[e.tail];
      const auto& h = g.vertex_names()[e.head];
      if (keep.count(t) && keep.count(h)) edges.push_back({t, h, e.oriented, e.intensity, 1});
    }
    return BaseGraph::finite(std::move(vertices), std::move(edges));
  }
  // Oracle: order vertices numerically and collect each edge once.
  std::vector<std::int64_t> ids;
  for (const auto& id : keep) ids.push_back(BaseGraph::parse_oracle_vertex(id));
  std::sort(ids.begin(), ids.end());
  for (auto x : ids) vertices.push_back(int_id(x));
  std::vector<EdgeSpec> edges;
  for (auto x : ids) {
    for (const OracleArc& a : g.oracle_out(x)) {
      const std::string head = int_id(a.to);
      if (!keep.count(head)) continue;
      // Undirected arcs show up from both ends; keep the one with the smaller tail.
      if (!a.oriented && a.to < x) continue;
      edges.push_back({int_id(x), head, a.oriented, a.intensity, 1});
    }
  }
  return BaseGraph::finite(std::move(vertices), std::move(edges));
}

}  // namespace

BaseGraph ball(const BaseGraph& g, const VertexId& center, int radius) {
  auto out = bfs(g, {center}, std::max(radius, 0), 1);
  auto in = bfs(g, {center}, std::max(radius, 0), 2);
  out.insert(in.begin(), in.end());
  return induced(g, out);
}

BaseGraph neighborhood(const BaseGraph& g, const std::vector<VertexId>& centers, int radius) {
  return induced(g, bfs(g, centers, std::max(radius, 0), 3));
}

int distance(const BaseGraph& g, const VertexId& from, const VertexId& to, int max_steps) {
  if (!g.has_vertex(to)) throw Error(ErrorKind::UnknownVertex, "'" + to + "'");
  if (from == to) return 0;
  std::set<VertexId> seen{from};
  std::vector<VertexId> frontier{from};
  if (!g.has_vertex(from)) throw Error(ErrorKind::UnknownVertex, "'" + from + "'");
  for (int d = 1; d <= max_steps && !frontier.empty(); ++d) {
    std::vector<VertexId> next;
    for (const auto& x : frontier) {
      std::vector<VertexId> heads;
      if (g.is_finite()) {
        for (const Arc& a : g.out_arcs(g.index_of(x))) heads.push_back(g.vertex_names()[a.to]);
      } else {
        for (const OracleArc& a : g.oracle_out(BaseGraph::parse_oracle_vertex(x))) {
          heads.push_back(int_id(a.to));
        }
      }
      for (auto& y : heads) {
        if (y == to) return d;
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  return -1;
}

bool reachable(const BaseGraph& g, const VertexId& from, const VertexId& to, int max_steps) {
  return distance(g, from, to, max_steps) >= 0;
}

namespace builtin {

BaseGraph integer_chain() {
  NeighborOracle o;
  o.name = "Z";
  o.out = [](std::int64_t x) {
    return std::vector<OracleArc>{{x - 1, 1.0, 0, false}, {x + 1, 1.0, 1, false}};
  };
  o.in = o.out;
  auto g = BaseGraph::from_oracle(std::move(o), 2.0, 2.0, 2.0);
  GraphSpec spec;
  spec.builtin = "Z";
  g.set_builtin_spec(spec);
  return g;
}

BaseGraph directed_integer_chain() {
  NeighborOracle o;
  o.name = "Zdir";
  o.out = [](std::int64_t x) { return std::vector<OracleArc>{{x + 1, 1.0, 0, true}}; };
  o.in = [](std::int64_t x) { return std::vector<OracleArc>{{x - 1, 1.0, 0, true}}; };
  auto g = BaseGraph::from_oracle(std::move(o), 2.0, 1.0, 1.0);
  GraphSpec spec;
  spec.builtin = "Zdir";
  g.set_builtin_spec(spec);
  return g;
}

BaseGraph complete(int q) {
  if (q < 2) throw Error(ErrorKind::InvalidSpec, "K_q needs q >= 2");
  std::vector<VertexId> vertices;
  for (int i = 0; i < q; ++i) vertices.push_back(std::to_string(i));
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) edges.push_back({vertices[i], vertices[j], false, 1.0, 1});
  }
  auto g = BaseGraph::finite(std::move(vertices), std::move(edges));
  GraphSpec spec;
  spec.builtin = "Kq";
  spec.q = q;
  g.set_builtin_spec(spec);
  return g;
}

BaseGraph path(int length) {
  if (length < 1) throw Error(ErrorKind::InvalidSpec, "path length must be >= 1");
  std::vector<VertexId> vertices;
  for (int i = 0; i <= length; ++i) vertices.push_back(std::to_string(i));
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < length; ++i) edges.push_back({vertices[i], vertices[i + 1], false, 1.0, 1});
  auto g = BaseGraph::finite(std::move(vertices), std::move(edges));
  GraphSpec spec;
  spec.builtin = "path";
  spec.k = length;
  g.set_builtin_spec(spec);
  return g;
}

BaseGraph directed_edge() {
  auto g = BaseGraph::finite({"0", "1"}, {{"0", "1", true, 1.0, 1}});
  GraphSpec spec;
  spec.builtin = "directed_edge";
  g.set_builtin_spec(spec);
  return g;
}

BaseGraph calibrated_chain(int l, double lambda) {
  if (l < 1) throw Error(ErrorKind::InvalidSpec, "calibrated chain needs l >= 1");
  std::vector<VertexId> vertices;
  for (int i = 0; i <= l; ++i) vertices.push_back(std::to_string(i));
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < l; ++i) edges.push_back({vertices[i], vertices[i + 1], true, lambda, 1});
  auto g = BaseGraph::finite(std::move(vertices), std::move(edges));
  GraphSpec spec;
  spec.builtin = "calibrated_chain";
  spec.l = l;
  spec.lambda = lambda;
  g.set_builtin_spec(spec);
  return g;
}

double calibrated_intensity(int l, double t_star) {
  return std::exp(std::lgamma(l + 1.0) / l) / t_star;
}

BaseGraph paw() {
  auto g = BaseGraph::finite({"a", "b", "v", "w"}, {{"a", "b", false, 1.0, 1},
                                                   {"b", "v", false, 1.0, 1},
                                                   {"v", "a", false, 1.0, 1},
                                                   {"a", "w", false, 1.0, 1}});
  GraphSpec spec;
  spec.builtin = "paw";
  g.set_builtin_spec(spec);
  return g;
}

}  // namespace builtin

}  // namespace fpp
