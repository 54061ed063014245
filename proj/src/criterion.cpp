#include "fpp/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "fpp/critical.hpp"
#include "fpp/errors.hpp"

namespace fpp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kInvE = std::exp(-1.0);

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

Interval nonneg(const CertifiedValue& c) {
  return {std::max(0.0, c.lower()), std::max(0.0, c.upper())};
}

// Range of x ln x over [lo, hi] (convex, minimum -1/e at 1/e).
Interval xlogx_range(Interval m) {
  const double a = xlogx(m.lo);
  const double b = xlogx(m.hi);
  const double lo = (m.lo <= kInvE && kInvE <= m.hi) ? -kInvE : std::min(a, b);
  return {lo, std::max(a, b)};
}

// [a] * [phi] * [b] with a, b nonnegative.
Interval product(Interval a, Interval phi, Interval b) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : {a.lo, a.hi}) {
    for (double p : {phi.lo, phi.hi}) {
      for (double y : {b.lo, b.hi}) {
        const double v = x * p * y;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  return {lo, hi};
}

// Neumaier running sum.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  double abs_sum = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
    abs_sum += std::abs(x);
  }
  double value() const { return sum + comp; }
};

std::vector<Eigen::Index> indices_of(const BaseGraph& host, const std::set<VertexId>& names) {
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < host.num_vertices(); ++i) {
    if (names.count(host.vertex_names()[i])) out.push_back(static_cast<Eigen::Index>(i));
  }
  return out;
}

// sum_d delta^d * min(mmax, e^x x^d / d!)^p, bounding sum_y m(x,y,t)^p over
// any row or column when x = rate * t.
double shell_sum(double delta, double x, double mmax, double p) {
  double total = 0.0;
  double log_term = x;  // log(e^x x^d / d!) at d = 0
  for (int d = 0; d < 100000; ++d) {
    if (d > 0) log_term += std::log(x) - std::log(static_cast<double>(d));
    const double m = std::min(mmax, std::exp(log_term));
    const double term = std::pow(delta, d) * std::pow(m, p);
    total += term;
    if (x == 0.0 && d > 0) break;
    if (d > x && term < 1e-30 * total) break;
  }
  return total;
}

}  // namespace

struct CriterionEvaluator::Pieces {
  CertifiedMatrix row;    // 1 x n, m(v, ., s)
  CertifiedMatrix block;  // |region| x n, m(x, ., t)
  CertifiedMatrix col;    // 1 x n, m(., w, u)
  double s = 0.0;
  double t = 0.0;
  double u = 0.0;
};

CriterionEvaluator::CriterionEvaluator(const BaseGraph& g, const VertexId& v,
                                       const VertexId& w, double t_star, double tol,
                                       double t_star_err)
    : host_(g), t_star_(t_star), t_star_err_(t_star_err), tol_(tol) {
  if (!(t_star >= 0.0) || !std::isfinite(t_star)) {
    throw Error(ErrorKind::PreconditionViolated, "t* must be finite and nonnegative");
  }
  if (!g.has_vertex(v)) throw Error(ErrorKind::UnknownVertex, "'" + v + "'");
  if (!g.has_vertex(w)) throw Error(ErrorKind::UnknownVertex, "'" + w + "'");
  delta_ = g.delta();
  rate_out_ = g.delta_out();
  rate_in_ = g.delta_in();
  oracle_ = !g.is_finite();
  if (oracle_) {
    const double rate = std::max(rate_out_, rate_in_);
    region_radius_ = plan_series(rate, t_star, 1e-3 * tol).order;
    const int order = plan_series(rate, t_star, 0.5 * tol).order + 1;
    host_ = neighborhood(g, {v, w}, region_radius_ + order);
    std::set<VertexId> region;
    for (const auto& c : {v, w}) {
      const BaseGraph b = ball(g, c, region_radius_);
      region.insert(b.vertex_names().begin(), b.vertex_names().end());
    }
    region_ = indices_of(host_, region);
  } else {
    region_.resize(g.num_vertices());
    std::iota(region_.begin(), region_.end(), Eigen::Index{0});
  }
  adjacency_ = host_.adjacency();
  v_ = static_cast<Eigen::Index>(host_.index_of(v));
  w_ = static_cast<Eigen::Index>(host_.index_of(w));
}

CriterionEvaluator::Pieces CriterionEvaluator::pieces(double s, double t, double u) const {
  const Eigen::SparseMatrix<double> a = adjacency_.sparseView();
  const Eigen::SparseMatrix<double> at = adjacency_.transpose().sparseView();
  const Eigen::Index v[] = {v_};
  const Eigen::Index w[] = {w_};
  Pieces p;
  p.s = s;
  p.t = t;
  p.u = u;
  p.row = exp_rows(a, v, s, rate_out_, tol_);
  p.block = exp_rows(a, region_, t, std::min(rate_out_, rate_in_), tol_);
  p.col = exp_rows(at, w, u, rate_in_, tol_);
  return p;
}

CertifiedValue CriterionEvaluator::f(double s, double t) const {
  if (s < 0.0 || t < 0.0 || s + t > t_star_ * (1.0 + 1e-12) + 1e-15) {
    throw Error(ErrorKind::PreconditionViolated, "(s, t) outside the triangle s + t <= t*");
  }
  const double u = std::max(0.0, t_star_ - s - t);
  const Pieces p = pieces(s, t, u);

  Accumulator acc;
  double err = 0.0;
  double abs_phi_mass = 0.0;  // sum a |phi| for the t* sensitivity term
  for (std::size_t i = 0; i < region_.size(); ++i) {
    const Eigen::Index x = region_[i];
    const CertifiedValue ax = p.row.at(0, x);
    if (ax.upper() <= 0.0) continue;
    for (Eigen::Index y : region_) {
      const CertifiedValue m = p.block.at(static_cast<Eigen::Index>(i), y);
      const CertifiedValue by = p.col.at(0, y);
      if (by.upper() <= 0.0) continue;
      // m within its error of zero: the term is clamped to 0 (0 ln 0 = 0)
      // and the whole possible range goes into the error.
      const bool clamp = m.value <= m.abs_err;
      const double value = clamp ? 0.0 : ax.value * xlogx(m.value) * by.value;
      const Interval range = product(nonneg(ax), xlogx_range(nonneg(m)), nonneg(by));
      err += std::max(range.hi - value, value - range.lo);
      acc.add(value);
      const Interval phi = xlogx_range(nonneg(m));
      abs_phi_mass += ax.upper() * std::max(std::abs(phi.lo), std::abs(phi.hi));
    }
  }
  // Products and logs: a few ulps per term.
  err += 8.0 * kEps * acc.abs_sum;

  if (oracle_) {
    const double tail_s = exp_series_tail(rate_out_ * s, region_radius_);
    const double tail_u = exp_series_tail(rate_in_ * u, region_radius_);
    const double lower = kInvE * (tail_s * std::exp(rate_in_ * u) + std::exp(rate_out_ * s) * tail_u);
    const double log_mmax = std::min(rate_out_, rate_in_) * t;
    const double upper = log_mmax * (tail_s * std::exp(rate_in_ * (t + u)) +
                                     std::exp(rate_out_ * (s + t)) * tail_u);
    err += std::max(lower, upper);
  }
  if (t_star_err_ > 0.0) {
    // d/du m(y, w, u) <= delta_out * e^{delta_in u}.
    err += t_star_err_ * rate_out_ * std::exp(rate_in_ * (u + t_star_err_)) * abs_phi_mass;
  }
  return {acc.value(), err};
}

CertifiedValue CriterionEvaluator::tilted(double s, double t, double u, double alpha) const {
  if (s < 0.0 || t < 0.0 || u < 0.0) {
    throw Error(ErrorKind::PreconditionViolated, "s, t, u must be nonnegative");
  }
  if (!(alpha > -1.0)) throw Error(ErrorKind::PreconditionViolated, "alpha must exceed -1");
  const Pieces p = pieces(s, t, u);
  const double power = 1.0 + alpha;
  auto psi = [power](double m) { return m > 0.0 ? std::pow(m, power) : 0.0; };

  Accumulator acc;
  double err = 0.0;
  for (std::size_t i = 0; i < region_.size(); ++i) {
    const Eigen::Index x = region_[i];
    const CertifiedValue ax = p.row.at(0, x);
    if (ax.upper() <= 0.0) continue;
    for (Eigen::Index y : region_) {
      const CertifiedValue m = p.block.at(static_cast<Eigen::Index>(i), y);
      const CertifiedValue by = p.col.at(0, y);
      if (by.upper() <= 0.0) continue;
      const double value = ax.value * psi(m.value) * by.value;
      const Interval mi = nonneg(m);
      const Interval range = product(nonneg(ax), {psi(mi.lo), psi(mi.hi)}, nonneg(by));
      err += std::max(range.hi - value, value - range.lo);
      acc.add(value);
    }
  }
  err += 8.0 * kEps * acc.abs_sum;

  if (oracle_) {
    const double tail_s = exp_series_tail(rate_out_ * s, region_radius_);
    const double tail_u = exp_series_tail(rate_in_ * u, region_radius_);
    const double rate = std::max(rate_out_, rate_in_);
    const double mmax = std::exp(std::min(rate_out_, rate_in_) * t);
    const double shell = shell_sum(delta_, rate * t, mmax, power);
    err += tail_s * std::exp(rate_in_ * u) * shell + std::exp(rate_out_ * s) * shell * tail_u;
  }
  return {acc.value(), err};
}

CertifiedValue f_eval(const BaseGraph& g, const VertexId& v, const VertexId& w, double t_star,
                      double s, double t, double tol) {
  return CriterionEvaluator(g, v, w, t_star, tol).f(s, t);
}

CertifiedValue tilted_sum(const BaseGraph& g, const VertexId& v, const VertexId& w,
                          double t_star, double s, double t, double u, double alpha,
                          double tol) {
  return CriterionEvaluator(g, v, w, t_star, tol).tilted(s, t, u, alpha);
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Positive: return "POSITIVE";
    case Classification::Nonpositive: return "NONPOSITIVE";
    case Classification::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

namespace {

struct Point {
  double s;
  double t;
  bool operator<(const Point& o) const { return s < o.s || (s == o.s && t < o.t); }
};

struct Cell {
  Point a, b, c;
};

Point midpoint(Point p, Point q) { return {0.5 * (p.s + q.s), 0.5 * (p.t + q.t)}; }

}  // namespace

CriterionReport sup_f_classify(const BaseGraph& g, const VertexId& v, const VertexId& w,
                               const ClassifyOptions& options) {
  if (options.grid < 1) throw Error(ErrorKind::PreconditionViolated, "grid must be >= 1");
  CriterionReport report;
  const CriticalTime ct = critical_time(g, v, w, {.tol = 1e-12});
  report.t_star = ct.t_star;
  report.t_star_err = ct.abs_err;
  const double ts = ct.t_star;
  const CriterionEvaluator eval(g, v, w, ts, options.tol, ct.abs_err);

  std::map<Point, CertifiedValue> values;
  auto evaluate = [&](Point p) -> const CertifiedValue& {
    auto it = values.find(p);
    if (it != values.end()) return it->second;
    return values.emplace(p, eval.f(p.s, std::min(p.t, ts - p.s))).first->second;
  };

  // Coarse lattice over the triangle.
  const int n = options.grid;
  auto lattice = [&](int i, int j) {
    if (i + j == n) return Point{ts * i / n, ts - ts * i / n};
    return Point{ts * i / n, ts * j / n};
  };
  std::vector<Cell> leaves;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) evaluate(lattice(i, j));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; i + j < n; ++j) {
      leaves.push_back({lattice(i, j), lattice(i + 1, j), lattice(i, j + 1)});
      if (i + j < n - 1) leaves.push_back({lattice(i + 1, j), lattice(i + 1, j + 1), lattice(i, j + 1)});
    }
  }
  report.grid_stats.coarse_points = static_cast<int>(values.size());

  auto best_point = [&]() {
    // Deterministic: first maximum in (s, t) order.
    auto best = values.begin();
    for (auto it = values.begin(); it != values.end(); ++it) {
      if (it->second.value > best->second.value) best = it;
    }
    return best;
  };
  auto cell_max = [&](const Cell& c) {
    return std::max({evaluate(c.a).value, evaluate(c.b).value, evaluate(c.c).value});
  };

  for (int depth = 1; depth <= options.max_depth; ++depth) {
    const Point arg = best_point()->first;
    std::vector<std::size_t> chosen;
    std::vector<std::size_t> boundary;
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      const Cell& c = leaves[k];
      const bool holds_max = !(c.a < arg || arg < c.a) || !(c.b < arg || arg < c.b) ||
                             !(c.c < arg || arg < c.c);
      if (holds_max) {
        chosen.push_back(k);
      } else if (std::max({c.a.t, c.b.t, c.c.t}) > 0.9 * ts) {
        boundary.push_back(k);
      }
    }
    std::stable_sort(boundary.begin(), boundary.end(), [&](std::size_t x, std::size_t y) {
      return cell_max(leaves[x]) > cell_max(leaves[y]);
    });
    const auto keep = std::min<std::size_t>(boundary.size(), static_cast<std::size_t>(options.boundary_cells));
    chosen.insert(chosen.end(), boundary.begin(), boundary.begin() + static_cast<long>(keep));
    std::sort(chosen.begin(), chosen.end());

    std::vector<Cell> next;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      if (pos < chosen.size() && chosen[pos] == k) {
        ++pos;
        const Cell& c = leaves[k];
        const Point ab = midpoint(c.a, c.b), bc = midpoint(c.b, c.c), ca = midpoint(c.c, c.a);
        for (Point p : {ab, bc, ca}) evaluate(p);
        next.push_back({c.a, ab, ca});
        next.push_back({ab, c.b, bc});
        next.push_back({ca, bc, c.c});
        next.push_back({ab, bc, ca});
      } else {
        next.push_back(leaves[k]);
      }
    }
    leaves = std::move(next);
    report.grid_stats.depth_reached = depth;
  }
  report.grid_stats.refined_points =
      static_cast<int>(values.size()) - report.grid_stats.coarse_points;

  const auto best = best_point();
  report.sup_value = best->second.value;
  report.sup_err = best->second.abs_err;
  report.argmax_s = best->first.s;
  report.argmax_t = std::min(best->first.t, ts - best->first.s);
  report.max_upper = -std::numeric_limits<double>::infinity();
  for (const auto& [p, val] : values) report.max_upper = std::max(report.max_upper, val.upper());

  if (report.sup_value - report.sup_err > options.decision_eps) {
    report.classification = Classification::Positive;
  } else if (report.max_upper <= options.decision_eps) {
    report.classification = Classification::Nonpositive;
  } else {
    report.classification = Classification::Undecided;
  }
  return report;
}

std::vector<double> default_alpha_grid() {
  return {0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 5e-4, 2e-4, 1e-4};
}

MarginCertificate not_sharp_margin(const BaseGraph& g, const VertexId& v, const VertexId& w,
                                   const CriterionReport& report,
                                   const std::vector<double>& alpha_grid, double tol) {
  if (report.classification != Classification::Positive) {
    throw Error(ErrorKind::PreconditionViolated, "margin needs a POSITIVE criterion report");
  }
  const double s = report.argmax_s;
  const double t = report.argmax_t;
  const double u0 = std::max(0.0, report.t_star - s - t);
  const CriterionEvaluator eval(g, v, w, report.t_star, tol);

  std::optional<MarginCertificate> best;
  for (double alpha : alpha_grid) {
    if (!(alpha > 0.0 && alpha < 1.0)) continue;
    auto below_one = [&](double c) { return eval.tilted(s, t, u0 + c, -alpha).upper() < 1.0; };
    if (!below_one(0.0)) continue;
    // The tilted sum increases with u; bracket the crossing and bisect.
    double lo = 0.0;
    double hi = 1e-9;
    while (below_one(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 100.0 * (report.t_star + 1.0)) break;
    }
    for (int it = 0; it < 60 && hi - lo > 1e-3 * lo + 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (below_one(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (lo <= 0.0) continue;
    if (!best || lo > best->c) {
      const CertifiedValue at = eval.tilted(s, t, u0 + lo, -alpha);
      best = MarginCertificate{s, t, alpha, lo, at.value, at.abs_err};
    }
  }
  if (!best) throw Error(ErrorKind::NoMargin, "no alpha in the grid certifies a sum below one");
  return *best;
}

std::vector<FGridRow> f_grid(const BaseGraph& g, const VertexId& v, const VertexId& w,
                             double t_star, int grid, double tol) {
  if (grid < 1) throw Error(ErrorKind::PreconditionViolated, "grid must be >= 1");
  const CriterionEvaluator eval(g, v, w, t_star, tol);
  std::vector<FGridRow> rows;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; i + j <= grid; ++j) {
      const double s = t_star * i / grid;
      const double t = (i + j == grid) ? t_star - s : t_star * j / grid;
      const CertifiedValue val = eval.f(s, t);
      rows.push_back({s, t, val.value, val.abs_err});
    }
  }
  return rows;
}

std::vector<std::vector<std::size_t>> automorphisms(const BaseGraph& g, std::size_t max_vertices) {
  if (!g.is_finite()) throw Error(ErrorKind::OracleGraphUnsupported, "automorphisms of " + g.name());
  const std::size_t n = g.num_vertices();
  if (n > max_vertices) {
    throw Error(ErrorKind::TooLarge, std::to_string(n) + " vertices > " + std::to_string(max_vertices));
  }
  const Eigen::MatrixXd a = g.adjacency();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> result;
  do {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) {
      for (std::size_t y = 0; y < n && ok; ++y) {
        ok = a(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) ==
             a(static_cast<Eigen::Index>(perm[x]), static_cast<Eigen::Index>(perm[y]));
      }
    }
    if (ok) result.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return result;
}

std::optional<std::map<VertexId, VertexId>> symmetry_condition(const BaseGraph& g,
                                                               const VertexId& v,
                                                               const VertexId& w,
                                                               std::size_t max_vertices) {
  const auto autos = automorphisms(g, max_vertices);
  const std::size_t n = g.num_vertices();
  const std::size_t vi = g.index_of(v);
  const std::size_t wi = g.index_of(w);
  // related[((a n + b) n + c) n + d]: some automorphism maps (a, b) to (c, d).
  std::vector<char> related(n * n * n * n, 0);
  for (const auto& phi : autos) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) related[((a * n + b) * n + phi[a]) * n + phi[b]] = 1;
    }
  }
  auto rel = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return related[((a * n + b) * n + c) * n + d] != 0;
  };

  std::vector<std::vector<std::size_t>> allowed(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (rel(vi, x, y, wi) && rel(x, wi, vi, y)) allowed[x].push_back(y);
    }
  }
  std::vector<std::size_t> sigma(n);
  std::vector<char> used(n, 0);
  auto search = [&](auto&& self, std::size_t x) -> bool {
    if (x == n) return true;
    for (std::size_t y : allowed[x]) {
      if (used[y]) continue;
      used[y] = 1;
      sigma[x] = y;
      if (self(self, x + 1)) return true;
      used[y] = 0;
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  std::map<VertexId, VertexId> out;
  for (std::size_t x = 0; x < n; ++x) out[g.vertex_names()[x]] = g.vertex_names()[sigma[x]];
  return out;
}

}  // namespace fpp
