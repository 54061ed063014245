#include "fpp/genfun.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <limits>

#include "fpp/errors.hpp"

namespace fpp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Neumaier compensated accumulation, entrywise.
template <typename Derived>
class CompensatedSum {
 public:
  explicit CompensatedSum(const Derived& init)
      : sum_(init.array()), comp_(Derived::Zero(init.rows(), init.cols()).array()) {}

  template <typename Other>
  void add(const Other& term) {
    auto t = (sum_ + term.array()).eval();
    comp_ += (sum_.abs() >= term.array().abs())
                 .select((sum_ - t) + term.array(), (term.array() - t) + sum_);
    sum_ = t;
  }

  Derived result() const { return (sum_ + comp_).matrix(); }

 private:
  Eigen::Array<double, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> sum_;
  Eigen::Array<double, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> comp_;
};

// Largest number of nonzeros in any row or column; products with zeros are
// exact, so this is the effective dot-product length.
Eigen::Index max_nonzeros(const Eigen::MatrixXd& a) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    best = std::max<Eigen::Index>(best, (a.row(i).array() != 0.0).count());
    best = std::max<Eigen::Index>(best, (a.col(i).array() != 0.0).count());
  }
  return best;
}

// Relative rounding bound for an order-N series of nonnegative terms:
// term j carries at most j (k + 2) eps relative error, the compensated sum
// adds a few eps.
double relative_rounding(const Eigen::MatrixXd& a, int order) {
  const double k = static_cast<double>(max_nonzeros(a));
  return 1.01 * ((order + 1) * (k + 2.0) + 4.0) * kEps;
}

void check_nonnegative(const Eigen::MatrixXd& a, double t) {
  if (t < 0.0) throw Error(ErrorKind::PreconditionViolated, "t must be nonnegative");
  if ((a.array() < 0.0).any()) {
    throw Error(ErrorKind::PreconditionViolated, "series needs a nonnegative matrix");
  }
}

}  // namespace

double exp_series_tail(double x, int order) {
  if (x <= 0.0) return 0.0;
  const double log_bound = (order + 1) * std::log(x) - std::lgamma(order + 2.0) + x;
  return std::exp(log_bound);
}

SeriesPlan plan_series(double rate, double t, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::PreconditionViolated, "tol must be positive");
  if (t < 0.0) throw Error(ErrorKind::PreconditionViolated, "t must be nonnegative");
  const double x = rate * t;
  for (int order = 0; order <= kMaxSeriesOrder; ++order) {
    const double tail = exp_series_tail(x, order);
    if (tail <= tol) return {order, tail};
  }
  throw Error(ErrorKind::TolUnreachable,
              "series order exceeds " + std::to_string(kMaxSeriesOrder) + " at rate*t = " +
                  std::to_string(x));
}

CertifiedMatrix exp_matrix(const Eigen::MatrixXd& a, double t, double rate, double tol) {
  check_nonnegative(a, t);
  const Eigen::Index n = a.rows();
  const SeriesPlan plan = plan_series(rate, t, tol);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  CompensatedSum<Eigen::MatrixXd> sum(term);
  for (int j = 1; j <= plan.order; ++j) {
    term = (term * a) * (t / j);
    sum.add(term);
  }
  return {sum.result(), plan.tail_bound, relative_rounding(a, plan.order), plan.order};
}

CertifiedMatrix exp_rows(const Eigen::SparseMatrix<double>& a, std::span<const Eigen::Index> rows,
                         double t, double rate, double tol) {
  if (t < 0.0) throw Error(ErrorKind::PreconditionViolated, "t must be nonnegative");
  const Eigen::Index n = a.rows();
  Eigen::Index k = 0;
  Eigen::VectorXi row_counts = Eigen::VectorXi::Zero(n);
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    Eigen::Index col_count = 0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it) {
      if (it.value() < 0.0) {
        throw Error(ErrorKind::PreconditionViolated, "series needs a nonnegative matrix");
      }
      ++col_count;
      ++row_counts(it.row());
    }
    k = std::max(k, col_count);
  }
  if (n > 0) k = std::max<Eigen::Index>(k, row_counts.maxCoeff());

  const SeriesPlan plan = plan_series(rate, t, tol);
  Eigen::MatrixXd term = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r) term(static_cast<Eigen::Index>(r), rows[r]) = 1.0;
  CompensatedSum<Eigen::MatrixXd> sum(term);
  for (int j = 1; j <= plan.order; ++j) {
    term = (term * a) * (t / j);
    sum.add(term);
  }
  const double rel = 1.01 * ((plan.order + 1) * (static_cast<double>(k) + 2.0) + 4.0) * kEps;
  return {sum.result(), plan.tail_bound, rel, plan.order};
}

CertifiedVector exp_row(const Eigen::MatrixXd& a, Eigen::Index v, double t, double rate,
                        double tol) {
  check_nonnegative(a, t);
  const Eigen::Index n = a.rows();
  const SeriesPlan plan = plan_series(rate, t, tol);
  Eigen::RowVectorXd term = Eigen::RowVectorXd::Unit(n, v);
  CompensatedSum<Eigen::RowVectorXd> sum(term);
  for (int j = 1; j <= plan.order; ++j) {
    term = (term * a) * (t / j);
    sum.add(term);
  }
  return {sum.result().transpose(), plan.tail_bound, relative_rounding(a, plan.order),
          plan.order};
}

CertifiedVector exp_col(const Eigen::MatrixXd& a, Eigen::Index w, double t, double rate,
                        double tol) {
  check_nonnegative(a, t);
  const Eigen::Index n = a.rows();
  const SeriesPlan plan = plan_series(rate, t, tol);
  Eigen::VectorXd term = Eigen::VectorXd::Unit(n, w);
  CompensatedSum<Eigen::VectorXd> sum(term);
  for (int j = 1; j <= plan.order; ++j) {
    term = (a * term) * (t / j);
    sum.add(term);
  }
  return {sum.result(), plan.tail_bound, relative_rounding(a, plan.order), plan.order};
}

CertifiedValue m_eval(const BaseGraph& g, const VertexId& v, const VertexId& w, double t,
                      double tol) {
  if (t < 0.0) throw Error(ErrorKind::PreconditionViolated, "t must be nonnegative");
  if (!(tol > 0.0)) throw Error(ErrorKind::PreconditionViolated, "tol must be positive");
  if (!g.has_vertex(v)) throw Error(ErrorKind::UnknownVertex, "'" + v + "'");
  if (!g.has_vertex(w)) throw Error(ErrorKind::UnknownVertex, "'" + w + "'");
  if (t == 0.0) return {v == w ? 1.0 : 0.0, 0.0};

  const double rate = std::min(g.delta_out(), g.delta_in());
  const double tail_tol = 0.5 * tol;
  const SeriesPlan plan = plan_series(rate, t, tail_tol);
  // Every path of length <= order from v stays inside this host.
  const BaseGraph host = g.is_finite() ? g : ball(g, v, plan.order);
  if (!host.has_vertex(w)) return {0.0, plan.tail_bound};

  const Eigen::MatrixXd a = host.adjacency();
  const CertifiedVector row =
      exp_row(a, static_cast<Eigen::Index>(host.index_of(v)), t, rate, tail_tol);
  const CertifiedValue result = row.at(static_cast<Eigen::Index>(host.index_of(w)));
  if (result.abs_err > tol) {
    throw Error(ErrorKind::TolUnreachable,
                "rounding floor " + format_double(result.abs_err) + " exceeds tol");
  }
  return result;
}

RowResult m_row(const BaseGraph& g, const VertexId& v, double t, double tol,
                Direction direction) {
  if (t < 0.0) throw Error(ErrorKind::PreconditionViolated, "t must be nonnegative");
  if (!g.has_vertex(v)) throw Error(ErrorKind::UnknownVertex, "'" + v + "'");
  const double rate = direction == Direction::Out ? g.delta_out() : g.delta_in();
  const double tail_tol = 0.5 * tol;
  const SeriesPlan plan = plan_series(rate, t, tail_tol);

  RowResult result;
  BaseGraph host = g;
  if (!g.is_finite()) {
    host = ball(g, v, plan.order);
    result.ball_radius = plan.order;
  }
  result.ball_size = host.num_vertices();
  const Eigen::MatrixXd a = host.adjacency();
  const auto vi = static_cast<Eigen::Index>(host.index_of(v));
  const CertifiedVector vec = direction == Direction::Out ? exp_row(a, vi, t, rate, tail_tol)
                                                          : exp_col(a, vi, t, rate, tail_tol);
  for (Eigen::Index x = 0; x < a.rows(); ++x) {
    const CertifiedValue entry = vec.at(x);
    if (entry.abs_err > tol) {
      throw Error(ErrorKind::TolUnreachable,
                  "rounding floor " + format_double(entry.abs_err) + " exceeds tol");
    }
    result.entries[host.vertex_names()[static_cast<std::size_t>(x)]] = entry;
  }
  // Vertices outside the ball are reached only by paths longer than the
  // series order, so the omitted mass is bounded by the series tail.
  result.omitted_mass = vec.tail;
  return result;
}

double bessel_i(int k, double x) {
  if (k < 0) k = -k;
  const double half = 0.5 * x;
  if (half == 0.0) return k == 0 ? 1.0 : 0.0;
  // First term (x/2)^k / k!, then ratio (x/2)^2 / (i (k+i)).
  double term = (k == 0) ? 1.0 : std::exp(k * std::log(half) - std::lgamma(k + 1.0));
  double sum = term;
  for (int i = 1; i < 100000; ++i) {
    term *= half * half / (static_cast<double>(i) * (k + i));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double closed_form_m(const ClosedForm& form, double t) {
  switch (form.family) {
    case Family::K2Antipodal: return std::sinh(t);
    case Family::K2Diagonal: return std::cosh(t);
    case Family::Kq: {
      if (form.q < 2) throw Error(ErrorKind::PreconditionViolated, "q must be >= 2");
      return (std::exp((form.q - 1) * t) - std::exp(-t)) / form.q;
    }
    case Family::Zchain: return bessel_i(form.k, 2.0 * t);
    case Family::DirectedEdge: return t;
    case Family::CalibratedChain: {
      if (form.l < 1) throw Error(ErrorKind::PreconditionViolated, "l must be >= 1");
      if (t == 0.0) return 0.0;
      return std::exp(form.l * std::log(form.lambda * t) - std::lgamma(form.l + 1.0));
    }
  }
  return 0.0;
}

}  // namespace fpp
