#pragma once

#include <map>
#include <span>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fpp/graph.hpp"

namespace fpp {

// A value with a rigorous absolute error bound: truth lies in
// [value - abs_err, value + abs_err].
struct CertifiedValue {
  double value = 0.0;
  double abs_err = 0.0;

  double lower() const { return value - abs_err; }
  double upper() const { return value + abs_err; }
  bool contains(double x, double slack = 0.0) const {
    return x >= lower() - slack && x <= upper() + slack;
  }
};

inline CertifiedValue operator+(CertifiedValue a, CertifiedValue b) {
  return {a.value + b.value, a.abs_err + b.abs_err};
}
inline CertifiedValue operator-(CertifiedValue a, CertifiedValue b) {
  return {a.value - b.value, a.abs_err + b.abs_err};
}
inline CertifiedValue operator*(CertifiedValue a, CertifiedValue b) {
  return {a.value * b.value,
          std::abs(a.value) * b.abs_err + std::abs(b.value) * a.abs_err + a.abs_err * b.abs_err};
}

// Truncation order and its tail bound for sum_j (rate t)^j / j!.
struct SeriesPlan {
  int order = 0;
  double tail_bound = 0.0;
};

inline constexpr int kMaxSeriesOrder = 10000;

// Upper bound on sum_{j > order} x^j / j!, namely x^(order+1)/(order+1)! * e^x.
double exp_series_tail(double x, int order);

// Smallest order with exp_series_tail(rate * t, order) <= tol.
// Throws TolUnreachable past kMaxSeriesOrder.
SeriesPlan plan_series(double rate, double t, double tol);

// Entrywise-certified truncated exponential series of a nonnegative matrix.
// `rate` must bound the relevant row/column sums of `a` (delta_out for rows,
// delta_in for columns). Every term is nonnegative, so rounding error is
// relative: entry (i, j) is within tail + rel * value(i, j) of the truth.
struct CertifiedMatrix {
  Eigen::MatrixXd value;
  double tail = 0.0;
  double rel = 0.0;
  int order = 0;

  double err(Eigen::Index i, Eigen::Index j) const { return tail + rel * value(i, j); }
  CertifiedValue at(Eigen::Index i, Eigen::Index j) const { return {value(i, j), err(i, j)}; }
};

struct CertifiedVector {
  Eigen::VectorXd value;
  double tail = 0.0;  // also bounds the total mass missing from the sum of entries
  double rel = 0.0;
  int order = 0;

  double err(Eigen::Index i) const { return tail + rel * value(i); }
  CertifiedValue at(Eigen::Index i) const { return {value(i), err(i)}; }
};

CertifiedMatrix exp_matrix(const Eigen::MatrixXd& a, double t, double rate, double tol);
// Selected rows of exp(t a) for a sparse nonnegative `a`; result is
// rows.size() x n.
CertifiedMatrix exp_rows(const Eigen::SparseMatrix<double>& a, std::span<const Eigen::Index> rows,
                         double t, double rate, double tol);
// Row e_v^T exp(t a).
CertifiedVector exp_row(const Eigen::MatrixXd& a, Eigen::Index v, double t, double rate,
                        double tol);
// Column exp(t a) e_w.
CertifiedVector exp_col(const Eigen::MatrixXd& a, Eigen::Index w, double t, double rate,
                        double tol);

// m_H(v, w, t): weighted path sum, certified to abs_err <= tol.
CertifiedValue m_eval(const BaseGraph& g, const VertexId& v, const VertexId& w, double t,
                      double tol = 1e-12);

enum class Direction { Out, In };

struct RowResult {
  std::map<VertexId, CertifiedValue> entries;
  double omitted_mass = 0.0;  // certified bound on total mass outside `entries`
  int ball_radius = -1;       // -1 for finite graphs (whole vertex set used)
  std::size_t ball_size = 0;
};

// m(v, x, t) for all x (Out) or m(x, v, t) for all x (In).
RowResult m_row(const BaseGraph& g, const VertexId& v, double t, double tol = 1e-10,
                Direction direction = Direction::Out);

enum class Family { K2Antipodal, K2Diagonal, Kq, Zchain, DirectedEdge, CalibratedChain };

struct ClosedForm {
  Family family = Family::K2Antipodal;
  int q = 2;  // Kq
  int k = 0;  // Zchain offset
  int l = 1;  // CalibratedChain length
  double lambda = 1.0;
};

// Exact closed forms: sinh t, cosh t, (e^{(q-1)t} - e^{-t})/q, I_k(2t), t,
// (lambda t)^l / l!.
double closed_form_m(const ClosedForm& form, double t);

// Modified Bessel function of the first kind, integer order, by its power series.
double bessel_i(int k, double x);

}  // namespace fpp
