#include "fpp/critical.hpp"

#include <cmath>

#include "fpp/errors.hpp"
#include "fpp/genfun.hpp"

namespace fpp {

namespace {

// Plain bisection on a sign change; f(lo) < 0 < f(hi).
template <typename F>
double bisect(F f, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CriticalTime critical_time(const BaseGraph& g, const VertexId& v, const VertexId& w,
                           const CriticalOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::PreconditionViolated, "tol must be positive");
  if (!g.has_vertex(v)) throw Error(ErrorKind::UnknownVertex, "'" + v + "'");
  if (!g.has_vertex(w)) throw Error(ErrorKind::UnknownVertex, "'" + w + "'");
  if (v == w) return {0.0, 0.0, true};

  const int horizon =
      g.is_finite() ? static_cast<int>(g.num_vertices()) : options.oracle_horizon;
  if (!reachable(g, v, w, horizon)) {
    throw Error(ErrorKind::Unreachable, "no path from '" + v + "' to '" + w + "'");
  }

  const double m_tol = options.tol / 10.0;
  const double rate = std::min(g.delta_out(), g.delta_in());

  // Bracket: double hi until m(hi) certifiably exceeds 1. Values here can be
  // large, so only the sign of m - 1 is asked of them.
  auto probe = [&](double t) {
    const SeriesPlan p = plan_series(rate, t, 0.5 * m_tol);
    const BaseGraph host = g.is_finite() ? g : ball(g, v, p.order);
    if (!host.has_vertex(w)) return CertifiedValue{0.0, p.tail_bound};
    return exp_row(host.adjacency(), static_cast<Eigen::Index>(host.index_of(v)), t, rate,
                   0.5 * m_tol)
        .at(static_cast<Eigen::Index>(host.index_of(w)));
  };
  double lo = 0.0;
  double hi = 1.0;
  for (;;) {
    const CertifiedValue m = probe(hi);
    if (m.lower() > 1.0) break;
    if (m.upper() < 1.0) lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorKind::Unreachable, "critical time search diverged");
  }

  // One host graph for every evaluation below hi.
  const SeriesPlan plan = plan_series(rate, hi, 0.5 * m_tol);
  const BaseGraph host = g.is_finite() ? g : ball(g, v, plan.order);
  const Eigen::MatrixXd a = host.adjacency();
  const auto vi = static_cast<Eigen::Index>(host.index_of(v));
  const auto wi = static_cast<Eigen::Index>(host.index_of(w));
  auto m_at = [&](double t) { return exp_row(a, vi, t, rate, 0.5 * m_tol).at(wi); };

  // Certified bisection: keep m(lo) < 1 < m(hi) in the certified sense.
  while (hi - lo > options.tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const CertifiedValue m = m_at(mid);
    if (m.upper() < 1.0) {
      lo = mid;
    } else if (m.lower() > 1.0) {
      hi = mid;
    } else {
      // Sign undecidable at mid: the root is close, probe a tol/4 band around it.
      const double delta = 0.25 * options.tol;
      if (mid - delta > lo && m_at(mid - delta).upper() < 1.0) lo = mid - delta;
      if (mid + delta < hi && m_at(mid + delta).lower() > 1.0) hi = mid + delta;
      break;
    }
  }
  return {0.5 * (lo + hi), 0.5 * (hi - lo), true};
}

double AlphaStar::diagonal_constant(double rho) const {
  if (!(rho > 0.0)) throw Error(ErrorKind::PreconditionViolated, "rho must be positive");
  return 0.5 * std::sqrt(alpha_star * alpha_star - 1.0) / rho;
}

AlphaStar solve_alpha_star(double tol) {
  // coth(a) - a is decreasing on (1, 2], positive near 1 and negative at 2.
  auto f = [](double a) { return a - 1.0 / std::tanh(a); };
  const double root = bisect(f, 1.0 + 1e-9, 2.0, tol);
  return {root, tol};
}

double solve_theta(double x, double tol) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::PreconditionViolated, "x must be in [0,1]");
  if (x == 0.0) return 0.0;
  // x ln sinh + (1-x) ln cosh is increasing in theta, -inf at 0 and >= 0 at asinh(1).
  auto f = [x](double th) { return x * std::log(std::sinh(th)) + (1.0 - x) * std::log(std::cosh(th)); };
  return bisect(f, 0.0, std::asinh(1.0), tol);
}

double chain_critical_time(int k, double tol) {
  if (k == 0) return 0.0;
  auto f = [k](double t) { return bessel_i(k, 2.0 * t) - 1.0; };
  double hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  return bisect(f, 0.0, hi, tol);
}

}  // namespace fpp
