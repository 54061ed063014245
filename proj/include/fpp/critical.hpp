#pragma once

#include "fpp/graph.hpp"

namespace fpp {

// Root of t -> m(v, w, t) = 1. The root lies in [t_star - abs_err, t_star + abs_err].
struct CriticalTime {
  double t_star = 0.0;
  double abs_err = 0.0;
  bool reachable = true;
};

struct CriticalOptions {
  double tol = 1e-10;
  // Reachability horizon for oracle graphs (finite graphs use |V|).
  int oracle_horizon = 1000;
};

// Throws Unreachable when no path from v to w exists within the horizon.
CriticalTime critical_time(const BaseGraph& g, const VertexId& v, const VertexId& w,
                           const CriticalOptions& options = {});

struct AlphaStar {
  double alpha_star = 0.0;
  double abs_err = 0.0;

  // (1 / (2 rho)) sqrt(alpha*^2 - 1), the high-dimensional diagonal constant.
  double diagonal_constant(double rho = 1.0) const;
};

// Positive root of coth(a) = a.
AlphaStar solve_alpha_star(double tol = 1e-13);

// Nonnegative root of sinh(theta)^x cosh(theta)^(1-x) = 1 for x in [0, 1].
double solve_theta(double x, double tol = 1e-13);

// t*_Z(0, k) from the Bessel closed form I_k(2t) = 1.
double chain_critical_time(int k, double tol = 1e-12);

}  // namespace fpp
