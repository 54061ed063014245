#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fpp/genfun.hpp"
#include "fpp/graph.hpp"

namespace fpp {

// Evaluates the criterion function
//   f(s, t) = sum_{x,y} m(v,x,s) m(x,y,t) m(y,w,t*-s-t) ln m(x,y,t)
// and the tilted sum
//   g(s, t, u, alpha) = sum_{x,y} m(v,x,s) m(x,y,t)^(1+alpha) m(y,w,u)
// with certified errors. Oracle graphs are evaluated on a finite host
// neighborhood with an explicit bound on the mass of omitted pairs.
class CriterionEvaluator {
 public:
  CriterionEvaluator(const BaseGraph& g, const VertexId& v, const VertexId& w, double t_star,
                     double tol = 1e-12, double t_star_err = 0.0);

  double t_star() const { return t_star_; }

  CertifiedValue f(double s, double t) const;
  CertifiedValue tilted(double s, double t, double u, double alpha) const;

 private:
  struct Pieces;
  Pieces pieces(double s, double t, double u) const;

  BaseGraph host_;
  Eigen::MatrixXd adjacency_;
  Eigen::Index v_ = 0;
  Eigen::Index w_ = 0;
  std::vector<Eigen::Index> region_;  // indices of x, y that are summed explicitly
  bool oracle_ = false;
  int region_radius_ = 0;
  double delta_ = 0.0;
  double rate_out_ = 0.0;
  double rate_in_ = 0.0;
  double t_star_ = 0.0;
  double t_star_err_ = 0.0;
  double tol_ = 1e-12;
};

CertifiedValue f_eval(const BaseGraph& g, const VertexId& v, const VertexId& w, double t_star,
                      double s, double t, double tol = 1e-12);

CertifiedValue tilted_sum(const BaseGraph& g, const VertexId& v, const VertexId& w,
                          double t_star, double s, double t, double u, double alpha,
                          double tol = 1e-12);

enum class Classification { Positive, Nonpositive, Undecided };
const char* to_string(Classification c);

struct GridStats {
  int coarse_points = 0;
  int refined_points = 0;
  int depth_reached = 0;
};

struct MarginCertificate {
  double s = 0.0;
  double t = 0.0;
  double alpha = 0.0;
  double c = 0.0;
  // Certified tilted sum at u = t* - s - t + c; the sum increases with u so
  // this is its maximum over the whole u-interval.
  double max_tilted_sum = 0.0;
  double max_tilted_err = 0.0;
};

struct CriterionReport {
  Classification classification = Classification::Undecided;
  double t_star = 0.0;
  double t_star_err = 0.0;
  double sup_value = 0.0;
  double sup_err = 0.0;
  double argmax_s = 0.0;
  double argmax_t = 0.0;
  // Largest value + err over all evaluated points.
  double max_upper = 0.0;
  GridStats grid_stats;
  std::optional<MarginCertificate> margin;
};

struct ClassifyOptions {
  int grid = 32;
  int max_depth = 12;
  double decision_eps = 1e-6;
  double tol = 1e-12;
  // Cells near t -> t* refined at each depth besides the one holding the max.
  int boundary_cells = 8;
};

CriterionReport sup_f_classify(const BaseGraph& g, const VertexId& v, const VertexId& w,
                               const ClassifyOptions& options = {});

std::vector<double> default_alpha_grid();

// Throws PreconditionViolated unless the report is POSITIVE and NoMargin
// when no alpha in the grid certifies a tilted sum below one.
MarginCertificate not_sharp_margin(const BaseGraph& g, const VertexId& v, const VertexId& w,
                                   const CriterionReport& report,
                                   const std::vector<double>& alpha_grid = default_alpha_grid(),
                                   double tol = 1e-12);

struct FGridRow {
  double s = 0.0;
  double t = 0.0;
  double value = 0.0;
  double err = 0.0;
};

// f on the lattice s = i h, t = j h, i + j <= grid, h = t*/grid, in row-major order.
std::vector<FGridRow> f_grid(const BaseGraph& g, const VertexId& v, const VertexId& w,
                             double t_star, int grid, double tol = 1e-12);

// All automorphisms of a finite graph as index permutations (brute force).
std::vector<std::vector<std::size_t>> automorphisms(const BaseGraph& g, std::size_t max_vertices = 8);

// A permutation sigma with (v,x) ~ (sigma(x),w) and (x,w) ~ (v,sigma(x)) for
// every x, where ~ means related by an automorphism. Brute force; throws
// TooLarge past max_vertices.
std::optional<std::map<VertexId, VertexId>> symmetry_condition(const BaseGraph& g,
                                                               const VertexId& v,
                                                               const VertexId& w,
                                                               std::size_t max_vertices = 8);

}  // namespace fpp
