#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fpp {

// Edge weight law F, used through the coupling h(t) = inf{x >= 0 : F(x) >= 1 - e^{-t}}
// so every model consumes the same Exp(1) draws.
struct WeightModel {
  enum class Kind { Exponential, Uniform, Table };

  Kind kind = Kind::Exponential;
  double rate = 1.0;                               // Exponential
  double a = 0.0, b = 1.0;                         // Uniform
  std::vector<std::pair<double, double>> knots;    // Table: (p, x), piecewise-linear quantile
  double rho = 1.0;                                // density of F at 0

  double h(double t) const;
  double quantile(double p) const;
  // exp:1, uniform:0,1, table:<path>; the table form echoes its knots.
  std::string describe() const;
};

WeightModel exponential_model(double rate);
WeightModel uniform_model(double a, double b);
WeightModel table_model(std::vector<std::pair<double, double>> knots);

// Parses "exp:RATE", "uniform:A,B" or "table:PATH". Table files hold one
// "p x" pair per line (comma or whitespace separated, '#' comments).
WeightModel make_weight_model(const std::string& spec);

}  // namespace fpp
