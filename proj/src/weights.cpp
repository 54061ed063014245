#include "fpp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "fpp/errors.hpp"

namespace fpp {

namespace {

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw Error(ErrorKind::InvalidDistribution, "bad " + what + " '" + text + "'");
  }
  return x;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

double WeightModel::quantile(double p) const {
  switch (kind) {
    case Kind::Exponential:
      return -std::log1p(-p) / rate;
    case Kind::Uniform:
      return a + (b - a) * p;
    case Kind::Table: {
      if (p <= knots.front().first) return knots.front().second;
      // First knot with knot.p >= p; the infimum picks the left end of flat runs.
      auto hi = std::lower_bound(knots.begin(), knots.end(), p,
                                 [](const auto& k, double q) { return k.first < q; });
      if (hi == knots.end()) return knots.back().second;
      auto lo = std::prev(hi);
      if (hi->first == lo->first) return lo->second;
      const double frac = (p - lo->first) / (hi->first - lo->first);
      return lo->second + frac * (hi->second - lo->second);
    }
  }
  return 0.0;
}

double WeightModel::h(double t) const {
  switch (kind) {
    case Kind::Exponential:
      return t / rate;
    case Kind::Uniform:
      return a + (b - a) * -std::expm1(-t);
    case Kind::Table:
      return quantile(-std::expm1(-t));
  }
  return 0.0;
}

std::string WeightModel::describe() const {
  switch (kind) {
    case Kind::Exponential:
      return "exp:" + num(rate);
    case Kind::Uniform:
      return "uniform:" + num(a) + "," + num(b);
    case Kind::Table: {
      std::string out = "table:";
      for (std::size_t i = 0; i < knots.size(); ++i) {
        if (i) out += ";";
        out += num(knots[i].first) + " " + num(knots[i].second);
      }
      return out;
    }
  }
  return "";
}

WeightModel exponential_model(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorKind::InvalidDistribution, "exponential rate must be positive");
  }
  WeightModel m;
  m.kind = WeightModel::Kind::Exponential;
  m.rate = rate;
  m.rho = rate;
  return m;
}

WeightModel uniform_model(double a, double b) {
  if (!(a >= 0.0) || !(b > a) || !std::isfinite(b)) {
    throw Error(ErrorKind::InvalidDistribution, "uniform needs 0 <= a < b");
  }
  WeightModel m;
  m.kind = WeightModel::Kind::Uniform;
  m.a = a;
  m.b = b;
  m.rho = a == 0.0 ? 1.0 / (b - a) : 0.0;
  return m;
}

WeightModel table_model(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw Error(ErrorKind::InvalidDistribution, "table needs >= 2 knots");
  if (knots.front().first != 0.0 || knots.back().first != 1.0) {
    throw Error(ErrorKind::InvalidDistribution, "table knots must span p = 0 to p = 1");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto [p, x] = knots[i];
    if (!std::isfinite(p) || !std::isfinite(x) || x < 0.0) {
      throw Error(ErrorKind::InvalidDistribution, "table values must be finite and nonnegative");
    }
    if (i > 0 && (p < knots[i - 1].first || x < knots[i - 1].second)) {
      throw Error(ErrorKind::InvalidDistribution, "table must be nondecreasing");
    }
  }
  WeightModel m;
  m.kind = WeightModel::Kind::Table;
  m.knots = std::move(knots);
  // Density at 0 from the first segment of positive probability.
  const auto& k = m.knots;
  std::size_t j = 1;
  while (j < k.size() && k[j].first == k[0].first) ++j;
  if (k[0].second > 0.0 || k[j - 1].second > 0.0) {
    m.rho = 0.0;
  } else if (k[j].second == k[0].second) {
    m.rho = std::numeric_limits<double>::infinity();
  } else {
    m.rho = (k[j].first - k[0].first) / (k[j].second - k[0].second);
  }
  return m;
}

WeightModel make_weight_model(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorKind::InvalidDistribution, "expected exp:RATE, uniform:A,B or table:PATH");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "exp") return exponential_model(parse_number(arg, "rate"));
  if (kind == "uniform") {
    const auto comma = arg.find(',');
    if (comma == std::string::npos) throw Error(ErrorKind::InvalidDistribution, "uniform:A,B");
    return uniform_model(parse_number(arg.substr(0, comma), "bound"),
                         parse_number(arg.substr(comma + 1), "bound"));
  }
  if (kind == "table") {
    std::ifstream in(arg);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot read '" + arg + "'");
    std::vector<std::pair<double, double>> knots;
    std::string line;
    while (std::getline(in, line)) {
      line = line.substr(0, line.find('#'));
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream fields(line);
      std::string p, x, extra;
      if (!(fields >> p)) continue;
      if (!(fields >> x) || (fields >> extra)) {
        throw Error(ErrorKind::InvalidDistribution, "table line '" + line + "'");
      }
      knots.emplace_back(parse_number(p, "probability"), parse_number(x, "value"));
    }
    return table_model(std::move(knots));
  }
  throw Error(ErrorKind::InvalidDistribution, "unknown weight family '" + kind + "'");
}

}  // namespace fpp
