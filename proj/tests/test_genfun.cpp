#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fpp/errors.hpp"
#include "fpp/genfun.hpp"
#include "fpp/rng.hpp"

using namespace fpp;

namespace {

// Independent Bessel oracle: I_k(x) summed until the increment is negligible.
double bessel_oracle(int k, double x) {
  double term = std::pow(x / 2.0, k) / std::tgamma(k + 1.0);
  double sum = term;
  for (int j = 1; j < 500; ++j) {
    term *= (x / 2.0) * (x / 2.0) / (j * static_cast<double>(j + k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

BaseGraph random_graph(RandomStream& rng) {
  const int n = 2 + static_cast<int>(rng.below(5));
  std::vector<VertexId> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && rng.uniform() < 0.35) {
        edges.push_back({names[static_cast<std::size_t>(i)], names[static_cast<std::size_t>(j)],
                         rng.uniform() < 0.5, 0.5 + rng.uniform()});
      }
    }
  }
  return BaseGraph::finite(names, edges);
}

}  // namespace

TEST(Genfun, SeriesPlan) {
  const SeriesPlan p = plan_series(2.0, 1.5, 1e-12);
  EXPECT_LE(p.tail_bound, 1e-12);
  EXPECT_GT(exp_series_tail(3.0, p.order - 1), 1e-12);
  EXPECT_EQ(plan_series(1.0, 0.0, 1e-12).order, 0);
  EXPECT_THROW(plan_series(100.0, 200.0, 1e-12), Error);
}

TEST(Genfun, K2) {
  const BaseGraph k2 = builtin::complete(2);
  const CertifiedValue m = m_eval(k2, "0", "1", 1.0);
  EXPECT_NEAR(m.value, 1.1752011936438014, 1e-12);
  EXPECT_LE(m.abs_err, 1e-12);
  EXPECT_TRUE(m.contains(std::sinh(1.0)));
}

TEST(Genfun, DiagonalAtZero) {
  EXPECT_EQ(m_eval(builtin::paw(), "v", "v", 0.0).value, 1.0);
  EXPECT_EQ(m_eval(builtin::paw(), "v", "w", 0.0).value, 0.0);
  EXPECT_EQ(m_eval(builtin::integer_chain(), "4", "4", 0.0).value, 1.0);
}

TEST(Genfun, IntegerChainMatchesBessel) {
  const BaseGraph z = builtin::integer_chain();
  const CertifiedValue m = m_eval(z, "0", "1", 1.0);
  EXPECT_NEAR(m.value, 1.5906368546373291, 1e-12);
  for (int k : {0, 1, 3, 7}) {
    for (double t : {0.25, 1.0, 2.0}) {
      EXPECT_NEAR(m_eval(z, "0", std::to_string(k), t).value, bessel_oracle(k, 2.0 * t), 1e-10);
      EXPECT_NEAR(closed_form_m({Family::Zchain, 2, k}, t), bessel_oracle(k, 2.0 * t), 1e-12);
    }
  }
}

TEST(Genfun, K3) {
  const CertifiedValue m = m_eval(builtin::complete(3), "0", "1", 1.0);
  EXPECT_NEAR(m.value, (std::exp(2.0) - std::exp(-1.0)) / 3.0, 1e-12);
  EXPECT_NEAR(m.value, 2.340392219253069, 1e-12);
}

TEST(Genfun, ClosedForms) {
  EXPECT_NEAR(closed_form_m({Family::K2Antipodal}, std::log(1.0 + std::sqrt(2.0))), 1.0, 1e-12);
  EXPECT_EQ(closed_form_m({Family::Zchain, 2, 0}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(closed_form_m({Family::DirectedEdge}, 0.5), 0.5);
  EXPECT_NEAR(closed_form_m({Family::CalibratedChain, 2, 0, 3, 2.0}, 0.5), 1.0 / 6.0, 1e-15);
}

TEST(Genfun, AgreesWithClosedFormsOnGrid) {
  // Relative tolerance: K5 at t = 2 is in the hundreds.
  auto check = [](const BaseGraph& g, const VertexId& v, const VertexId& w, double t, double exact) {
    const double tol = 1e-10 * std::max(1.0, exact);
    EXPECT_NEAR(m_eval(g, v, w, t, tol).value, exact, tol) << v << "->" << w << " t=" << t;
  };
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.1 * i;
    check(builtin::complete(2), "0", "1", t, closed_form_m({Family::K2Antipodal}, t));
    check(builtin::complete(2), "0", "0", t, closed_form_m({Family::K2Diagonal}, t));
    for (int q : {3, 5}) check(builtin::complete(q), "0", "1", t, closed_form_m({Family::Kq, q}, t));
    check(builtin::directed_edge(), "0", "1", t, closed_form_m({Family::DirectedEdge}, t));
    check(builtin::integer_chain(), "0", "2", t, closed_form_m({Family::Zchain, 2, 2}, t));
  }
}

TEST(Genfun, RowOfK2) {
  const RowResult r = m_row(builtin::complete(2), "0", 0.7);
  EXPECT_NEAR(r.entries.at("0").value, std::cosh(0.7), 1e-10);
  EXPECT_NEAR(r.entries.at("1").value, std::sinh(0.7), 1e-10);
  EXPECT_EQ(r.ball_radius, -1);
  const RowResult zero = m_row(builtin::paw(), "v", 0.0);
  for (const auto& [x, v] : zero.entries) EXPECT_EQ(v.value, x == "v" ? 1.0 : 0.0);
}

TEST(Genfun, RowSumBound) {
  const RowResult r = m_row(builtin::paw(), "v", 0.5);
  double sum = 0.0;
  for (const auto& [x, v] : r.entries) sum += v.value;
  EXPECT_LE(sum, std::exp(3.0 * 0.5));
}

TEST(Genfun, OracleRowReportsBall) {
  const RowResult r = m_row(builtin::integer_chain(), "0", 1.0);
  EXPECT_GT(r.ball_radius, 0);
  EXPECT_EQ(r.ball_size, static_cast<std::size_t>(2 * r.ball_radius + 1));
  EXPECT_LE(r.omitted_mass, 1e-10);
  double sum = 0.0;
  for (const auto& [x, v] : r.entries) sum += v.value;
  EXPECT_NEAR(sum, std::exp(2.0), 1e-9);
  const RowResult in = m_row(builtin::directed_integer_chain(), "0", 1.0, 1e-10, Direction::In);
  EXPECT_NEAR(in.entries.at("-2").value, 0.5, 1e-10);
}

TEST(Genfun, Convolution) {
  RandomStream rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const BaseGraph g = random_graph(rng);
    const double s = 2.0 * rng.uniform(), t = 2.0 * rng.uniform();
    const double rate = std::min(g.delta_out(), g.delta_in());
    if (rate == 0.0) continue;
    const auto a = g.adjacency();
    const CertifiedMatrix ms = exp_matrix(a, s, rate, 1e-12);
    const CertifiedMatrix mt = exp_matrix(a, t, rate, 1e-12);
    const CertifiedMatrix mst = exp_matrix(a, s + t, rate, 1e-12);
    const Eigen::MatrixXd prod = ms.value * mt.value;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.rows(); ++j) {
        double err = mst.err(i, j);
        for (Eigen::Index x = 0; x < a.rows(); ++x) {
          err += ms.err(i, x) * mt.value(x, j) + ms.value(i, x) * mt.err(x, j) + ms.err(i, x) * mt.err(x, j);
        }
        EXPECT_LE(std::abs(prod(i, j) - mst.value(i, j)), err + 1e-9);
      }
    }
  }
}

TEST(Genfun, Multiplicativity) {
  const BaseGraph g = builtin::paw();
  const BaseGraph h = builtin::complete(3);
  const BaseGraph p = cartesian_product(g, h);
  for (double t : {0.3, 0.9}) {
    const CertifiedValue lhs = m_eval(p, "(v,0)", "(w,2)", t, 1e-10);
    const CertifiedValue rhs = m_eval(g, "v", "w", t, 1e-11) * m_eval(h, "0", "2", t, 1e-11);
    EXPECT_LE(std::abs(lhs.value - rhs.value), lhs.abs_err + rhs.abs_err);
  }
}

TEST(Genfun, MonotoneAndSymmetric) {
  const BaseGraph g = builtin::paw();
  double prev = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const CertifiedValue m = m_eval(g, "w", "b", 0.2 * i);
    EXPECT_GE(m.value + m.abs_err, prev);
    prev = m.value;
    EXPECT_NEAR(m.value, m_eval(g, "b", "w", 0.2 * i).value, 2e-12);
  }
}

TEST(Genfun, Errors) {
  EXPECT_THROW(m_eval(builtin::paw(), "v", "zz", 1.0), Error);
  EXPECT_THROW(m_eval(builtin::paw(), "v", "w", -1.0), Error);
  try {
    m_eval(builtin::complete(2), "0", "1", 5000.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TolUnreachable);
  }
}

TEST(Genfun, Bessel) {
  EXPECT_NEAR(bessel_i(1, 2.0), 1.590636854637329, 1e-14);
  EXPECT_NEAR(bessel_i(0, 0.0), 1.0, 0.0);
  EXPECT_NEAR(bessel_i(5, 3.3), bessel_oracle(5, 3.3), 1e-13);
}
