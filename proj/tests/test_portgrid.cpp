#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "faswpcn/portgrid.hpp"
#include "faswpcn/rng.hpp"

using namespace faswpcn;

TEST_CASE("map_index row-major arithmetic") {
  const PortGrid g{3, 3, 1.0, 1.0};
  const Port2d p = map_index(g, 4);
  CHECK(p.k1 == 2);
  CHECK(p.k2 == 1);

  const PortGrid row{1, 7, 0.0, 2.0};
  for (int k = 1; k <= 7; ++k) {
    const Port2d q = map_index(row, k);
    CHECK(q.k1 == 1);
    CHECK(q.k2 == k);
  }
}

TEST_CASE("map_index round trip and range checks") {
  const PortGrid g{4, 7, 0.5, 1.5};
  for (int k = 1; k <= g.ports(); ++k) {
    const Port2d p = map_index(g, k);
    CHECK(map_index_inverse(g, p.k1, p.k2) == k);
  }
  CHECK_THROWS_AS(map_index(g, 0), std::out_of_range);
  CHECK_THROWS_AS(map_index(g, g.ports() + 1), std::out_of_range);
  CHECK_THROWS_AS(map_index_inverse(g, 5, 1), std::out_of_range);
  CHECK_THROWS_AS((PortGrid{0, 3, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PortGrid{2, 2, -1.0, 1.0}.validate()), std::invalid_argument);
}

TEST_CASE("port_correlation values") {
  const PortGrid g{2, 2, 1.0, 1.0};
  CHECK(port_correlation(g, 1, 1) == 1.0);
  CHECK(port_correlation(g, 3, 3) == 1.0);
  // ports (1,1) vs (1,2): full-aperture offset in one dimension -> j0(2 pi)
  CHECK(std::abs(port_correlation(g, 1, 2)) < 1e-15);
  CHECK(std::abs(port_correlation(g, 1, 3)) < 1e-15);
  // diagonal pair -> j0(2 pi sqrt 2); frozen from direct sine evaluation
  CHECK(port_correlation(g, 1, 4) == Catch::Approx(0.05776523985682894).epsilon(1e-13));
}

TEST_CASE("port_correlation symmetry and translation structure") {
  const PortGrid g{5, 7, 1.3, 0.8};
  rng::Stream st(42, 1);
  for (int rep = 0; rep < 200; ++rep) {
    const int k = 1 + int(st.uniform01() * g.ports());
    const int m = 1 + int(st.uniform01() * g.ports());
    CHECK(port_correlation(g, k, m) == port_correlation(g, m, k));
  }
  // pairs with equal 2-D offsets have exactly equal correlation
  for (int rep = 0; rep < 200; ++rep) {
    const int d1 = int(st.uniform01() * 3), d2 = int(st.uniform01() * 4);
    const int a1 = 1 + int(st.uniform01() * (g.n1 - d1)), a2 = 1 + int(st.uniform01() * (g.n2 - d2));
    const int b1 = 1 + int(st.uniform01() * (g.n1 - d1)), b2 = 1 + int(st.uniform01() * (g.n2 - d2));
    const double ca = port_correlation(g, map_index_inverse(g, a1, a2),
                                       map_index_inverse(g, a1 + d1, a2 + d2));
    const double cb = port_correlation(g, map_index_inverse(g, b1, b2),
                                       map_index_inverse(g, b1 + d1, b2 + d2));
    CHECK(ca == cb);
  }
}

TEST_CASE("singleton dimension contributes zero offset") {
  const PortGrid col{1, 5, 3.0, 2.0};  // w1 irrelevant when n1 == 1
  const PortGrid col2{1, 5, 0.0, 2.0};
  for (int k = 1; k <= 5; ++k)
    for (int m = 1; m <= 5; ++m)
      CHECK(port_correlation(col, k, m) == port_correlation(col2, k, m));
  const PortGrid single{1, 1, 0.0, 0.0};
  CHECK(port_correlation(single, 1, 1) == 1.0);
}

TEST_CASE("build_correlation_matrix basics") {
  const CorrelationMatrix one = build_correlation_matrix(PortGrid{1, 1, 0.0, 0.0});
  CHECK(one.dim == 1);
  CHECK(one.at(0, 0) == 1.0);
  CHECK(one.chol(0, 0) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(one.repair_shift < 1e-9);

  const PortGrid g{2, 2, 1.0, 1.0};
  const CorrelationMatrix c = build_correlation_matrix(g);
  REQUIRE(c.dim == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(c.at(i, i) == Catch::Approx(1.0).margin(1e-12));
    for (int j = 0; j < 4; ++j) {
      CHECK(c.at(i, j) == c.at(j, i));
      CHECK(c.at(i, j) ==
            Catch::Approx(port_correlation(g, i + 1, j + 1)).margin(1e-9));
    }
  }
}

namespace {

void check_repair_and_factor(const PortGrid& g, double max_shift) {
  const CorrelationMatrix c = build_correlation_matrix(g);
  const int n = c.dim;
  Eigen::MatrixXd r(n, n), l = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      r(i, j) = c.at(i, j);
      if (j <= i) l(i, j) = c.chol(i, j);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  const double rel = (l * l.transpose() - r).norm() / r.norm();
  CHECK(rel <= 1e-10);
  CHECK(c.repair_shift <= max_shift);
}

}  // namespace

TEST_CASE("repair keeps matrices PSD with faithful factors") {
  check_repair_and_factor(PortGrid{2, 2, 1.0, 1.0}, 1e-6);
  check_repair_and_factor(PortGrid{5, 5, 1.0, 1.0}, 1e-6);
  check_repair_and_factor(PortGrid{10, 10, 1.0, 1.0}, 1e-6);
  check_repair_and_factor(PortGrid{5, 5, 0.3, 0.3}, 1e-6);  // strongly coupled
  check_repair_and_factor(PortGrid{6, 4, 2.0, 1.0}, 1e-6);
}

TEST_CASE("correlation_from_entries repairs an indefinite matrix") {
  // unit diagonal with an impossible correlation pattern (not PSD)
  const std::vector<double> bad = {1.0, 0.9, -0.9, 0.9, 1.0, 0.9, -0.9, 0.9, 1.0};
  const CorrelationMatrix c = correlation_from_entries(3, bad);
  CHECK(c.repair_shift > 0.0);
  Eigen::MatrixXd r(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = c.at(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  for (int i = 0; i < 3; ++i) CHECK(c.at(i, i) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("aperture growth follows the j0 decay envelope") {
  // nearest-neighbor correlation at aperture w vs 10w: the envelope bound
  // |j0(x)| <= min(1, 1/x) caps the wide-aperture value.
  const PortGrid tight{4, 4, 0.5, 0.5};
  const PortGrid wide{4, 4, 5.0, 5.0};
  const double x_wide = 2.0 * std::numbers::pi * (5.0 / 3.0);
  CHECK(std::abs(port_correlation(wide, 1, 2)) <= 1.0 / x_wide + 1e-15);
  CHECK(std::abs(port_correlation(tight, 1, 2)) >
        std::abs(port_correlation(wide, 1, 2)));
}
