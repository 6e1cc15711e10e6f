#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "lgm/asymp.hpp"
#include "lgm/errors.hpp"
#include "lgm/special.hpp"

using namespace lgm;

TEST_CASE("lambda1 point values and derivative identity") {
  CHECK(lambda1(0.0) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-14));
  CHECK(lambda1(40.0) < 1e-200);
  // -d/du (-log Phi(u)) = lambda1(u) by finite differences.
  for (double u : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
    double h = 1e-6;
    double fd = -(lambda1_tail(u + h) - lambda1_tail(u - h)) / (2 * h);
    CHECK(fd == doctest::Approx(lambda1(u)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(lambda1(std::numeric_limits<double>::infinity()), InputError);
}

TEST_CASE("kappa lies in the unit interval and above the closed-form floor") {
  for (double rho : {0.3, 0.5, 0.7}) {
    BivNormalEvaluator ev(rho);
    double floor = 1.0 - std::sqrt(1.0 - rho * rho);
    for (double x1 = -3.0; x1 <= 3.0; x1 += 0.6) {
      for (double x2 = -3.0; x2 <= 3.0; x2 += 0.6) {
        double k = kappa_rho(ev, x1, x2);
        CHECK(k <= 1.0 + 1e-9);
        CHECK(k >= -1e-9);
        if (std::max(x1, x2) >= 0.0) CHECK(k >= floor - 1e-7);
      }
    }
  }
  CHECK_THROWS_AS(kappa_rho(1.2, 0.0, 0.0), InputError);
}

TEST_CASE("kappa tends to one along the diagonal") {
  BivNormalEvaluator ev(0.5);
  double prev = kappa_rho(ev, 2.0, 2.0);
  for (double u : {4.0, 6.0, 8.0}) {
    double k = kappa_rho(ev, u, u);
    CHECK(k > prev);
    prev = k;
  }
  CHECK(prev > 0.9);
}

TEST_CASE("kappa improvement constant is monotone") {
  // u * (1 - inf kappa) should not grow with u (Lemma-style 1 - C/u bound).
  for (double rho : {0.3, 0.6}) {
    BivNormalEvaluator ev(rho);
    std::vector<double> cs;
    for (double u : {2.0, 4.0, 8.0}) {
      double worst = 1.0;
      for (double x1 = u; x1 <= u + 6.0; x1 += 0.5)
        for (double x2 = u; x2 <= u + 6.0; x2 += 0.5)
          worst = std::min(worst, kappa_rho(ev, x1, x2));
      cs.push_back(u * (1.0 - worst));
    }
    CHECK(cs[1] <= cs[0] * 1.05);
    CHECK(cs[2] <= cs[1] * 1.05);
  }
}

TEST_CASE("lambda_rho is nonnegative and matches the mixed log-derivative") {
  BivNormalEvaluator ev(0.5);
  for (double x1 = -2.0; x1 <= 2.5; x1 += 0.9)
    for (double x2 = -2.0; x2 <= 2.5; x2 += 0.9) CHECK(lambda_rho(ev, x1, x2) >= 0.0);

  // Mixed finite difference of log Phi_rho on a coarse grid.
  double h = 1e-4;
  for (double x1 : {-0.5, 0.7}) {
    for (double x2 : {0.0, 1.2}) {
      double pp = std::log(ev.cdf(x1 + h, x2 + h));
      double pm = std::log(ev.cdf(x1 + h, x2 - h));
      double mp = std::log(ev.cdf(x1 - h, x2 + h));
      double mm = std::log(ev.cdf(x1 - h, x2 - h));
      double fd = (pp - pm - mp + mm) / (4 * h * h);
      CHECK(fd == doctest::Approx(lambda_rho(ev, x1, x2)).epsilon(1e-4));
    }
  }
}

TEST_CASE("lambda_rho box mass matches the inclusion-exclusion tail") {
  // Integral of the density over (u, U]^2 equals the measure of the box via
  // -log Phi_rho inclusion-exclusion.
  double rho = 0.5, u = 0.0, U = 3.0;
  BivNormalEvaluator ev(rho);
  double quad = 0.0;
  const int n = 60;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double x1 = u + (U - u) * (i + 0.5) / n;
      double x2 = u + (U - u) * (j + 0.5) / n;
      quad += lambda_rho(ev, x1, x2) * (U - u) * (U - u) / (n * n);
    }
  }
  auto box = [&](double a1, double a2) { return -std::log(ev.cdf(a1, a2)); };
  double exact = box(u, U) + box(U, u) - box(u, u) - box(U, U);
  CHECK(quad == doctest::Approx(exact).epsilon(2e-3));
}

TEST_CASE("joint tail via inclusion-exclusion is asymptotically the Gaussian one") {
  for (double rho : {0.3, 0.5, 0.7}) {
    BivNormalEvaluator ev(rho);
    double u = 5.0;
    double lam = lambda_rho_joint_tail(rho, u);
    double srho = 1.0 - 2.0 * Phi(u) + ev.cdf(u, u);
    double ratio = lam / srho;
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
  }
}

TEST_CASE("survival13 sanity: monotone, symmetric, dominated") {
  double s25 = survival13(0.5, 0.5, 2.5);
  double s30 = survival13(0.5, 0.5, 3.0);
  CHECK(s25 > 0.0);
  CHECK(s30 < s25);
  CHECK(survival13(0.3, 0.7, 2.0) == doctest::Approx(survival13(0.7, 0.3, 2.0)).epsilon(1e-6));
  // Projection bound: the joint tail cannot exceed the marginal tail.
  CHECK(s25 <= lambda1_tail(2.5));
  CHECK_THROWS_AS(survival13(0.5, 1.5, 2.0), InputError);
}

namespace {

// Independent route: brute nested quadrature of the trivariate density over
// x1, x3 in (u, U], x2 in [-9, U], with lambda^(rho) evaluated from its
// definition.  Midpoint rule; accuracy ~1% at this resolution.
double survival13_brute(double a, double b, double u, int n1 = 60, int n2 = 130) {
  BivNormalEvaluator eva(a), evb(b);
  double U = u + 12.0;
  double total = 0.0;
  for (int k2 = 0; k2 < n2; ++k2) {
    double x2 = -9.0 + (U + 9.0) * (k2 + 0.5) / n2;
    double w2 = (U + 9.0) / n2;
    double ia = 0.0, ib = 0.0;
    for (int k1 = 0; k1 < n1; ++k1) {
      double x1 = u + (U - u) * (k1 + 0.5) / n1;
      double w1 = (U - u) / n1;
      ia += lambda_rho(eva, x1, x2) * w1;
      ib += lambda_rho(evb, x2, x1) * w1;
    }
    total += ia * ib / lambda1(x2) * w2;
  }
  return total;
}

}  // namespace

TEST_CASE("survival13 regression value") {
  // Frozen from the high-resolution run of the brute oracle below
  // (n1 = 420, n2 = 900, U = u + 18): 1.69351e-4 at (0.5, 0.5, 2.5).
  double value = survival13(0.5, 0.5, 2.5);
  CHECK(value == doctest::Approx(1.69351e-4).epsilon(2e-3));
}

TEST_CASE("survival13 agrees with the brute nested quadrature") {
  for (double u : {2.0, 2.5}) {
    double fast = survival13(0.5, 0.5, u);
    double brute = survival13_brute(0.5, 0.5, u);
    CHECK(fast == doctest::Approx(brute).epsilon(0.02));
  }
}

TEST_CASE("eta closed forms") {
  CHECK(eta_biv(0.5) == doctest::Approx(0.75));
  CHECK(eta13(0.5, 0.5) == doctest::Approx(0.625));
  for (double a : {0.2, 0.5, 0.8})
    for (double b : {0.3, 0.6}) CHECK(eta13(a, b) == doctest::Approx(eta_biv(a * b)));
  CHECK_THROWS_AS(eta_biv(0.0), InputError);
  CHECK_THROWS_AS(eta13(1.0, 0.5), InputError);
}

TEST_CASE("eta_fit recovers exact power laws") {
  // survival = Phi_bar(u)^2: exact independence, eta = 1/2.
  auto sq = [](double u) { return Phi_bar(u) * Phi_bar(u); };
  std::vector<double> grid;
  for (int k = 0; k < 10; ++k) grid.push_back(2.0 + 0.25 * k);
  CHECK(eta_fit(sq, grid) == doctest::Approx(0.5).epsilon(1e-12));

  auto pow14 = [](double u) { return std::pow(Phi_bar(u), 1.0 / 0.7); };
  CHECK(eta_fit(pow14, grid) == doctest::Approx(0.7).epsilon(1e-12));

  CHECK_THROWS_AS(eta_fit([](double) { return -1.0; }, grid), InputError);
  CHECK_THROWS_AS(eta_fit(sq, std::vector<double>{1.0, 2.0}), InputError);
}

TEST_CASE("eta_fit on the bivariate Gaussian-type tail") {
  for (double rho : {0.3, 0.5, 0.7}) {
    std::vector<double> grid;
    for (int k = 0; k < 9; ++k) grid.push_back(2.0 + 2.5 * k / 8.0);
    double fitted = eta_fit([rho](double u) { return lambda_rho_joint_tail(rho, u); }, grid);
    CHECK(std::abs(fitted - eta_biv(rho)) < 0.05);
  }
}

TEST_CASE("fitted eta never drops below one half") {
  std::vector<double> grid;
  for (int k = 0; k < 9; ++k) grid.push_back(2.0 + 2.5 * k / 8.0);
  for (double rho : {0.2, 0.4, 0.6, 0.8}) {
    double fitted = eta_fit([rho](double u) { return lambda_rho_joint_tail(rho, u); }, grid);
    CHECK(fitted >= 0.5 - 0.02);
  }
  double s13 = eta_fit([](double u) { return survival13(0.4, 0.6, u); }, grid);
  CHECK(s13 >= 0.5 - 0.02);
}
