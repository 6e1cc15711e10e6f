#include "lgm/asymp.hpp"

#include <cmath>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

void check_rho(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw_input("RhoOutOfRange", "rho must lie in (0, 1)");
}

}  // namespace

double lambda1(double u) {
  if (!std::isfinite(u)) throw_input("NonFinite", "lambda1 requires a finite argument");
  return phi(u) / Phi(u);
}

double lambda1_tail(double u) { return -std::log(Phi(u)); }

double kappa_rho(const BivNormalEvaluator& ev, double x1, double x2) {
  double rho = ev.rho();
  double s = std::sqrt(1.0 - rho * rho);
  double num = phi(x1) * phi(x2) * Phi((x1 - rho * x2) / s) * Phi((x2 - rho * x1) / s);
  double den = phi2(rho, x1, x2) * ev.cdf(x1, x2);
  return 1.0 - num / den;
}

double kappa_rho(double rho, double x1, double x2) {
  check_rho(rho);
  return kappa_rho(BivNormalEvaluator(rho), x1, x2);
}

double lambda_rho(const BivNormalEvaluator& ev, double x1, double x2) {
  double dens = phi2(ev.rho(), x1, x2);
  return dens / ev.cdf(x1, x2) * kappa_rho(ev, x1, x2);
}

double lambda_rho(double rho, double x1, double x2) {
  check_rho(rho);
  return lambda_rho(BivNormalEvaluator(rho), x1, x2);
}

double lambda_rho_joint_tail(double rho, double u) {
  check_rho(rho);
  return -2.0 * std::log(Phi(u)) + std::log(Phi2(rho, u, u));
}

namespace {

// Exact inner integral of the chain density over x1 in (u, inf):
//   int_u^inf lambda^(rho)(x1, x2) dx1
//     = lambda1(x2) - phi(x2) Phi((u - rho x2)/s) / Phi_rho(u, x2),
// obtained by integrating the mixed derivative of log Phi_rho.
double tail_slice(const BivNormalEvaluator& ev, double u, double x2) {
  double rho = ev.rho();
  double s = std::sqrt(1.0 - rho * rho);
  return lambda1(x2) - phi(x2) * Phi((u - rho * x2) / s) / ev.cdf(u, x2);
}

}  // namespace

double survival13(double a, double b, double u) {
  if (!(a > 0.0 && a < 1.0) || !(b > 0.0 && b < 1.0))
    throw_input("RhoOutOfRange", "a and b must lie in (0, 1)");
  if (!std::isfinite(u)) throw_input("NonFinite", "u must be finite");

  BivNormalEvaluator eva(a), evb(b);
  auto integrand = [&](double x2) {
    double ia = tail_slice(eva, u, x2);
    double ib = tail_slice(evb, u, x2);
    if (ia <= 0.0 || ib <= 0.0) return 0.0;  // clamp tiny negative round-off
    return ia * ib / lambda1(x2);
  };

  // The integrand decays like phi(x2) above u; extend the upper limit by
  // doubling the span until the value settles to 1e-4 relative.
  const double lo = -9.0;
  double hi = std::max(u, 0.0) + 4.0;
  double value = integrate(integrand, lo, hi, 0.25);
  for (int iter = 0;; ++iter) {
    if (iter > 8) throw_resource("QuadratureBudgetExceeded", "survival13 upper limit did not settle");
    double wider = hi + (hi - lo);
    double next = value + integrate(integrand, hi, wider, 0.25);
    if (std::abs(next - value) <= 1e-4 * std::abs(next)) {
      return next;
    }
    value = next;
    hi = wider;
  }
}

double eta_biv(double rho) {
  check_rho(rho);
  return 0.5 * (1.0 + rho);
}

double eta13(double a, double b) {
  if (!(a > 0.0 && a < 1.0) || !(b > 0.0 && b < 1.0))
    throw_input("OutOfRange", "a and b must lie in (0, 1)");
  return 0.5 * (1.0 + a * b);
}

double eta_fit(const std::function<double(double)>& survival, const std::vector<double>& u_grid) {
  if (u_grid.size() < 4) throw_input("DomainError", "eta_fit needs at least 4 grid points");
  for (std::size_t k = 1; k < u_grid.size(); ++k)
    if (!(u_grid[k] > u_grid[k - 1])) throw_input("DomainError", "u grid must be increasing");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(u_grid.size());
  for (double u : u_grid) {
    double s = survival(u);
    if (!(s > 0.0)) throw_input("NonPositiveSurvival", "survival must be positive on the grid");
    double x = std::log(Phi_bar(u));
    double y = std::log(s);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return 1.0 / slope;
}

}  // namespace lgm
