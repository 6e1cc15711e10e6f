#ifndef LGM_ASYMP_HPP_
#define LGM_ASYMP_HPP_

#include <cmath>
#include <functional>
#include <vector>

#include "lgm/special.hpp"

namespace lgm {

// Everything here lives on the Gaussian scale (-inf, inf) with -inf playing
// the role of the absorbing state.  The transport to the (0, inf) scale of
// the grid module is the coordinate map below; it is not used internally.
inline double to_positive_scale(double gauss) { return std::exp(gauss); }
inline double to_gauss_scale(double positive) { return std::log(positive); }

// Density of the exponent measure of the standard normal: phi(u) / Phi(u).
double lambda1(double u);

// Its survival function Lambda(u) = -log Phi(u).
double lambda1_tail(double u);

// Correction factor kappa of the bivariate Gaussian-type exponent measure
// density; lies in [0, 1] and tends to 1 in the joint upper tail.
double kappa_rho(double rho, double x1, double x2);
double kappa_rho(const BivNormalEvaluator& ev, double x1, double x2);

// Bivariate Gaussian-type exponent measure density
//   lambda^(rho) = d^2/dx1 dx2 log Phi_rho = phi_rho / Phi_rho * kappa_rho.
double lambda_rho(double rho, double x1, double x2);
double lambda_rho(const BivNormalEvaluator& ev, double x1, double x2);

// Joint tail of the bivariate Gaussian-type exponent measure,
//   Lambda^(rho)((u, inf)^2) = -2 log Phi(u) + log Phi_rho(u, u).
double lambda_rho_joint_tail(double rho, double u);

// Joint tail of the (1,3) marginal of the trivariate chain construction
//   lambda(x) = lambda^(a)(x1,x2) lambda^(b)(x2,x3) / lambda1(x2):
// integrates x1, x3 over (u, inf) analytically and x2 numerically, extending
// the x2 range adaptively until the relative change drops below 1e-4.
double survival13(double a, double b, double u);

// Residual tail dependence coefficients, closed forms.
double eta_biv(double rho);      // (1 + rho) / 2
double eta13(double a, double b);  // (1 + ab) / 2

// Least-squares fit of log survival(u) against log Phi_bar(u) over the grid;
// returns 1/slope as the eta estimate.
double eta_fit(const std::function<double(double)>& survival, const std::vector<double>& u_grid);

}  // namespace lgm

#endif  // LGM_ASYMP_HPP_
