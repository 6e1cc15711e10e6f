#ifndef LGM_SPECIAL_HPP_
#define LGM_SPECIAL_HPP_

namespace lgm {

// Standard normal density.
double phi(double x);

// Standard normal cdf / survival function.  Phi_bar(x) == Phi(-x) exactly.
double Phi(double x);
double Phi_bar(double x);

// Complementary error function (rational Chebyshev approximation, relative
// accuracy ~1e-16); exposed for the test oracles.
double erfc_scalar(double x);

// Bivariate standard normal density with correlation rho.
double phi2(double rho, double x1, double x2);

// Bivariate standard normal cdf via one-dimensional quadrature of
//   d/dx1 Phi_rho(x1, x2) = Phi((x2 - rho*x1)/sqrt(1-rho^2)) * phi(x1),
// integrated from -9 (tail remainder < Phi_bar(9) < 1e-18) to x1.
// Absolute error target 1e-9 at the default resolution.
class BivNormalEvaluator {
 public:
  explicit BivNormalEvaluator(double rho, double panel_width = 0.25);
  double cdf(double x1, double x2) const;
  double rho() const { return rho_; }

 private:
  double rho_;
  double panel_width_;
  double s_;  // sqrt(1 - rho^2)
};

// One-shot convenience wrapper.
double Phi2(double rho, double x1, double x2);

// Composite 16-point Gauss-Legendre quadrature of f over [lo, hi] with panels
// of width at most `panel`.
double gauss_legendre(double (*f)(double, const void*), const void* ctx, double lo, double hi,
                      double panel);

template <class F>
double integrate(const F& f, double lo, double hi, double panel) {
  return gauss_legendre(
      [](double x, const void* p) -> double { return (*static_cast<const F*>(p))(x); }, &f, lo,
      hi, panel);
}

}  // namespace lgm

#endif  // LGM_SPECIAL_HPP_
