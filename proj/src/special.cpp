#include "lgm/special.hpp"

#include <algorithm>
#include <cmath>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
constexpr double kInvSqrt2 = 0.707106781186547524400844362105;
constexpr double kInvSqrtPi = 0.564189583547756286948079451561;

// Rational Chebyshev approximation for erf/erfc after W. J. Cody; the three
// regimes and coefficient sets are the classic SPECFUN ones.
constexpr double kErfA[5] = {3.16112374387056560e0, 1.13864154151050156e2, 3.77485237685302021e2,
                             3.20937758913846947e3, 1.85777706184603153e-1};
constexpr double kErfB[4] = {2.36012909523441209e1, 2.44024637934444173e2, 1.28261652607737228e3,
                             2.84423683343917062e3};
constexpr double kErfC[9] = {5.64188496988670089e-1, 8.88314979438837594e0, 6.61191906371416295e1,
                             2.98635138197400131e2, 8.81952221241769090e2, 1.71204761263407058e3,
                             2.05107837782607147e3, 1.23033935479799725e3, 2.15311535474403846e-8};
constexpr double kErfD[8] = {1.57449261107098347e1, 1.17693950891312499e2, 5.37181101862009858e2,
                             1.62138957456669019e3, 3.29079923573345963e3, 4.36261909014324716e3,
                             3.43936767414372164e3, 1.23033935480374942e3};
constexpr double kErfP[6] = {3.05326634961232344e-1, 3.60344899949804439e-1, 1.25781726111229246e-1,
                             1.60837851487422766e-2, 6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr double kErfQ[5] = {2.56852019228982242e0, 1.87295284992346047e0, 5.27905102951428412e-1,
                             6.05183413124413191e-2, 2.33520497626869185e-3};

double erf_small(double x) {
  double y = x * x;
  double xnum = kErfA[4] * y;
  double xden = y;
  for (int i = 0; i < 3; ++i) {
    xnum = (xnum + kErfA[i]) * y;
    xden = (xden + kErfB[i]) * y;
  }
  return x * (xnum + kErfA[3]) / (xden + kErfB[3]);
}

// exp(-x^2) split for accuracy at large arguments.
double exp_mxx(double x) {
  double ysq = std::trunc(x * 16.0) / 16.0;
  double del = (x - ysq) * (x + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

double erfc_mid(double x) {
  double xnum = kErfC[8] * x;
  double xden = x;
  for (int i = 0; i < 7; ++i) {
    xnum = (xnum + kErfC[i]) * x;
    xden = (xden + kErfD[i]) * x;
  }
  return exp_mxx(x) * (xnum + kErfC[7]) / (xden + kErfD[7]);
}

double erfc_large(double x) {
  double y = 1.0 / (x * x);
  double xnum = kErfP[5] * y;
  double xden = y;
  for (int i = 0; i < 4; ++i) {
    xnum = (xnum + kErfP[i]) * y;
    xden = (xden + kErfQ[i]) * y;
  }
  double result = y * (xnum + kErfP[4]) / (xden + kErfQ[4]);
  result = (kInvSqrtPi - result) / x;
  return exp_mxx(x) * result;
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
constexpr double kGlNode[8] = {0.0950125098376374401853193, 0.2816035507792589132304605,
                               0.4580167776572273863424194, 0.6178762444026437484466718,
                               0.7554044083550030338951012, 0.8656312023878317438804679,
                               0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr double kGlWeight[8] = {0.1894506104550684962853967, 0.1826034150449235888667637,
                                 0.1691565193950025381893121, 0.1495959888165767320815017,
                                 0.1246289712555338720524763, 0.0951585116824927848099251,
                                 0.0622535239386478928628438, 0.0271524594117540948517806};

}  // namespace

double erfc_scalar(double x) {
  double ax = std::abs(x);
  double result;
  if (ax <= 0.46875) {
    result = 1.0 - erf_small(x);
    return result;
  }
  if (ax <= 4.0) {
    result = erfc_mid(ax);
  } else if (ax < 26.6) {
    result = erfc_large(ax);
  } else {
    result = 0.0;
  }
  return x < 0.0 ? 2.0 - result : result;
}

double phi(double x) {
  if (!std::isfinite(x)) throw_input("NonFinite", "phi requires a finite argument");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double Phi(double x) {
  if (!std::isfinite(x)) throw_input("NonFinite", "Phi requires a finite argument");
  return 0.5 * erfc_scalar(-x * kInvSqrt2);
}

double Phi_bar(double x) { return Phi(-x); }

double phi2(double rho, double x1, double x2) {
  double s = std::sqrt(1.0 - rho * rho);
  return phi(x1) * phi((x2 - rho * x1) / s) / s;
}

double gauss_legendre(double (*f)(double, const void*), const void* ctx, double lo, double hi,
                      double panel) {
  if (hi <= lo) return 0.0;
  int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel)));
  double h = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = lo + (p + 0.5) * h;
    double half = 0.5 * h;
    double acc = 0.0;
    for (int k = 0; k < 8; ++k) {
      double dx = half * kGlNode[k];
      acc += kGlWeight[k] * (f(mid + dx, ctx) + f(mid - dx, ctx));
    }
    total += half * acc;
  }
  return total;
}

BivNormalEvaluator::BivNormalEvaluator(double rho, double panel_width)
    : rho_(rho), panel_width_(panel_width), s_(std::sqrt(1.0 - rho * rho)) {
  if (!(std::abs(rho) < 1.0)) throw_input("RhoOutOfRange", "|rho| must be < 1");
}

double BivNormalEvaluator::cdf(double x1, double x2) const {
  if (!std::isfinite(x1) || !std::isfinite(x2))
    throw_input("NonFinite", "Phi2 requires finite arguments");
  double hi = std::min(x1, 9.0);
  if (hi <= -9.0) return 0.0;
  struct Ctx {
    double rho, s, x2;
  } c{rho_, s_, x2};
  double value = gauss_legendre(
      [](double t, const void* p) {
        const Ctx& cc = *static_cast<const Ctx*>(p);
        return Phi((cc.x2 - cc.rho * t) / cc.s) * phi(t);
      },
      &c, -9.0, hi, panel_width_);
  return std::min(1.0, std::max(0.0, value));
}

double Phi2(double rho, double x1, double x2) { return BivNormalEvaluator(rho).cdf(x1, x2); }

}  // namespace lgm
