#include "mmgate/oscillatory.hpp"

#include <cmath>

namespace mmgate::osc {

cplx phi1(double x) {
  // sin(x)/x + i (1 - cos x)/x, with the small-x limits written out.
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return {1.0 - x2 / 6.0 + x2 * x2 / 120.0, x / 2.0 - x * x2 / 24.0};
  }
  const double s = std::sin(0.5 * x);
  return {std::sin(x) / x, 2.0 * s * s / x};
}

cplx moment(int m, double x) {
  if (std::abs(x) <= 8.0) {
    // sum_j (i x)^j / (j! (m + j + 1)); terms peak near j = |x| at ~e^|x|/sqrt(j).
    cplx term = 1.0, sum = 0.0;
    for (int j = 0; j < 80; ++j) {
      const cplx add = term / static_cast<double>(m + j + 1);
      sum += add;
      if (j > std::abs(x) && std::abs(add) < 1e-18 * std::abs(sum)) break;
      term *= cplx(0.0, x) / static_cast<double>(j + 1);
    }
    return sum;
  }
  // Upward recurrence is stable for m < |x|.
  const cplx e(std::cos(x), std::sin(x));
  cplx v = phi1(x);
  for (int k = 1; k <= m; ++k) v = (e - static_cast<double>(k) * v) / cplx(0.0, x);
  return v;
}

cplx nested(double x, double y) {
  if (std::abs(y) > 1e-3) return (phi1(x + y) - phi1(x)) / cplx(0.0, y);
  // sum_k (i y)^k / (k+1)! * int s^{k+1} e^{i x s}
  cplx sum = 0.0, fac = 1.0;
  for (int k = 0; k < 6; ++k) {
    sum += fac * moment(k + 1, x);
    fac *= cplx(0.0, y) / static_cast<double>(k + 2);
  }
  return sum;
}

cplx segment(double w, double a, double b) {
  const double len = b - a;
  return std::polar(len, w * a) * phi1(w * len);
}

}  // namespace mmgate::osc
