#include <cmath>
#include <cstddef>

#include "gbh/kernels.hpp"

namespace gbh::kernels {
namespace {

void laplacian2d_scalar(const double* w, double* lap, int nxt, int nyt, double ihx2,
                        double ihy2) {
  for (int j = 0; j < nyt; ++j) lap[j] = 0.0;
  for (int i = 1; i < nxt; ++i) {
    const double* row = w + static_cast<size_t>(i) * nyt;
    const double* xm = row - nyt;
    const double* xp = (i == nxt - 1) ? row - nyt : row + nyt;  // mirror at x = Lx
    double* out = lap + static_cast<size_t>(i) * nyt;
    if (nyt == 1) {  // 1-D degenerate row
      out[0] = (xm[0] - 2.0 * row[0] + xp[0]) * ihx2;
      continue;
    }
    for (int j = 0; j < nyt; ++j) {
      double c = row[j];
      double ym = (j == 0) ? row[j + 1] : row[j - 1];  // mirror at y edges
      double yp = (j == nyt - 1) ? row[j - 1] : row[j + 1];
      double lx = (xm[j] - 2.0 * c + xp[j]) * ihx2;
      double ly = (ym - 2.0 * c + yp) * ihy2;
      out[j] = lx + ly;
    }
  }
}

double wdot_scalar(const double* a, const double* b, const double* w, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

void axpby_scalar(double alpha, const double* x, double beta, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

void memupdate_scalar(double* m, const double* la, const double* lb, double decay, double c,
                      size_t n) {
  for (size_t i = 0; i < n; ++i) m[i] = decay * m[i] + c * (la[i] + lb[i]);
}

void vmul_scalar(const double* x, const double* y, double* z, size_t n) {
  for (size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

double amax_scalar(const double* x, size_t n) {
  double m = 0.0;
  for (size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

}  // namespace

const Table& scalar() {
  static const Table t{"scalar",         laplacian2d_scalar, wdot_scalar, axpby_scalar,
                       memupdate_scalar, vmul_scalar,        amax_scalar};
  return t;
}

}  // namespace gbh::kernels
