#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "gbh/kernels.hpp"

// AVX2 variants of the scalar kernels. Loops peel to the scalar tail; the
// wdot lane order is fixed, so results are reproducible run to run (they may
// differ from the scalar variant by rounding only).

namespace gbh::kernels {
namespace {

void laplacian2d_avx2(const double* w, double* lap, int nxt, int nyt, double ihx2,
                      double ihy2) {
  for (int j = 0; j < nyt; ++j) lap[j] = 0.0;
  const __m256d vihx2 = _mm256_set1_pd(ihx2);
  const __m256d vihy2 = _mm256_set1_pd(ihy2);
  const __m256d two = _mm256_set1_pd(2.0);
  for (int i = 1; i < nxt; ++i) {
    const double* row = w + static_cast<size_t>(i) * nyt;
    const double* xm = row - nyt;
    const double* xp = (i == nxt - 1) ? row - nyt : row + nyt;
    double* out = lap + static_cast<size_t>(i) * nyt;

    if (nyt == 1) {  // 1-D degenerate row
      out[0] = (xm[0] - 2.0 * row[0] + xp[0]) * ihx2;
      continue;
    }
    auto edge = [&](int j) {
      double c = row[j];
      double ym = (j == 0) ? row[j + 1] : row[j - 1];
      double yp = (j == nyt - 1) ? row[j - 1] : row[j + 1];
      double lx = (xm[j] - 2.0 * c + xp[j]) * ihx2;
      double ly = (ym - 2.0 * c + yp) * ihy2;
      out[j] = lx + ly;
    };
    edge(0);
    int j = 1;
    for (; j + 4 <= nyt - 1; j += 4) {
      __m256d c = _mm256_loadu_pd(row + j);
      __m256d vxm = _mm256_loadu_pd(xm + j);
      __m256d vxp = _mm256_loadu_pd(xp + j);
      __m256d vym = _mm256_loadu_pd(row + j - 1);
      __m256d vyp = _mm256_loadu_pd(row + j + 1);
      __m256d lx = _mm256_mul_pd(_mm256_sub_pd(_mm256_add_pd(vxm, vxp), _mm256_mul_pd(two, c)),
                                 vihx2);
      __m256d ly = _mm256_mul_pd(_mm256_sub_pd(_mm256_add_pd(vym, vyp), _mm256_mul_pd(two, c)),
                                 vihy2);
      _mm256_storeu_pd(out + j, _mm256_add_pd(lx, ly));
    }
    for (; j < nyt - 1; ++j) edge(j);
    edge(nyt - 1);
  }
}

double wdot_avx2(const double* a, const double* b, const double* w, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    __m256d vw = _mm256_loadu_pd(w + i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(vw, va), vb, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3]));
  for (; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

void axpby_avx2(double alpha, const double* x, double beta, double* y, size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

void memupdate_avx2(double* m, const double* la, const double* lb, double decay, double c,
                    size_t n) {
  const __m256d vd = _mm256_set1_pd(decay);
  const __m256d vc = _mm256_set1_pd(c);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d sum = _mm256_add_pd(_mm256_loadu_pd(la + i), _mm256_loadu_pd(lb + i));
    __m256d vm = _mm256_mul_pd(vd, _mm256_loadu_pd(m + i));
    _mm256_storeu_pd(m + i, _mm256_fmadd_pd(vc, sum, vm));
  }
  for (; i < n; ++i) m[i] = decay * m[i] + c * (la[i] + lb[i]);
}

void vmul_avx2(const double* x, const double* y, double* z, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

double amax_avx2(const double* x, size_t n) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(signmask, _mm256_loadu_pd(x + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

}  // namespace

const Table& avx2() {
  static const Table t{"avx2",          laplacian2d_avx2, wdot_avx2, axpby_avx2,
                       memupdate_avx2,  vmul_avx2,        amax_avx2};
  return t;
}

bool avx2_supported() {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace gbh::kernels
