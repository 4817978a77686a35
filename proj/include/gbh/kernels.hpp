#pragma once

#include <cstddef>
#include <string>

namespace gbh::kernels {

/// Data-parallel inner loops used by the PDE stepper. Each entry has a scalar
/// reference implementation and (on x86-64) an AVX2 variant; the active table
/// is chosen once at startup from cpuid, overridable with GBH_KERNELS=scalar
/// or GBH_KERNELS=avx2. The variants are equivalence-tested against each
/// other; reductions traverse in a fixed order so runs are reproducible.
struct Table {
  const char* name;

  /// 5-point Laplacian of a full-grid field (x-major, row length nyt).
  /// Row i = 0 holds Dirichlet data and is only read; output there is 0.
  /// Insulated edges use mirrored ghosts. Requires nxt >= 3, nyt >= 3.
  void (*laplacian2d)(const double* w, double* lap, int nxt, int nyt, double ihx2, double ihy2);

  /// sum_i w_i a_i b_i
  double (*wdot)(const double* a, const double* b, const double* w, size_t n);

  /// y_i = alpha*x_i + beta*y_i
  void (*axpby)(double alpha, const double* x, double beta, double* y, size_t n);

  /// m_i = decay*m_i + c*(la_i + lb_i)   (one memory-recursion step)
  void (*memupdate)(double* m, const double* la, const double* lb, double decay, double c,
                    size_t n);

  /// z_i = x_i * y_i
  void (*vmul)(const double* x, const double* y, double* z, size_t n);

  /// max_i |x_i|
  double (*amax)(const double* x, size_t n);
};

const Table& scalar();
#if defined(__x86_64__) || defined(_M_X64)
const Table& avx2();
bool avx2_supported();
#endif

/// Active table (resolved once; see GBH_KERNELS).
const Table& active();

/// Name of the active variant, for reports.
std::string active_name();

}  // namespace gbh::kernels
