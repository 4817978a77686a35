#include "gbh/eigenbasis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gbh/kernels.hpp"
#include "gbh/memory_pde.hpp"

namespace gbh {
namespace {

constexpr double kPi = 3.14159265358979323846;

double lambda_of(const DomainSpec& d, int m, int n) {
  double cx = (m - 0.5) * kPi / d.Lx;
  double l = cx * cx;
  if (d.dim == 2) {
    double cy = n * kPi / d.Ly;
    l += cy * cy;
  }
  return l;
}

double norm_const_of(const DomainSpec& d, int n) {
  // integral of sin^2 over (0,Lx) is Lx/2; cos^2 over (0,Ly) is Ly for n = 0
  // and Ly/2 otherwise.
  double i2 = 0.5 * d.Lx;
  if (d.dim == 2) i2 *= (n == 0) ? d.Ly : 0.5 * d.Ly;
  return 1.0 / std::sqrt(i2);
}

}  // namespace

std::vector<EigenMode> enumerate_modes(const DomainSpec& d, int count) {
  // Brute-force a lattice patch large enough that the first `count` sorted
  // eigenvalues are certainly inside it, then sort.
  int M = 2 * count + 8;
  std::vector<EigenMode> all;
  for (int m = 1; m <= M; ++m) {
    int nmax = (d.dim == 2) ? M : 0;
    for (int n = 0; n <= nmax; ++n)
      all.push_back(EigenMode{m, n, lambda_of(d, m, n), norm_const_of(d, n), 0});
  }
  std::sort(all.begin(), all.end(), [](const EigenMode& a, const EigenMode& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    if (a.n != b.n) return a.n < b.n;
    return a.m < b.m;
  });
  all.resize(count);
  for (int r = 0; r < count; ++r) all[r].rank = r + 1;
  return all;
}

Field eval_eigenfunction(const EigenMode& mode, const Grid& g) {
  Field f = g.make_field();
  const DomainSpec& d = g.domain();
  double cx = (mode.m - 0.5) * kPi / d.Lx;
  double cy = (g.dim() == 2) ? mode.n * kPi / d.Ly : 0.0;
  for (int i = 0; i < g.nxt(); ++i) {
    double sx = std::sin(cx * g.x(i));
    for (int j = 0; j < g.nyt(); ++j) {
      double cyv = (g.dim() == 2) ? std::cos(cy * g.y(j)) : 1.0;
      f.at(i, j) = mode.norm_const * sx * cyv;
    }
  }
  return f;
}

BoundaryTrace normal_derivative_trace(const EigenMode& mode, const Grid& g) {
  BoundaryTrace t = g.make_trace();
  const DomainSpec& d = g.domain();
  double cx = (mode.m - 0.5) * kPi / d.Lx;
  double cy = (g.dim() == 2) ? mode.n * kPi / d.Ly : 0.0;
  for (size_t j = 0; j < t.values.size(); ++j) {
    double cyv = (g.dim() == 2) ? std::cos(cy * g.y(static_cast<int>(j))) : 1.0;
    t.values[j] = -mode.norm_const * cx * cyv;  // outward normal is -x
  }
  return t;
}

double eigen_residual(const EigenMode& mode, const Grid& g) {
  Field phi = eval_eigenfunction(mode, g);
  double nrm = g.quad_norm(phi);
  if (nrm == 0.0) return 0.0;
  BoundaryTrace zero = g.make_trace();
  Field lap = discrete_laplacian(phi, g, zero);
  // residual of (-Lap_h) phi - lambda phi over the non-Dirichlet nodes
  Field r = g.make_field();
  for (size_t p = 0; p < r.size(); ++p) r.v[p] = -lap.v[p] - mode.lambda * phi.v[p];
  for (int j = 0; j < g.nyt(); ++j) r.at(0, j) = 0.0;
  return g.quad_norm(r) / nrm;
}

std::vector<double> trace_gram(const std::vector<EigenMode>& modes, const Grid& g) {
  int N = static_cast<int>(modes.size());
  std::vector<BoundaryTrace> tr;
  tr.reserve(N);
  for (const auto& m : modes) tr.push_back(normal_derivative_trace(m, g));
  std::vector<double> gram(static_cast<size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) gram[static_cast<size_t>(i) * N + j] = tr[i].inner(tr[j]);
  return gram;
}

double gram_condition(const std::vector<double>& gram, int n) {
  if (n == 0) return 1.0;
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = gram[static_cast<size_t>(i) * n + j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
  double smin = svd.singularValues()(n - 1);
  double smax = svd.singularValues()(0);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

}  // namespace gbh
