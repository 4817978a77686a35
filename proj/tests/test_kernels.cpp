#include <doctest.h>

#include <cmath>
#include <vector>

#include "gbh/kernels.hpp"
#include "gbh/rng.hpp"

using namespace gbh;

namespace {

std::vector<double> random_vec(size_t n, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.sym();
  return v;
}

}  // namespace

TEST_CASE("scalar laplacian matches a hand stencil on a small grid") {
  const int nxt = 5, nyt = 4;
  auto w = random_vec(nxt * nyt, 7);
  std::vector<double> lap(nxt * nyt, -1.0);
  kernels::scalar().laplacian2d(w.data(), lap.data(), nxt, nyt, 1.0, 2.0);
  // Dirichlet row untouched in the output
  for (int j = 0; j < nyt; ++j) CHECK(lap[j] == 0.0);
  auto at = [&](int i, int j) { return w[i * nyt + j]; };
  // interior point
  {
    int i = 2, j = 1;
    double expect = (at(i - 1, j) - 2 * at(i, j) + at(i + 1, j)) * 1.0 +
                    (at(i, j - 1) - 2 * at(i, j) + at(i, j + 1)) * 2.0;
    CHECK(lap[i * nyt + j] == doctest::Approx(expect).epsilon(1e-15));
  }
  // mirrored ghost at the far x edge and both y edges
  {
    int i = nxt - 1, j = 2;
    double expect = 2.0 * (at(i - 1, j) - at(i, j)) * 1.0 +
                    (at(i, j - 1) - 2 * at(i, j) + at(i, j + 1)) * 2.0;
    CHECK(lap[i * nyt + j] == doctest::Approx(expect).epsilon(1e-15));
  }
  {
    int i = 2, j = 0;
    double expect = (at(i - 1, j) - 2 * at(i, j) + at(i + 1, j)) * 1.0 +
                    2.0 * (at(i, 1) - at(i, 0)) * 2.0;
    CHECK(lap[i * nyt + j] == doctest::Approx(expect).epsilon(1e-15));
  }
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!kernels::avx2_supported()) return;  // nothing to compare on this host
  const auto& S = kernels::scalar();
  const auto& V = kernels::avx2();

  const int nxt = 33, nyt = 29;  // odd sizes exercise the vector tails
  const size_t n = static_cast<size_t>(nxt) * nyt;
  auto a = random_vec(n, 1), b = random_vec(n, 2), w = random_vec(n, 3);

  SUBCASE("laplacian, elementwise exact") {
    std::vector<double> l1(n), l2(n);
    S.laplacian2d(a.data(), l1.data(), nxt, nyt, 3.1, 0.7);
    V.laplacian2d(a.data(), l2.data(), nxt, nyt, 3.1, 0.7);
    for (size_t i = 0; i < n; ++i) CHECK(l1[i] == doctest::Approx(l2[i]).epsilon(1e-14));
  }
  SUBCASE("weighted dot within reassociation tolerance") {
    double d1 = S.wdot(a.data(), b.data(), w.data(), n);
    double d2 = V.wdot(a.data(), b.data(), w.data(), n);
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));
  }
  SUBCASE("axpby / vmul / memupdate elementwise") {
    auto y1 = b, y2 = b;
    S.axpby(0.3, a.data(), -1.2, y1.data(), n);
    V.axpby(0.3, a.data(), -1.2, y2.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));

    std::vector<double> z1(n), z2(n);
    S.vmul(a.data(), b.data(), z1.data(), n);
    V.vmul(a.data(), b.data(), z2.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(z1[i] == z2[i]);

    auto m1 = w, m2 = w;
    S.memupdate(m1.data(), a.data(), b.data(), 0.99, 0.005, n);
    V.memupdate(m2.data(), a.data(), b.data(), 0.99, 0.005, n);
    for (size_t i = 0; i < n; ++i) CHECK(m1[i] == doctest::Approx(m2[i]).epsilon(1e-14));
  }
  SUBCASE("amax") {
    CHECK(S.amax(a.data(), n) == V.amax(a.data(), n));
  }
}
#endif

TEST_CASE("runtime dispatch resolves to a valid table") {
  const auto& t = kernels::active();
  CHECK((kernels::active_name() == "scalar" || kernels::active_name() == "avx2"));
  std::vector<double> x{1.0, -2.0, 3.0};
  CHECK(t.amax(x.data(), 3) == 3.0);
}
