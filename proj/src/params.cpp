#include "gbh/params.hpp"

#include <cmath>

namespace gbh {

ValidatedConfig validate_params(const PhysicalParams& p, const DomainSpec& d) {
  std::vector<std::string> bad;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      bad.push_back(std::string("NonPositiveCoefficient: ") + name + " must be > 0");
  };
  positive(p.eta, "eta");
  positive(p.delta, "delta");
  positive(p.a, "a");
  positive(p.beta, "beta");
  if (!std::isfinite(p.gamma)) bad.push_back("NonPositiveCoefficient: gamma must be finite");

  if (d.dim != 1 && d.dim != 2)
    bad.push_back("UnsupportedDimension: dim must be 1 or 2");
  if (!(d.Lx > 0.0)) bad.push_back("NonPositiveCoefficient: Lx must be > 0");
  if (d.dim == 2 && !(d.Ly > 0.0)) bad.push_back("NonPositiveCoefficient: Ly must be > 0");

  // Admissible exponents: any positive integer in 2-D (and 1-D), {1,2} in 3-D.
  // 3-D itself is rejected above, but the rule is kept explicit so a kappa=3,
  // d=3 request fails for the right reason.
  if (p.kappa < 1) {
    bad.push_back("InadmissibleKappa: kappa must be a positive integer");
  } else if (d.dim == 3 && p.kappa > 2) {
    bad.push_back("InadmissibleKappa: kappa must be 1 or 2 when d = 3");
  }

  if (!bad.empty()) throw ValidationError(std::move(bad));
  return ValidatedConfig{p, d};
}

}  // namespace gbh
