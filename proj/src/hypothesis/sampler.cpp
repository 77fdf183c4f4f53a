#include "silcal/hypothesis/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "silcal/common/errors.hpp"

namespace silcal::hypothesis {
namespace {

void check_range(const std::array<double, 2>& r, const char* name) {
  if (!std::isfinite(r[0]) || !std::isfinite(r[1]) || r[0] > r[1])
    throw InvalidParameterError(std::string(name) +
                                " range must be finite with min <= max");
}

double lerp_range(const std::array<double, 2>& r, double t) {
  return r[0] + (r[1] - r[0]) * t;
}

/// Per-dimension jittered Latin hypercube: stratum order is a random
/// permutation, the sample sits uniformly inside its stratum.
std::vector<double> stratified_dim(const std::array<double, 2>& range, int n,
                                   std::mt19937_64& rng) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    values[static_cast<std::size_t>(i)] =
        lerp_range(range, (order[static_cast<std::size_t>(i)] + unit(rng)) / n);
  return values;
}

}  // namespace

void HypothesisSpace::validate() const {
  check_range(alpha_range, "alpha");
  check_range(beta_range, "beta");
  check_range(gamma_range, "gamma");
  check_range(d_range, "d");
  if (d_range[0] <= 0.0)
    throw InvalidParameterError("d range must be strictly positive");
  if (sample_count < 1)
    throw InvalidParameterError("sample_count must be at least 1");
  if (min_axis_z <= 0.0 || min_axis_z >= 1.0)
    throw InvalidParameterError("feasibility margin must lie in (0, 1)");
}

double shaft_axis_z(double alpha, double gamma) {
  return std::cos(alpha) * std::cos(gamma);
}

std::vector<PoseCandidate> sample_candidates(const HypothesisSpace& space,
                                             std::uint64_t seed,
                                             SampleMode mode) {
  space.validate();
  const int n = space.sample_count;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> alphas, betas, gammas, ds;
  if (mode == SampleMode::kStratified) {
    alphas = stratified_dim(space.alpha_range, n, rng);
    betas = stratified_dim(space.beta_range, n, rng);
    gammas = stratified_dim(space.gamma_range, n, rng);
    ds = stratified_dim(space.d_range, n, rng);
  } else {
    auto draw = [&](const std::array<double, 2>& r) {
      std::vector<double> v(static_cast<std::size_t>(n));
      for (double& x : v) x = lerp_range(r, unit(rng));
      return v;
    };
    alphas = draw(space.alpha_range);
    betas = draw(space.beta_range);
    gammas = draw(space.gamma_range);
    ds = draw(space.d_range);
  }

  std::vector<PoseCandidate> candidates(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    PoseCandidate& c = candidates[static_cast<std::size_t>(i)];
    c.alpha = alphas[static_cast<std::size_t>(i)];
    c.beta = betas[static_cast<std::size_t>(i)];
    c.gamma = gammas[static_cast<std::size_t>(i)];
    c.d = ds[static_cast<std::size_t>(i)];
    // The corners of a wide (alpha, gamma) box can tip the axis past the
    // margin; redraw just that pair so the beta/d strata stay intact.
    int attempts = 0;
    while (shaft_axis_z(c.alpha, c.gamma) < space.min_axis_z) {
      if (++attempts > 10000)
        throw InvalidParameterError(
            "hypothesis space admits no pose satisfying the axis margin");
      c.alpha = lerp_range(space.alpha_range, unit(rng));
      c.gamma = lerp_range(space.gamma_range, unit(rng));
    }
    c.transform = geom::look_at_transform(c.alpha, c.beta, c.gamma, c.d);
  }
  return candidates;
}

}  // namespace silcal::hypothesis
