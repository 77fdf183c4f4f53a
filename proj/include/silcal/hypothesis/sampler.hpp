#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "silcal/geom/transform.hpp"

namespace silcal::hypothesis {

/// 4-DoF pose hypothesis space: two tilt angles, a roll about the viewing
/// ray, and the standoff distance. Ranges are inclusive [min, max]; angles
/// in radians, distance in metres. `min_axis_z` is the feasibility margin:
/// the camera-frame shaft axis must satisfy cos(alpha)*cos(gamma) >= margin
/// so no candidate points into the camera plane.
struct HypothesisSpace {
  std::array<double, 2> alpha_range{-1.2217304763960306, 1.2217304763960306};
  std::array<double, 2> beta_range{-3.141592653589793, 3.141592653589793};
  std::array<double, 2> gamma_range{-1.2217304763960306, 1.2217304763960306};
  std::array<double, 2> d_range{0.05, 0.30};
  int sample_count = 500;
  double min_axis_z = 0.17364817766693041;  // cos(80 deg)

  void validate() const;
};

/// One seed pose for the coarse search. `loss` is filled in by ranking;
/// until then it is +infinity.
struct PoseCandidate {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double d = 0.0;
  geom::RigidTransform transform;
  double loss = std::numeric_limits<double>::infinity();
};

enum class SampleMode {
  kStratified,  // jittered Latin-hypercube over the four parameters
  kUniform,     // plain i.i.d. uniform, kept as a comparison baseline
};

/// Draw `space.sample_count` feasible candidates. Deterministic for a fixed
/// seed. Candidates violating the axis feasibility margin get their
/// (alpha, gamma) pair redrawn uniformly; throws InvalidParameterError if
/// the space admits no feasible pair.
std::vector<PoseCandidate> sample_candidates(
    const HypothesisSpace& space, std::uint64_t seed,
    SampleMode mode = SampleMode::kStratified);

/// Camera-frame z component of the shaft axis for tilt angles
/// (alpha, gamma); the roll beta does not move the axis.
double shaft_axis_z(double alpha, double gamma);

}  // namespace silcal::hypothesis
