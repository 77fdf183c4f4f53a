#include "silcal/imgproc/hough.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "silcal/common/errors.hpp"

namespace silcal::imgproc {
namespace {

constexpr int kThetaBins = 180;            // 1 degree per bin
constexpr int kMinVotes = 20;              // absolute floor for a real line
constexpr double kSecondPeakRatio = 0.3;   // relative to the first peak
constexpr int kMergeRho = 5;               // px
constexpr int kMergeTheta = 5;             // degrees
constexpr int kRefineWindow = 2;           // bins each side for the centroid

struct Peak {
  int theta = -1;  // bin index
  int rho = -1;    // bin index
  int votes = 0;
};

double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }

/// (theta_bin, rho_bin) pairs describing the same accumulator cell as
/// (t + dt, r) once theta wraps past the [0, 180) range: the line
/// (rho, theta) equals (-rho, theta - pi).
bool wrap_cell(int t, int r, int rho_bins, int rho_max, int* wt, int* wr) {
  if (t >= 0 && t < kThetaBins) {
    *wt = t;
    *wr = r;
    return r >= 0 && r < rho_bins;
  }
  const int tw = t < 0 ? t + kThetaBins : t - kThetaBins;
  const int rw = 2 * rho_max - r;  // mirror rho about zero
  *wt = tw;
  *wr = rw;
  return tw >= 0 && tw < kThetaBins && rw >= 0 && rw < rho_bins;
}

bool peaks_merged(const Peak& a, int t, int r, int rho_max) {
  // Compare both the direct and the wrapped representation of (t, r).
  for (int flip = 0; flip < 2; ++flip) {
    int tt = t, rr = r;
    if (flip) {
      tt = t < a.theta ? t + kThetaBins : t - kThetaBins;
      rr = 2 * rho_max - r;
    }
    if (std::abs(tt - a.theta) < kMergeTheta &&
        std::abs(rr - a.rho) < kMergeRho)
      return true;
  }
  return false;
}

}  // namespace

std::pair<PolarLine, PolarLine> hough_two_lines(const BinaryMask& edges,
                                                bool parallel) {
  if (edges.empty()) throw HoughError("empty edge map");
  const int h = edges.height(), w = edges.width();

  // The outermost pixel ring never votes: a silhouette leaving the frame
  // produces a long straight run along the sensor border that would
  // otherwise out-vote the true object edges.
  std::vector<std::pair<int, int>> pixels;  // (row, col)
  for (int r = 1; r < h - 1; ++r)
    for (int c = 1; c < w - 1; ++c)
      if (edges.at(r, c)) pixels.emplace_back(r, c);
  if (pixels.empty()) throw HoughError("blank edge map");

  const int rho_max = static_cast<int>(
      std::ceil(std::hypot(double(w - 1), double(h - 1))));
  const int rho_bins = 2 * rho_max + 1;

  std::vector<double> cos_t(kThetaBins), sin_t(kThetaBins);
  for (int t = 0; t < kThetaBins; ++t) {
    cos_t[t] = std::cos(deg_to_rad(t));
    sin_t[t] = std::sin(deg_to_rad(t));
  }

  // Each theta column of the accumulator is filled independently, so the
  // vote counts never depend on thread interleaving.
  std::vector<int> acc(static_cast<std::size_t>(kThetaBins) * rho_bins, 0);
  (void)parallel;
#if SILCAL_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int t = 0; t < kThetaBins; ++t) {
    int* column = acc.data() + static_cast<std::size_t>(t) * rho_bins;
    for (const auto& [row, col] : pixels) {
      const double rho = col * cos_t[t] + row * sin_t[t];
      const int rbin = static_cast<int>(std::lround(rho)) + rho_max;
      if (rbin >= 0 && rbin < rho_bins) ++column[rbin];
    }
  }

  auto find_peak = [&](const Peak* exclude) {
    Peak best;
    for (int t = 0; t < kThetaBins; ++t) {
      const int* column = acc.data() + static_cast<std::size_t>(t) * rho_bins;
      for (int r = 0; r < rho_bins; ++r) {
        const int v = column[r];
        if (v <= best.votes) continue;  // strict: first-found wins ties
        if (exclude && peaks_merged(*exclude, t, r, rho_max)) continue;
        best = Peak{t, r, v};
      }
    }
    return best;
  };

  const Peak p1 = find_peak(nullptr);
  if (p1.votes < kMinVotes)
    throw HoughError("no line with enough support (strongest peak " +
                     std::to_string(p1.votes) + " votes)");
  const Peak p2 = find_peak(&p1);
  const int need = std::max(
      kMinVotes, static_cast<int>(std::ceil(kSecondPeakRatio * p1.votes)));
  if (p2.votes < need)
    throw HoughError("second line peak too weak (" +
                     std::to_string(p2.votes) + " votes, need " +
                     std::to_string(need) + ")");

  auto refine = [&](const Peak& p) {
    double wsum = 0.0, tsum = 0.0, rsum = 0.0;
    for (int dt = -kRefineWindow; dt <= kRefineWindow; ++dt)
      for (int dr = -kRefineWindow; dr <= kRefineWindow; ++dr) {
        int t, r;
        if (!wrap_cell(p.theta + dt, p.rho + dr, rho_bins, rho_max, &t, &r))
          continue;
        const double v = acc[static_cast<std::size_t>(t) * rho_bins + r];
        wsum += v;
        tsum += v * (p.theta + dt);  // offsets stay in the unwrapped frame
        rsum += v * (p.rho + dr);
      }
    const double theta = deg_to_rad(tsum / wsum);
    const double rho = rsum / wsum - rho_max;
    return normalize_polar_line(rho, theta);
  };

  return {refine(p1), refine(p2)};
}

PolarLine normalize_polar_line(double rho, double theta) {
  const double pi = std::numbers::pi;
  double t = std::fmod(theta, pi);
  if (t < 0.0) t += pi;
  // Count the half-turns folded away; each one flips the line's side.
  const double turns = std::round((theta - t) / pi);
  const bool flip = std::llround(std::abs(turns)) % 2 == 1;
  return PolarLine{flip ? -rho : rho, t};
}

}  // namespace silcal::imgproc
