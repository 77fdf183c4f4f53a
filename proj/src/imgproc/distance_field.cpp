#include "silcal/imgproc/distance_field.hpp"

#include <cmath>
#include <vector>

#include "silcal/common/errors.hpp"

#if SILCAL_HAVE_OPENMP
#include <omp.h>
#endif

namespace silcal::imgproc {
namespace {

constexpr double kFar = 1e20;

/// 1-D squared-distance transform by lower envelope of parabolas
/// (Felzenszwalb & Huttenlocher). d[q] = min_p (q-p)^2 + f[p].
void dt1d(const double* f, int n, double* d, int* v, double* z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kFar;
  z[1] = kFar;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
               (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
          (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

DistanceField distance_field(const BinaryMask& mask, double gamma_decay,
                             bool parallel) {
  if (mask.empty()) throw EmptyMaskError("distance field of an empty image");
  if (!(gamma_decay > 0.0))
    throw InvalidParameterError("gamma_decay must be positive");
  const int h = mask.height(), w = mask.width();
  bool any = false;
  for (int r = 0; r < h && !any; ++r)
    for (int c = 0; c < w; ++c)
      if (mask.at(r, c)) {
        any = true;
        break;
      }
  if (!any)
    throw EmptyMaskError("distance field needs at least one mask pixel");

  Image<double> sq(h, w);
  (void)parallel;
#if SILCAL_HAVE_OPENMP
#pragma omp parallel if (parallel)
#endif
  {
    std::vector<double> f(static_cast<std::size_t>(h > w ? h : w));
    std::vector<double> d(f.size());
    std::vector<int> v(f.size());
    std::vector<double> z(f.size() + 1);
    // Pass 1: squared distance within each column.
#if SILCAL_HAVE_OPENMP
#pragma omp for schedule(static)
#endif
    for (int c = 0; c < w; ++c) {
      for (int r = 0; r < h; ++r) f[r] = mask.at(r, c) ? 0.0 : kFar;
      dt1d(f.data(), h, d.data(), v.data(), z.data());
      for (int r = 0; r < h; ++r) sq.at(r, c) = d[r];
    }
    // Pass 2: combine across columns within each row.
#if SILCAL_HAVE_OPENMP
#pragma omp for schedule(static)
#endif
    for (int r = 0; r < h; ++r) {
      double* row = sq.row(r);
      for (int c = 0; c < w; ++c) f[c] = row[c];
      dt1d(f.data(), w, d.data(), v.data(), z.data());
      for (int c = 0; c < w; ++c) row[c] = d[c];
    }
  }

  DistanceField field;
  field.gamma_decay = gamma_decay;
  field.values = Image<double>(h, w);
  for (int r = 0; r < h; ++r) {
    const double* srow = sq.row(r);
    double* drow = field.values.row(r);
    for (int c = 0; c < w; ++c)
      drow[c] = mask.at(r, c) ? 0.0 : std::sqrt(srow[c]) / gamma_decay;
  }
  return field;
}

Image<std::uint16_t> distance_field_to_png16(const DistanceField& field) {
  const Image<double>& v = field.values;
  double max_val = 0.0;
  for (int r = 0; r < v.height(); ++r)
    for (int c = 0; c < v.width(); ++c)
      if (v.at(r, c) > max_val) max_val = v.at(r, c);
  Image<std::uint16_t> out(v.height(), v.width());
  const double scale = max_val > 0.0 ? 65535.0 / max_val : 0.0;
  for (int r = 0; r < v.height(); ++r)
    for (int c = 0; c < v.width(); ++c)
      out.at(r, c) = static_cast<std::uint16_t>(
          std::lround(v.at(r, c) * scale));
  return out;
}

}  // namespace silcal::imgproc
