#include "silcal/loss/pixel_losses.hpp"

#include <cmath>

#include "silcal/common/errors.hpp"

namespace silcal::loss {
namespace {

void check_shapes(int h1, int w1, int h2, int w2, const char* what) {
  if (h1 != h2 || w1 != w2)
    throw InvalidParameterError(std::string(what) +
                                ": image dimensions disagree");
}

}  // namespace

LossWeights LossWeights::defaults_for(int width, int height) {
  LossWeights w;
  const double per_pixel = 1.0 / (static_cast<double>(width) * height);
  w.lambda1 = per_pixel;
  w.lambda2 = per_pixel;
  w.lambda3 = per_pixel;
  return w;
}

void LossWeights::validate() const {
  const double values[] = {lambda1, lambda2,     lambda3,  lambda4,
                           lambda5, gamma_decay, gamma_rho};
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidParameterError("loss weights must be finite and >= 0");
  }
  if (gamma_decay <= 0.0)
    throw InvalidParameterError("gamma_decay must be positive");
}

double mse_loss(const SoftSilhouette& S, const BinaryMask& M) {
  check_shapes(S.height(), S.width(), M.height(), M.width(), "mse_loss");
  double total = 0.0;
  for (int r = 0; r < S.height(); ++r) {
    const double* srow = S.row(r);
    const std::uint8_t* mrow = M.row(r);
    double row_sum = 0.0;
    for (int c = 0; c < S.width(); ++c) {
      const double e = srow[c] - mrow[c];
      row_sum += e * e;
    }
    total += row_sum;
  }
  return total;
}

double dist_loss(const SoftSilhouette& S, const imgproc::DistanceField& D) {
  check_shapes(S.height(), S.width(), D.values.height(), D.values.width(),
               "dist_loss");
  double total = 0.0;
  for (int r = 0; r < S.height(); ++r) {
    const double* srow = S.row(r);
    const double* drow = D.values.row(r);
    double row_sum = 0.0;
    for (int c = 0; c < S.width(); ++c) row_sum += srow[c] * drow[c];
    total += row_sum;
  }
  return total;
}

double scale_loss(const SoftSilhouette& S, const BinaryMask& M) {
  check_shapes(S.height(), S.width(), M.height(), M.width(), "scale_loss");
  double s_sum = 0.0, m_sum = 0.0;
  for (int r = 0; r < S.height(); ++r) {
    const double* srow = S.row(r);
    const std::uint8_t* mrow = M.row(r);
    double s_row = 0.0;
    long m_row = 0;
    for (int c = 0; c < S.width(); ++c) {
      s_row += srow[c];
      m_row += mrow[c];
    }
    s_sum += s_row;
    m_sum += static_cast<double>(m_row);
  }
  return std::abs(s_sum - m_sum);
}

double render_loss(const SoftSilhouette& S, const BinaryMask& M,
                   const imgproc::DistanceField& D, const LossWeights& w) {
  return w.lambda1 * mse_loss(S, M) + w.lambda2 * dist_loss(S, D) +
         w.lambda3 * scale_loss(S, M);
}

Image<double> render_loss_gradient_image(const SoftSilhouette& S,
                                         const BinaryMask& M,
                                         const imgproc::DistanceField& D,
                                         const LossWeights& w) {
  check_shapes(S.height(), S.width(), M.height(), M.width(),
               "render_loss_gradient_image");
  check_shapes(S.height(), S.width(), D.values.height(), D.values.width(),
               "render_loss_gradient_image");
  double s_sum = 0.0, m_sum = 0.0;
  for (int r = 0; r < S.height(); ++r) {
    const double* srow = S.row(r);
    const std::uint8_t* mrow = M.row(r);
    double s_row = 0.0;
    long m_row = 0;
    for (int c = 0; c < S.width(); ++c) {
      s_row += srow[c];
      m_row += mrow[c];
    }
    s_sum += s_row;
    m_sum += static_cast<double>(m_row);
  }
  const double area_diff = s_sum - m_sum;
  const double sign_term =
      area_diff > 0.0 ? w.lambda3 : (area_diff < 0.0 ? -w.lambda3 : 0.0);

  Image<double> grad(S.height(), S.width());
  for (int r = 0; r < S.height(); ++r) {
    const double* srow = S.row(r);
    const std::uint8_t* mrow = M.row(r);
    const double* drow = D.values.row(r);
    double* grow = grad.row(r);
    for (int c = 0; c < S.width(); ++c)
      grow[c] = 2.0 * w.lambda1 * (srow[c] - mrow[c]) + w.lambda2 * drow[c] +
                sign_term;
  }
  return grad;
}

}  // namespace silcal::loss
