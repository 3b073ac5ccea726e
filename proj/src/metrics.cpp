#include "actfloor/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace actfloor {

double label_scale(RoomLabel l) {
  if (l == RoomLabel::Outside) return 0.0;
  if (is_room_type(l)) return code(l) / 10.0;
  switch (l) {
    case RoomLabel::Wall: return 0.8;
    case RoomLabel::InteriorDoor: return 0.9;
    default: return 1.0;
  }
}

PixelError pixel_error(const LabelImage& pred, const LabelImage& gt) {
  require_same_size(pred, gt, "prediction and ground truth differ in size");
  double se = 0.0, ae = 0.0;
  long n = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt.pixels()[i] == RoomLabel::Outside) continue;
    const double d = label_scale(pred.pixels()[i]) - label_scale(gt.pixels()[i]);
    se += d * d;
    ae += std::abs(d);
    ++n;
  }
  if (n == 0) return {};
  return {se / n, ae / n};
}

int intensity_bin(double v) {
  return std::clamp(static_cast<int>(std::lround(v * 255.0)), 0, kHistogramBins - 1);
}

JointHistogram joint_histogram(const RealImage& a, const RealImage& b) {
  require_same_size(a, b, "images differ in size");
  if (a.empty()) fail(ErrorCode::EmptyInput, "empty image");
  JointHistogram h;
  const double w = 1.0 / static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int x = intensity_bin(a.pixels()[i]);
    const int y = intensity_bin(b.pixels()[i]);
    h.a[x] += w;
    h.b[y] += w;
    h.joint[static_cast<std::size_t>(x) * kHistogramBins + y] += w;
  }
  return h;
}

namespace {

double histogram_entropy(const std::array<double, kHistogramBins>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

double mi_from(const JointHistogram& h) {
  double mi = 0.0;
  for (int x = 0; x < kHistogramBins; ++x) {
    if (h.a[x] <= 0.0) continue;
    for (int y = 0; y < kHistogramBins; ++y) {
      const double pxy = h.joint[static_cast<std::size_t>(x) * kHistogramBins + y];
      if (pxy > 0.0) mi += pxy * std::log(pxy / (h.a[x] * h.b[y]));
    }
  }
  return std::max(mi, 0.0);
}

}  // namespace

double entropy(const RealImage& img) { return histogram_entropy(joint_histogram(img, img).a); }

double mutual_information(const RealImage& a, const RealImage& b) { return mi_from(joint_histogram(a, b)); }

double nmi(const RealImage& a, const RealImage& b) {
  const auto h = joint_histogram(a, b);
  const double denom = histogram_entropy(h.a) + histogram_entropy(h.b);
  if (denom <= 0.0) fail(ErrorCode::ZeroEntropy, "both images are constant");
  return std::clamp(2.0 * mi_from(h) / denom, 0.0, 1.0);
}

namespace {

/// Integral of t^p over [c - 1/2, c + 1/2].
double unit_interval_power(double c, int p) {
  const double hi = c + 0.5, lo = c - 0.5;
  return (std::pow(hi, p + 1) - std::pow(lo, p + 1)) / (p + 1);
}

}  // namespace

HuSignature hu_signature(const Mask& shape) {
  double m00 = 0.0, m10 = 0.0, m01 = 0.0;
  for (int y = 0; y < shape.height(); ++y)
    for (int x = 0; x < shape.width(); ++x)
      if (shape(x, y)) {
        m00 += 1.0;
        m10 += x;
        m01 += y;
      }
  if (m00 == 0.0) fail(ErrorCode::EmptyShape, "Hu moments of an empty mask");
  const double cx = m10 / m00, cy = m01 / m00;

  // Central moments mu_pq for p + q in [2, 3].
  double mu[4][4] = {};
  for (int y = 0; y < shape.height(); ++y) {
    for (int x = 0; x < shape.width(); ++x) {
      if (!shape(x, y)) continue;
      double ix[4], iy[4];
      for (int p = 0; p < 4; ++p) {
        ix[p] = unit_interval_power(x - cx, p);
        iy[p] = unit_interval_power(y - cy, p);
      }
      for (int p = 0; p < 4; ++p)
        for (int q = 0; p + q <= 3; ++q) mu[p][q] += ix[p] * iy[q];
    }
  }
  auto eta = [&](int p, int q) { return mu[p][q] / std::pow(m00, 1.0 + (p + q) / 2.0); };
  const double n20 = eta(2, 0), n02 = eta(0, 2), n11 = eta(1, 1);
  const double n30 = eta(3, 0), n03 = eta(0, 3), n21 = eta(2, 1), n12 = eta(1, 2);

  HuSignature s;
  auto& h = s.raw;
  const double a = n30 + n12, b = n21 + n03;
  h[0] = n20 + n02;
  h[1] = (n20 - n02) * (n20 - n02) + 4.0 * n11 * n11;
  h[2] = (n30 - 3.0 * n12) * (n30 - 3.0 * n12) + (3.0 * n21 - n03) * (3.0 * n21 - n03);
  h[3] = a * a + b * b;
  h[4] = (n30 - 3.0 * n12) * a * (a * a - 3.0 * b * b) + (3.0 * n21 - n03) * b * (3.0 * a * a - b * b);
  h[5] = (n20 - n02) * (a * a - b * b) + 4.0 * n11 * a * b;
  h[6] = (3.0 * n21 - n03) * a * (a * a - 3.0 * b * b) - (n30 - 3.0 * n12) * b * (3.0 * a * a - b * b);

  for (int i = 0; i < 7; ++i) {
    const double mag = std::abs(h[i]);
    s.values[i] = mag <= kHuFloor ? 0.0 : std::copysign(std::log10(mag / kHuFloor), h[i]);
  }
  return s;
}

double hu_distance(const HuSignature& a, const HuSignature& b) {
  double d = 0.0;
  for (int i = 0; i < 7; ++i) d += std::abs(a.values[i] - b.values[i]);
  return d;
}

double hu_distance(const Mask& a, const Mask& b) { return hu_distance(hu_signature(a), hu_signature(b)); }

}  // namespace actfloor
