#pragma once

#include <array>

#include "actfloor/image.hpp"
#include "actfloor/labels.hpp"

namespace actfloor {

struct PixelError {
  double mse = 0.0;
  double mae = 0.0;
};

/// Position of a label on the unit error scale: the eight room codes, then
/// Wall, InteriorDoor and MainEntrance, equally spaced over [0, 1]. Outside
/// maps to 0.
double label_scale(RoomLabel l);

/// MSE/MAE over the pixels that are inside the ground truth.
PixelError pixel_error(const LabelImage& pred, const LabelImage& gt);

inline constexpr int kHistogramBins = 256;

/// Intensity bin of a unit-range value: round(255 v), clamped.
int intensity_bin(double v);

struct JointHistogram {
  std::array<double, kHistogramBins> a{};
  std::array<double, kHistogramBins> b{};
  std::vector<double> joint = std::vector<double>(kHistogramBins * kHistogramBins, 0.0);  // [x * 256 + y]
};

JointHistogram joint_histogram(const RealImage& a, const RealImage& b);

/// Shannon entropy (natural log) of an image's normalized intensity histogram.
double entropy(const RealImage& img);

double mutual_information(const RealImage& a, const RealImage& b);

/// 2 MI / (H(a) + H(b)), clamped to [0, 1]. Throws ZeroEntropy when both
/// images are constant.
double nmi(const RealImage& a, const RealImage& b);

/// Seven Hu invariants, each stored as sign(h) * log10(|h| / kHuFloor), or 0
/// when |h| <= kHuFloor. Magnitudes under the floor are numerically zero
/// for pixel shapes and would otherwise blow up the log.
struct HuSignature {
  std::array<double, 7> values{};
  std::array<double, 7> raw{};
};

inline constexpr double kHuFloor = 1e-12;

/// Moments integrate each set pixel as a unit square, so scaling a mask by
/// pixel replication is an exact similarity transform.
HuSignature hu_signature(const Mask& shape);

double hu_distance(const HuSignature& a, const HuSignature& b);
double hu_distance(const Mask& a, const Mask& b);

}  // namespace actfloor
