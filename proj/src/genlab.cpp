#include "actfloor/genlab.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <unistd.h>

#include "actfloor/grid.hpp"

namespace actfloor {

namespace fs = std::filesystem;

GeneratorInput GeneratorInput::make(BoundaryImage boundary, ActivityMap activity) {
  require_same_size(boundary.inside, boundary.boundary, "boundary channels differ in size");
  require_same_size(boundary.inside, boundary.entrance, "boundary channels differ in size");
  require_same_size(boundary.inside, activity.density, "activity map and boundary differ in size");
  activity.validate();
  return {std::move(boundary), std::move(activity)};
}

PngPixels boundary_to_rgb(const BoundaryImage& b) {
  PngPixels png{b.width(), b.height(), 3, std::vector<std::uint8_t>(b.inside.size() * 3)};
  for (std::size_t i = 0; i < b.inside.size(); ++i) {
    png.data[3 * i] = b.inside.pixels()[i] ? 255 : 0;
    png.data[3 * i + 1] = b.boundary.pixels()[i] ? 255 : 0;
    png.data[3 * i + 2] = b.entrance.pixels()[i] ? 255 : 0;
  }
  return png;
}

BoundaryImage boundary_from_rgb(const PngPixels& png) {
  if (png.channels != 3) fail(ErrorCode::InvalidArgument, "boundary image must be RGB");
  BoundaryImage b{Mask(png.width, png.height), Mask(png.width, png.height), Mask(png.width, png.height)};
  for (std::size_t i = 0; i < b.inside.size(); ++i) {
    Mask* channels[3] = {&b.inside, &b.boundary, &b.entrance};
    for (int c = 0; c < 3; ++c) {
      const std::uint8_t v = png.data[3 * i + c];
      if (v != 0 && v != 255) fail(ErrorCode::InvalidArgument, "boundary channels must be 0 or 255");
      channels[c]->pixels()[i] = v ? 1 : 0;
    }
  }
  validate_boundary(b);
  return b;
}

bool is_confined(const LabelImage& category, const Mask& inside) {
  if (!category.same_size(inside)) return false;
  for (std::size_t i = 0; i < inside.size(); ++i)
    if ((category.pixels()[i] == RoomLabel::Outside) != (inside.pixels()[i] == 0)) return false;
  return true;
}

// ---------------------------------------------------------------------------

namespace {

double mean_log(const ScoreMap& s, bool complement) {
  if (s.empty()) fail(ErrorCode::EmptyInput, "empty score map");
  double sum = 0.0;
  for (double v : s.pixels()) {
    if (!(v > 0.0 && v < 1.0)) fail(ErrorCode::ScoreOutOfRange, "discriminator score outside (0,1)");
    sum += std::log(complement ? 1.0 - v : v);
  }
  return sum / static_cast<double>(s.size());
}

}  // namespace

double adversarial_loss(const ScoreMap& real_scores, const ScoreMap& fake_scores) {
  return mean_log(real_scores, false) + mean_log(fake_scores, true);
}

double cycle_loss(const RealImage& reconstructed, const RealImage& original) {
  require_same_size(reconstructed, original, "L1 operands differ in size");
  if (original.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) sum += std::abs(reconstructed.pixels()[i] - original.pixels()[i]);
  return sum / static_cast<double>(original.size());
}

double cycle_loss(const ImageStack& reconstructed, const ImageStack& original) {
  if (reconstructed.size() != original.size()) fail(ErrorCode::SizeMismatch, "channel counts differ");
  if (original.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t c = 0; c < original.size(); ++c) sum += cycle_loss(reconstructed[c], original[c]);
  return sum / static_cast<double>(original.size());
}

double identity_loss(const RealImage& generated, const RealImage& target) { return cycle_loss(generated, target); }
double identity_loss(const ImageStack& generated, const ImageStack& target) { return cycle_loss(generated, target); }

ImageStack one_hot(const LabelImage& category) {
  ImageStack out(kAllLabels.size(), RealImage(category.width(), category.height(), 0.0));
  for (std::size_t i = 0; i < category.size(); ++i) out[label_index(category.pixels()[i])].pixels()[i] = 1.0;
  return out;
}

double category_l1(const LabelImage& a, const LabelImage& b) {
  require_same_size(a, b, "category images differ in size");
  return cycle_loss(one_hot(a), one_hot(b));
}

ImageStack boundary_stack(const BoundaryImage& b) {
  ImageStack out;
  for (const Mask* m : {&b.inside, &b.boundary, &b.entrance}) {
    RealImage ch(m->width(), m->height(), 0.0);
    for (std::size_t i = 0; i < m->size(); ++i) ch.pixels()[i] = m->pixels()[i] ? 1.0 : 0.0;
    out.push_back(std::move(ch));
  }
  return out;
}

void LossWeights::validate() const {
  for (double l : {lambda1, lambda2, lambda3})
    if (!std::isfinite(l) || l < 0.0) fail(ErrorCode::InvalidArgument, "loss weights must be finite and nonnegative");
}

double total_loss(const LossParts& p, const LossWeights& w) {
  for (double v : {p.adv_f, p.adv_b, p.cyc_b, p.cyc_f, p.id_b, p.id_f})
    if (!std::isfinite(v)) fail(ErrorCode::NonFiniteInput, "loss part is not finite");
  w.validate();
  return w.lambda1 * (p.adv_f + p.adv_b) + w.lambda2 * (p.cyc_b + p.cyc_f) + w.lambda3 * (p.id_b + p.id_f);
}

LossParts evaluate_objective(const ForwardGenerator& g_f, const BackwardGenerator& g_b, const Discriminator& d_f,
                             const Discriminator& d_b, const std::vector<TrainingSample>& samples) {
  if (samples.empty()) fail(ErrorCode::EmptyInput, "no training samples");
  LossParts sum;
  for (const auto& s : samples) {
    const ImageStack fake_f = g_f(s.boundary, s.activity);
    const ImageStack fake_b = g_b(s.floorplan);
    sum.adv_f += adversarial_loss(d_f(s.floorplan), d_f(fake_f));
    sum.adv_b += adversarial_loss(d_b(s.boundary), d_b(fake_b));
    sum.cyc_b += cycle_loss(g_b(fake_f), s.boundary);
    sum.cyc_f += cycle_loss(g_f(fake_b, s.activity), s.floorplan);
    sum.id_b += identity_loss(g_b(s.boundary), s.boundary);
    const RealImage empty_activity(s.activity.width(), s.activity.height(), 0.0);
    sum.id_f += identity_loss(g_f(s.floorplan, empty_activity), s.floorplan);
  }
  const double n = static_cast<double>(samples.size());
  return {sum.adv_f / n, sum.adv_b / n, sum.cyc_b / n, sum.cyc_f / n, sum.id_b / n, sum.id_f / n};
}

// ---------------------------------------------------------------------------

PluginGenerator::PluginGenerator(std::string command) : command_(std::move(command)) {
  if (command_.empty()) fail(ErrorCode::InvalidArgument, "plugin command is empty");
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace

LabelImage PluginGenerator::generate(const GeneratorInput& input, std::uint64_t seed) const {
  static std::atomic<unsigned> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("actfloor_plugin_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  struct Cleanup {
    fs::path p;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(p, ec);
    }
  } cleanup{dir};

  write_png(dir / "boundary.png", boundary_to_rgb(input.boundary));
  save_activity_png(input.activity, dir / "activity.png");
  const fs::path out = dir / "category.png";
  const std::string cmd = command_ + " " + shell_quote(dir.string()) + " " + shell_quote(out.string()) + " " +
                          std::to_string(seed);
  const int status = std::system(cmd.c_str());
  if (status != 0) fail(ErrorCode::GeneratorFailure, "plugin exited with status " + std::to_string(status));
  if (!fs::exists(out)) fail(ErrorCode::GeneratorFailure, "plugin wrote no category.png");

  LabelImage result;
  try {
    const auto codes = read_gray_png(out);
    result = labels_from_codes(codes);
  } catch (const Error& e) {
    fail(ErrorCode::GeneratorFailure, std::string("plugin output unreadable: ") + e.what());
  }
  if (!result.same_size(input.boundary.inside)) fail(ErrorCode::GeneratorFailure, "plugin output has the wrong size");
  if (!is_confined(result, input.boundary.inside))
    fail(ErrorCode::GeneratorFailure, "plugin output is not confined to the boundary");
  return result;
}

}  // namespace actfloor
