#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "actfloor/actsim.hpp"
#include "actfloor/floorplan.hpp"
#include "actfloor/furnish.hpp"
#include "actfloor/metrics.hpp"
#include "actfloor/png_io.hpp"

namespace actfloor {

// ---------------------------------------------------------------------------
// Generator contract

/// Boundary (inside, ring, entrance) plus activity map. All four channels
/// share one size; `make` checks that.
struct GeneratorInput {
  BoundaryImage boundary;
  ActivityMap activity;

  static GeneratorInput make(BoundaryImage boundary, ActivityMap activity);
};

/// RGB rendering of a boundary: R = inside, G = ring, B = entrance (0/255).
PngPixels boundary_to_rgb(const BoundaryImage& b);
/// Inverse of boundary_to_rgb. Channels must be 0/255 and the ring must be
/// the outline of the inside mask; throws InvalidArgument otherwise.
BoundaryImage boundary_from_rgb(const PngPixels& png);

class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::string name() const = 0;
  /// Category image of the input's size. Implementations must keep every
  /// pixel outside input.boundary.inside Outside and every inside pixel not.
  virtual LabelImage generate(const GeneratorInput& input, std::uint64_t seed) const = 0;
};

/// True when output(p) == Outside exactly where inside(p) == 0.
bool is_confined(const LabelImage& category, const Mask& inside);

// ---------------------------------------------------------------------------
// Losses

/// Patch-wise discriminator probabilities, each strictly inside (0, 1).
using ScoreMap = RealImage;
/// Multi-channel unit-range image.
using ImageStack = std::vector<RealImage>;

/// mean(log real) + mean(log(1 - fake)). Throws ScoreOutOfRange.
double adversarial_loss(const ScoreMap& real_scores, const ScoreMap& fake_scores);

/// Mean absolute per-pixel difference. Throws SizeMismatch.
double cycle_loss(const RealImage& reconstructed, const RealImage& original);
double cycle_loss(const ImageStack& reconstructed, const ImageStack& original);
double identity_loss(const RealImage& generated, const RealImage& target);
double identity_loss(const ImageStack& generated, const ImageStack& target);

/// One channel per label in kAllLabels order.
ImageStack one_hot(const LabelImage& category);
/// L1 between category images through their one-hot encodings.
double category_l1(const LabelImage& a, const LabelImage& b);

ImageStack boundary_stack(const BoundaryImage& b);

struct LossWeights {
  double lambda1 = 1.0;   // adversarial
  double lambda2 = 10.0;  // cycle
  double lambda3 = 5.0;   // identity

  void validate() const;
};

struct LossParts {
  double adv_f = 0.0;
  double adv_b = 0.0;
  double cyc_b = 0.0;
  double cyc_f = 0.0;
  double id_b = 0.0;
  double id_f = 0.0;
};

/// l1 (adv_f + adv_b) + l2 (cyc_b + cyc_f) + l3 (id_b + id_f).
/// Throws NonFiniteInput.
double total_loss(const LossParts& parts, const LossWeights& w = {});

/// Boundary-to-floorplan and floorplan-to-boundary translators plus their
/// discriminators, all as plain functions of images.
using ForwardGenerator = std::function<ImageStack(const ImageStack& boundary, const RealImage& activity)>;
using BackwardGenerator = std::function<ImageStack(const ImageStack& floorplan)>;
using Discriminator = std::function<ScoreMap(const ImageStack&)>;

struct TrainingSample {
  ImageStack boundary;
  RealImage activity;
  ImageStack floorplan;
};

/// Every term of the objective, averaged over the samples. The floorplan
/// identity term feeds the real floorplan with an all-zero activity map.
/// Throws EmptyInput for no samples.
LossParts evaluate_objective(const ForwardGenerator& g_f, const BackwardGenerator& g_b, const Discriminator& d_f,
                             const Discriminator& d_b, const std::vector<TrainingSample>& samples);

// ---------------------------------------------------------------------------
// Retrieval baseline

struct IndexEntry {
  std::string id;
  BoundaryImage boundary;
  HuSignature hu;
  ActivityMap activity;
  LabelImage category;
  std::vector<FurnitureInstance> furniture;
};

struct IndexMatch {
  std::size_t entry = 0;
  double distance = 0.0;
};

/// Immutable after construction; safe to share between threads.
class DatasetIndex {
 public:
  DatasetIndex() = default;
  explicit DatasetIndex(std::vector<IndexEntry> entries);

  const std::vector<IndexEntry>& entries() const { return entries_; }
  const IndexEntry& operator[](std::size_t i) const { return entries_.at(i); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::optional<std::size_t> find(const std::string& id) const;

  /// Entries by Hu distance to `inside`, ascending; equal distances keep
  /// index order. `top` = 0 means all.
  std::vector<IndexMatch> rank(const Mask& inside, std::size_t top = 0) const;

 private:
  std::vector<IndexEntry> entries_;
};

IndexEntry make_index_entry(const RasterFloorplan& fp, ActivityMap activity, std::vector<FurnitureInstance> furniture);

/// Furnishes and simulates `fp` with the per-entry seed derived from `seed`
/// and the id, the same stream the batch simulator uses.
struct EntrySimulation {
  std::vector<FurnitureInstance> furniture;
  ActivitySimulation sim;
};
std::uint64_t entry_seed(std::uint64_t seed, const std::string& id);
EntrySimulation simulate_entry(const RasterFloorplan& fp, const BiRrtParams& params, std::uint64_t seed,
                               unsigned jobs = 1);

/// Loads every floorplan manifest in `dataset_dir`. Activity maps and
/// furniture come from `<id>_activity.png` / `<id>_furniture.json` in
/// `activity_dir` when present and are simulated otherwise. Entries that
/// fail to load are skipped and reported through `skipped`.
DatasetIndex load_index(const std::filesystem::path& dataset_dir, const std::filesystem::path& activity_dir,
                        std::uint64_t seed, std::vector<std::string>* skipped = nullptr);

/// Ranks by Hu distance, keeps the top k, takes the candidate whose activity
/// map has the highest NMI with the query, and transfers its layout onto the
/// query boundary. Throws EmptyIndex; k must be >= 1.
LabelImage retrieval_generate(const GeneratorInput& input, const DatasetIndex& index, std::size_t k);

/// Maps `source` onto the query boundary: layout scaled from the source's
/// inside bbox to the query's, query ring forced to Wall/MainEntrance, gaps
/// filled with the nearest room label, outside set to Outside.
LabelImage transfer_layout(const LabelImage& source, const BoundaryImage& query);

class RetrievalGenerator final : public Generator {
 public:
  RetrievalGenerator(std::shared_ptr<const DatasetIndex> index, std::size_t k = 10);
  std::string name() const override { return "retrieval"; }
  LabelImage generate(const GeneratorInput& input, std::uint64_t seed) const override;

 private:
  std::shared_ptr<const DatasetIndex> index_;
  std::size_t k_;
};

/// External generator: writes boundary.png (RGB) and activity.png into a
/// fresh directory, runs `command <dir> <dir>/category.png <seed>` and reads the
/// category image back. Throws GeneratorFailure on a nonzero exit, missing
/// or malformed output, or a confinement violation.
class PluginGenerator final : public Generator {
 public:
  explicit PluginGenerator(std::string command);
  std::string name() const override { return "plugin:" + command_; }
  LabelImage generate(const GeneratorInput& input, std::uint64_t seed) const override;

 private:
  std::string command_;
};

}  // namespace actfloor
