#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "locnoise/attacks.hpp"
#include "locnoise/metrics.hpp"
#include "locnoise/network.hpp"
#include "locnoise/report.hpp"

namespace locnoise {

struct RandomModel {
  std::uint64_t seed = 0;
  Shape input_shape{32, 32, 3};
  std::size_t num_classes = 9;
};
using ModelSource = std::variant<std::filesystem::path, RandomModel>;

struct SyntheticImages {
  std::uint64_t seed = 0;
  std::size_t count = 0;
};
using ImageSource = std::variant<std::filesystem::path, SyntheticImages>;

/// Parses "random:SEED" or a weight-file path.
ModelSource parse_model_source(std::string_view text);
/// Parses "synthetic:SEED:COUNT" or a directory path.
ImageSource parse_image_source(std::string_view text);

struct ExperimentSpec {
  ModelSource model = RandomModel{};
  ImageSource images = SyntheticImages{0, 50};
  std::vector<Method> methods{Method::kFgsm, Method::kPgd, Method::kCw};
  std::vector<double> gammas{1.0, 0.75, 0.5, 0.25};
  /// Indexed by Method.
  std::array<AttackConfig, 3> configs{AttackConfig::defaults_for(Method::kFgsm),
                                      AttackConfig::defaults_for(Method::kPgd),
                                      AttackConfig::defaults_for(Method::kCw)};
  /// Where report.csv and details.csv go; nothing is written when empty.
  std::filesystem::path output_dir;
  std::size_t workers = 1;
  bool dump_images = false;
  bool dump_failed = false;

  AttackConfig& config(Method m) { return configs[static_cast<std::size_t>(m)]; }
  const AttackConfig& config(Method m) const { return configs[static_cast<std::size_t>(m)]; }

  /// Throws ArgumentError on an empty method/gamma list, a gamma outside
  /// (0, 1], duplicates, or an invalid attack config.
  void validate() const;
};

struct NamedImage {
  std::string name;
  Tensor pixels;
};

struct ImageSet {
  std::vector<NamedImage> images;
  std::size_t skipped = 0;
};

/// Seeded uniform pixels smoothed by one 3x3 box blur (edge pixels average
/// their in-bounds neighbours). Values stay in [0, 1].
std::vector<NamedImage> synthetic_images(Shape shape, std::uint64_t seed, std::size_t count);

using WarningSink = std::function<void(const std::string&)>;

/// Loads a directory (sorted by file name; .png and .ltns only) or generates
/// synthetic images. Files that fail to parse or have the wrong shape are
/// skipped and reported through `warn`.
ImageSet load_images(const ImageSource& source, const Shape& expected, const WarningSink& warn);

Network load_model(const ModelSource& source);

struct ExperimentResult {
  std::vector<ReportRow> rows;
  std::vector<DetailRow> details;
  std::size_t images_used = 0;
  std::size_t images_skipped = 0;
};

/// Runs every (method, gamma, image) attack, aggregates rows and, when
/// spec.output_dir is set, writes report.csv, details.csv and optional image
/// dumps. Throws IoError when no image is usable.
ExperimentResult run_experiment(const ExperimentSpec& spec, const WarningSink& warn = {});

/// Experiment body on an already loaded network and image list.
ExperimentResult run_experiment(const ExperimentSpec& spec, const Network& net,
                                std::span<const NamedImage> images);

struct LabeledOutcome {
  AttackOutcome outcome;
  double gamma = 1.0;
  std::size_t image_index = 0;
};

/// Writes "<method>_g<gamma>_img<index>_<ok|fail>_adv.p[gp]m" and
/// "..._noise.pgm" for each outcome; failed outcomes only when
/// `include_failed`. The noise image is max_c |N| scaled so every nonzero
/// pixel maps to a nonzero byte. Returns the files written.
std::vector<std::filesystem::path> dump_adversarial_images(std::span<const LabeledOutcome> outcomes,
                                                           const std::filesystem::path& dir,
                                                           bool include_failed = false);

}  // namespace locnoise
