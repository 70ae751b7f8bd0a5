#include "locnoise/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "locnoise/errors.hpp"
#include "locnoise/image_io.hpp"
#include "locnoise/random.hpp"
#include "locnoise/weights_io.hpp"

namespace locnoise {

namespace {

template <class T>
std::optional<T> parse_number(std::string_view text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t name_hash(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

ModelSource parse_model_source(std::string_view text) {
  constexpr std::string_view prefix = "random:";
  if (text.substr(0, prefix.size()) == prefix) {
    const auto seed = parse_number<std::uint64_t>(text.substr(prefix.size()));
    if (!seed) throw ArgumentError(fmt::format("bad model seed in '{}'", text));
    return RandomModel{*seed};
  }
  if (text.empty()) throw ArgumentError("empty model source");
  return std::filesystem::path(text);
}

ImageSource parse_image_source(std::string_view text) {
  constexpr std::string_view prefix = "synthetic:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view rest = text.substr(prefix.size());
    const std::size_t colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw ArgumentError(fmt::format("expected synthetic:SEED:COUNT, got '{}'", text));
    }
    const auto seed = parse_number<std::uint64_t>(rest.substr(0, colon));
    const auto count = parse_number<std::size_t>(rest.substr(colon + 1));
    if (!seed || !count) throw ArgumentError(fmt::format("bad synthetic image source '{}'", text));
    return SyntheticImages{*seed, *count};
  }
  if (text.empty()) throw ArgumentError("empty image source");
  return std::filesystem::path(text);
}

void ExperimentSpec::validate() const {
  if (methods.empty()) throw ArgumentError("no attack methods requested");
  if (gammas.empty()) throw ArgumentError("no gamma values requested");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      if (methods[i] == methods[j]) throw ArgumentError("duplicate attack method");
    }
  }
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0.0 && gammas[i] <= 1.0)) {
      throw ArgumentError(fmt::format("gamma must lie in (0, 1], got {}", gammas[i]));
    }
    for (std::size_t j = i + 1; j < gammas.size(); ++j) {
      if (gammas[i] == gammas[j]) throw ArgumentError(fmt::format("duplicate gamma {}", gammas[i]));
    }
  }
  for (Method m : methods) config(m).validate();
}

std::vector<NamedImage> synthetic_images(Shape shape, std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<NamedImage> out;
  out.reserve(count);
  const std::size_t H = shape.height, W = shape.width, C = shape.channels;
  for (std::size_t n = 0; n < count; ++n) {
    std::vector<double> raw(shape.size());
    for (double& v : raw) v = rng.uniform01();
    Tensor img(shape);
    for (std::size_t h = 0; h < H; ++h) {
      for (std::size_t w = 0; w < W; ++w) {
        for (std::size_t c = 0; c < C; ++c) {
          double acc = 0.0;
          int taps = 0;
          for (std::size_t hh = h == 0 ? 0 : h - 1; hh <= std::min(h + 1, H - 1); ++hh) {
            for (std::size_t ww = w == 0 ? 0 : w - 1; ww <= std::min(w + 1, W - 1); ++ww) {
              acc += raw[(hh * W + ww) * C + c];
              ++taps;
            }
          }
          img.at(h, w, c) = std::clamp(static_cast<float>(acc / taps), 0.0f, 1.0f);
        }
      }
    }
    out.push_back({fmt::format("synthetic_{:04d}", n), std::move(img)});
  }
  return out;
}

ImageSet load_images(const ImageSource& source, const Shape& expected, const WarningSink& warn) {
  ImageSet set;
  if (const auto* synth = std::get_if<SyntheticImages>(&source)) {
    set.images = synthetic_images(expected, synth->seed, synth->count);
    return set;
  }
  const auto& dir = std::get<std::filesystem::path>(source);
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError(dir.string() + " is not a readable directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    try {
      Tensor t = read_image(file);
      if (t.shape() != expected) {
        throw FormatError(fmt::format("shape {} does not match the model input {}",
                                      to_string(t.shape()), to_string(expected)));
      }
      set.images.push_back({file.filename().string(), std::move(t)});
    } catch (const std::exception& e) {
      ++set.skipped;
      if (warn) warn(fmt::format("skipping {}: {}", file.string(), e.what()));
    }
  }
  return set;
}

Network load_model(const ModelSource& source) {
  if (const auto* random = std::get_if<RandomModel>(&source)) {
    return seeded_random_network(random->input_shape, random->num_classes, random->seed);
  }
  return load_weights(std::get<std::filesystem::path>(source));
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const WarningSink& warn) {
  spec.validate();
  if (warn && std::find(spec.gammas.begin(), spec.gammas.end(), 1.0) == spec.gammas.end()) {
    warn("gamma 1.0 is not in the list; change columns will be empty");
  }
  const Network net = load_model(spec.model);
  ImageSet set = load_images(spec.images, net.input_shape(), warn);
  if (set.images.empty()) {
    throw IoError(fmt::format("no usable images ({} skipped)", set.skipped));
  }
  ExperimentResult result = run_experiment(spec, net, set.images);
  result.images_skipped = set.skipped;
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const Network& net,
                                std::span<const NamedImage> images) {
  spec.validate();
  if (images.empty()) throw IoError("no usable images");
  const Shape shape = net.input_shape();
  std::vector<Mask> masks;
  masks.reserve(spec.gammas.size());
  for (double g : spec.gammas) masks.push_back(build_mask(shape.height, shape.width, g));

  const std::filesystem::path dump_dir = spec.output_dir / "images";
  if (!spec.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    if (spec.dump_images) std::filesystem::create_directories(dump_dir, ec);
    if (ec) throw IoError(fmt::format("cannot create {}: {}", spec.output_dir.string(), ec.message()));
  }

  const std::size_t per_method = spec.gammas.size() * images.size();
  const std::size_t total = spec.methods.size() * per_method;
  std::vector<DetailRow> details(total);

  auto run_task = [&](std::size_t task) {
    const Method method = spec.methods[task / per_method];
    const std::size_t gamma_index = (task % per_method) / images.size();
    const std::size_t image_index = task % images.size();
    const NamedImage& image = images[image_index];
    const Mask& mask = masks[gamma_index];

    AttackConfig cfg = spec.config(method);
    cfg.method = method;
    if (cfg.random_start) cfg.seed ^= name_hash(image.name);
    AttackOutcome outcome = run_attack(net, image.pixels, mask, cfg);

    DetailRow& d = details[task];
    d.result.method = method;
    d.result.gamma = spec.gammas[gamma_index];
    d.result.image = image.name;
    d.result.success = outcome.success;
    d.result.iterations = outcome.iterations_used;
    d.result.metrics = measure(image.pixels, outcome, mask);
    d.clean_label = outcome.clean_prediction.label;
    d.clean_confidence = outcome.clean_prediction.confidence;
    d.adv_label = outcome.adversarial_prediction.label;
    d.adv_confidence = outcome.adversarial_prediction.probabilities[d.clean_label];

    if (spec.dump_images && !spec.output_dir.empty()) {
      const LabeledOutcome labeled{std::move(outcome), d.result.gamma, image_index};
      dump_adversarial_images(std::span(&labeled, 1), dump_dir, spec.dump_failed);
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(spec.workers, 1, std::max<std::size_t>(total, 1));
  if (workers == 1) {
    for (std::size_t t = 0; t < total; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < total; t = next++) {
          try {
            run_task(t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = total;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<ImageResult> results;
  results.reserve(details.size());
  for (const auto& d : details) results.push_back(d.result);

  ExperimentResult out;
  out.rows = aggregate(results, spec.methods, spec.gammas);
  out.details = std::move(details);
  out.images_used = images.size();
  if (!spec.output_dir.empty()) {
    write_report(out.rows, spec.output_dir / "report.csv");
    write_details(out.details, spec.output_dir / "details.csv");
  }
  return out;
}

std::vector<std::filesystem::path> dump_adversarial_images(std::span<const LabeledOutcome> outcomes,
                                                           const std::filesystem::path& dir,
                                                           bool include_failed) {
  std::vector<std::filesystem::path> written;
  for (const LabeledOutcome& item : outcomes) {
    const AttackOutcome& o = item.outcome;
    if (!o.success && !include_failed) continue;
    const std::string stem = fmt::format("{}_g{:.2f}_img{:04d}_{}", to_string(o.method), item.gamma,
                                         item.image_index, o.success ? "ok" : "fail");
    const Shape& s = o.noise.shape();

    const auto adv_path = dir / (stem + (s.channels == 1 ? "_adv.pgm" : "_adv.ppm"));
    write_pnm(o.adversarial_image, adv_path);
    written.push_back(adv_path);

    Tensor heat(Shape{s.height, s.width, 1});
    float peak = 0.0f;
    for (std::size_t p = 0; p < s.pixels(); ++p) {
      float m = 0.0f;
      for (std::size_t c = 0; c < s.channels; ++c) m = std::max(m, std::fabs(o.noise[p * s.channels + c]));
      heat[p] = m;
      peak = std::max(peak, m);
    }
    if (peak > 0.0f) {
      for (float& v : heat.data()) v = std::ceil(v / peak * 255.0f) / 255.0f;
    }
    const auto noise_path = dir / (stem + "_noise.pgm");
    write_pnm(heat, noise_path);
    written.push_back(noise_path);
  }
  return written;
}

}  // namespace locnoise
