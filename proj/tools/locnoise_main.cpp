// locnoise: run localized FGSM / PGD / C&W campaigns and write CSV reports.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "locnoise/errors.hpp"
#include "locnoise/harness.hpp"
#include "locnoise/mask.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

locnoise::Shape parse_shape(const std::string& text) {
  locnoise::Shape s;
  char x1 = 0, x2 = 0;
  std::istringstream in(text);
  if (!(in >> s.height >> x1 >> s.width >> x2 >> s.channels) || x1 != 'x' || x2 != 'x' ||
      !in.eof()) {
    throw locnoise::ArgumentError("shape must look like HxWxC, got '" + text + "'");
  }
  return s;
}

struct AttackOptions {
  std::string model;
  std::string images;
  std::string methods = "fgsm,pgd,cw";
  std::string gammas = "1.0,0.75,0.5,0.25";
  std::optional<float> epsilon;
  std::optional<float> alpha;
  std::optional<float> lr;
  std::optional<float> c;
  std::optional<float> kappa;
  std::optional<std::size_t> max_iters;
  std::optional<float> confidence_drop;
  std::string out;
  bool dump_images = false;
  bool dump_failed = false;
  std::size_t workers = 0;
  std::optional<std::uint64_t> seed;
  bool random_start = false;
  std::string shape = "32x32x3";
  std::size_t classes = 9;
  bool quiet = false;
};

locnoise::ExperimentSpec build_spec(const AttackOptions& opt) {
  using namespace locnoise;
  ExperimentSpec spec;
  spec.model = parse_model_source(opt.model);
  if (auto* random = std::get_if<RandomModel>(&spec.model)) {
    random->input_shape = parse_shape(opt.shape);
    random->num_classes = opt.classes;
  }
  spec.images = parse_image_source(opt.images);

  spec.methods.clear();
  for (const auto& name : split_list(opt.methods)) {
    const auto m = parse_method(name);
    if (!m) throw ArgumentError("unknown method '" + name + "' (expected fgsm, pgd or cw)");
    spec.methods.push_back(*m);
  }
  spec.gammas.clear();
  for (const auto& g : split_list(opt.gammas)) {
    try {
      std::size_t used = 0;
      spec.gammas.push_back(std::stod(g, &used));
      if (used != g.size()) throw std::invalid_argument(g);
    } catch (const std::exception&) {
      throw ArgumentError("bad gamma value '" + g + "'");
    }
  }

  for (auto& cfg : spec.configs) {
    if (opt.epsilon) cfg.epsilon = *opt.epsilon;
    if (opt.alpha) cfg.alpha = *opt.alpha;
    if (opt.lr) cfg.eta = *opt.lr;
    if (opt.c) cfg.c = *opt.c;
    if (opt.kappa) cfg.kappa = *opt.kappa;
    if (opt.max_iters) cfg.max_iters = *opt.max_iters;
    if (opt.confidence_drop) cfg.fgsm_confidence_drop = *opt.confidence_drop;
  }
  auto& pgd = spec.config(Method::kPgd);
  pgd.random_start = opt.random_start;
  if (opt.seed) pgd.seed = *opt.seed;

  spec.output_dir = opt.out;
  spec.workers = opt.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.workers;
  spec.dump_images = opt.dump_images;
  spec.dump_failed = opt.dump_failed;
  return spec;
}

int run_attack_command(const AttackOptions& opt) {
  const locnoise::ExperimentSpec spec = build_spec(opt);
  const auto result = locnoise::run_experiment(
      spec, [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; });
  if (!opt.quiet) {
    std::cout << locnoise::format_report(result.rows);
    std::cerr << fmt::format("{} images attacked, {} skipped; report in {}\n", result.images_used,
                             result.images_skipped, (spec.output_dir / "report.csv").string());
  }
  return EXIT_SUCCESS;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Localized adversarial noise: masked FGSM, PGD and C&W attacks"};
  app.require_subcommand(1);

  AttackOptions opt;
  auto* attack = app.add_subcommand("attack", "Run a method x gamma campaign and write CSV reports");
  attack->add_option("--model", opt.model, "Weight file (LOCN) or random:SEED")->required();
  attack->add_option("--images", opt.images, "Image directory (.png/.ltns) or synthetic:SEED:COUNT")
      ->required();
  attack->add_option("--methods", opt.methods, "Comma-separated subset of fgsm,pgd,cw")
      ->capture_default_str();
  attack->add_option("--gammas", opt.gammas, "Comma-separated mask coverages in (0, 1]")
      ->capture_default_str();
  attack->add_option("--epsilon", opt.epsilon, "L-inf budget for FGSM and PGD (defaults 0.05 / 0.02)");
  attack->add_option("--alpha", opt.alpha, "PGD step size (default 0.01)");
  attack->add_option("--lr", opt.lr, "C&W learning rate (default 0.01)");
  attack->add_option("--c", opt.c, "C&W trade-off constant (default 10)");
  attack->add_option("--kappa", opt.kappa, "C&W margin constant (default 1000)");
  attack->add_option("--max-iters", opt.max_iters, "Iteration cap for PGD and C&W (default 250)");
  attack->add_option("--confidence-drop", opt.confidence_drop,
                     "Relative confidence drop that counts as FGSM success (default 0.5)");
  attack->add_option("--out", opt.out, "Output directory")->required();
  attack->add_flag("--dump-images", opt.dump_images, "Write adversarial and noise images (PGM/PPM)");
  attack->add_flag("--dump-failed", opt.dump_failed, "Also dump failed attempts");
  attack->add_option("--workers", opt.workers, "Worker threads (0 = hardware concurrency)");
  attack->add_option("--seed", opt.seed, "Seed for the PGD random start");
  attack->add_flag("--random-start", opt.random_start, "Start PGD from uniform(-eps, eps) noise");
  attack->add_option("--shape", opt.shape, "Input shape HxWxC for random models")->capture_default_str();
  attack->add_option("--classes", opt.classes, "Class count for random models")->capture_default_str();
  attack->add_flag("-q,--quiet", opt.quiet, "Do not print the report");

  std::size_t mask_h = 0, mask_w = 0;
  double mask_gamma = 1.0;
  std::string mask_out;
  auto* mask = app.add_subcommand("mask", "Write the centered mask for a coverage as PGM");
  mask->add_option("--height", mask_h, "Image height")->required();
  mask->add_option("--width", mask_w, "Image width")->required();
  mask->add_option("--gamma", mask_gamma, "Coverage in (0, 1]")->required();
  mask->add_option("--out", mask_out, "Output PGM path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return EXIT_FAILURE;
  }

  try {
    if (*attack) return run_attack_command(opt);
    const auto m = locnoise::build_mask(mask_h, mask_w, mask_gamma);
    locnoise::write_pgm(m, mask_out);
    std::cout << fmt::format("{}x{} mask, requested {:.4f}, actual {:.6f}\n", m.height(), m.width(),
                             m.gamma_requested(), m.coverage_actual());
    return EXIT_SUCCESS;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
}
