#include "locnoise/attacks.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "locnoise/errors.hpp"
#include "locnoise/random.hpp"

namespace locnoise {

namespace {

float sign_of(float v) { return v > 0.0f ? 1.0f : (v < 0.0f ? -1.0f : 0.0f); }

void check_inputs(const Network& net, const Tensor& x, const Mask& mask) {
  if (x.shape() != net.input_shape()) {
    throw ArgumentError(fmt::format("image {} does not match network input {}",
                                    to_string(x.shape()), to_string(net.input_shape())));
  }
  if (mask.height() != x.shape().height || mask.width() != x.shape().width) {
    throw ArgumentError(fmt::format("mask {}x{} does not match image {}", mask.height(),
                                    mask.width(), to_string(x.shape())));
  }
  const auto out_of_range = std::find_if(x.data().begin(), x.data().end(),
                                         [](float v) { return v < 0.0f || v > 1.0f; });
  if (out_of_range != x.data().end()) throw ArgumentError("image values must lie in [0, 1]");
}

// Calls fn(i) for every element index whose pixel is active.
template <class Fn>
void for_each_active(const Mask& mask, std::size_t channels, Fn&& fn) {
  const auto bits = mask.bits();
  for (std::size_t p = 0; p < bits.size(); ++p) {
    if (!bits[p]) continue;
    for (std::size_t c = 0; c < channels; ++c) fn(p * channels + c);
  }
}

AttackOutcome finish(Method method, const Tensor& x, Tensor noise, Prediction clean,
                     Prediction adversarial, bool success, std::size_t iterations) {
  AttackOutcome out;
  out.method = method;
  out.success = success;
  out.iterations_used = iterations;
  out.adversarial_image = perturbed_input(x, noise);
  out.noise = std::move(noise);
  out.clean_prediction = std::move(clean);
  out.adversarial_prediction = std::move(adversarial);
  return out;
}

// Shared loop of the iterative attacks: update, re-evaluate, stop on the
// first misclassification.
template <class Update>
AttackOutcome iterate(Method method, const Network& net, const Tensor& x, Tensor noise,
                      const AttackConfig& cfg, Update&& update) {
  ForwardTrace current = trace_forward(net, perturbed_input(x, noise));
  const Prediction clean = forward(net, x);
  const std::size_t y = clean.label;
  std::size_t steps = 0;
  bool success = false;
  while (steps < cfg.max_iters && !success) {
    noise = update(current, noise, y);
    ++steps;
    current = trace_forward(net, perturbed_input(x, noise));
    success = current.prediction.label != y;
  }
  return finish(method, x, std::move(noise), clean, std::move(current.prediction), success, steps);
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::kFgsm: return "fgsm";
    case Method::kPgd: return "pgd";
    case Method::kCw: return "cw";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  if (name == "fgsm") return Method::kFgsm;
  if (name == "pgd") return Method::kPgd;
  if (name == "cw") return Method::kCw;
  return std::nullopt;
}

AttackConfig AttackConfig::defaults_for(Method method) {
  AttackConfig cfg;
  cfg.method = method;
  cfg.epsilon = method == Method::kFgsm ? 0.05f : 0.02f;
  return cfg;
}

void AttackConfig::validate() const {
  auto positive = [](float v) { return std::isfinite(v) && v > 0.0f; };
  if (!positive(epsilon)) throw ArgumentError(fmt::format("epsilon must be positive, got {}", epsilon));
  if (!positive(alpha)) throw ArgumentError(fmt::format("alpha must be positive, got {}", alpha));
  if (!positive(eta)) throw ArgumentError(fmt::format("learning rate must be positive, got {}", eta));
  if (!std::isfinite(c) || c < 0.0f) throw ArgumentError(fmt::format("C must be non-negative, got {}", c));
  if (!std::isfinite(kappa) || kappa < 0.0f) {
    throw ArgumentError(fmt::format("kappa must be non-negative, got {}", kappa));
  }
  if (max_iters < 1) throw ArgumentError("max_iters must be at least 1");
  if (!(fgsm_confidence_drop > 0.0f && fgsm_confidence_drop <= 1.0f)) {
    throw ArgumentError(fmt::format("FGSM confidence drop must lie in (0, 1], got {}",
                                    fgsm_confidence_drop));
  }
}

Tensor project_linf(const Tensor& noise, float epsilon) {
  if (!(epsilon > 0.0f)) throw ArgumentError(fmt::format("epsilon must be positive, got {}", epsilon));
  return clamp(noise, -epsilon, epsilon);
}

Tensor perturbed_input(const Tensor& x, const Tensor& noise) {
  if (x.shape() != noise.shape()) throw ArgumentError("noise shape does not match the image");
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i] + noise[i], 0.0f, 1.0f);
  return out;
}

Tensor pgd_update(const Network& net, const ForwardTrace& at_current, const Mask& mask,
                  const Tensor& noise, std::size_t y, const AttackConfig& cfg) {
  const Tensor grad =
      backpropagate(net, at_current, cross_entropy_logit_gradient(at_current.prediction, y));
  Tensor next = noise;
  const float alpha = cfg.alpha;
  const float eps = cfg.epsilon;
  for_each_active(mask, noise.shape().channels, [&](std::size_t i) {
    next[i] = std::clamp(noise[i] + alpha * sign_of(grad[i]), -eps, eps);
  });
  return next;
}

Tensor cw_update(const Network& net, const ForwardTrace& at_current, const Mask& mask,
                 const Tensor& noise, std::size_t y, const AttackConfig& cfg) {
  const std::vector<float>& z = at_current.prediction.logits;
  std::vector<float> logit_grad(z.size(), 0.0f);
  std::optional<std::size_t> runner_up;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i != y && (!runner_up || z[i] > z[*runner_up])) runner_up = i;
  }
  if (runner_up && z[y] - z[*runner_up] > -cfg.kappa) {
    logit_grad[y] = cfg.c;
    logit_grad[*runner_up] = -cfg.c;
  }
  const Tensor grad = backpropagate(net, at_current, logit_grad);
  Tensor next = noise;
  const float eta = cfg.eta;
  for_each_active(mask, noise.shape().channels, [&](std::size_t i) {
    next[i] = noise[i] - eta * (grad[i] + 2.0f * noise[i]);
  });
  return next;
}

Tensor pgd_step(const Network& net, const Tensor& x, const Mask& mask, const Tensor& noise,
                std::size_t y, const AttackConfig& cfg) {
  check_inputs(net, x, mask);
  return pgd_update(net, trace_forward(net, perturbed_input(x, noise)), mask, noise, y, cfg);
}

Tensor cw_step(const Network& net, const Tensor& x, const Mask& mask, const Tensor& noise,
               std::size_t y, const AttackConfig& cfg) {
  check_inputs(net, x, mask);
  return cw_update(net, trace_forward(net, perturbed_input(x, noise)), mask, noise, y, cfg);
}

AttackOutcome fgsm_localized(const Network& net, const Tensor& x, const Mask& mask,
                             const AttackConfig& cfg) {
  cfg.validate();
  check_inputs(net, x, mask);
  const ForwardTrace clean = trace_forward(net, x);
  const std::size_t y = clean.prediction.label;
  const Tensor grad = backpropagate(net, clean, cross_entropy_logit_gradient(clean.prediction, y));

  Tensor noise(x.shape());
  const float eps = cfg.epsilon;
  for_each_active(mask, x.shape().channels, [&](std::size_t i) { noise[i] = eps * sign_of(grad[i]); });

  Prediction adversarial = forward(net, perturbed_input(x, noise));
  const float threshold = (1.0f - cfg.fgsm_confidence_drop) * clean.prediction.confidence;
  const bool success = adversarial.probabilities[y] <= threshold;
  return finish(Method::kFgsm, x, std::move(noise), clean.prediction, std::move(adversarial),
                success, 1);
}

AttackOutcome pgd_localized(const Network& net, const Tensor& x, const Mask& mask,
                            const AttackConfig& cfg) {
  cfg.validate();
  check_inputs(net, x, mask);
  Tensor start(x.shape());
  if (cfg.random_start) {
    Rng rng(cfg.seed);
    const double eps = cfg.epsilon;
    for_each_active(mask, x.shape().channels, [&](std::size_t i) {
      start[i] = static_cast<float>(rng.uniform(-eps, eps));
    });
  }
  return iterate(Method::kPgd, net, x, std::move(start), cfg,
                 [&](const ForwardTrace& trace, const Tensor& noise, std::size_t y) {
                   return pgd_update(net, trace, mask, noise, y, cfg);
                 });
}

AttackOutcome cw_localized(const Network& net, const Tensor& x, const Mask& mask,
                           const AttackConfig& cfg) {
  cfg.validate();
  check_inputs(net, x, mask);
  return iterate(Method::kCw, net, x, Tensor(x.shape()), cfg,
                 [&](const ForwardTrace& trace, const Tensor& noise, std::size_t y) {
                   return cw_update(net, trace, mask, noise, y, cfg);
                 });
}

AttackOutcome run_attack(const Network& net, const Tensor& x, const Mask& mask,
                         const AttackConfig& cfg) {
  switch (cfg.method) {
    case Method::kFgsm: return fgsm_localized(net, x, mask, cfg);
    case Method::kPgd: return pgd_localized(net, x, mask, cfg);
    case Method::kCw: return cw_localized(net, x, mask, cfg);
  }
  throw ArgumentError("unknown attack method");
}

AttackOutcome run_attack(const Network& net, const Tensor& x, double gamma,
                         const AttackConfig& cfg) {
  return run_attack(net, x, build_mask(x.shape().height, x.shape().width, gamma), cfg);
}

}  // namespace locnoise
