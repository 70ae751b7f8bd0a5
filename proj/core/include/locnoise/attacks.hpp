#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "locnoise/mask.hpp"
#include "locnoise/network.hpp"
#include "locnoise/tensor.hpp"

namespace locnoise {

enum class Method { kFgsm, kPgd, kCw };

std::string_view to_string(Method method) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

/// Hyperparameters for one attack. `defaults_for` gives the default
/// settings: FGSM eps 0.05; PGD eps 0.02, alpha 0.01; C&W lr 0.01, C 10,
/// kappa 1000; at most 250 iterations.
struct AttackConfig {
  Method method = Method::kPgd;
  float epsilon = 0.02f;
  float alpha = 0.01f;
  float eta = 0.01f;
  float c = 10.0f;
  float kappa = 1000.0f;
  std::size_t max_iters = 250;
  /// FGSM succeeds when p(y) falls to at most (1 - drop) of its clean value.
  float fgsm_confidence_drop = 0.5f;
  /// PGD only: start from uniform(-eps, eps) noise drawn from Rng(seed).
  bool random_start = false;
  std::uint64_t seed = 0;

  static AttackConfig defaults_for(Method method);

  /// Throws ArgumentError when a field is out of range.
  void validate() const;
};

struct AttackOutcome {
  Method method = Method::kPgd;
  bool success = false;
  std::size_t iterations_used = 0;
  /// Zero outside the mask.
  Tensor noise;
  /// clamp(x + noise, 0, 1).
  Tensor adversarial_image;
  Prediction clean_prediction;
  Prediction adversarial_prediction;
};

/// Element-wise clamp of `noise` into [-epsilon, epsilon].
Tensor project_linf(const Tensor& noise, float epsilon);

/// clamp(x + noise, 0, 1); `noise` is assumed to be mask-confined already.
Tensor perturbed_input(const Tensor& x, const Tensor& noise);

/// One PGD update N <- clip_eps(N + alpha * sign(grad J(x_l, y)) * M), where
/// `at_current` is the forward trace at x_l = perturbed_input(x, N).
Tensor pgd_update(const Network& net, const ForwardTrace& at_current, const Mask& mask,
                  const Tensor& noise, std::size_t y, const AttackConfig& cfg);

/// One C&W update N <- N - eta * (C * grad g(x_l) + 2N) * M with the
/// untargeted margin g = max(Z_y - max_{i != y} Z_i, -kappa). Descending g
/// pushes the clean label y below its strongest rival; the runner-up is the
/// lowest index on ties.
Tensor cw_update(const Network& net, const ForwardTrace& at_current, const Mask& mask,
                 const Tensor& noise, std::size_t y, const AttackConfig& cfg);

/// Convenience forms of the updates that run the forward pass themselves.
Tensor pgd_step(const Network& net, const Tensor& x, const Mask& mask, const Tensor& noise,
                std::size_t y, const AttackConfig& cfg);
Tensor cw_step(const Network& net, const Tensor& x, const Mask& mask, const Tensor& noise,
               std::size_t y, const AttackConfig& cfg);

// The label under attack is always the network's prediction on the clean x.

AttackOutcome fgsm_localized(const Network& net, const Tensor& x, const Mask& mask,
                             const AttackConfig& cfg);
AttackOutcome pgd_localized(const Network& net, const Tensor& x, const Mask& mask,
                            const AttackConfig& cfg);
AttackOutcome cw_localized(const Network& net, const Tensor& x, const Mask& mask,
                           const AttackConfig& cfg);

/// Dispatches on cfg.method.
AttackOutcome run_attack(const Network& net, const Tensor& x, const Mask& mask,
                         const AttackConfig& cfg);

/// Builds the centered mask for `gamma` and dispatches.
AttackOutcome run_attack(const Network& net, const Tensor& x, double gamma,
                         const AttackConfig& cfg);

}  // namespace locnoise
