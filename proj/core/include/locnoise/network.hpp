#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "locnoise/tensor.hpp"

namespace locnoise {

/// Stride-1 convolution with "same" zero padding. Weights are stored
/// row-major in (kernel_h, kernel_w, in_channels, out_channels) order.
struct Conv2d {
  std::size_t kernel_h = 0;
  std::size_t kernel_w = 0;
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::vector<float> weights;
  std::vector<float> bias;
};

struct Relu {};

/// 2x2 window, stride 2. Odd trailing rows/columns are dropped.
struct MaxPool2 {};

/// Reshapes (h, w, c) into a (1, 1, h*w*c) vector, preserving row-major order.
struct Flatten {};

/// Fully connected layer on a flat input. Weights are (in_dim, out_dim) row-major.
struct Dense {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<float> weights;
  std::vector<float> bias;
};

using Layer = std::variant<Conv2d, Relu, MaxPool2, Flatten, Dense>;

/// Kind tags as they appear in the weight file.
enum class LayerKind : std::uint8_t {
  kConv2d = 0,
  kRelu = 1,
  kMaxPool2 = 2,
  kFlatten = 3,
  kDense = 4,
};

LayerKind kind_of(const Layer& layer) noexcept;
const char* name_of(LayerKind kind) noexcept;

/// Immutable layer stack. Construction checks that shapes chain from
/// `input_shape` to a flat logit vector and throws ValidationError naming
/// the first offending layer.
class Network {
 public:
  Network(Shape input_shape, std::vector<Layer> layers);

  const Shape& input_shape() const noexcept { return input_shape_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }

  /// Shape produced by layer `i`.
  const Shape& output_shape(std::size_t i) const { return output_shapes_.at(i); }

 private:
  Shape input_shape_;
  std::vector<Layer> layers_;
  std::vector<Shape> output_shapes_;
  std::size_t num_classes_ = 0;
};

struct Prediction {
  std::vector<float> logits;
  std::vector<float> probabilities;
  std::size_t label = 0;
  float confidence = 0.0f;
};

/// Index of the largest value, lowest index on ties.
std::size_t argmax(std::span<const float> values);

/// Softmax computed in double through log-sum-exp, rounded to float.
std::vector<float> softmax(std::span<const float> logits);

/// Activations recorded by a forward pass; `inputs[i]` is what layer i saw.
struct ForwardTrace {
  std::vector<std::vector<float>> inputs;
  Prediction prediction;
};

ForwardTrace trace_forward(const Network& net, const Tensor& x);

/// Reverse-mode pass from d(objective)/d(logits) back to the input.
Tensor backpropagate(const Network& net, const ForwardTrace& trace,
                     std::span<const float> logit_gradient);

Prediction forward(const Network& net, const Tensor& x);

/// Cross-entropy -log p(y|x).
float loss(const Network& net, const Tensor& x, std::size_t y);

/// Gradient of the cross-entropy with respect to the input image.
Tensor input_gradient(const Network& net, const Tensor& x, std::size_t y);

/// Gradient of cross-entropy at the top of the network: softmax(z) - onehot(y).
std::vector<float> cross_entropy_logit_gradient(const Prediction& prediction, std::size_t y);

/// Fixed two-block CNN:
///   conv3x3(C->8), relu, maxpool2, conv3x3(8->16), relu, maxpool2, flatten, dense(->classes)
///
/// Weights are drawn from a single Rng(seed) stream, layer by layer in
/// storage order, as u * kSeededWeightBound / sqrt(fan_in) with u uniform in
/// [-1, 1). The first convolution's biases cancel its response to a uniform
/// kSeededBiasLevel input away from the border (bias_o = -level * sum of
/// channel o's kernel); all other biases are zero. Height and width must be
/// divisible by 4.
Network seeded_random_network(Shape input_shape, std::size_t num_classes, std::uint64_t seed);

inline constexpr double kSeededWeightBound = 3.5;
inline constexpr double kSeededBiasLevel = 0.3;

}  // namespace locnoise
