#include "locnoise/network.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "locnoise/errors.hpp"
#include "locnoise/random.hpp"

namespace locnoise {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool all_finite(const std::vector<float>& v) {
  return std::all_of(v.begin(), v.end(), [](float x) { return std::isfinite(x); });
}

Shape infer_output(const Layer& layer, const Shape& in, std::size_t index) {
  return std::visit(
      Overloaded{
          [&](const Conv2d& c) {
            if (c.kernel_h == 0 || c.kernel_w == 0 || c.out_channels == 0) {
              throw ValidationError(index, "conv2d has an empty kernel");
            }
            if (c.in_channels != in.channels) {
              throw ValidationError(index, fmt::format("conv2d expects {} input channels, got {}",
                                                       c.in_channels, in.channels));
            }
            if (c.weights.size() != c.kernel_h * c.kernel_w * c.in_channels * c.out_channels ||
                c.bias.size() != c.out_channels) {
              throw ValidationError(index, "conv2d weight or bias size does not match its shape");
            }
            if (!all_finite(c.weights) || !all_finite(c.bias)) {
              throw ValidationError(index, "conv2d has non-finite weights");
            }
            return Shape{in.height, in.width, c.out_channels};
          },
          [&](const Relu&) { return in; },
          [&](const MaxPool2&) {
            if (in.height < 2 || in.width < 2) {
              throw ValidationError(index, fmt::format("maxpool2 needs at least 2x2 input, got {}",
                                                       to_string(in)));
            }
            return Shape{in.height / 2, in.width / 2, in.channels};
          },
          [&](const Flatten&) { return Shape{1, 1, in.size()}; },
          [&](const Dense& d) {
            if (in.height != 1 || in.width != 1) {
              throw ValidationError(index, fmt::format("dense needs a flattened input, got {}",
                                                       to_string(in)));
            }
            if (d.in_dim != in.channels) {
              throw ValidationError(index, fmt::format("dense expects {} input features, got {}",
                                                       d.in_dim, in.channels));
            }
            if (d.out_dim == 0 || d.weights.size() != d.in_dim * d.out_dim ||
                d.bias.size() != d.out_dim) {
              throw ValidationError(index, "dense weight or bias size does not match its shape");
            }
            if (!all_finite(d.weights) || !all_finite(d.bias)) {
              throw ValidationError(index, "dense has non-finite weights");
            }
            return Shape{1, 1, d.out_dim};
          },
      },
      layer);
}

void conv_forward(const Conv2d& c, const Shape& in_shape, std::span<const float> in,
                  std::span<float> out) {
  const std::size_t H = in_shape.height, W = in_shape.width;
  const std::size_t C = c.in_channels, O = c.out_channels;
  const std::ptrdiff_t pad_h = static_cast<std::ptrdiff_t>((c.kernel_h - 1) / 2);
  const std::ptrdiff_t pad_w = static_cast<std::ptrdiff_t>((c.kernel_w - 1) / 2);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t w = 0; w < W; ++w) {
      float* o = out.data() + (h * W + w) * O;
      std::copy(c.bias.begin(), c.bias.end(), o);
      for (std::size_t kh = 0; kh < c.kernel_h; ++kh) {
        const std::ptrdiff_t ih = static_cast<std::ptrdiff_t>(h + kh) - pad_h;
        if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(H)) continue;
        for (std::size_t kw = 0; kw < c.kernel_w; ++kw) {
          const std::ptrdiff_t iw = static_cast<std::ptrdiff_t>(w + kw) - pad_w;
          if (iw < 0 || iw >= static_cast<std::ptrdiff_t>(W)) continue;
          const float* x = in.data() + (static_cast<std::size_t>(ih) * W + static_cast<std::size_t>(iw)) * C;
          const float* k = c.weights.data() + (kh * c.kernel_w + kw) * C * O;
          for (std::size_t ci = 0; ci < C; ++ci) {
            const float xv = x[ci];
            const float* kr = k + ci * O;
            for (std::size_t oc = 0; oc < O; ++oc) o[oc] += xv * kr[oc];
          }
        }
      }
    }
  }
}

void conv_backward(const Conv2d& c, const Shape& in_shape, std::span<const float> grad_out,
                   std::span<float> grad_in) {
  const std::size_t H = in_shape.height, W = in_shape.width;
  const std::size_t C = c.in_channels, O = c.out_channels;
  const std::ptrdiff_t pad_h = static_cast<std::ptrdiff_t>((c.kernel_h - 1) / 2);
  const std::ptrdiff_t pad_w = static_cast<std::ptrdiff_t>((c.kernel_w - 1) / 2);
  std::fill(grad_in.begin(), grad_in.end(), 0.0f);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t w = 0; w < W; ++w) {
      const float* g = grad_out.data() + (h * W + w) * O;
      for (std::size_t kh = 0; kh < c.kernel_h; ++kh) {
        const std::ptrdiff_t ih = static_cast<std::ptrdiff_t>(h + kh) - pad_h;
        if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(H)) continue;
        for (std::size_t kw = 0; kw < c.kernel_w; ++kw) {
          const std::ptrdiff_t iw = static_cast<std::ptrdiff_t>(w + kw) - pad_w;
          if (iw < 0 || iw >= static_cast<std::ptrdiff_t>(W)) continue;
          float* gi = grad_in.data() + (static_cast<std::size_t>(ih) * W + static_cast<std::size_t>(iw)) * C;
          const float* k = c.weights.data() + (kh * c.kernel_w + kw) * C * O;
          for (std::size_t ci = 0; ci < C; ++ci) {
            const float* kr = k + ci * O;
            float acc = 0.0f;
            for (std::size_t oc = 0; oc < O; ++oc) acc += kr[oc] * g[oc];
            gi[ci] += acc;
          }
        }
      }
    }
  }
}

// Offset of the winning element of the 2x2 window at output (h, w, ch).
// Row-major scan with strict comparison: the first maximum wins.
std::size_t pool_winner(const Shape& in_shape, std::span<const float> in, std::size_t h,
                        std::size_t w, std::size_t ch) {
  const std::size_t W = in_shape.width, C = in_shape.channels;
  std::size_t best = ((2 * h) * W + 2 * w) * C + ch;
  for (std::size_t dh = 0; dh < 2; ++dh) {
    for (std::size_t dw = 0; dw < 2; ++dw) {
      const std::size_t idx = ((2 * h + dh) * W + (2 * w + dw)) * C + ch;
      if (in[idx] > in[best]) best = idx;
    }
  }
  return best;
}

}  // namespace

LayerKind kind_of(const Layer& layer) noexcept {
  return static_cast<LayerKind>(layer.index());
}

const char* name_of(LayerKind kind) noexcept {
  switch (kind) {
    case LayerKind::kConv2d: return "conv2d";
    case LayerKind::kRelu: return "relu";
    case LayerKind::kMaxPool2: return "maxpool2";
    case LayerKind::kFlatten: return "flatten";
    case LayerKind::kDense: return "dense";
  }
  return "unknown";
}

Network::Network(Shape input_shape, std::vector<Layer> layers)
    : input_shape_(input_shape), layers_(std::move(layers)) {
  if (input_shape_.size() == 0) throw ValidationError(0, "input shape is empty");
  if (layers_.empty()) throw ValidationError(0, "network has no layers");
  Shape current = input_shape_;
  output_shapes_.reserve(layers_.size());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    current = infer_output(layers_[i], current, i);
    output_shapes_.push_back(current);
  }
  if (current.height != 1 || current.width != 1) {
    throw ValidationError(layers_.size() - 1,
                          fmt::format("final output {} is not a flat logit vector", to_string(current)));
  }
  num_classes_ = current.channels;
}

std::size_t argmax(std::span<const float> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::vector<float> softmax(std::span<const float> logits) {
  double peak = logits.empty() ? 0.0 : logits[argmax(logits)];
  double denom = 0.0;
  for (float z : logits) denom += std::exp(static_cast<double>(z) - peak);
  std::vector<float> p(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = static_cast<float>(std::exp(static_cast<double>(logits[i]) - peak) / denom);
  }
  return p;
}

ForwardTrace trace_forward(const Network& net, const Tensor& x) {
  if (x.shape() != net.input_shape()) {
    throw ArgumentError(fmt::format("input shape {} does not match network input {}",
                                    to_string(x.shape()), to_string(net.input_shape())));
  }
  ForwardTrace trace;
  const auto& layers = net.layers();
  trace.inputs.reserve(layers.size());
  std::vector<float> current(x.data().begin(), x.data().end());
  Shape shape = net.input_shape();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Shape out_shape = net.output_shape(i);
    std::vector<float> next(out_shape.size());
    std::visit(Overloaded{
                   [&](const Conv2d& c) { conv_forward(c, shape, current, next); },
                   [&](const Relu&) {
                     std::transform(current.begin(), current.end(), next.begin(),
                                    [](float v) { return v > 0.0f ? v : 0.0f; });
                   },
                   [&](const MaxPool2&) {
                     for (std::size_t h = 0; h < out_shape.height; ++h)
                       for (std::size_t w = 0; w < out_shape.width; ++w)
                         for (std::size_t c = 0; c < out_shape.channels; ++c)
                           next[(h * out_shape.width + w) * out_shape.channels + c] =
                               current[pool_winner(shape, current, h, w, c)];
                   },
                   [&](const Flatten&) { next = current; },
                   [&](const Dense& d) {
                     std::copy(d.bias.begin(), d.bias.end(), next.begin());
                     for (std::size_t k = 0; k < d.in_dim; ++k) {
                       const float xv = current[k];
                       const float* row = d.weights.data() + k * d.out_dim;
                       for (std::size_t j = 0; j < d.out_dim; ++j) next[j] += xv * row[j];
                     }
                   },
               },
               layers[i]);
    trace.inputs.push_back(std::move(current));
    current = std::move(next);
    shape = out_shape;
  }

  Prediction& p = trace.prediction;
  p.logits = std::move(current);
  p.probabilities = softmax(p.logits);
  p.label = argmax(p.logits);
  p.confidence = p.probabilities[p.label];
  return trace;
}

Tensor backpropagate(const Network& net, const ForwardTrace& trace,
                     std::span<const float> logit_gradient) {
  if (logit_gradient.size() != net.num_classes()) {
    throw ArgumentError("logit gradient length does not match the class count");
  }
  const auto& layers = net.layers();
  std::vector<float> grad(logit_gradient.begin(), logit_gradient.end());
  for (std::size_t i = layers.size(); i-- > 0;) {
    const Shape in_shape = i == 0 ? net.input_shape() : net.output_shape(i - 1);
    const std::vector<float>& in = trace.inputs[i];
    std::vector<float> grad_in(in_shape.size(), 0.0f);
    std::visit(Overloaded{
                   [&](const Conv2d& c) { conv_backward(c, in_shape, grad, grad_in); },
                   [&](const Relu&) {
                     for (std::size_t k = 0; k < in.size(); ++k)
                       grad_in[k] = in[k] > 0.0f ? grad[k] : 0.0f;
                   },
                   [&](const MaxPool2&) {
                     const Shape out_shape = net.output_shape(i);
                     for (std::size_t h = 0; h < out_shape.height; ++h)
                       for (std::size_t w = 0; w < out_shape.width; ++w)
                         for (std::size_t c = 0; c < out_shape.channels; ++c)
                           grad_in[pool_winner(in_shape, in, h, w, c)] +=
                               grad[(h * out_shape.width + w) * out_shape.channels + c];
                   },
                   [&](const Flatten&) { grad_in = grad; },
                   [&](const Dense& d) {
                     for (std::size_t k = 0; k < d.in_dim; ++k) {
                       const float* row = d.weights.data() + k * d.out_dim;
                       float acc = 0.0f;
                       for (std::size_t j = 0; j < d.out_dim; ++j) acc += row[j] * grad[j];
                       grad_in[k] = acc;
                     }
                   },
               },
               layers[i]);
    grad = std::move(grad_in);
  }
  return Tensor(net.input_shape(), std::move(grad));
}

Prediction forward(const Network& net, const Tensor& x) {
  return trace_forward(net, x).prediction;
}

namespace {
void check_label(const Network& net, std::size_t y) {
  if (y >= net.num_classes()) {
    throw ArgumentError(fmt::format("label {} out of range for {} classes", y, net.num_classes()));
  }
}
}  // namespace

float loss(const Network& net, const Tensor& x, std::size_t y) {
  check_label(net, y);
  const Prediction p = forward(net, x);
  const double peak = p.logits[p.label];
  double denom = 0.0;
  for (float z : p.logits) denom += std::exp(static_cast<double>(z) - peak);
  const double j = peak + std::log(denom) - static_cast<double>(p.logits[y]);
  return static_cast<float>(std::max(j, 0.0));
}

std::vector<float> cross_entropy_logit_gradient(const Prediction& prediction, std::size_t y) {
  std::vector<float> g = prediction.probabilities;
  g.at(y) -= 1.0f;
  return g;
}

Tensor input_gradient(const Network& net, const Tensor& x, std::size_t y) {
  check_label(net, y);
  const ForwardTrace trace = trace_forward(net, x);
  return backpropagate(net, trace, cross_entropy_logit_gradient(trace.prediction, y));
}

Network seeded_random_network(Shape input_shape, std::size_t num_classes, std::uint64_t seed) {
  if (input_shape.height == 0 || input_shape.width == 0 || input_shape.height % 4 != 0 ||
      input_shape.width % 4 != 0) {
    throw ArgumentError(fmt::format("input {} must have height and width divisible by 4",
                                    to_string(input_shape)));
  }
  if (input_shape.channels == 0 || num_classes == 0) {
    throw ArgumentError("channels and class count must be positive");
  }
  Rng rng(seed);
  auto draw = [&rng](std::vector<float>& w, std::size_t fan_in) {
    const double scale = kSeededWeightBound / std::sqrt(static_cast<double>(fan_in));
    for (float& v : w) v = static_cast<float>(rng.uniform(-1.0, 1.0) * scale);
  };
  auto conv = [&](std::size_t in_ch, std::size_t out_ch) {
    Conv2d c{3, 3, in_ch, out_ch, std::vector<float>(9 * in_ch * out_ch),
             std::vector<float>(out_ch, 0.0f)};
    draw(c.weights, 9 * in_ch);
    return c;
  };

  Conv2d first = conv(input_shape.channels, 8);
  for (std::size_t o = 0; o < first.out_channels; ++o) {
    double column = 0.0;
    for (std::size_t k = o; k < first.weights.size(); k += first.out_channels) column += first.weights[k];
    first.bias[o] = static_cast<float>(-kSeededBiasLevel * column);
  }

  std::vector<Layer> layers;
  layers.emplace_back(std::move(first));
  layers.emplace_back(Relu{});
  layers.emplace_back(MaxPool2{});
  layers.emplace_back(conv(8, 16));
  layers.emplace_back(Relu{});
  layers.emplace_back(MaxPool2{});
  layers.emplace_back(Flatten{});
  const std::size_t features = (input_shape.height / 4) * (input_shape.width / 4) * 16;
  Dense dense{features, num_classes, std::vector<float>(features * num_classes),
              std::vector<float>(num_classes, 0.0f)};
  draw(dense.weights, features);
  layers.emplace_back(std::move(dense));
  return Network(input_shape, std::move(layers));
}

}  // namespace locnoise
