#include "locnoise/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include <fmt/format.h>

#include "locnoise/errors.hpp"

namespace locnoise {

std::string to_string(const Shape& shape) {
  return fmt::format("{}x{}x{}", shape.height, shape.width, shape.channels);
}

Tensor::Tensor(Shape shape) : shape_(shape), values_(shape.size(), 0.0f) {}

Tensor::Tensor(Shape shape, std::vector<float> values)
    : shape_(shape), values_(std::move(values)) {
  if (values_.size() != shape_.size()) {
    throw ArgumentError(fmt::format("tensor of shape {} needs {} values, got {}",
                                    to_string(shape_), shape_.size(), values_.size()));
  }
  const auto bad = std::find_if(values_.begin(), values_.end(),
                                [](float v) { return !std::isfinite(v); });
  if (bad != values_.end()) {
    throw ArgumentError(fmt::format("non-finite tensor value at index {}",
                                    std::distance(values_.begin(), bad)));
  }
}

Tensor Tensor::filled(Shape shape, float value) {
  if (!std::isfinite(value)) throw ArgumentError("fill value must be finite");
  Tensor t(shape);
  std::fill(t.values_.begin(), t.values_.end(), value);
  return t;
}

Tensor sign(const Tensor& t) {
  Tensor out(t.shape());
  std::transform(t.data().begin(), t.data().end(), out.data().begin(), [](float v) {
    return v > 0.0f ? 1.0f : (v < 0.0f ? -1.0f : 0.0f);
  });
  return out;
}

Tensor clamp(const Tensor& t, float lo, float hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    throw ArgumentError(fmt::format("clamp bounds [{}, {}] are not ordered", lo, hi));
  }
  Tensor out(t.shape());
  std::transform(t.data().begin(), t.data().end(), out.data().begin(),
                 [lo, hi](float v) { return std::clamp(v, lo, hi); });
  return out;
}

float reduce(const Tensor& t, ReduceKind kind) {
  if (t.empty()) throw ArgumentError("reduction over an empty tensor");
  const auto values = t.data();
  switch (kind) {
    case ReduceKind::kMin:
      return *std::min_element(values.begin(), values.end());
    case ReduceKind::kMax:
      return *std::max_element(values.begin(), values.end());
    case ReduceKind::kSum:
    case ReduceKind::kMean: {
      double acc = 0.0;
      for (float v : values) acc += v;
      if (kind == ReduceKind::kMean) acc /= static_cast<double>(values.size());
      return static_cast<float>(acc);
    }
  }
  return std::numeric_limits<float>::quiet_NaN();
}

bool bit_equal(const Tensor& t, const Tensor& other) noexcept {
  if (t.shape() != other.shape() || t.size() != other.size()) return false;
  return t.empty() ||
         std::memcmp(t.data().data(), other.data().data(), t.size() * sizeof(float)) == 0;
}

}  // namespace locnoise
