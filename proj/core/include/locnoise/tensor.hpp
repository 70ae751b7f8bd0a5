#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace locnoise {

/// Height x width x channels extent of a channel-last tensor.
struct Shape {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;

  constexpr std::size_t size() const noexcept { return height * width * channels; }
  constexpr std::size_t pixels() const noexcept { return height * width; }

  friend constexpr bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& shape);

/// Dense row-major (h, w, c) array of 32-bit floats.
///
/// Every value is finite. Constructors that take caller data reject NaN and
/// infinities; the element-wise operations in this header preserve the
/// property.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<float> values);

  static Tensor filled(Shape shape, float value);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::span<const float> data() const noexcept { return values_; }
  std::span<float> data() noexcept { return values_; }

  float operator[](std::size_t i) const noexcept { return values_[i]; }
  float& operator[](std::size_t i) noexcept { return values_[i]; }

  std::size_t index(std::size_t h, std::size_t w, std::size_t c) const noexcept {
    return (h * shape_.width + w) * shape_.channels + c;
  }
  float at(std::size_t h, std::size_t w, std::size_t c) const noexcept {
    return values_[index(h, w, c)];
  }
  float& at(std::size_t h, std::size_t w, std::size_t c) noexcept {
    return values_[index(h, w, c)];
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<float> values_;
};

/// Element-wise sign with sign(0) = 0.
Tensor sign(const Tensor& t);

/// Element-wise clamp into [lo, hi]. In-range values are returned bit-exactly.
Tensor clamp(const Tensor& t, float lo, float hi);

enum class ReduceKind { kSum, kMin, kMax, kMean };

/// Reduction accumulated in double and rounded to float on return.
float reduce(const Tensor& t, ReduceKind kind);

/// True when every element of `t` is bit-identical to the matching element of `other`.
bool bit_equal(const Tensor& t, const Tensor& other) noexcept;

}  // namespace locnoise
