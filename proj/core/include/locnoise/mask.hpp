#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "locnoise/tensor.hpp"

namespace locnoise {

/// Binary H x W field; 1 marks a pixel whose channels may be perturbed.
class Mask {
 public:
  /// Arbitrary bit pattern. Values other than 0/1 are rejected.
  static Mask from_bits(std::size_t height, std::size_t width, std::vector<std::uint8_t> bits);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  bool active(std::size_t h, std::size_t w) const noexcept { return bits_[h * width_ + w] != 0; }

  double gamma_requested() const noexcept { return gamma_requested_; }
  double coverage_actual() const noexcept { return coverage_actual_; }
  std::size_t active_count() const noexcept { return active_count_; }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  friend Mask build_mask(std::size_t, std::size_t, double);
  Mask(std::size_t height, std::size_t width, std::vector<std::uint8_t> bits, double gamma);

  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<std::uint8_t> bits_;
  double gamma_requested_ = 0.0;
  double coverage_actual_ = 0.0;
  std::size_t active_count_ = 0;
};

/// Side lengths of the centered rectangle for coverage `gamma`:
/// round-half-away-from-zero of sqrt(gamma) * dim, at least 1.
struct MaskExtent {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t top = 0;
  std::size_t left = 0;
};
MaskExtent mask_extent(std::size_t height, std::size_t width, double gamma);

/// Centered rectangle covering roughly `gamma` of the pixels. When the margin
/// is odd the rectangle sits one pixel closer to the top/left edge.
Mask build_mask(std::size_t height, std::size_t width, double gamma);

/// Copy of `noise` with every channel of inactive pixels set to exactly 0.
Tensor apply_mask(const Tensor& noise, const Mask& mask);

/// Binary PGM (P5), 255 for active pixels.
void write_pgm(const Mask& mask, const std::filesystem::path& path);

}  // namespace locnoise
