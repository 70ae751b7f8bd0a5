#include "locnoise/mask.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "locnoise/errors.hpp"

namespace locnoise {

Mask::Mask(std::size_t height, std::size_t width, std::vector<std::uint8_t> bits, double gamma)
    : height_(height), width_(width), bits_(std::move(bits)), gamma_requested_(gamma) {
  active_count_ = static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
  coverage_actual_ = height_ * width_ == 0
                         ? 0.0
                         : static_cast<double>(active_count_) / static_cast<double>(height_ * width_);
}

Mask Mask::from_bits(std::size_t height, std::size_t width, std::vector<std::uint8_t> bits) {
  if (bits.size() != height * width) {
    throw ArgumentError(fmt::format("mask of {}x{} needs {} bits, got {}", height, width,
                                    height * width, bits.size()));
  }
  if (std::any_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b > 1; })) {
    throw ArgumentError("mask bits must be 0 or 1");
  }
  Mask m(height, width, std::move(bits), 0.0);
  m.gamma_requested_ = m.coverage_actual_;
  return m;
}

MaskExtent mask_extent(std::size_t height, std::size_t width, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw ArgumentError(fmt::format("gamma must lie in (0, 1], got {}", gamma));
  }
  if (height == 0 || width == 0) throw ArgumentError("mask dimensions must be positive");
  const double root = std::sqrt(gamma);
  auto side = [root](std::size_t dim) {
    const auto s = static_cast<std::size_t>(std::lround(root * static_cast<double>(dim)));
    return std::clamp<std::size_t>(s, 1, dim);
  };
  MaskExtent e;
  e.rows = side(height);
  e.cols = side(width);
  e.top = (height - e.rows) / 2;
  e.left = (width - e.cols) / 2;
  return e;
}

Mask build_mask(std::size_t height, std::size_t width, double gamma) {
  const MaskExtent e = mask_extent(height, width, gamma);
  std::vector<std::uint8_t> bits(height * width, 0);
  for (std::size_t h = e.top; h < e.top + e.rows; ++h) {
    std::fill_n(bits.begin() + static_cast<std::ptrdiff_t>(h * width + e.left), e.cols, 1);
  }
  return Mask(height, width, std::move(bits), gamma);
}

Tensor apply_mask(const Tensor& noise, const Mask& mask) {
  const Shape& s = noise.shape();
  if (s.height != mask.height() || s.width != mask.width()) {
    throw ArgumentError(fmt::format("noise {} does not match mask {}x{}", to_string(s),
                                    mask.height(), mask.width()));
  }
  Tensor out(s);
  const auto bits = mask.bits();
  for (std::size_t p = 0; p < bits.size(); ++p) {
    if (!bits[p]) continue;
    for (std::size_t c = 0; c < s.channels; ++c) out[p * s.channels + c] = noise[p * s.channels + c];
  }
  return out;
}

void write_pgm(const Mask& mask, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P5\n" << mask.width() << ' ' << mask.height() << "\n255\n";
  for (std::uint8_t b : mask.bits()) out.put(static_cast<char>(b ? 255 : 0));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace locnoise
