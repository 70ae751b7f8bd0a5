#pragma once

#include <filesystem>

#include "locnoise/tensor.hpp"

namespace locnoise {

/// 8-bit PNG scaled to [0, 1]. Grey images give one channel, colour images
/// three; alpha is dropped.
Tensor read_png(const std::filesystem::path& path);

/// PNG or LTNS chosen by file extension (.png / .ltns).
Tensor read_image(const std::filesystem::path& path);

bool is_image_file(const std::filesystem::path& path);

/// Binary PGM (1 channel) or PPM (3 channels); values in [0, 1] map to 0..255.
void write_pnm(const Tensor& image, const std::filesystem::path& path);

}  // namespace locnoise
