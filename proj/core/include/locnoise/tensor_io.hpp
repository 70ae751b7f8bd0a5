#pragma once

#include <filesystem>

#include "locnoise/tensor.hpp"

namespace locnoise {

/// Raw tensor file: magic "LTNS", uint32 H, W, C (little-endian), then
/// H*W*C little-endian float32 values in row-major (h, w, c) order.
void write_tensor(const Tensor& t, const std::filesystem::path& path);

/// Throws FormatError on a bad magic, IoError on a missing or truncated file.
Tensor read_tensor(const std::filesystem::path& path);

}  // namespace locnoise
