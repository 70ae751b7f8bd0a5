#pragma once

#include <filesystem>

#include "locnoise/network.hpp"

namespace locnoise {

// Weight file layout (all integers uint32 little-endian, all weights float32
// little-endian):
//
//   "LOCN"  version:u8 = 1  layer_count  input_height  input_width  input_channels
//   per layer:
//     kind:u8 (0 conv2d, 1 relu, 2 maxpool2, 3 flatten, 4 dense)
//     conv2d: kernel_h kernel_w in_channels out_channels, weights, bias
//     dense:  in_dim out_dim, weights, bias
//     relu, maxpool2, flatten: no payload
//
// Weight arrays use the index order documented on Conv2d and Dense.

inline constexpr std::uint8_t kWeightFormatVersion = 1;

void save_weights(const Network& net, const std::filesystem::path& path);

/// Throws FormatError (bad magic, version, kind or trailing bytes), IoError
/// (missing or truncated file) or ValidationError (shapes do not chain).
Network load_weights(const std::filesystem::path& path);

}  // namespace locnoise
