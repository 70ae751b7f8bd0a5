#include "locnoise/tensor_io.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "binary_io.hpp"
#include "locnoise/errors.hpp"

namespace locnoise {

namespace {
constexpr std::array<char, 4> kMagic = {'L', 'T', 'N', 'S'};
}

void write_tensor(const Tensor& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  detail::write_u32(out, static_cast<std::uint32_t>(t.shape().height));
  detail::write_u32(out, static_cast<std::uint32_t>(t.shape().width));
  detail::write_u32(out, static_cast<std::uint32_t>(t.shape().channels));
  detail::write_f32s(out, t.data());
  if (!out) throw IoError("failed writing " + path.string());
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  detail::LittleEndianReader reader(in, path.string());

  std::array<char, 4> magic{};
  reader.read_bytes(magic.data(), magic.size(), "magic");
  if (magic != kMagic) throw FormatError(path.string() + ": not an LTNS tensor file");

  Shape shape;
  shape.height = reader.u32("height");
  shape.width = reader.u32("width");
  shape.channels = reader.u32("channels");
  const auto payload = std::filesystem::file_size(path) - 16;
  if (payload / sizeof(float) < shape.size()) {
    throw IoError(path.string() + ": truncated while reading tensor values");
  }
  std::vector<float> values(shape.size());
  reader.f32s(values, "tensor values");
  try {
    return Tensor(shape, std::move(values));
  } catch (const ArgumentError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace locnoise
