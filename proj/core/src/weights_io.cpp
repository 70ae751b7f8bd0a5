#include "locnoise/weights_io.hpp"

#include <array>
#include <fstream>

#include <fmt/format.h>

#include "binary_io.hpp"
#include "locnoise/errors.hpp"

namespace locnoise {

namespace {

constexpr std::array<char, 4> kMagic = {'L', 'O', 'C', 'N'};

std::uint32_t narrow(std::size_t v) { return static_cast<std::uint32_t>(v); }

std::vector<float> read_floats(detail::LittleEndianReader& reader, std::uint64_t count,
                               const char* what) {
  reader.require_floats(count, what);
  std::vector<float> values(count);
  reader.f32s(values, what);
  return values;
}

}  // namespace

void save_weights(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  out.put(static_cast<char>(kWeightFormatVersion));
  detail::write_u32(out, narrow(net.layers().size()));
  detail::write_u32(out, narrow(net.input_shape().height));
  detail::write_u32(out, narrow(net.input_shape().width));
  detail::write_u32(out, narrow(net.input_shape().channels));
  for (const Layer& layer : net.layers()) {
    out.put(static_cast<char>(kind_of(layer)));
    if (const auto* c = std::get_if<Conv2d>(&layer)) {
      detail::write_u32(out, narrow(c->kernel_h));
      detail::write_u32(out, narrow(c->kernel_w));
      detail::write_u32(out, narrow(c->in_channels));
      detail::write_u32(out, narrow(c->out_channels));
      detail::write_f32s(out, c->weights);
      detail::write_f32s(out, c->bias);
    } else if (const auto* d = std::get_if<Dense>(&layer)) {
      detail::write_u32(out, narrow(d->in_dim));
      detail::write_u32(out, narrow(d->out_dim));
      detail::write_f32s(out, d->weights);
      detail::write_f32s(out, d->bias);
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

Network load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  detail::LittleEndianReader reader(in, path.string());

  std::array<char, 4> magic{};
  reader.read_bytes(magic.data(), magic.size(), "magic");
  if (magic != kMagic) throw FormatError(path.string() + ": not a LOCN weight file");
  const std::uint8_t version = reader.u8("version");
  if (version != kWeightFormatVersion) {
    throw FormatError(fmt::format("{}: unsupported weight format version {}", path.string(), version));
  }

  const std::uint32_t layer_count = reader.u32("layer count");
  Shape input;
  input.height = reader.u32("input height");
  input.width = reader.u32("input width");
  input.channels = reader.u32("input channels");

  std::vector<Layer> layers;
  for (std::uint32_t i = 0; i < layer_count; ++i) {
    const std::uint8_t kind = reader.u8("layer kind");
    switch (static_cast<LayerKind>(kind)) {
      case LayerKind::kConv2d: {
        Conv2d c;
        c.kernel_h = reader.u32("conv2d kernel height");
        c.kernel_w = reader.u32("conv2d kernel width");
        c.in_channels = reader.u32("conv2d input channels");
        c.out_channels = reader.u32("conv2d output channels");
        c.weights = read_floats(reader, std::uint64_t{c.kernel_h} * c.kernel_w * c.in_channels *
                                            c.out_channels, "conv2d weights");
        c.bias = read_floats(reader, c.out_channels, "conv2d bias");
        layers.emplace_back(std::move(c));
        break;
      }
      case LayerKind::kRelu: layers.emplace_back(Relu{}); break;
      case LayerKind::kMaxPool2: layers.emplace_back(MaxPool2{}); break;
      case LayerKind::kFlatten: layers.emplace_back(Flatten{}); break;
      case LayerKind::kDense: {
        Dense d;
        d.in_dim = reader.u32("dense input dim");
        d.out_dim = reader.u32("dense output dim");
        d.weights = read_floats(reader, std::uint64_t{d.in_dim} * d.out_dim, "dense weights");
        d.bias = read_floats(reader, d.out_dim, "dense bias");
        layers.emplace_back(std::move(d));
        break;
      }
      default:
        throw FormatError(fmt::format("{}: layer {} has unknown kind byte {}", path.string(), i, kind));
    }
  }
  if (!reader.at_end()) throw FormatError(path.string() + ": trailing bytes after the last layer");
  return Network(input, std::move(layers));
}

}  // namespace locnoise
