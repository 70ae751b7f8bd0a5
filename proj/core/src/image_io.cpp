#include "locnoise/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include <png.h>

#include "locnoise/errors.hpp"
#include "locnoise/tensor_io.hpp"

namespace locnoise {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext;
}

}  // namespace

Tensor read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw FormatError(path.string() + ": " + image.message);
  }
  const bool colour = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = colour ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::size_t channels = colour ? 3 : 1;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw FormatError(path.string() + ": " + message);
  }
  std::vector<float> values(buffer.size());
  std::transform(buffer.begin(), buffer.end(), values.begin(),
                 [](png_byte b) { return static_cast<float>(b) / 255.0f; });
  return Tensor(Shape{image.height, image.width, channels}, std::move(values));
}

bool is_image_file(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  return ext == ".png" || ext == ".ltns";
}

Tensor read_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".ltns") return read_tensor(path);
  throw FormatError(path.string() + ": unsupported image extension");
}

void write_pnm(const Tensor& image, const std::filesystem::path& path) {
  const Shape& s = image.shape();
  if (s.channels != 1 && s.channels != 3) {
    throw ArgumentError("PNM output needs 1 or 3 channels, got " + std::to_string(s.channels));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << (s.channels == 1 ? "P5" : "P6") << '\n' << s.width << ' ' << s.height << "\n255\n";
  for (float v : image.data()) {
    const long byte = std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f);
    out.put(static_cast<char>(static_cast<unsigned char>(byte)));
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace locnoise
