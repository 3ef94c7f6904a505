#include "sal/image_io.hpp"

#include <png.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace sal::io {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return f;
}

void write_rows(const fs::path& path, int width, int height, int bit_depth, int color_type,
                const std::vector<png_bytep>& rows) {
  auto file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_compression_level(png, 1);
  png_set_filter(png, 0, PNG_FILTER_SUB);
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16 && std::endian::native == std::endian::little) png_set_swap(png);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

struct DecodedPng {
  int width = 0, height = 0, channels = 0, bit_depth = 8;
  std::vector<std::uint16_t> samples;
};

DecodedPng decode(const fs::path& path, ErrorCode on_error) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(on_error, "cannot open " + path.string());
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw Error(on_error, "not a PNG file: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(on_error, "libpng initialization failed");
  }
  DecodedPng out;
  std::vector<png_byte> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(on_error, "corrupt PNG: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (depth == 16 && std::endian::native == std::endian::little) png_set_swap(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  buffer.resize(rowbytes * out.height);
  std::vector<png_bytep> rows(out.height);
  for (int y = 0; y < out.height; ++y) rows[y] = buffer.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const std::size_t n = static_cast<std::size_t>(out.width) * out.height * out.channels;
  out.samples.resize(n);
  if (out.bit_depth == 16) {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint16_t v;
      std::memcpy(&v, buffer.data() + 2 * i, 2);
      out.samples[i] = v;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = buffer[i];
  }
  return out;
}

}  // namespace

void write_png(const fs::path& path, const RgbImage& image) {
  std::vector<png_bytep> rows(image.height());
  auto bytes = const_cast<std::uint8_t*>(image.bytes().data());
  for (int y = 0; y < image.height(); ++y) rows[y] = bytes + 3 * static_cast<std::size_t>(y) * image.width();
  write_rows(path, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB, rows);
}

void write_png(const fs::path& path, const Grid<std::uint8_t>& gray) {
  std::vector<png_bytep> rows(gray.height());
  for (int y = 0; y < gray.height(); ++y) rows[y] = const_cast<png_bytep>(gray.row(y).data());
  write_rows(path, gray.width(), gray.height(), 8, PNG_COLOR_TYPE_GRAY, rows);
}

void write_png(const fs::path& path, const Grid<std::uint16_t>& gray) {
  std::vector<png_bytep> rows(gray.height());
  for (int y = 0; y < gray.height(); ++y)
    rows[y] = reinterpret_cast<png_bytep>(const_cast<std::uint16_t*>(gray.row(y).data()));
  write_rows(path, gray.width(), gray.height(), 16, PNG_COLOR_TYPE_GRAY, rows);
}

RgbImage read_png_rgb(const fs::path& path) {
  const auto png = decode(path, ErrorCode::IoError);
  RgbImage image(png.width, png.height);
  const int shift = png.bit_depth == 16 ? 8 : 0;
  for (int y = 0; y < png.height; ++y) {
    for (int x = 0; x < png.width; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * png.width + x) * png.channels;
      Rgb c;
      if (png.channels >= 3) {
        c = {static_cast<std::uint8_t>(png.samples[i] >> shift), static_cast<std::uint8_t>(png.samples[i + 1] >> shift),
             static_cast<std::uint8_t>(png.samples[i + 2] >> shift)};
      } else {
        const auto v = static_cast<std::uint8_t>(png.samples[i] >> shift);
        c = {v, v, v};
      }
      image.set(x, y, c);
    }
  }
  return image;
}

Map read_png_gray(const fs::path& path) {
  const auto png = decode(path, ErrorCode::UnreadableMap);
  const double scale = png.bit_depth == 16 ? 65535.0 : 255.0;
  Map map(png.width, png.height);
  for (std::size_t p = 0; p < map.size(); ++p) {
    const std::size_t i = p * png.channels;
    if (png.channels >= 3) {
      map[p] = (0.299 * png.samples[i] + 0.587 * png.samples[i + 1] + 0.114 * png.samples[i + 2]) / scale;
    } else {
      map[p] = png.samples[i] / scale;
    }
  }
  return map;
}

void write_f32(const fs::path& path, const Map& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<float> buf(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) buf[i] = static_cast<float>(map[i]);
  static_assert(std::endian::native == std::endian::little, "float32 maps are stored little-endian");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

Map read_f32(const fs::path& path, Dims dims) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error(ErrorCode::UnreadableMap, "cannot open " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != dims.area() * sizeof(float))
    throw Error(ErrorCode::UnreadableMap, path.string() + ": size does not match " + std::to_string(dims.width) + "x" +
                                              std::to_string(dims.height) + " float32 grid");
  in.seekg(0);
  std::vector<float> buf(dims.area());
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
  Map map(dims);
  for (std::size_t i = 0; i < buf.size(); ++i) map[i] = buf[i];
  return map;
}

Grid<std::uint16_t> to_u16(const Map& map) {
  Grid<std::uint16_t> out(map.dims());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double v = std::clamp(map[i], 0.0, 1.0);
    out[i] = static_cast<std::uint16_t>(std::lround(v * 65535.0));
  }
  return out;
}

Grid<std::uint8_t> mask_to_u8(const Mask& mask) {
  Grid<std::uint8_t> out(mask.dims());
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 255 : 0;
  return out;
}

}  // namespace sal::io
