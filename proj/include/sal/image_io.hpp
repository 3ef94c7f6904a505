#pragma once

#include <cstdint>
#include <filesystem>

#include "sal/grid.hpp"

namespace sal::io {

namespace fs = std::filesystem;

void write_png(const fs::path& path, const RgbImage& image);
void write_png(const fs::path& path, const Grid<std::uint8_t>& gray);
void write_png(const fs::path& path, const Grid<std::uint16_t>& gray);

RgbImage read_png_rgb(const fs::path& path);

// Grayscale PNG (8 or 16 bit; RGB inputs are converted to luma) as values in
// [0,1]: v / 255 or v / 65535.
Map read_png_gray(const fs::path& path);

// Flat little-endian float32, row-major, no header.
void write_f32(const fs::path& path, const Map& map);
Map read_f32(const fs::path& path, Dims dims);

// [0,1] map quantized to 16 bits (values clamped).
Grid<std::uint16_t> to_u16(const Map& map);
// Binary mask as 0/255.
Grid<std::uint8_t> mask_to_u8(const Mask& mask);

}  // namespace sal::io
