// Copyright 2026 The actseg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// PNG reading and writing through libpng.

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <png.h>

#include "actseg/error.hpp"
#include "actseg/geometry.hpp"

namespace actseg {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

using RgbImage = Grid<Rgb>;
using Gray16Image = Grid<std::uint16_t>;

namespace png_detail {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] inline void on_error(png_structp png, png_const_charp message) {
  const auto* path = static_cast<const std::string*>(png_get_error_ptr(png));
  throw IoError((path ? *path + ": " : std::string()) + message);
}

inline void on_warning(png_structp, png_const_charp) {}

inline FilePtr open(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError(path.string() + ": cannot open");
  return f;
}

// Decoded PNG rows; samples are 8- or 16-bit depending on bit_depth.
struct Decoded {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  int color_type = 0;
  std::vector<std::uint8_t> bytes;

  std::uint16_t sample(int x, int y, int c) const {
    const std::size_t stride = static_cast<std::size_t>(width) * channels * (bit_depth == 16 ? 2 : 1);
    const std::size_t i = static_cast<std::size_t>(y) * stride +
                          (static_cast<std::size_t>(x) * channels + c) * (bit_depth == 16 ? 2 : 1);
    if (bit_depth == 16) return static_cast<std::uint16_t>((bytes[i] << 8) | bytes[i + 1]);
    return bytes[i];
  }
};

// Palettes expand to RGB and sub-byte depths widen to 8 bits; 16-bit
// samples are kept.
inline Decoded decode(const std::filesystem::path& path) {
  FilePtr file = open(path, "rb");
  const std::string name = path.string();
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, const_cast<std::string*>(&name),
                                           on_error, on_warning);
  if (!png) throw IoError(name + ": libpng init failed");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_read_struct(png, info, nullptr); }
  } guard{&png, &info};
  if (!info) throw IoError(name + ": libpng init failed");

  png_init_io(png, file.get());
  png_read_info(png, info);
  Decoded out;
  out.color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (out.color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (out.color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (png_get_interlace_type(png, info) != PNG_INTERLACE_NONE) png_set_interlace_handling(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.bytes.resize(stride * static_cast<std::size_t>(out.height));
  std::vector<png_bytep> rows(static_cast<std::size_t>(out.height));
  for (int y = 0; y < out.height; ++y) rows[static_cast<std::size_t>(y)] = out.bytes.data() + stride * static_cast<std::size_t>(y);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  return out;
}

inline void encode(const std::filesystem::path& path, int width, int height, int color_type,
                   int bit_depth, const std::vector<std::uint8_t>& bytes) {
  if (width <= 0 || height <= 0) throw IoError(path.string() + ": cannot write an empty image");
  FilePtr file = open(path, "wb");
  const std::string name = path.string();
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, const_cast<std::string*>(&name),
                                            on_error, on_warning);
  if (!png) throw IoError(name + ": libpng init failed");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_write_struct(png, info); }
  } guard{&png, &info};
  if (!info) throw IoError(name + ": libpng init failed");

  png_init_io(png, file.get());
  png_set_compression_level(png, 3);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = bytes.size() / static_cast<std::size_t>(height);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, bytes.data() + stride * static_cast<std::size_t>(y));
  }
  png_write_end(png, nullptr);
  if (std::fflush(file.get()) != 0) throw IoError(name + ": write failed");
}

}  // namespace png_detail

inline RgbImage read_png_rgb(const std::filesystem::path& path) {
  const png_detail::Decoded d = png_detail::decode(path);
  RgbImage image(d.width, d.height);
  const bool gray = d.channels <= 2;
  const int shift = d.bit_depth == 16 ? 8 : 0;
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      if (gray) {
        const auto v = static_cast<std::uint8_t>(d.sample(x, y, 0) >> shift);
        image(x, y) = {v, v, v};
      } else {
        image(x, y) = {static_cast<std::uint8_t>(d.sample(x, y, 0) >> shift),
                       static_cast<std::uint8_t>(d.sample(x, y, 1) >> shift),
                       static_cast<std::uint8_t>(d.sample(x, y, 2) >> shift)};
      }
    }
  }
  return image;
}

// Single-channel grayscale PNG at its native depth (8 or 16 bits).
struct GrayPng {
  Gray16Image values;
  int bit_depth = 8;
};

inline GrayPng read_png_gray(const std::filesystem::path& path) {
  const png_detail::Decoded d = png_detail::decode(path);
  if (d.color_type != PNG_COLOR_TYPE_GRAY || d.channels != 1) {
    throw ValidationError(path.string(), "expected a single-channel grayscale PNG");
  }
  GrayPng out{Gray16Image(d.width, d.height), d.bit_depth};
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) out.values(x, y) = d.sample(x, y, 0);
  }
  return out;
}

inline void write_png(const std::filesystem::path& path, const RgbImage& image) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(image.data().size() * 3);
  for (const Rgb& p : image.data()) {
    bytes.push_back(p.r);
    bytes.push_back(p.g);
    bytes.push_back(p.b);
  }
  png_detail::encode(path, image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8, bytes);
}

inline void write_png(const std::filesystem::path& path, const PixelGrid& gray) {
  std::vector<std::uint8_t> bytes(gray.data().begin(), gray.data().end());
  png_detail::encode(path, gray.width(), gray.height(), PNG_COLOR_TYPE_GRAY, 8, bytes);
}

inline void write_png(const std::filesystem::path& path, const Gray16Image& gray) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(gray.data().size() * 2);
  for (std::uint16_t v : gray.data()) {
    bytes.push_back(static_cast<std::uint8_t>(v >> 8));
    bytes.push_back(static_cast<std::uint8_t>(v & 0xFF));
  }
  png_detail::encode(path, gray.width(), gray.height(), PNG_COLOR_TYPE_GRAY, 16, bytes);
}

}  // namespace actseg
