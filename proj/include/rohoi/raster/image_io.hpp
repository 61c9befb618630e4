#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rohoi/raster/image.hpp"

namespace rohoi::raster {

// 8-bit gray or RGB PNG. Alpha is dropped; 16-bit input is reduced to 8-bit.
ImageBuffer decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const ImageBuffer& img);

ImageBuffer decode_jpeg(std::span<const std::uint8_t> bytes);
// Baseline JPEG at the given quality (1..100) with the codec's default
// chroma subsampling for colour input.
std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality);

// Dispatches on the file signature (PNG or JPEG).
ImageBuffer read_image(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const ImageBuffer& img);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

}  // namespace rohoi::raster
