#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "gvb/render.hpp"

namespace gvb {

/// 8-bit RGB, filter 0 on every row, zlib level 6.
std::vector<std::uint8_t> encode_png(const Raster& r);

/// Decodes 8-bit RGB non-interlaced PNGs (all five row filters).
/// Throws ParameterError on anything else.
Raster decode_png(const std::vector<std::uint8_t>& bytes);

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_file(const std::filesystem::path& path, const std::string& text);
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace gvb
