#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

namespace nsi3d {

// binary 16-bit PGM (big-endian sample bytes per the format)
void write_pgm16(std::ostream& os, int width, int height, std::span<const uint16_t> row_major);

// little-endian float32 blob
void write_f32(const std::string& path, std::span<const float> data);
void read_f32(const std::string& path, std::span<float> data);

}  // namespace nsi3d
