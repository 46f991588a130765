#include "nsi3d/io.hpp"

#include <fstream>
#include <ostream>
#include <vector>

#include "nsi3d/common.hpp"

namespace nsi3d {

void write_pgm16(std::ostream& os, int width, int height, std::span<const uint16_t> row_major) {
    os << "P5\n" << width << ' ' << height << "\n65535\n";
    std::vector<unsigned char> bytes;
    bytes.reserve(row_major.size() * 2);
    for (uint16_t v : row_major) {
        bytes.push_back(static_cast<unsigned char>(v >> 8));
        bytes.push_back(static_cast<unsigned char>(v & 0xff));
    }
    os.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
}

void write_f32(const std::string& path, std::span<const float> data) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw compute_error("cannot open " + path + " for writing");
    os.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size() * sizeof(float)));
}

void read_f32(const std::string& path, std::span<float> data) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw config_error("cannot open " + path);
    is.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(float)));
    if (!is) throw config_error("truncated file " + path);
}

}  // namespace nsi3d
