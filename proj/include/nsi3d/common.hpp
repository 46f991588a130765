#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsi3d {

// Bad user-supplied configuration (CLI exit code 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failure while computing (CLI exit code 3).
struct compute_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    bool operator==(const Vec3& o) const = default;
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double deg2rad(double deg) { return deg * M_PI / 180.0; }

// FNV-1a, used to stamp output files with a config fingerprint.
inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace nsi3d
