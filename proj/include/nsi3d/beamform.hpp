#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nsi3d/aperture.hpp"
#include "nsi3d/geometry.hpp"
#include "nsi3d/sequence.hpp"
#include "nsi3d/simulate.hpp"

namespace nsi3d {

struct VoxelGrid {
    Vec3 origin;    // [m] center of voxel (0,0,0)
    Vec3 spacing;   // [m]
    int nx = 0, ny = 0, nz = 0;

    static VoxelGrid from_extents(double x_lo, double x_hi, double y_lo, double y_hi,
                                  double z_lo, double z_hi, int nx, int ny, int nz);
    // default lambda/2 spacing at the given frequency
    static VoxelGrid from_extents_default_spacing(double x_lo, double x_hi, double y_lo,
                                                  double y_hi, double z_lo, double z_hi,
                                                  double frequency, double sound_speed);

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nz; }
    // z-fastest linear index
    std::size_t index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(ix) * ny + iy) * nz + iz;
    }
    Vec3 voxel_center(int ix, int iy, int iz) const {
        return {origin.x + ix * spacing.x, origin.y + iy * spacing.y, origin.z + iz * spacing.z};
    }
    bool same_as(const VoxelGrid& o) const {
        return nx == o.nx && ny == o.ny && nz == o.nz && origin == o.origin &&
               spacing == o.spacing;
    }
};

enum class VolumeLabel { e_das, e_zm, e_dc1, e_dc2, e_nsi };
std::string to_string(VolumeLabel l);

struct ComplexVolume {
    VoxelGrid grid;
    std::vector<std::complex<double>> values;
};

struct EnvelopeVolume {
    VoxelGrid grid;
    VolumeLabel label = VolumeLabel::e_das;
    std::vector<double> values;  // >= 0
};

struct DbVolume {
    VoxelGrid grid;
    VolumeLabel label = VolumeLabel::e_das;
    double dynamic_range_db = 50.0;
    std::vector<double> db;  // in [-DR, 0]
};

enum class Compounding { coherent, incoherent };

struct BeamformOptions {
    unsigned workers = 0;  // 0: hardware concurrency
};

// Per-element receive weights indexed by element id; NaN marks "undefined".
std::vector<double> weights_by_element(const ApodizationSet& set, const std::vector<double>& w,
                                       const ArrayGeometry& geom);

// Delay-and-sum onto the voxel grid: per voxel and event, rx channels are
// delayed by the diverging-wave transmit time plus the receive path, linearly
// interpolated on the analytic signal, weighted and coherently summed over
// all events. Events accumulate in plan order so results do not depend on the
// worker count.
ComplexVolume das_volume(const RfDataset& ds, const AcquisitionPlan& plan,
                         const ArrayGeometry& geom, std::span<const double> weights,
                         const VoxelGrid& grid, const BeamformOptions& opt = {});

EnvelopeVolume envelope(const ComplexVolume& v, VolumeLabel label);

// Full receive chain for one window: DAS + envelope, honoring the compounding
// mode (incoherent: per-angle envelopes summed).
EnvelopeVolume beamform_envelope(const RfDataset& ds, const AcquisitionPlan& plan,
                                 const ArrayGeometry& geom, std::span<const double> weights,
                                 const VoxelGrid& grid, VolumeLabel label,
                                 Compounding compound = Compounding::coherent,
                                 const BeamformOptions& opt = {});

// E_NSI = max((E_DC1 + E_DC2)/2 - E_ZM, 0) / (2 dc)
EnvelopeVolume nsi_combine(const EnvelopeVolume& e_zm, const EnvelopeVolume& e_dc1,
                           const EnvelopeVolume& e_dc2, double dc);

// 20 log10(env/max), floored at -DR; zeros clamped before the log
DbVolume log_compress(const EnvelopeVolume& env, double dynamic_range_db);

// volume dump: little-endian float32, z-fastest, plus a structured-text header
void dump_volume(const EnvelopeVolume& env, const std::string& path_base,
                 double dynamic_range_db = 50.0);
EnvelopeVolume load_volume(const std::string& path_base);

// orthogonal 16-bit PGM slices of a log-compressed volume through a voxel
void write_slice_pgm(const DbVolume& v, int ix, int iy, int iz, const std::string& path_base);

}  // namespace nsi3d
