#include "nsi3d/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "nsi3d/analytic.hpp"
#include "nsi3d/io.hpp"
#include "nsi3d/parallel.hpp"

namespace nsi3d {

std::string to_string(VolumeLabel l) {
    switch (l) {
        case VolumeLabel::e_das: return "E_DAS";
        case VolumeLabel::e_zm: return "E_ZM";
        case VolumeLabel::e_dc1: return "E_DC1";
        case VolumeLabel::e_dc2: return "E_DC2";
        case VolumeLabel::e_nsi: return "E_NSI";
    }
    return "?";
}

static VolumeLabel label_from_string(const std::string& s) {
    for (auto l : {VolumeLabel::e_das, VolumeLabel::e_zm, VolumeLabel::e_dc1, VolumeLabel::e_dc2,
                   VolumeLabel::e_nsi})
        if (to_string(l) == s) return l;
    throw config_error("unknown volume label '" + s + "'");
}

VoxelGrid VoxelGrid::from_extents(double x_lo, double x_hi, double y_lo, double y_hi, double z_lo,
                                  double z_hi, int nx, int ny, int nz) {
    if (nx < 1 || ny < 1 || nz < 1) throw config_error("VoxelGrid: dims must be positive");
    VoxelGrid g;
    g.nx = nx;
    g.ny = ny;
    g.nz = nz;
    // voxel centers fill the extents
    g.spacing = {(x_hi - x_lo) / nx, (y_hi - y_lo) / ny, (z_hi - z_lo) / nz};
    if (g.spacing.x <= 0 || g.spacing.y <= 0 || g.spacing.z <= 0)
        throw config_error("VoxelGrid: extents must be increasing");
    g.origin = {x_lo + 0.5 * g.spacing.x, y_lo + 0.5 * g.spacing.y, z_lo + 0.5 * g.spacing.z};
    return g;
}

VoxelGrid VoxelGrid::from_extents_default_spacing(double x_lo, double x_hi, double y_lo,
                                                  double y_hi, double z_lo, double z_hi,
                                                  double frequency, double sound_speed) {
    const double dx = 0.5 * sound_speed / frequency;  // lambda/2
    const int nx = std::max(1, static_cast<int>(std::round((x_hi - x_lo) / dx)));
    const int ny = std::max(1, static_cast<int>(std::round((y_hi - y_lo) / dx)));
    const int nz = std::max(1, static_cast<int>(std::round((z_hi - z_lo) / dx)));
    return from_extents(x_lo, x_hi, y_lo, y_hi, z_lo, z_hi, nx, ny, nz);
}

std::vector<double> weights_by_element(const ApodizationSet& set, const std::vector<double>& w,
                                       const ArrayGeometry& geom) {
    std::vector<double> out(geom.n_elements(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < set.mask.element_ids.size(); ++i)
        out[set.mask.element_ids[i]] = w[i];
    return out;
}

namespace {

// coherent accumulation of one event subset into acc (event order fixed)
void das_accumulate(const RfDataset& ds, const AcquisitionPlan& plan,
                    const ArrayGeometry& geom, std::span<const double> weights,
                    const VoxelGrid& grid, std::span<const std::size_t> event_indices,
                    const BeamformOptions& opt, std::vector<std::complex<double>>& acc) {
    const int ns = ds.n_samples;
    const int nz = grid.nz;
    AnalyticTransform hilbert(ns);

    std::vector<float> vz(nz), vz2(nz);
    for (int iz = 0; iz < nz; ++iz) {
        const double z = grid.origin.z + iz * grid.spacing.z;
        vz[iz] = static_cast<float>(z);
        vz2[iz] = static_cast<float>(z * z);
    }
    const float inv_c_fs = static_cast<float>(ds.sampling_rate / geom.sound_speed);
    const float fs = static_cast<float>(ds.sampling_rate);

    const std::size_t n_lines = static_cast<std::size_t>(grid.nx) * grid.ny;

    std::vector<float> re, im, ex, ey, wf;

    for (std::size_t evi : event_indices) {
        const EventRf& rf = ds.events[evi];
        const TxEvent& ev = plan.events[evi];
        const std::size_t n_ch = rf.rx_elements.size();

        // channel weights; zero-weight channels are skipped entirely
        ex.assign(n_ch, 0.f);
        ey.assign(n_ch, 0.f);
        wf.assign(n_ch, 0.f);
        std::vector<std::size_t> live;
        for (std::size_t ch = 0; ch < n_ch; ++ch) {
            const int id = rf.rx_elements[ch];
            const double w = weights[id];
            if (std::isnan(w))
                throw config_error("das_volume: no weight defined for rx element " +
                                   std::to_string(id));
            ex[ch] = static_cast<float>(geom.elements[id].position.x);
            ey[ch] = static_cast<float>(geom.elements[id].position.y);
            wf[ch] = static_cast<float>(w);
            if (w != 0.0) live.push_back(ch);
        }
        if (live.empty()) continue;

        // analytic signal, SoA float
        re.assign(n_ch * ns, 0.f);
        im.assign(n_ch * ns, 0.f);
        parallel_for(live.size(), opt.workers, [&](std::size_t lo, std::size_t hi) {
            std::vector<std::complex<double>> a(ns);
            for (std::size_t k = lo; k < hi; ++k) {
                const std::size_t ch = live[k];
                hilbert.transform(rf.samples.data() + ch * ns, a.data());
                for (int s = 0; s < ns; ++s) {
                    re[ch * ns + s] = static_cast<float>(a[s].real());
                    im[ch * ns + s] = static_cast<float>(a[s].imag());
                }
            }
        });

        const Vec3 src = ev.source.position;
        const float sx = static_cast<float>(src.x), sy = static_cast<float>(src.y),
                    sz = static_cast<float>(src.z);
        const float t_ref = static_cast<float>(ev.source.standoff / geom.sound_speed +
                                               ds.t0);  // subtracted from tx path time

        parallel_for(n_lines, opt.workers, [&](std::size_t lo, std::size_t hi) {
            std::vector<float> base(nz);
            for (std::size_t line = lo; line < hi; ++line) {
                const int ix = static_cast<int>(line) / grid.ny;
                const int iy = static_cast<int>(line) % grid.ny;
                const float vx = static_cast<float>(grid.origin.x + ix * grid.spacing.x);
                const float vy = static_cast<float>(grid.origin.y + iy * grid.spacing.y);
                const float qsx = (vx - sx) * (vx - sx) + (vy - sy) * (vy - sy);
                for (int iz = 0; iz < nz; ++iz) {
                    const float dz = vz[iz] - sz;
                    const float d_tx = std::sqrt(qsx + dz * dz);
                    base[iz] = (d_tx * (1.0f / static_cast<float>(geom.sound_speed)) - t_ref) * fs;
                }
                std::complex<double>* out = acc.data() + line * nz;
                for (std::size_t k = 0; k < live.size(); ++k) {
                    const std::size_t ch = live[k];
                    const float dx = vx - ex[ch];
                    const float dy = vy - ey[ch];
                    const float q = dx * dx + dy * dy;
                    const float w = wf[ch];
                    const float* cre = re.data() + ch * ns;
                    const float* cim = im.data() + ch * ns;
                    for (int iz = 0; iz < nz; ++iz) {
                        const float r = std::sqrt(q + vz2[iz]);
                        const float u = base[iz] + r * inv_c_fs;
                        if (!(u >= 0.0f) || u >= static_cast<float>(ns - 1)) continue;
                        const int i0 = static_cast<int>(u);
                        const float f = u - static_cast<float>(i0);
                        const float sr = cre[i0] + f * (cre[i0 + 1] - cre[i0]);
                        const float si = cim[i0] + f * (cim[i0 + 1] - cim[i0]);
                        out[iz] += std::complex<double>(w * sr, w * si);
                    }
                }
            }
        });
    }
}

}  // namespace

ComplexVolume das_volume(const RfDataset& ds, const AcquisitionPlan& plan,
                         const ArrayGeometry& geom, std::span<const double> weights,
                         const VoxelGrid& grid, const BeamformOptions& opt) {
    if (grid.origin.z <= 0.0)
        throw config_error("das_volume: voxel grid extends behind the array (z <= 0)");
    if (ds.events.size() != plan.events.size())
        throw config_error("das_volume: dataset does not match the plan");
    if (weights.size() < static_cast<std::size_t>(geom.n_elements()))
        throw config_error("das_volume: weight vector shorter than the element count");

    ComplexVolume v;
    v.grid = grid;
    v.values.assign(grid.size(), {0.0, 0.0});
    std::vector<std::size_t> all(ds.events.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    das_accumulate(ds, plan, geom, weights, grid, all, opt, v.values);
    return v;
}

EnvelopeVolume envelope(const ComplexVolume& v, VolumeLabel label) {
    EnvelopeVolume e;
    e.grid = v.grid;
    e.label = label;
    e.values.resize(v.values.size());
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const double m = std::abs(v.values[i]);
        if (!std::isfinite(m)) throw compute_error("envelope: non-finite beamformed value");
        e.values[i] = m;
    }
    return e;
}

EnvelopeVolume beamform_envelope(const RfDataset& ds, const AcquisitionPlan& plan,
                                 const ArrayGeometry& geom, std::span<const double> weights,
                                 const VoxelGrid& grid, VolumeLabel label, Compounding compound,
                                 const BeamformOptions& opt) {
    if (compound == Compounding::coherent)
        return envelope(das_volume(ds, plan, geom, weights, grid, opt), label);

    if (grid.origin.z <= 0.0)
        throw config_error("das_volume: voxel grid extends behind the array (z <= 0)");
    EnvelopeVolume e;
    e.grid = grid;
    e.label = label;
    e.values.assign(grid.size(), 0.0);
    std::vector<std::complex<double>> acc(grid.size());
    for (int a = 0; a < plan.angles; ++a) {
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < plan.events.size(); ++i)
            if (plan.events[i].angle_index == a) subset.push_back(i);
        std::fill(acc.begin(), acc.end(), std::complex<double>{0.0, 0.0});
        das_accumulate(ds, plan, geom, weights, grid, subset, opt, acc);
        for (std::size_t i = 0; i < acc.size(); ++i) e.values[i] += std::abs(acc[i]);
    }
    return e;
}

EnvelopeVolume nsi_combine(const EnvelopeVolume& e_zm, const EnvelopeVolume& e_dc1,
                           const EnvelopeVolume& e_dc2, double dc) {
    if (dc <= 0.0) throw config_error("nsi_combine: dc must be positive");
    if (!e_zm.grid.same_as(e_dc1.grid) || !e_zm.grid.same_as(e_dc2.grid))
        throw config_error("nsi_combine: envelope grids do not match");
    EnvelopeVolume out;
    out.grid = e_zm.grid;
    out.label = VolumeLabel::e_nsi;
    out.values.resize(e_zm.values.size());
    const double scale = 1.0 / (2.0 * dc);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double raw = 0.5 * (e_dc1.values[i] + e_dc2.values[i]) - e_zm.values[i];
        out.values[i] = raw > 0.0 ? raw * scale : 0.0;
    }
    return out;
}

DbVolume log_compress(const EnvelopeVolume& env, double dynamic_range_db) {
    if (dynamic_range_db <= 0.0) throw config_error("log_compress: dynamic range must be positive");
    double peak = 0.0;
    for (double v : env.values) peak = std::max(peak, v);
    if (peak <= 0.0) throw compute_error("log_compress: all-zero envelope");
    DbVolume out;
    out.grid = env.grid;
    out.label = env.label;
    out.dynamic_range_db = dynamic_range_db;
    out.db.resize(env.values.size());
    const double eps = std::pow(10.0, -dynamic_range_db / 20.0 - 1.0);
    for (std::size_t i = 0; i < env.values.size(); ++i) {
        const double v = std::max(env.values[i] / peak, eps);
        out.db[i] = std::max(20.0 * std::log10(v), -dynamic_range_db);
    }
    return out;
}

void dump_volume(const EnvelopeVolume& env, const std::string& path_base,
                 double dynamic_range_db) {
    {
        std::ofstream hdr(path_base + ".txt");
        hdr.precision(17);  // decimal round-trip of the grid doubles
        hdr << "dims " << env.grid.nx << ' ' << env.grid.ny << ' ' << env.grid.nz << "\n"
            << "spacing_m " << env.grid.spacing.x << ' ' << env.grid.spacing.y << ' '
            << env.grid.spacing.z << "\n"
            << "origin_m " << env.grid.origin.x << ' ' << env.grid.origin.y << ' '
            << env.grid.origin.z << "\n"
            << "label " << to_string(env.label) << "\n"
            << "dynamic_range_db " << dynamic_range_db << "\n"
            << "order z_fastest\n";
    }
    std::vector<float> buf(env.values.begin(), env.values.end());
    write_f32(path_base + ".f32", buf);
}

EnvelopeVolume load_volume(const std::string& path_base) {
    std::ifstream hdr(path_base + ".txt");
    if (!hdr) throw config_error("load_volume: missing header " + path_base + ".txt");
    EnvelopeVolume env;
    std::string key;
    while (hdr >> key) {
        if (key == "dims") hdr >> env.grid.nx >> env.grid.ny >> env.grid.nz;
        else if (key == "spacing_m")
            hdr >> env.grid.spacing.x >> env.grid.spacing.y >> env.grid.spacing.z;
        else if (key == "origin_m")
            hdr >> env.grid.origin.x >> env.grid.origin.y >> env.grid.origin.z;
        else if (key == "label") {
            std::string s;
            hdr >> s;
            env.label = label_from_string(s);
        } else {
            std::string rest;
            std::getline(hdr, rest);
        }
    }
    std::vector<float> buf(env.grid.size());
    read_f32(path_base + ".f32", buf);
    env.values.assign(buf.begin(), buf.end());
    return env;
}

void write_slice_pgm(const DbVolume& v, int ix, int iy, int iz, const std::string& path_base) {
    const auto& g = v.grid;
    auto level = [&](double db) {
        const double t = (db + v.dynamic_range_db) / v.dynamic_range_db;
        return static_cast<uint16_t>(std::lround(std::clamp(t, 0.0, 1.0) * 65535.0));
    };
    {
        // azimuth-depth at iy: rows z (shallow on top), cols x
        std::vector<uint16_t> img(static_cast<std::size_t>(g.nz) * g.nx);
        for (int r = 0; r < g.nz; ++r)
            for (int c = 0; c < g.nx; ++c) img[static_cast<std::size_t>(r) * g.nx + c] =
                level(v.db[g.index(c, iy, r)]);
        std::ofstream os(path_base + "_xz.pgm", std::ios::binary);
        write_pgm16(os, g.nx, g.nz, img);
    }
    {
        // elevation-depth at ix
        std::vector<uint16_t> img(static_cast<std::size_t>(g.nz) * g.ny);
        for (int r = 0; r < g.nz; ++r)
            for (int c = 0; c < g.ny; ++c) img[static_cast<std::size_t>(r) * g.ny + c] =
                level(v.db[g.index(ix, c, r)]);
        std::ofstream os(path_base + "_yz.pgm", std::ios::binary);
        write_pgm16(os, g.ny, g.nz, img);
    }
    {
        // c-plane at iz: rows y (max y on top), cols x
        std::vector<uint16_t> img(static_cast<std::size_t>(g.ny) * g.nx);
        for (int r = 0; r < g.ny; ++r)
            for (int c = 0; c < g.nx; ++c) img[static_cast<std::size_t>(r) * g.nx + c] =
                level(v.db[g.index(c, g.ny - 1 - r, iz)]);
        std::ofstream os(path_base + "_xy.pgm", std::ios::binary);
        write_pgm16(os, g.nx, g.ny, img);
    }
}

}  // namespace nsi3d
