#include "nsi3d/scenario.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "nsi3d/beampattern.hpp"

namespace nsi3d {

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::ofstream open_csv(const fs::path& path, const ExperimentConfig& cfg) {
    fs::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw compute_error("cannot open " + path.string() + " for writing");
    os << "# config " << config_hash(cfg) << " seed " << cfg.seed << "\n";
    os.precision(9);
    return os;
}

struct Pipeline {
    ArrayGeometry geom;
    Pulse pulse;
    ApertureMask mask;
    ApodizationSet windows;
    AcquisitionPlan plan;
    std::vector<double> w_rect, w_zm, w_dc1, w_dc2;  // indexed by element id
};

Pipeline make_pipeline(const ExperimentConfig& cfg, ApertureKind kind) {
    Pipeline p;
    p.geom = make_geometry(cfg);
    p.pulse = make_pulse(cfg);
    p.mask = make_aperture(cfg, p.geom, kind);
    p.windows = nsi_windows(p.mask, cfg.dc);
    const auto sources = virtual_sources(cfg.standoff, cfg.tilt_deg);
    p.plan = build_plan(p.mask, p.geom, sources);
    volume_rate(p.plan, cfg.depth, cfg.sound_speed, cfg.sampling_rate);
    p.w_rect = weights_by_element(p.windows, p.windows.w_rect, p.geom);
    p.w_zm = weights_by_element(p.windows, p.windows.w_zm, p.geom);
    p.w_dc1 = weights_by_element(p.windows, p.windows.w_dc1, p.geom);
    p.w_dc2 = weights_by_element(p.windows, p.windows.w_dc2, p.geom);
    return p;
}

Compounding compounding_of(const ExperimentConfig& cfg) {
    if (cfg.compound == "coherent") return Compounding::coherent;
    if (cfg.compound == "incoherent") return Compounding::incoherent;
    throw config_error("unknown compounding mode '" + cfg.compound + "'");
}

struct NsiVolumes {
    EnvelopeVolume zm, dc1, dc2, nsi;
};

NsiVolumes beamform_nsi(const Pipeline& p, const RfDataset& ds, const VoxelGrid& grid,
                        const ExperimentConfig& cfg) {
    const auto mode = compounding_of(cfg);
    const BeamformOptions opt{cfg.workers};
    NsiVolumes v;
    v.zm = beamform_envelope(ds, p.plan, p.geom, p.w_zm, grid, VolumeLabel::e_zm, mode, opt);
    v.dc1 = beamform_envelope(ds, p.plan, p.geom, p.w_dc1, grid, VolumeLabel::e_dc1, mode, opt);
    v.dc2 = beamform_envelope(ds, p.plan, p.geom, p.w_dc2, grid, VolumeLabel::e_dc2, mode, opt);
    v.nsi = nsi_combine(v.zm, v.dc1, v.dc2, cfg.dc);
    return v;
}

// fine line grids for beam-profile metrology (sampling well below a voxel)
VoxelGrid line_grid_x(double y, double z, double half, double step) {
    const int n = static_cast<int>(std::floor(2.0 * half / step)) + 1;
    VoxelGrid g;
    g.nx = n;
    g.ny = 1;
    g.nz = 1;
    g.spacing = {step, 1.0, 1.0};
    g.origin = {-half, y, z};
    return g;
}

VoxelGrid line_grid_y(double x, double z, double half, double step) {
    VoxelGrid g = line_grid_x(0.0, z, half, step);
    g.ny = g.nx;
    g.nx = 1;
    g.spacing = {1.0, step, 1.0};
    g.origin = {x, -half, z};
    return g;
}

VoxelGrid line_grid_z(double x, double y, double z_lo, double z_hi, double step) {
    const int n = static_cast<int>(std::floor((z_hi - z_lo) / step)) + 1;
    VoxelGrid g;
    g.nx = 1;
    g.ny = 1;
    g.nz = n;
    g.spacing = {1.0, 1.0, step};
    g.origin = {x, y, z_lo};
    return g;
}

struct LineEnvelopes {
    std::vector<double> das, nsi;  // along the line
};

// beamform all four windows on a 1D grid and combine
LineEnvelopes line_envelopes(const Pipeline& p, const RfDataset& ds, const VoxelGrid& line,
                             const ExperimentConfig& cfg) {
    const auto mode = compounding_of(cfg);
    const BeamformOptions opt{cfg.workers};
    LineEnvelopes out;
    out.das = beamform_envelope(ds, p.plan, p.geom, p.w_rect, line, VolumeLabel::e_das, mode, opt)
                  .values;
    const auto zm = beamform_envelope(ds, p.plan, p.geom, p.w_zm, line, VolumeLabel::e_zm, mode, opt);
    const auto d1 =
        beamform_envelope(ds, p.plan, p.geom, p.w_dc1, line, VolumeLabel::e_dc1, mode, opt);
    const auto d2 =
        beamform_envelope(ds, p.plan, p.geom, p.w_dc2, line, VolumeLabel::e_dc2, mode, opt);
    out.nsi = nsi_combine(zm, d1, d2, cfg.dc).values;
    return out;
}

Vec3 max_voxel_position(const EnvelopeVolume& v) {
    const auto it = std::max_element(v.values.begin(), v.values.end());
    const std::size_t flat = static_cast<std::size_t>(it - v.values.begin());
    const auto& g = v.grid;
    const int iz = static_cast<int>(flat % g.nz);
    const int iy = static_cast<int>((flat / g.nz) % g.ny);
    const int ix = static_cast<int>(flat / (static_cast<std::size_t>(g.nz) * g.ny));
    return g.voxel_center(ix, iy, iz);
}

PointMetrics measure_point(const Pipeline& p, const RfDataset& ds, const ExperimentConfig& cfg,
                           const Vec3& coarse_max, bool use_nsi, const std::string& out_dir,
                           const std::string& tag) {
    const double step = p.geom.sound_speed / cfg.sim_frequency / 10.0;  // lambda/10

    // refine the peak depth on a fine axial line
    const auto zline =
        line_grid_z(coarse_max.x, coarse_max.y, std::max(1e-3, coarse_max.z - 4e-3),
                    coarse_max.z + 4e-3, step / 2.0);
    const auto axial = line_envelopes(p, ds, zline, cfg);
    const auto& aenv = use_nsi ? axial.nsi : axial.das;
    const std::size_t iz = std::max_element(aenv.begin(), aenv.end()) - aenv.begin();
    const double z_star = zline.origin.z + static_cast<double>(iz) * zline.spacing.z;

    const auto xline = line_grid_x(coarse_max.y, z_star, cfg.grid_x_half, step);
    const auto yline = line_grid_y(coarse_max.x, z_star, cfg.grid_y_half, step);
    const auto ex = line_envelopes(p, ds, xline, cfg);
    const auto ey = line_envelopes(p, ds, yline, cfg);

    std::vector<double> xc(xline.nx), yc(yline.ny);
    for (int i = 0; i < xline.nx; ++i) xc[i] = xline.origin.x + i * xline.spacing.x;
    for (int i = 0; i < yline.ny; ++i) yc[i] = yline.origin.y + i * yline.spacing.y;

    const auto paz = make_profile(xc, use_nsi ? ex.nsi : ex.das, ProfileAxis::azimuth);
    const auto pel = make_profile(yc, use_nsi ? ey.nsi : ey.das, ProfileAxis::elevation);

    PointMetrics m;
    m.fwhm_az = fwhm(paz);
    m.fwhm_el = fwhm(pel);
    const auto saz = smer(paz);
    const auto sel = smer(pel);
    m.smer_az = saz.db;
    m.smer_el = sel.db;
    m.smer_clamped = saz.clamped || sel.clamped;

    if (!out_dir.empty()) {
        auto os1 = open_csv(fs::path(out_dir) / (tag + "_profile_az.csv"), cfg);
        write_profile_csv(paz, os1);
        auto os2 = open_csv(fs::path(out_dir) / (tag + "_profile_el.csv"), cfg);
        write_profile_csv(pel, os2);
    }
    return m;
}

void dump_views(const EnvelopeVolume& env, const ExperimentConfig& cfg, const std::string& dir,
                const std::string& name) {
    dump_volume(env, (fs::path(dir) / name).string(), cfg.dynamic_range_db);
    const auto db = log_compress(env, cfg.dynamic_range_db);
    const auto it = std::max_element(env.values.begin(), env.values.end());
    const std::size_t flat = static_cast<std::size_t>(it - env.values.begin());
    const auto& g = env.grid;
    const int iz = static_cast<int>(flat % g.nz);
    const int iy = static_cast<int>((flat / g.nz) % g.ny);
    const int ix = static_cast<int>(flat / (static_cast<std::size_t>(g.nz) * g.ny));
    write_slice_pgm(db, ix, iy, iz, (fs::path(dir) / name).string());
}

}  // namespace

ArrayGeometry make_geometry(const ExperimentConfig& cfg) {
    ArrayGeometry g = build_matrix_array(cfg.pitch, cfg.blank_rows);
    g.sound_speed = cfg.sound_speed;
    g.fractional_bandwidth = cfg.fractional_bandwidth;
    return g;
}

Pulse make_pulse(const ExperimentConfig& cfg) {
    Pulse p;
    p.center_frequency = cfg.sim_frequency;
    p.fractional_bandwidth = cfg.fractional_bandwidth;
    p.sampling_rate = cfg.sampling_rate;
    return p;
}

ApertureMask make_aperture(const ExperimentConfig& cfg, const ArrayGeometry& geom,
                           ApertureKind kind) {
    const double r_out = cfg.r_out_pitch * cfg.pitch;
    const double r_in = cfg.r_in_pitch * cfg.pitch;
    switch (kind) {
        case ApertureKind::circular: return circular_mask(geom, r_out, r_in);
        case ApertureKind::spiral:
            return quantize_to_grid(fermat_spiral_ideal(cfg.spiral_points, r_out), geom, r_in);
        case ApertureKind::spiral_no_reuse:
            return no_reuse_select(fermat_spiral_ideal(cfg.spiral_points, r_out), geom,
                                   cfg.sigma_d, r_in);
        case ApertureKind::rectangular:
            return rectangular_mask(geom, cfg.rect_inner_half_width);
    }
    throw config_error("make_aperture: bad kind");
}

VoxelGrid make_grid(const ExperimentConfig& cfg) {
    return VoxelGrid::from_extents(-cfg.grid_x_half, cfg.grid_x_half, -cfg.grid_y_half,
                                   cfg.grid_y_half, cfg.grid_z_lo, cfg.grid_z_hi, cfg.grid_nx,
                                   cfg.grid_ny, cfg.grid_nz);
}

std::vector<ApertureKind> selected_apertures(const ExperimentConfig& cfg) {
    if (cfg.aperture == "all")
        return {ApertureKind::circular, ApertureKind::spiral, ApertureKind::spiral_no_reuse};
    return {aperture_kind_from_string(cfg.aperture)};
}

PointScenarioResult run_points_scenario(const ExperimentConfig& cfg, ApertureKind kind,
                                        const std::string& out_dir) {
    const auto t0 = clock_type::now();
    const Pipeline p = make_pipeline(cfg, kind);

    Phantom phantom = make_point_phantom(cfg.point_depths);
    phantom.rng_seed = cfg.seed;

    SimOptions sim;
    sim.sampling_rate = cfg.sampling_rate;
    sim.max_depth = cfg.depth;
    sim.workers = cfg.workers;
    const RfDataset ds = simulate_acquisition(p.plan, phantom, p.geom, p.pulse, sim);

    const VoxelGrid grid = make_grid(cfg);
    const BeamformOptions opt{cfg.workers};
    const auto mode = compounding_of(cfg);
    const auto das =
        beamform_envelope(ds, p.plan, p.geom, p.w_rect, grid, VolumeLabel::e_das, mode, opt);
    const auto nsi = beamform_nsi(p, ds, grid, cfg);

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        dump_views(das, cfg, out_dir, "e_das");
        dump_views(nsi.nsi, cfg, out_dir, "e_nsi");
        dump_volume(nsi.zm, (fs::path(out_dir) / "e_zm").string(), cfg.dynamic_range_db);
        dump_volume(nsi.dc1, (fs::path(out_dir) / "e_dc1").string(), cfg.dynamic_range_db);
        dump_volume(nsi.dc2, (fs::path(out_dir) / "e_dc2").string(), cfg.dynamic_range_db);
    }

    PointScenarioResult res;
    res.kind = kind;
    res.das = measure_point(p, ds, cfg, max_voxel_position(das), false, out_dir, "das");
    res.nsi = measure_point(p, ds, cfg, max_voxel_position(nsi.nsi), true, out_dir, "nsi");
    res.seconds = seconds_since(t0);

    if (!out_dir.empty()) {
        auto os = open_csv(fs::path(out_dir) / "metrics.csv", cfg);
        os << "aperture,method,fwhm_az_mm,fwhm_el_mm,smer_az_db,smer_el_db\n";
        for (const auto* m : {&res.das, &res.nsi})
            os << to_string(kind) << ',' << (m == &res.das ? "das" : "nsi") << ','
               << m->fwhm_az * 1e3 << ',' << m->fwhm_el * 1e3 << ',' << m->smer_az << ','
               << m->smer_el << '\n';
    }
    return res;
}

CystScenarioResult run_cyst_scenario(const ExperimentConfig& cfg, ApertureKind kind,
                                     const std::string& out_dir) {
    const auto t0 = clock_type::now();
    const Pipeline p = make_pipeline(cfg, kind);

    CystSpec spec;
    spec.box_center = {0.0, 0.0, cfg.cyst_depth};
    spec.box_size = {cfg.cyst_box_x, cfg.cyst_box_y, cfg.cyst_box_z};
    spec.cyst_center = {0.0, 0.0, cfg.cyst_depth};
    spec.cyst_diameter = cfg.cyst_diameter;
    spec.scatterers_per_cell = cfg.scatterers_per_cell;
    spec.inside_amp_ratio = cfg.inside_amp_ratio;
    spec.seed = cfg.seed;
    const Phantom phantom = make_cyst_phantom(spec, p.geom, p.pulse);

    SimOptions sim;
    sim.sampling_rate = cfg.sampling_rate;
    sim.max_depth = cfg.depth;
    sim.workers = cfg.workers;
    const RfDataset ds = simulate_acquisition(p.plan, phantom, p.geom, p.pulse, sim);

    const VoxelGrid grid = make_grid(cfg);
    const BeamformOptions opt{cfg.workers};
    const auto mode = compounding_of(cfg);
    const auto das =
        beamform_envelope(ds, p.plan, p.geom, p.w_rect, grid, VolumeLabel::e_das, mode, opt);
    const auto nsi = beamform_nsi(p, ds, grid, cfg);

    const double r = 0.5 * cfg.cyst_diameter;
    const SphereRegion in{{0.0, 0.0, cfg.cyst_depth}, 0.8 * r};
    const ShellRegion out{{0.0, 0.0, cfg.cyst_depth}, 1.2 * r, 1.8 * r};

    CystScenarioResult res;
    res.kind = kind;
    res.das = contrast(das, in, out);
    res.nsi = contrast(nsi.nsi, in, out);
    res.seconds = seconds_since(t0);

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        dump_views(das, cfg, out_dir, "e_das");
        dump_views(nsi.nsi, cfg, out_dir, "e_nsi");
        auto os = open_csv(fs::path(out_dir) / "contrast.csv", cfg);
        os << "aperture,method,cr,cnr,mu_inside,mu_outside,sigma_inside,sigma_outside,"
              "n_inside,n_outside\n";
        for (const auto* c : {&res.das, &res.nsi})
            os << to_string(kind) << ',' << (c == &res.das ? "das" : "nsi") << ',' << c->cr << ','
               << c->cnr << ',' << c->mu_i << ',' << c->mu_o << ',' << c->sigma_i << ','
               << c->sigma_o << ',' << c->n_inside << ',' << c->n_outside << '\n';
    }
    return res;
}

void run_beampattern_scenario(const ExperimentConfig& cfg, ApertureKind kind,
                              const std::string& out_dir) {
    const ArrayGeometry geom = make_geometry(cfg);
    const ApertureMask mask = make_aperture(cfg, geom, kind);
    const auto windows = nsi_windows(mask, cfg.dc);
    const double depth = 40e-3;
    const double half = depth * std::tan(deg2rad(20.0));  // +/-20 deg sweep
    const int n = 201;

    const auto rect = cw_pattern(full_weights(windows, windows.w_rect, geom), geom, depth, half, n,
                                 cfg.sim_frequency);
    const auto nsi = nsi_pattern(windows, geom, depth, half, n, cfg.sim_frequency);

    fs::create_directories(out_dir);
    {
        auto os = open_csv(fs::path(out_dir) / "pattern_das.csv", cfg);
        write_pattern_csv(rect, os);
    }
    {
        auto os = open_csv(fs::path(out_dir) / "pattern_nsi.csv", cfg);
        write_pattern_csv(nsi, os);
    }
    {
        std::ofstream os(fs::path(out_dir) / "pattern_das.pgm", std::ios::binary);
        write_pattern_pgm(rect, cfg.dynamic_range_db, os);
    }
    {
        std::ofstream os(fs::path(out_dir) / "pattern_nsi.pgm", std::ios::binary);
        write_pattern_pgm(nsi, cfg.dynamic_range_db, os);
    }
    auto os = open_csv(fs::path(out_dir) / "widths.csv", cfg);
    os << "aperture,method,width6_az_mm,width6_el_mm\n";
    os << to_string(kind) << ",das," << pattern_width_6db(rect, 0) * 1e3 << ','
       << pattern_width_6db(rect, 1) * 1e3 << '\n';
    os << to_string(kind) << ",nsi," << pattern_width_6db(nsi, 0) * 1e3 << ','
       << pattern_width_6db(nsi, 1) * 1e3 << '\n';
}

void run_design(const ExperimentConfig& cfg, const std::string& out_dir) {
    const ArrayGeometry geom = make_geometry(cfg);
    fs::create_directories(out_dir);
    {
        auto os = open_csv(fs::path(out_dir) / "geometry.csv", cfg);
        write_geometry_csv(geom, os);
    }
    for (ApertureKind kind : selected_apertures(cfg)) {
        const auto mask = make_aperture(cfg, geom, kind);
        const auto windows = nsi_windows(mask, cfg.dc);
        const std::string base = to_string(kind);
        {
            auto os = open_csv(fs::path(out_dir) / (base + "_apodization.csv"), cfg);
            write_apodization_csv(windows, os);
        }
        const std::pair<const char*, const std::vector<double>*> views[] = {
            {"rect", &windows.w_rect},
            {"zm", &windows.w_zm},
            {"dc1", &windows.w_dc1},
            {"dc2", &windows.w_dc2}};
        for (const auto& [name, w] : views) {
            std::ofstream os(fs::path(out_dir) / (base + "_w_" + name + ".pgm"),
                             std::ios::binary);
            write_apodization_pgm(windows, geom, *w, os);
        }
    }
}

void run_rates(const ExperimentConfig& cfg, const std::string& out_dir) {
    const ArrayGeometry geom = make_geometry(cfg);
    const auto sources = virtual_sources(cfg.standoff, cfg.tilt_deg);
    fs::create_directories(out_dir);
    auto os = open_csv(fs::path(out_dir) / "rates.csv", cfg);
    os << "aperture,active_elements,events_per_angle,events_per_volume,rf_mb_per_volume,"
          "max_volume_rate_hz\n";
    for (ApertureKind kind :
         {ApertureKind::circular, ApertureKind::spiral, ApertureKind::spiral_no_reuse}) {
        const auto mask = make_aperture(cfg, geom, kind);
        auto plan = build_plan(mask, geom, sources);
        volume_rate(plan, cfg.depth, cfg.sound_speed, cfg.sampling_rate);
        os << to_string(kind) << ',' << mask.element_ids.size() << ',' << plan.events_per_angle
           << ',' << plan.events.size() << ',' << plan.rf_bytes_per_volume / 1e6 << ','
           << plan.max_volume_rate << '\n';
        auto osp = open_csv(fs::path(out_dir) / (to_string(kind) + "_plan.csv"), cfg);
        write_plan_csv(plan, osp);
    }
}

BenchResult run_bench(const ExperimentConfig& cfg, ApertureKind kind) {
    const Pipeline p = make_pipeline(cfg, kind);
    Phantom phantom = make_point_phantom(cfg.point_depths);

    SimOptions sim;
    sim.sampling_rate = cfg.sampling_rate;
    sim.max_depth = cfg.depth;
    sim.workers = cfg.workers;
    const RfDataset ds = simulate_acquisition(p.plan, phantom, p.geom, p.pulse, sim);
    const VoxelGrid grid = make_grid(cfg);
    const auto mode = compounding_of(cfg);
    const BeamformOptions opt{cfg.workers};

    BenchResult r;
    auto t0 = clock_type::now();
    const auto das =
        beamform_envelope(ds, p.plan, p.geom, p.w_rect, grid, VolumeLabel::e_das, mode, opt);
    r.das_seconds = seconds_since(t0);

    t0 = clock_type::now();
    const auto nsi = beamform_nsi(p, ds, grid, cfg);
    r.nsi_seconds = seconds_since(t0);

    r.ratio = r.nsi_seconds / r.das_seconds;
    // keep the DAS volume alive so the compiler cannot elide the first pass
    if (das.values.empty() || nsi.nsi.values.empty())
        throw compute_error("bench: empty volumes");
    return r;
}

PointMetrics metrics_from_volume(const std::string& volume_base, const std::string& out_dir,
                                 const ExperimentConfig& cfg) {
    const EnvelopeVolume env = load_volume(volume_base);
    const auto paz = profile_through_max(env, ProfileAxis::azimuth);
    const auto pel = profile_through_max(env, ProfileAxis::elevation);
    PointMetrics m;
    m.fwhm_az = fwhm(paz);
    m.fwhm_el = fwhm(pel);
    const auto saz = smer(paz);
    const auto sel = smer(pel);
    m.smer_az = saz.db;
    m.smer_el = sel.db;
    m.smer_clamped = saz.clamped || sel.clamped;
    if (!out_dir.empty()) {
        const std::string stem = fs::path(volume_base).filename().string();
        auto os1 = open_csv(fs::path(out_dir) / (stem + "_profile_az.csv"), cfg);
        write_profile_csv(paz, os1);
        auto os2 = open_csv(fs::path(out_dir) / (stem + "_profile_el.csv"), cfg);
        write_profile_csv(pel, os2);
        auto os = open_csv(fs::path(out_dir) / (stem + "_metrics.csv"), cfg);
        os << "volume,fwhm_az_mm,fwhm_el_mm,smer_az_db,smer_el_db\n";
        os << stem << ',' << m.fwhm_az * 1e3 << ',' << m.fwhm_el * 1e3 << ',' << m.smer_az << ','
           << m.smer_el << '\n';
    }
    return m;
}

}  // namespace nsi3d
