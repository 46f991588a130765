#include "nsi3d/simulate.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "nsi3d/parallel.hpp"

namespace nsi3d {

namespace {

int derive_samples(const SimOptions& opt, double sound_speed) {
    if (opt.n_samples > 0) return opt.n_samples;
    const double window = 2.0 * opt.max_depth / sound_speed;
    const int n = static_cast<int>(std::ceil(window * opt.sampling_rate));
    return (n + 31) / 32 * 32;  // keep FFT lengths friendly
}

void deposit(const PulseTable& tbl, double u, double amp, double* row, int n_samples) {
    // adds amp * pulse((j - u)/fs) to row[j] over the pulse support
    const int H = tbl.half_width_samples();
    const int O = tbl.oversample();
    const auto& t = tbl.values();
    int j_lo = static_cast<int>(std::ceil(u)) - H;
    int j_hi = static_cast<int>(std::floor(u)) + H;
    if (j_lo < 0) j_lo = 0;
    if (j_hi > n_samples - 1) j_hi = n_samples - 1;
    if (j_lo > j_hi) return;
    const double pos = (j_lo - u) * O + H * O;
    long i0 = static_cast<long>(std::floor(pos));
    const double frac = pos - static_cast<double>(i0);
    const long max_i = static_cast<long>(t.size()) - 2;
    for (int j = j_lo; j <= j_hi; ++j, i0 += O) {
        if (i0 < 0 || i0 > max_i) continue;
        const double v = t[i0] + frac * (t[i0 + 1] - t[i0]);
        row[j] += amp * v;
    }
}

void simulate_into(const TxEvent& event, const Phantom& phantom, const ArrayGeometry& geom,
                   const PulseTable& tbl, const SimOptions& opt, int n_samples, EventRf& out) {
    out.rx_elements = event.rx_elements;
    std::sort(out.rx_elements.begin(), out.rx_elements.end());
    const std::size_t n_ch = out.rx_elements.size();
    out.samples.assign(n_ch * n_samples, 0.0);

    const double c = geom.sound_speed;
    const double fs = opt.sampling_rate;
    const Vec3 vs = event.source.position;

    std::vector<Vec3> rx_pos(n_ch);
    for (std::size_t i = 0; i < n_ch; ++i) {
        const int id = out.rx_elements[i];
        if (id < 0 || id >= geom.n_elements())
            throw config_error("simulate_rf: event references invalid element " +
                               std::to_string(id));
        rx_pos[i] = geom.elements[id].position;
    }

    for (const auto& s : phantom.scatterers) {
        if (s.position.z <= 0.0)
            throw config_error("simulate_rf: scatterer behind the array (z <= 0)");
        const double d_tx = (s.position - vs).norm();
        const double t_tx = (d_tx - event.source.standoff) / c;
        const double a_tx = s.amplitude / d_tx;
        for (std::size_t ch = 0; ch < n_ch; ++ch) {
            const double d_rx = (s.position - rx_pos[ch]).norm();
            const double u = ((t_tx + d_rx / c) - opt.t0) * fs;
            deposit(tbl, u, a_tx / d_rx, out.samples.data() + ch * n_samples, n_samples);
        }
    }

    if (opt.noise_rms > 0.0) {
        std::mt19937_64 rng(opt.noise_seed + static_cast<uint64_t>(event.event_index) * 0x9e3779b9ull);
        std::normal_distribution<double> noise(0.0, opt.noise_rms);
        for (auto& v : out.samples) v += noise(rng);
    }
}

}  // namespace

EventRf simulate_rf(const TxEvent& event, const Phantom& phantom, const ArrayGeometry& geom,
                    const Pulse& pulse, const SimOptions& opt) {
    const PulseTable tbl(pulse);
    EventRf out;
    simulate_into(event, phantom, geom, tbl, opt, derive_samples(opt, geom.sound_speed), out);
    return out;
}

RfDataset simulate_acquisition(const AcquisitionPlan& plan, const Phantom& phantom,
                               const ArrayGeometry& geom, const Pulse& pulse,
                               const SimOptions& opt) {
    RfDataset ds;
    ds.sampling_rate = opt.sampling_rate;
    ds.t0 = opt.t0;
    ds.n_samples = derive_samples(opt, geom.sound_speed);
    ds.events.resize(plan.events.size());
    const PulseTable tbl(pulse);
    parallel_for(plan.events.size(), opt.workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            simulate_into(plan.events[i], phantom, geom, tbl, opt, ds.n_samples, ds.events[i]);
    });
    return ds;
}

void dump_rf(const RfDataset& ds, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    {
        std::ofstream idx(fs::path(directory) / "dataset.txt");
        idx << "sampling_rate " << ds.sampling_rate << "\n"
            << "t0 " << ds.t0 << "\n"
            << "n_samples " << ds.n_samples << "\n"
            << "n_events " << ds.events.size() << "\n";
    }
    char name[64];
    for (std::size_t i = 0; i < ds.events.size(); ++i) {
        const auto& ev = ds.events[i];
        std::snprintf(name, sizeof(name), "event_%04zu", i);
        std::ofstream hdr(fs::path(directory) / (std::string(name) + ".txt"));
        hdr << "sampling_rate " << ds.sampling_rate << "\n"
            << "t0 " << ds.t0 << "\n"
            << "n_samples " << ds.n_samples << "\n"
            << "channels " << ev.rx_elements.size() << "\n";
        for (std::size_t ch = 0; ch < ev.rx_elements.size(); ++ch)
            hdr << "channel " << ch << " element " << ev.rx_elements[ch] << "\n";
        std::ofstream bin(fs::path(directory) / (std::string(name) + ".f32"), std::ios::binary);
        std::vector<float> buf(ev.samples.begin(), ev.samples.end());
        bin.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * sizeof(float)));
    }
}

RfDataset load_rf(const std::string& directory) {
    namespace fs = std::filesystem;
    std::ifstream idx(fs::path(directory) / "dataset.txt");
    if (!idx) throw config_error("load_rf: missing dataset.txt in " + directory);
    RfDataset ds;
    std::size_t n_events = 0;
    std::string key;
    while (idx >> key) {
        if (key == "sampling_rate") idx >> ds.sampling_rate;
        else if (key == "t0") idx >> ds.t0;
        else if (key == "n_samples") idx >> ds.n_samples;
        else if (key == "n_events") idx >> n_events;
    }
    char name[64];
    for (std::size_t i = 0; i < n_events; ++i) {
        std::snprintf(name, sizeof(name), "event_%04zu", i);
        std::ifstream hdr(fs::path(directory) / (std::string(name) + ".txt"));
        if (!hdr) throw config_error("load_rf: missing header for event " + std::to_string(i));
        EventRf ev;
        std::size_t channels = 0;
        while (hdr >> key) {
            if (key == "channels") hdr >> channels;
            else if (key == "channel") {
                std::size_t ch;
                int el;
                hdr >> ch >> key >> el;
                ev.rx_elements.push_back(el);
            } else {
                double ignored;
                hdr >> ignored;
            }
        }
        if (ev.rx_elements.size() != channels)
            throw config_error("load_rf: channel map size mismatch in event " + std::to_string(i));
        std::ifstream bin(fs::path(directory) / (std::string(name) + ".f32"), std::ios::binary);
        std::vector<float> buf(channels * ds.n_samples);
        bin.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(buf.size() * sizeof(float)));
        if (!bin) throw config_error("load_rf: truncated matrix for event " + std::to_string(i));
        ev.samples.assign(buf.begin(), buf.end());
        ds.events.push_back(std::move(ev));
    }
    return ds;
}

}  // namespace nsi3d
