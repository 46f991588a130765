#include "nsi3d/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nsi3d {

namespace {

struct Field {
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
std::string fmt(const T& v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

template <typename T>
std::string fmt(const std::vector<T>& v) {
    std::ostringstream os;
    os.precision(15);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

template <typename T>
T parse_one(const std::string& s) {
    std::istringstream is(s);
    T v{};
    is >> v;
    if (is.fail()) throw config_error("bad config value '" + s + "'");
    return v;
}

template <>
std::string parse_one<std::string>(const std::string& s) {
    return s;
}

template <typename T>
std::vector<T> parse_list(const std::string& s) {
    std::vector<T> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ','))
        if (!item.empty()) out.push_back(parse_one<T>(item));
    return out;
}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> table = [] {
        std::map<std::string, Field> f;
        auto add = [&f](const std::string& name, auto member) {
            using M = std::decay_t<decltype(ExperimentConfig{}.*member)>;
            f[name] = Field{
                [member](ExperimentConfig& c, const std::string& s) {
                    if constexpr (std::is_same_v<M, std::vector<int>>)
                        c.*member = parse_list<int>(s);
                    else if constexpr (std::is_same_v<M, std::vector<double>>)
                        c.*member = parse_list<double>(s);
                    else
                        c.*member = parse_one<M>(s);
                },
                [member](const ExperimentConfig& c) { return fmt(c.*member); }};
        };
        add("scenario", &ExperimentConfig::scenario);
        add("aperture", &ExperimentConfig::aperture);
        add("preset", &ExperimentConfig::preset);
        add("compound", &ExperimentConfig::compound);
        add("out_dir", &ExperimentConfig::out_dir);
        add("seed", &ExperimentConfig::seed);
        add("workers", &ExperimentConfig::workers);
        add("dc", &ExperimentConfig::dc);
        add("dynamic_range_db", &ExperimentConfig::dynamic_range_db);
        add("pitch", &ExperimentConfig::pitch);
        add("blank_rows", &ExperimentConfig::blank_rows);
        add("sound_speed", &ExperimentConfig::sound_speed);
        add("sim_frequency", &ExperimentConfig::sim_frequency);
        add("fractional_bandwidth", &ExperimentConfig::fractional_bandwidth);
        add("sampling_rate", &ExperimentConfig::sampling_rate);
        add("r_out_pitch", &ExperimentConfig::r_out_pitch);
        add("r_in_pitch", &ExperimentConfig::r_in_pitch);
        add("spiral_points", &ExperimentConfig::spiral_points);
        add("sigma_d", &ExperimentConfig::sigma_d);
        add("rect_inner_half_width", &ExperimentConfig::rect_inner_half_width);
        add("standoff", &ExperimentConfig::standoff);
        add("tilt_deg", &ExperimentConfig::tilt_deg);
        add("depth", &ExperimentConfig::depth);
        add("grid_nx", &ExperimentConfig::grid_nx);
        add("grid_ny", &ExperimentConfig::grid_ny);
        add("grid_nz", &ExperimentConfig::grid_nz);
        add("grid_x_half", &ExperimentConfig::grid_x_half);
        add("grid_y_half", &ExperimentConfig::grid_y_half);
        add("grid_z_lo", &ExperimentConfig::grid_z_lo);
        add("grid_z_hi", &ExperimentConfig::grid_z_hi);
        add("point_depths", &ExperimentConfig::point_depths);
        add("cyst_diameter", &ExperimentConfig::cyst_diameter);
        add("cyst_depth", &ExperimentConfig::cyst_depth);
        add("cyst_box_x", &ExperimentConfig::cyst_box_x);
        add("cyst_box_y", &ExperimentConfig::cyst_box_y);
        add("cyst_box_z", &ExperimentConfig::cyst_box_z);
        add("scatterers_per_cell", &ExperimentConfig::scatterers_per_cell);
        add("inside_amp_ratio", &ExperimentConfig::inside_amp_ratio);
        return f;
    }();
    return table;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig make_preset(const std::string& preset) {
    ExperimentConfig c;
    c.preset = preset;
    if (preset == "desk") {
        // defaults above are the desk preset
    } else if (preset == "full") {
        c.grid_x_half = 20e-3;
        c.grid_y_half = 20e-3;
        c.grid_z_lo = 15e-3;
        c.grid_z_hi = 65e-3;
        c.grid_nx = 156;
        c.grid_ny = 156;
        c.grid_nz = 195;  // ~lambda/2 voxels over the paper extents
        c.point_depths = {20e-3, 30e-3, 40e-3, 50e-3, 60e-3};
        c.cyst_box_x = 40e-3;
        c.cyst_box_y = 40e-3;
        c.cyst_box_z = 30e-3;
    } else {
        throw config_error("unknown preset '" + preset + "' (desk|full)");
    }
    return c;
}

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig cfg;
    bool preset_seen = false;
    std::string line;
    std::vector<std::pair<std::string, std::string>> entries;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!fields().count(key))
            throw config_error("config line " + std::to_string(lineno) + ": unknown key '" + key +
                               "'");
        entries.emplace_back(key, val);
        if (key == "preset") {
            cfg = make_preset(val);
            preset_seen = true;
        }
    }
    (void)preset_seen;
    for (const auto& [key, val] : entries) fields().at(key).set(cfg, val);
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file " + path);
    return parse_config(is);
}

void serialize_config(const ExperimentConfig& cfg, std::ostream& os) {
    // preset first so re-parsing applies it before the explicit values
    os << "preset = " << cfg.preset << "\n";
    for (const auto& [name, field] : fields()) {
        if (name == "preset") continue;
        os << name << " = " << field.get(cfg) << "\n";
    }
}

std::string config_hash(const ExperimentConfig& cfg) {
    // fingerprint of the experiment itself: output location and worker count
    // do not affect results and stay out of the hash
    std::ostringstream os;
    os << "preset = " << cfg.preset << "\n";
    for (const auto& [name, field] : fields()) {
        if (name == "preset" || name == "out_dir" || name == "workers") continue;
        os << name << " = " << field.get(cfg) << "\n";
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(os.str())));
    return buf;
}

}  // namespace nsi3d
