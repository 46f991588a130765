#include "nsi3d/geometry.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

namespace nsi3d {

ArrayGeometry build_matrix_array(double pitch, std::vector<int> blank_rows,
                                 int n_rows_physical, int n_cols) {
    if (pitch <= 0.0) throw config_error("build_matrix_array: pitch must be positive");
    if (n_rows_physical < 1 || n_cols < 1)
        throw config_error("build_matrix_array: grid dimensions must be positive");

    std::sort(blank_rows.begin(), blank_rows.end());
    std::set<int> blanks;
    for (int r : blank_rows) {
        if (r < 1 || r > n_rows_physical)
            throw config_error("build_matrix_array: blank row " + std::to_string(r) +
                               " outside [1, " + std::to_string(n_rows_physical) + "]");
        if (!blanks.insert(r).second)
            throw config_error("build_matrix_array: duplicate blank row " + std::to_string(r));
    }

    const int n_active = n_rows_physical - static_cast<int>(blanks.size());
    if (n_active <= 0 || n_active % kBankRows != 0)
        throw config_error("build_matrix_array: active row count " + std::to_string(n_active) +
                           " is not a multiple of the bank height " + std::to_string(kBankRows));

    ArrayGeometry g;
    g.pitch = pitch;
    g.n_cols = n_cols;
    g.n_rows_physical = n_rows_physical;
    g.blank_rows = blank_rows;

    // physical y centered on the full-grid midline; the design-grid y used for
    // radial_distance ignores the wiring gaps
    const double y_mid = 0.5 * (n_rows_physical - 1);
    const double yd_mid = 0.5 * (n_active - 1);
    const double x_mid = 0.5 * (n_cols - 1);

    std::vector<int> active_phys;  // 0-based physical row per active row
    for (int r = 0; r < n_rows_physical; ++r)
        if (!blanks.count(r + 1)) active_phys.push_back(r);

    g.elements.reserve(static_cast<std::size_t>(n_active) * n_cols);
    for (int ar = 0; ar < n_active; ++ar) {
        const double y = (active_phys[ar] - y_mid) * pitch;
        const double yd = (ar - yd_mid) * pitch;
        for (int c = 0; c < n_cols; ++c) {
            Element e;
            e.id = ar * n_cols + c;
            e.col = c;
            e.active_row = ar;
            e.position = {(c - x_mid) * pitch, y, 0.0};
            e.bank = ar / kBankRows;
            e.channel = c * kBankRows + ar % kBankRows;
            e.radial_distance = std::hypot(e.position.x, yd);
            g.elements.push_back(e);
        }
    }
    return g;
}

std::vector<std::pair<int, std::vector<int>>>
channel_conflicts(const ArrayGeometry& geom, std::span<const int> element_ids) {
    std::map<int, std::vector<int>> by_channel;
    for (int id : element_ids) {
        if (id < 0 || id >= geom.n_elements())
            throw config_error("channel_conflicts: invalid element index " + std::to_string(id));
        by_channel[geom.elements[id].channel].push_back(id);
    }
    std::vector<std::pair<int, std::vector<int>>> out;
    for (auto& [ch, ids] : by_channel)
        if (ids.size() >= 2) {
            std::sort(ids.begin(), ids.end());
            out.emplace_back(ch, std::move(ids));
        }
    return out;
}

void write_geometry_csv(const ArrayGeometry& geom, std::ostream& os) {
    os << "element_id,col,active_row,x_m,y_m,bank,channel\n";
    os.precision(9);
    for (const auto& e : geom.elements)
        os << e.id << ',' << e.col << ',' << e.active_row << ',' << e.position.x << ','
           << e.position.y << ',' << e.bank << ',' << e.channel << '\n';
}

}  // namespace nsi3d
