#include "torun/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace torun {

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Box {
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    bool empty = true;

    void add(cd w) {
        if (empty) {
            min_x = max_x = w.real();
            min_y = max_y = w.imag();
            empty = false;
            return;
        }
        min_x = std::fmin(min_x, w.real());
        max_x = std::fmax(max_x, w.real());
        min_y = std::fmin(min_y, w.imag());
        max_y = std::fmax(max_y, w.imag());
    }
};

} // namespace

std::string render_grid_svg(const UniformizingForm& form, const TorusLattice& lat,
                            int lines, int samples_per_line) {
    if (lines < 1 || lines > 256) throw invalid_input("render_grid_svg: lines in [1, 256]");
    if (samples_per_line < 8 || samples_per_line > 4096)
        throw invalid_input("render_grid_svg: samples_per_line in [8, 4096]");

    const double P = form.f.grid.period;
    std::vector<double> ts(static_cast<std::size_t>(samples_per_line) + 1);
    for (std::size_t p = 0; p < ts.size(); ++p)
        ts[p] = P * static_cast<double>(p) / samples_per_line;
    std::vector<double> cs(static_cast<std::size_t>(lines) + 1);
    for (std::size_t q = 0; q < cs.size(); ++q)
        cs[q] = P * static_cast<double>(q) / lines;

    auto phi_at = [&](double x1, double x2, cd psi) {
        const cd z(x1, x2);
        return form.a * z + form.b * std::conj(z) + (psi - form.psi0);
    };

    // polylines[k][p]: line k sampled along its free coordinate
    std::vector<std::vector<cd>> polylines;
    const std::vector<cd> psi_h = form.psi_eval.eval_grid(ts, cs);
    for (std::size_t q = 0; q < cs.size(); ++q) {
        std::vector<cd> line(ts.size());
        for (std::size_t p = 0; p < ts.size(); ++p)
            line[p] = phi_at(ts[p], cs[q], psi_h[p * cs.size() + q]);
        polylines.push_back(std::move(line));
    }
    const std::vector<cd> psi_v = form.psi_eval.eval_grid(cs, ts);
    for (std::size_t q = 0; q < cs.size(); ++q) {
        std::vector<cd> line(ts.size());
        for (std::size_t p = 0; p < ts.size(); ++p)
            line[p] = phi_at(cs[q], ts[p], psi_v[q * ts.size() + p]);
        polylines.push_back(std::move(line));
    }

    const cd corners[5] = {cd(0.0, 0.0), lat.omega1, lat.omega1 + lat.omega2,
                           lat.omega2, cd(0.0, 0.0)};
    Box box;
    for (const auto& line : polylines)
        for (cd w : line) box.add(w);
    for (cd w : corners) box.add(w);

    const double kWidth = 800.0, kMargin = 16.0;
    const double span_x = std::fmax(box.max_x - box.min_x, 1e-12);
    const double span_y = std::fmax(box.max_y - box.min_y, 1e-12);
    const double scale = (kWidth - 2.0 * kMargin) / span_x;
    const double height = span_y * scale + 2.0 * kMargin;
    auto sx = [&](cd w) { return kMargin + (w.real() - box.min_x) * scale; };
    auto sy = [&](cd w) { return kMargin + (box.max_y - w.imag()) * scale; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(kWidth) +
           "\" height=\"" + fmt2(height) + "\" viewBox=\"0 0 " + fmt2(kWidth) + " " +
           fmt2(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (const auto& line : polylines) {
        out += "<polyline fill=\"none\" stroke=\"#4477aa\" stroke-width=\"0.8\" points=\"";
        for (std::size_t p = 0; p < line.size(); ++p) {
            if (p > 0) out += ' ';
            out += fmt2(sx(line[p])) + "," + fmt2(sy(line[p]));
        }
        out += "\"/>\n";
    }
    out += "<polygon fill=\"none\" stroke=\"#cc3311\" stroke-width=\"2.0\" points=\"";
    for (int k = 0; k < 4; ++k) {
        if (k > 0) out += ' ';
        out += fmt2(sx(corners[k])) + "," + fmt2(sy(corners[k]));
    }
    out += "\"/>\n</svg>\n";
    return out;
}

namespace {

// five-stop linear colormap, dark violet to yellow
const int kStops[5][3] = {
    {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};

void color_of(double t, unsigned char rgb[3]) {
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * 4.0;
    int seg = static_cast<int>(pos);
    if (seg > 3) seg = 3;
    const double frac = pos - seg;
    for (int c = 0; c < 3; ++c) {
        const double v = kStops[seg][c] + frac * (kStops[seg + 1][c] - kStops[seg][c]);
        rgb[c] = static_cast<unsigned char>(std::lround(v));
    }
}

} // namespace

std::string render_heatmap_ppm(const std::vector<double>& values, int nx, int ny,
                               double vmin, double vmax) {
    if (nx < 1 || ny < 1 || values.size() != static_cast<std::size_t>(nx) * ny)
        throw invalid_input("render_heatmap_ppm: value count does not match the grid");
    if (!(vmax >= vmin)) throw invalid_input("render_heatmap_ppm: vmax must be >= vmin");

    char header[64];
    std::snprintf(header, sizeof header, "P6\n%d %d\n255\n", ny, nx);
    std::string out = header;
    out.reserve(out.size() + values.size() * 3);
    const double span = vmax - vmin;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double t = span > 0.0 ? (values[i] - vmin) / span : 0.0;
        unsigned char rgb[3];
        color_of(std::isfinite(t) ? t : 1.0, rgb);
        out += static_cast<char>(rgb[0]);
        out += static_cast<char>(rgb[1]);
        out += static_cast<char>(rgb[2]);
    }
    return out;
}

} // namespace torun
