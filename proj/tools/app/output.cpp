#include "app/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace cascade::app {

namespace {

std::ofstream open(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;
    static constexpr double width = 640.0;
    static constexpr double height = 400.0;
    static constexpr double left = 70.0;
    static constexpr double right = 20.0;
    static constexpr double top = 30.0;
    static constexpr double bottom = 45.0;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const {
        return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom);
    }
};

void axes(std::ofstream& out, const Frame& f, const std::string& title, const std::string& xlabel,
          const std::string& ylabel) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                  "font-family=\"sans-serif\" font-size=\"11\">\n",
                  Frame::width, Frame::height);
    out << buf;
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"18\" font-size=\"13\">%s</text>\n",
                  Frame::left, escape(title).c_str());
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" "
                  "stroke=\"black\"/>\n",
                  Frame::left, Frame::top, Frame::width - Frame::left - Frame::right,
                  Frame::height - Frame::top - Frame::bottom);
    out << buf;
    for (int i = 0; i <= 4; ++i) {
        const double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%s</text>\n", f.px(x),
                      Frame::height - Frame::bottom + 15, fmt(x).c_str());
        out << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%s</text>\n",
                      Frame::left - 4, f.py(y) + 4, fmt(y).c_str());
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n",
                  Frame::width / 2, Frame::height - 8, escape(xlabel).c_str());
    out << buf;
    if (!ylabel.empty()) {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"14\" y=\"%g\" transform=\"rotate(-90 14 %g)\" "
                      "text-anchor=\"middle\">%s</text>\n",
                      Frame::height / 2, Frame::height / 2, escape(ylabel).c_str());
        out << buf;
    }
}

} // namespace

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    if (x == 0.0) return 0.0;
    return std::stod(fmt(x));
}

void write_csv(const std::filesystem::path& path, const Scenario& s,
               const std::vector<Column>& columns) {
    std::ofstream out = open(path);
    out << "# scenario: " << s.name << "\n";
    out << "# config_hash: " << hex(s.hash) << "\n";
    std::size_t rows = 0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << (c ? "," : "") << columns[c].name;
        rows = std::max(rows, columns[c].values.size());
    }
    out << "\n";
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out << ",";
            if (r < columns[c].values.size()) out << fmt(columns[c].values[r]);
        }
        out << "\n";
    }
}

void write_json(const std::filesystem::path& path, const Scenario& s, json body) {
    body["scenario"] = s.name;
    body["config_hash"] = hex(s.hash);
    std::ofstream out = open(path);
    out << body.dump(2) << "\n";
}

void write_line_svg(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::vector<Series>& series) {
    Frame f{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(), 0.0,
            std::numeric_limits<double>::lowest()};
    for (const Series& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            f.x0 = std::min(f.x0, s.x[i]);
            f.x1 = std::max(f.x1, s.x[i]);
            f.y0 = std::min(f.y0, s.y[i]);
            f.y1 = std::max(f.y1, s.y[i]);
        }
    if (!(f.x1 > f.x0)) f = Frame{0.0, 1.0, 0.0, 1.0};
    if (!(f.y1 > f.y0)) f.y1 = f.y0 + 1.0;
    f.y1 += 0.05 * (f.y1 - f.y0);

    std::ofstream out = open(path);
    axes(out, f, title, xlabel, "");
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    char buf[256];
    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        out << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << colours[k % 4]
            << "\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", f.px(s.x[i]), f.py(s.y[i]));
            out << buf;
        }
        out << "\"/>\n";
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%g\" y=\"%g\" fill=\"%s\">%s</text>\n",
                      Frame::width - Frame::right - 150, Frame::top + 15 + 14.0 * k, colours[k % 4],
                      escape(s.label).c_str());
        out << buf;
    }
    out << "</svg>\n";
}

void write_map_svg(const std::filesystem::path& path, const std::string& title,
                   const std::string& xlabel, const std::string& ylabel,
                   const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& value, double floor_decades) {
    if (x.size() < 2 || y.size() < 2 || value.size() != x.size() * y.size())
        throw std::invalid_argument("write_map_svg: grid shape mismatch");
    Frame f{x.front(), x.back(), y.front(), y.back()};
    double vmax = 0.0;
    for (double v : value) vmax = std::max(vmax, v);

    std::ofstream out = open(path);
    axes(out, f, title, xlabel, ylabel);
    char buf[256];
    for (std::size_t j = 0; j + 1 < y.size(); ++j) {
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            const double v = value[j * x.size() + i];
            if (!(v > 0.0) || !(vmax > 0.0)) continue;
            const double d = std::log10(v / vmax);
            if (d < -floor_decades) continue;
            const int shade = static_cast<int>(std::lround(255.0 * (-d / floor_decades)));
            const double x0 = f.px(x[i]);
            const double x1 = f.px(x[i + 1]);
            const double y0 = f.py(y[j + 1]);
            const double y1 = f.py(y[j]);
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                          "fill=\"rgb(%d,%d,255)\"/>\n",
                          x0, y0, std::max(x1 - x0, 0.3), std::max(y1 - y0, 0.3), shade, shade);
            out << buf;
        }
    }
    out << "</svg>\n";
}

} // namespace cascade::app
