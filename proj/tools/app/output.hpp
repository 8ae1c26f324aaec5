// output.hpp: CSV, JSON and SVG artifacts with provenance headers.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "app/config.hpp"

namespace cascade::app {

using json = nlohmann::json;

// "%.12g"; non-finite values print as nan / inf.
std::string fmt(double x);

struct Column {
    std::string name;
    std::vector<double> values;
};

// Comma-separated, '#' provenance lines first, then the header row.
void write_csv(const std::filesystem::path& path, const Scenario& s,
               const std::vector<Column>& columns);

// Keys sorted; numbers go through fmt() so reruns are byte-identical.
void write_json(const std::filesystem::path& path, const Scenario& s, json body);

// Rounds a double to 12 significant digits for JSON.
json number(double x);

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

void write_line_svg(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::vector<Series>& series);

// Shaded cells of log10(value / max) over a rectangular grid; cells below
// floor_decades are left blank.
void write_map_svg(const std::filesystem::path& path, const std::string& title,
                   const std::string& xlabel, const std::string& ylabel,
                   const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& value, double floor_decades = 4.0);

} // namespace cascade::app
