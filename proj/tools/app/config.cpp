#include "app/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cascade/errors.hpp"

namespace cascade::app {

namespace pt = boost::property_tree;

namespace {

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    bool has_section(const std::string& s) const { return tree_.get_child_optional(s).has_value(); }

    std::string text(const std::string& key) const {
        auto v = tree_.get_optional<std::string>(key);
        if (!v) throw ConfigError("missing key '" + key + "'");
        return trim(*v);
    }

    std::optional<std::string> text_opt(const std::string& key) const {
        auto v = tree_.get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return trim(*v);
    }

    double number(const std::string& key) const { return parse(key, text(key)); }

    double number(const std::string& key, double fallback) const {
        auto v = text_opt(key);
        return v ? parse(key, *v) : fallback;
    }

    std::optional<double> number_opt(const std::string& key) const {
        auto v = text_opt(key);
        if (!v) return std::nullopt;
        return parse(key, *v);
    }

    double positive(const std::string& key) const { return require_positive(key, number(key)); }

    double positive(const std::string& key, double fallback) const {
        return require_positive(key, number(key, fallback));
    }

    std::size_t count(const std::string& key) const {
        const double v = positive(key);
        if (v != std::floor(v)) throw ConfigError("'" + key + "' must be an integer");
        return static_cast<std::size_t>(v);
    }

    std::size_t count(const std::string& key, std::size_t fallback) const {
        return text_opt(key) ? count(key) : fallback;
    }

    bool flag(const std::string& key, bool fallback) const {
        auto v = text_opt(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "yes" || *v == "1") return true;
        if (*v == "false" || *v == "no" || *v == "0") return false;
        throw ConfigError("'" + key + "' must be true or false, got '" + *v + "'");
    }

    std::vector<double> list(const std::string& key) const {
        std::string s = text(key);
        for (char& c : s)
            if (c == ',') c = ' ';
        std::istringstream in(s);
        std::vector<double> out;
        std::string tok;
        while (in >> tok) out.push_back(parse(key, tok));
        if (out.empty()) throw ConfigError("'" + key + "' is an empty list");
        return out;
    }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return {};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    static double parse(const std::string& key, const std::string& v) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(v, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != v.size() || !std::isfinite(x))
            throw ConfigError("'" + key + "' is not a finite number: '" + v + "'");
        return x;
    }

    static double require_positive(const std::string& key, double v) {
        if (!(v > 0.0)) throw ConfigError("'" + key + "' must be positive");
        return v;
    }

    const pt::ptree& tree_;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Table files feed the provenance hash along with the config text.
SpectralDensity read_density(const Reader& r, const std::string& section,
                             const std::filesystem::path& base, std::string& provenance) {
    const std::string family = r.text(section + ".family");
    try {
        if (family == "flat")
            return SpectralDensity(FlatWindow{r.number(section + ".v0"), r.number(section + ".lo"),
                                              r.number(section + ".hi")});
        if (family == "ohmic")
            return SpectralDensity(
                OhmicExp{r.number(section + ".g2"), r.number(section + ".cutoff")});
        if (family == "lorentzian")
            return SpectralDensity(ShiftedLorentzian{r.number(section + ".amplitude"),
                                                     r.number(section + ".center"),
                                                     r.number(section + ".width")});
        if (family == "tabulated") {
            if (auto file = r.text_opt(section + ".file")) {
                std::filesystem::path p(*file);
                if (p.is_relative()) p = base / p;
                if (!std::filesystem::exists(p))
                    throw ConfigError("'" + section + ".file' not found: " + p.string());
                provenance += slurp(p);
                return SpectralDensity::from_csv(p.string());
            }
            return SpectralDensity(
                Tabulated{r.list(section + ".omega"), r.list(section + ".value")});
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("[" + section + "] " + e.what());
    }
    throw ConfigError("'" + section + ".family' must be flat, ohmic, lorentzian or tabulated, got '" +
                      family + "'");
}

void check_name(const std::string& name) {
    if (name.empty() || name == "." || name == "..")
        throw ConfigError("'scenario.name' must be a non-empty path component");
    for (char c : name) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                        c == '.';
        if (!ok) throw ConfigError("'scenario.name' may only hold letters, digits, '_', '-', '.'");
    }
}

} // namespace

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex(std::uint64_t h) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    const Reader r(tree);

    Scenario s;
    s.text = text;
    std::string provenance = text;
    s.name = r.text("scenario.name");
    check_name(s.name);

    s.system.omega01 = r.number("system.omega01");
    s.system.omega12 = r.number("system.omega12");
    s.system.density_y = read_density(r, "density_y", base, provenance);
    s.system.density_z = read_density(r, "density_z", base, provenance);
    s.hash = fnv1a(provenance);
    try {
        s.system.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[system] ") + e.what());
    }

    s.quadrature.rtol = r.positive("quadrature.rtol", s.quadrature.rtol);
    s.quadrature.atol = r.positive("quadrature.atol", s.quadrature.atol);
    s.quadrature.max_subdivisions =
        r.count("quadrature.max_subdivisions", s.quadrature.max_subdivisions);

    s.grid.fine_fraction = r.positive("spectra.fine_fraction", s.grid.fine_fraction);
    s.grid.fine_halfwidths = r.positive("spectra.fine_halfwidths", s.grid.fine_halfwidths);
    s.grid.growth = r.positive("spectra.growth", s.grid.growth);
    if (s.grid.growth < 1.0) throw ConfigError("'spectra.growth' must be >= 1");
    s.grid.max_step = r.number("spectra.max_step", 0.0);
    s.grid.omega_max = r.number("spectra.omega_max", 0.0);
    const std::string joint = r.text_opt("output.joint").value_or("none");
    if (joint == "none") s.joint = JointOutput::none;
    else if (joint == "triples") s.joint = JointOutput::triples;
    else if (joint == "matrix") s.joint = JointOutput::matrix;
    else throw ConfigError("'output.joint' must be none, triples or matrix");

    if (r.has_section("evolve")) {
        EvolveSettings e;
        e.h = r.positive("evolve.h");
        e.t_final = r.number_opt("evolve.t_final");
        if (e.t_final && !(*e.t_final > 0.0)) throw ConfigError("'evolve.t_final' must be positive");
        e.lifetimes = r.positive("evolve.lifetimes", e.lifetimes);
        e.t_min = r.number("evolve.t_min", 0.0);
        e.check_step = r.flag("evolve.check_step", false);
        s.evolve = e;
    }

    if (r.has_section("sweep")) {
        SweepSettings w;
        if (r.text_opt("sweep.lambda1")) {
            w.lambda1 = r.list("sweep.lambda1");
        } else {
            const double lo = r.positive("sweep.lambda1_min");
            const double hi = r.positive("sweep.lambda1_max");
            const std::size_t n = r.count("sweep.count");
            if (!(hi > lo)) throw ConfigError("'sweep.lambda1_max' must exceed 'sweep.lambda1_min'");
            for (std::size_t i = 0; i < n; ++i) {
                const double f = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
                w.lambda1.push_back(lo * std::pow(hi / lo, f));
            }
        }
        for (double v : w.lambda1)
            if (!(v > 0.0)) throw ConfigError("'sweep.lambda1' values must be positive");
        s.sweep = w;
    }

    if (r.has_section("oracle")) {
        OracleSettings o;
        o.ny = r.count("oracle.ny");
        o.nz = r.count("oracle.nz");
        o.y_lo = r.number("oracle.y_lo");
        o.y_hi = r.number("oracle.y_hi");
        o.z_lo = r.number("oracle.z_lo");
        o.z_hi = r.number("oracle.z_hi");
        o.t_fraction = r.positive("oracle.t_fraction", o.t_fraction);
        o.t_final = r.number_opt("oracle.t_final");
        if (o.t_final && !(*o.t_final > 0.0)) throw ConfigError("'oracle.t_final' must be positive");
        o.dt_fraction = r.positive("oracle.dt_fraction", o.dt_fraction);
        o.sample_every = r.count("oracle.sample_every", o.sample_every);
        o.joint_csv = r.flag("oracle.joint_csv", false);
        s.oracle = o;
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path))
        throw ConfigError("cannot read config " + path.string());
    return parse_scenario(slurp(path), path.parent_path());
}

} // namespace cascade::app
