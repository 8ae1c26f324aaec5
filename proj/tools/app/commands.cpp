#include "app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cascade/errors.hpp"
#include "cascade/kernels.hpp"
#include "cascade/lorentzian_fit.hpp"
#include "cascade/oracle.hpp"
#include "cascade/rates.hpp"
#include "cascade/spectra.hpp"
#include "presets.hpp"

namespace cascade::app {

namespace {

json constant_json(const ComplexDecayConstant& g) {
    return {{"lambda", number(g.lambda)}, {"mu", number(g.mu)}, {"rate", number(g.rate())}};
}

json fit_json(const SpectrumGrid1D& s) {
    try {
        const LorentzianFit f = fit_lorentzian(s);
        return {{"center", number(f.center)},
                {"half_width", number(f.half_width)},
                {"amplitude", number(f.amplitude)},
                {"residual", number(f.residual)},
                {"iterations", f.iterations}};
    } catch (const NumericalError& e) {
        if (e.kind() != ErrorKind::NoPeak) throw;
        return {{"error", std::string(e.name())}, {"message", e.what()}};
    }
}

json fwhm_json(const SpectrumGrid1D& s) {
    try {
        return number(fwhm(s));
    } catch (const NumericalError& e) {
        if (e.kind() != ErrorKind::NoPeak) throw;
        return std::string(e.name());
    }
}

PerturbedConstants constants(const Scenario& s) {
    return perturbed_constant(s.system, s.quadrature);
}

// Start of the comparison window for amplitude traces.
double window_start(const Scenario& s, double configured) {
    if (configured > 0.0) return configured;
    return 10.0 / std::max(std::abs(s.system.omega01), 1e-300);
}

} // namespace

json run_rates(const Scenario& s, const path& dir) {
    const QuadratureOptions& q = s.quadrature;
    const PerturbedConstants k = constants(s);
    const ComplexDecayConstant g0 = bare_constant(s.system.density_y, s.system.omega01, q);
    const QuadratureResult direct =
        perturbed_rate_direct(s.system.density_y, s.system.omega01, k.gamma1, q);
    const CorrectedEnergies bar = corrected_energies(s.system, k);
    const double rate = k.gamma_tilde0.rate();

    json body;
    body["gamma0"] = constant_json(g0);
    body["gamma1"] = constant_json(k.gamma1);
    body["gamma_tilde0"] = constant_json(k.gamma_tilde0);
    body["golden_rule_rate"] = number(golden_rule(s.system, k.gamma1));
    body["rate_tilde_direct"] = number(direct.value);
    body["rate_tilde_direct_error"] = number(direct.error_estimate);
    body["direct_vs_convolution_rel"] =
        number(rate != 0.0 ? std::abs(direct.value - rate) / std::abs(rate) : 0.0);
    body["corrected_energies"] = {
        {"bar01", number(bar.bar01)}, {"bar12", number(bar.bar12)}, {"bar02", number(bar.bar02)}};
    body["regime"] = to_string(classify_regime(k.gamma1.lambda, bar.bar01));
    write_json(dir / "rates.json", s, body);
    return body;
}

json run_evolve(const Scenario& s, const path& dir, Execution exec) {
    if (!s.evolve) throw ConfigError("missing section [evolve]");
    const EvolveSettings& e = *s.evolve;
    const PerturbedConstants k = constants(s);
    const double lt0 = k.gamma_tilde0.lambda;
    if (!e.t_final && !(lt0 > 0.0))
        throw ConfigError("'evolve.t_final' is required when lambda~0 = 0");
    const double T = e.t_final ? *e.t_final : e.lifetimes / lt0;

    VolterraOptions vo;
    vo.check_step = e.check_step;
    vo.exec = exec;
    const AmplitudeTrace vol =
        solve_volterra(s.system.density_y, s.system.omega01, k.gamma1.value(), T, e.h, vo);
    const AmplitudeTrace mk = markov_trace(k.gamma_tilde0, T, e.h);

    const double t0 = window_start(s, e.t_min);
    const double t1 = lt0 > 0.0 ? std::min(3.0 / lt0, T) : T;
    json dev_json = nullptr;
    if (t1 > t0) {
        const TraceDeviation d = compare_traces(vol, mk, t0, t1);
        dev_json = {{"sup_relative", number(d.sup_relative)},
                    {"l2_relative", number(d.l2_relative)},
                    {"sup_complex", number(d.sup_complex)},
                    {"samples", d.samples},
                    {"t_min", number(t0)},
                    {"t_max", number(t1)}};
    }

    const std::size_t n = std::min(vol.size(), mk.size());
    const std::size_t stride = std::max<std::size_t>(1, (n + 3999) / 4000);
    std::vector<double> t, av, rv, iv, am, rm, im;
    for (std::size_t i = 0; i < n; i += stride) {
        t.push_back(vol.time(i));
        av.push_back(std::abs(vol.a0[i]));
        rv.push_back(vol.a0[i].real());
        iv.push_back(vol.a0[i].imag());
        am.push_back(std::abs(mk.a0[i]));
        rm.push_back(mk.a0[i].real());
        im.push_back(mk.a0[i].imag());
    }
    write_csv(dir / "evolve.csv", s,
              {{"t", t},
               {"abs_a0_volterra", av},
               {"re_a0_volterra", rv},
               {"im_a0_volterra", iv},
               {"abs_a0_markov", am},
               {"re_a0_markov", rm},
               {"im_a0_markov", im}});
    write_line_svg(dir / "evolve.svg", s.name + ": |a0(t)|", "t",
                   {{"volterra", t, av}, {"markov", t, am}});

    json body;
    body["lambda_tilde0"] = number(lt0);
    body["T"] = number(T);
    body["h"] = number(e.h);
    body["steps"] = vol.size() - 1;
    body["csv_stride"] = stride;
    body["deviation"] = dev_json;
    write_json(dir / "evolve.json", s, body);
    return body;
}

json run_spectra(const Scenario& s, const path& dir, Execution exec) {
    const PerturbedConstants k = constants(s);
    const SpectralConstants c = spectral_constants(s.system, k);
    const SpectrumGrid2D joint = joint_spectrum(s.system, c, s.grid, exec);
    const Axis ya = y_axis(s.system, c, s.grid);

    const SpectrumGrid1D py = marginal_y(joint, ya);
    const SpectrumGrid1D pz = marginal_z(joint);
    const SpectrumGrid1D ps = sum_energy(joint);
    const SpectrumGrid1D pyc = marginal_y_closed(s.system, c, ya);
    const SpectrumGrid1D pzc = marginal_z_closed(s.system, c, joint.omega_z);
    const SpectrumGrid1D psc = sum_energy_closed(s.system, c, joint.omega_sum, s.quadrature, exec);

    write_csv(dir / "p_y.csv", s, {{"omega_y", ya.nodes}, {"numeric", py.value}, {"closed", pyc.value}});
    write_csv(dir / "p_z.csv", s,
              {{"omega_z", joint.omega_z.nodes}, {"numeric", pz.value}, {"closed", pzc.value}});
    write_csv(dir / "p_sum.csv", s,
              {{"omega_sum", joint.omega_sum.nodes}, {"numeric", ps.value}, {"closed", psc.value}});
    write_line_svg(dir / "p_y.svg", s.name + ": p_y", "omega_y",
                   {{"numeric", ya.nodes, py.value}, {"closed", ya.nodes, pyc.value}});
    write_line_svg(dir / "p_z.svg", s.name + ": p_z", "omega_z",
                   {{"numeric", joint.omega_z.nodes, pz.value},
                    {"closed", joint.omega_z.nodes, pzc.value}});
    write_line_svg(dir / "p_sum.svg", s.name + ": p_y+z", "Omega",
                   {{"numeric", joint.omega_sum.nodes, ps.value},
                    {"closed", joint.omega_sum.nodes, psc.value}});

    // Ridge map in (Omega, wz), where both line factors are axis aligned.
    {
        const std::size_t m = 121;
        const double so = 10.0 * c.lambda_tilde0;
        const double sz = 10.0 * c.lambda1;
        std::vector<double> xo(m), xz(m), v(m * m);
        for (std::size_t i = 0; i < m; ++i) {
            const double f = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(m - 1);
            xo[i] = c.bar.bar02 + so * f;
            xz[i] = c.bar.bar12 + sz * f;
        }
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < m; ++i)
                v[j * m + i] = joint_density(s.system, c, xo[i] - xz[j], xz[j]);
        write_map_svg(dir / "joint.svg", s.name + ": p(wy, wz) near the ridge", "Omega = wy + wz",
                      "wz", xo, xz, v);
    }

    if (s.joint != JointOutput::none) {
        const Axis& so = joint.omega_sum;
        const Axis& sz = joint.omega_z;
        if (s.joint == JointOutput::triples) {
            std::vector<double> wy, wz, val;
            for (std::size_t j = 0; j < sz.size(); ++j)
                for (std::size_t i = 0; i < so.size(); ++i) {
                    wy.push_back(so.nodes[i] - sz.nodes[j]);
                    wz.push_back(sz.nodes[j]);
                    val.push_back(joint.at(i, j));
                }
            write_csv(dir / "joint.csv", s, {{"omega_y", wy}, {"omega_z", wz}, {"value", val}});
        } else {
            // Row j: wz_j, then values along Omega; first row lists the Omega nodes.
            std::vector<Column> cols;
            std::vector<double> first{std::nan("")};
            for (std::size_t j = 0; j < sz.size(); ++j) first.push_back(sz.nodes[j]);
            cols.push_back({"omega_z\\Omega", first});
            for (std::size_t i = 0; i < so.size(); ++i) {
                std::vector<double> col{so.nodes[i]};
                for (std::size_t j = 0; j < sz.size(); ++j) col.push_back(joint.at(i, j));
                cols.push_back({"c" + std::to_string(i), col});
            }
            write_csv(dir / "joint_matrix.csv", s, cols);
        }
    }

    json body;
    body["constants"] = {{"lambda_tilde0", number(c.lambda_tilde0)},
                         {"lambda1", number(c.lambda1)},
                         {"bar01", number(c.bar.bar01)},
                         {"bar12", number(c.bar.bar12)},
                         {"bar02", number(c.bar.bar02)}};
    body["regime"] = to_string(classify_regime(c.lambda1, c.bar.bar01));
    body["grid"] = {{"omega_sum_nodes", joint.omega_sum.size()},
                    {"omega_z_nodes", joint.omega_z.size()},
                    {"omega_y_nodes", ya.size()}};
    body["mass"] = {{"joint", number(joint.mass)},
                    {"p_y_numeric", number(py.mass)},
                    {"p_z_numeric", number(pz.mass)},
                    {"p_sum_numeric", number(ps.mass)},
                    {"p_y_closed", number(pyc.mass)},
                    {"p_z_closed", number(pzc.mass)},
                    {"p_sum_closed", number(psc.mass)}};
    body["l1_numeric_vs_closed"] = {{"p_y", number(relative_l1(py, pyc))},
                                    {"p_z", number(relative_l1(pz, pzc))},
                                    {"p_sum", number(relative_l1(ps, psc))}};
    body["fit"] = {{"p_y_closed", fit_json(pyc)},
                   {"p_y_numeric", fit_json(py)},
                   {"p_z_closed", fit_json(pzc)},
                   {"p_z_numeric", fit_json(pz)}};
    body["fwhm"] = {{"p_sum_numeric", fwhm_json(ps)}, {"p_sum_closed", fwhm_json(psc)}};
    body["tags"] = {to_string(joint.tag), to_string(py.tag),  to_string(pyc.tag),
                    to_string(pz.tag),    to_string(pzc.tag), to_string(ps.tag),
                    to_string(psc.tag)};
    write_json(dir / "spectra.json", s, body);
    return body;
}

json run_oracle(const Scenario& s, const path& dir, Execution exec) {
    if (!s.oracle) throw ConfigError("missing section [oracle]");
    const OracleSettings& o = *s.oracle;
    const DiscreteModel m =
        discretize(s.system, o.ny, o.nz, {o.y_lo, o.y_hi}, {o.z_lo, o.z_hi}, s.quadrature);
    const PerturbedConstants k = constants(s);
    const SpectralConstants c = spectral_constants(s.system, k);
    const double lt0 = c.lambda_tilde0;

    const double T = o.t_final ? *o.t_final : o.t_fraction * m.recurrence_time();
    const double wmax = m.max_detuning();
    const double dt = wmax > 0.0 ? o.dt_fraction / wmax : T / 1000.0;
    EvolveOptions eo;
    eo.sample_every = o.sample_every;
    eo.exec = exec;
    const OracleRun run = evolve(m, T, dt, eo);
    const DiscreteSpectrum sp = extract_spectra(run, m);

    const std::vector<double> an = analytic_joint_on_modes(s.system, c, m);
    std::vector<double> ay(m.ny(), 0.0), az(m.nz(), 0.0);
    for (std::size_t a = 0; a < m.ny(); ++a)
        for (std::size_t b = 0; b < m.nz(); ++b) {
            ay[a] += an[a * m.nz() + b] * m.dz;
            az[b] += an[a * m.nz() + b] * m.dy;
        }

    // |a0|^2 against exp(-2 lambda~0 t) on the validity window.
    const double t0 = window_start(s, 0.0);
    const double t1 = lt0 > 0.0 ? std::min(3.0 / lt0, T) : T;
    double rel = 0.0;
    double abs_dev = 0.0;
    std::size_t used = 0;
    for (const OracleSample& x : run.history) {
        if (x.t < t0 || x.t > t1) continue;
        const double e = std::exp(-2.0 * lt0 * x.t);
        rel = std::max(rel, std::abs(x.p0 / e - 1.0));
        abs_dev = std::max(abs_dev, std::abs(x.p0 - e));
        ++used;
    }

    // Every mode that received probability carries a positive energy.
    double min_energy = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < m.ny(); ++a)
        if (sp.marginal_y[a] > 0.0) min_energy = std::min(min_energy, m.y_modes[a].omega);
    for (std::size_t b = 0; b < m.nz(); ++b)
        if (sp.marginal_z[b] > 0.0) min_energy = std::min(min_energy, m.z_modes[b].omega);

    const std::size_t stride = std::max<std::size_t>(1, (run.history.size() + 399) / 400);
    std::vector<double> ht, h0, h1, h2, hn;
    for (std::size_t i = 0; i < run.history.size(); i += stride) {
        const OracleSample& x = run.history[i];
        ht.push_back(x.t);
        h0.push_back(x.p0);
        h1.push_back(x.p1);
        h2.push_back(x.p2);
        hn.push_back(x.norm - 1.0);
    }
    write_csv(dir / "oracle_history.csv", s,
              {{"t", ht}, {"p0", h0}, {"p1", h1}, {"p2", h2}, {"norm_minus_1", hn}});
    std::vector<double> yw, zw;
    for (const Mode& y : m.y_modes) yw.push_back(y.omega);
    for (const Mode& z : m.z_modes) zw.push_back(z.omega);
    write_csv(dir / "oracle_p_y.csv", s, {{"omega_y", yw}, {"oracle", sp.marginal_y}, {"analytic", ay}});
    write_csv(dir / "oracle_p_z.csv", s, {{"omega_z", zw}, {"oracle", sp.marginal_z}, {"analytic", az}});
    if (o.joint_csv) {
        std::vector<double> wy, wz, po, pa;
        for (std::size_t a = 0; a < m.ny(); ++a)
            for (std::size_t b = 0; b < m.nz(); ++b) {
                wy.push_back(yw[a]);
                wz.push_back(zw[b]);
                po.push_back(sp.joint[a * m.nz() + b]);
                pa.push_back(an[a * m.nz() + b]);
            }
        write_csv(dir / "oracle_joint.csv", s,
                  {{"omega_y", wy}, {"omega_z", wz}, {"oracle", po}, {"analytic", pa}});
    }
    write_line_svg(dir / "oracle_p_y.svg", s.name + ": oracle p_y", "omega_y",
                   {{"oracle", yw, sp.marginal_y}, {"analytic", yw, ay}});

    json body;
    body["model"] = {{"ny", m.ny()},
                     {"nz", m.nz()},
                     {"dy", number(m.dy)},
                     {"dz", number(m.dz)},
                     {"dimension", m.dimension()},
                     {"recurrence_time_y", number(m.recurrence_time_y())},
                     {"recurrence_time_z", number(m.recurrence_time_z())}};
    body["T"] = number(T);
    body["dt"] = number(dt);
    body["lambda_tilde0"] = number(lt0);
    body["lambda1"] = number(c.lambda1);
    body["max_norm_error"] = number(run.max_norm_error);
    body["final"] = {{"p0", number(sp.p0)}, {"p1", number(sp.p1)}, {"emitted", number(sp.emitted)}};
    body["l1_vs_analytic"] = {{"joint", number(relative_l1(sp.joint, an))},
                              {"p_y", number(relative_l1(sp.marginal_y, ay))},
                              {"p_z", number(relative_l1(sp.marginal_z, az))}};
    body["a0_vs_exponential"] = {{"t_min", number(t0)},
                                 {"t_max", number(t1)},
                                 {"samples", used},
                                 {"sup_relative", number(rel)},
                                 {"sup_absolute", number(abs_dev)}};
    body["min_emitted_energy"] = number(min_energy);
    write_json(dir / "oracle.json", s, body);
    return body;
}

json run_sweep(const Scenario& s, const path& dir, Execution exec) {
    if (!s.sweep) throw ConfigError("missing section [sweep]");
    const std::vector<ZenoPoint> pts = zeno_curve(s.system, s.sweep->lambda1, s.quadrature, exec);
    std::vector<double> l1, rt, mt, rg, lg, prod;
    const double weight = s.system.density_y.total_weight(s.quadrature).value;
    for (const ZenoPoint& p : pts) {
        l1.push_back(p.lambda1);
        rt.push_back(p.rate_tilde);
        mt.push_back(p.mu_tilde);
        rg.push_back(p.rate_golden);
        lg.push_back(std::log10(p.lambda1));
        prod.push_back(0.5 * p.rate_tilde * p.lambda1);
    }
    write_csv(dir / "sweep.csv", s,
              {{"lambda1", l1},
               {"rate_tilde", rt},
               {"mu_tilde", mt},
               {"rate_golden", rg},
               {"lambda_tilde0_times_lambda1", prod}});
    write_line_svg(dir / "sweep.svg", s.name + ": rate vs log10 lambda1", "log10 lambda1",
                   {{"rate_tilde", lg, rt}, {"rate_golden", lg, rg}});
    json body;
    body["points"] = pts.size();
    body["total_weight_y"] = number(weight);
    write_json(dir / "sweep.json", s, body);
    return body;
}

json run_all(const Scenario& s, const path& dir, Execution exec) {
    json body;
    body["rates"] = run_rates(s, dir);
    if (s.evolve) body["evolve"] = run_evolve(s, dir, exec);
    body["spectra"] = run_spectra(s, dir, exec);
    if (s.oracle) body["oracle"] = run_oracle(s, dir, exec);
    if (s.sweep) body["sweep"] = run_sweep(s, dir, exec);
    return body;
}

const std::vector<Preset>& regime_presets() {
    static const std::vector<Preset> presets = {
        {"regime1", presets::regime1},
        {"regime2", presets::regime2},
        {"regime3", presets::regime3},
    };
    return presets;
}

json run_regimes(const path& out, Execution exec) {
    json summary;
    Scenario index;
    index.name = "regimes";
    for (const Preset& p : regime_presets()) {
        const Scenario s = parse_scenario(p.text);
        index.text += p.text;
        const path dir = out / s.name;
        try {
            const json r = run_all(s, dir, exec);
            json e;
            e["regime"] = r["spectra"]["regime"];
            e["fit_p_y_closed"] = r["spectra"]["fit"]["p_y_closed"];
            e["fit_p_z_closed"] = r["spectra"]["fit"]["p_z_closed"];
            e["golden_rule_rate"] = r["rates"]["golden_rule_rate"];
            e["rate_tilde"] = r["rates"]["gamma_tilde0"]["rate"];
            summary[s.name] = e;
        } catch (const NumericalError& e) {
            write_error(dir, s, std::string(e.name()), e.what());
            throw;
        }
    }
    index.hash = fnv1a(index.text);
    write_json(out / "regimes.json", index, summary);
    return summary;
}

void write_error(const path& dir, const Scenario& s, const std::string& kind,
                 const std::string& message) {
    write_json(dir / "error.json", s, {{"error", kind}, {"message", message}});
}

} // namespace cascade::app
