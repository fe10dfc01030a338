#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>

#include <omp.h>

#include "CLI11.hpp"

#include "gapguide/cli.hpp"
#include "gapguide/io.hpp"
#include "gapguide/pipeline.hpp"

namespace gapguide::cli {

using nlohmann::json;
using io::num;

namespace {

json provenance(const std::string& module, const RunConfig& cfg, double h) {
    return {{"module", module}, {"config_hash", cfg.hash}, {"seed", cfg.seed}, {"grid_h", h}};
}

std::vector<std::string> prov_cols() { return {"module", "config_hash", "seed", "grid_h"}; }

std::vector<std::string> prov_vals(const std::string& module, const RunConfig& cfg, double h) {
    return {module, cfg.hash, std::to_string(cfg.seed), num(h)};
}

std::vector<std::string> with_prov(std::vector<std::string> cols) {
    for (auto& c : prov_cols()) cols.push_back(c);
    return cols;
}

std::vector<std::string> row(std::vector<std::string> vals, const std::string& module, const RunConfig& cfg, double h) {
    for (auto& v : prov_vals(module, cfg, h)) vals.push_back(v);
    return vals;
}

const json& block_or_empty(const RunConfig& cfg, const std::string& name) {
    static const json empty = json::object();
    return cfg.has(name) ? cfg.block(name) : empty;
}

InteriorOptions interior_options(const json& b, std::uint64_t seed) {
    InteriorOptions o;
    o.count = cfg::positive_int(b, "count", 12);
    o.block = cfg::positive_int(b, "block", 4);
    o.tol = cfg::positive(b, "tol", 1e-10);
    o.max_depth = cfg::positive_int(b, "max_depth", 10);
    o.seed = seed;
    const std::string m = cfg::get<std::string>(b, "method", "shift-invert");
    if (m == "folded")
        o.method = InteriorOptions::Method::Folded;
    else if (m != "shift-invert")
        throw ConfigError("method must be 'shift-invert' or 'folded'");
    return o;
}

SupercellSpec supercell(const json& b) {
    SupercellSpec sc;
    sc.resolution = cfg::positive(b, "resolution", 32.0);
    sc.axial_periods = cfg::positive_int(b, "axial_periods", 1);
    sc.transverse_periods = cfg::positive_int(b, "transverse_periods", 16);
    const std::string t = cfg::get<std::string>(b, "transverse", "periodic");
    if (t == "wall")
        sc.transverse = Transverse::Wall;
    else if (t == "periodic")
        sc.transverse = Transverse::Periodic;
    else
        throw ConfigError("transverse must be 'periodic' or 'wall'");
    return sc;
}

std::vector<int> int_list(const json& b, const std::string& key, std::vector<int> fallback) {
    const auto v = cfg::number_list(b, key, {});
    if (v.empty()) return fallback;
    std::vector<int> out;
    for (double x : v) {
        if (x < 1 || x != std::floor(x)) throw ConfigError("'" + key + "' must hold positive integers");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

// Bulk bands on the configured path: "full" (irreducible path) or "normal"
// (k along x₂ only, k₁ = 0; the propagation gap of a layered stack).
BulkGaps configured_bulk_gaps(const RunConfig& cfg, const json& b, const MediumSpec& m, double fallback_resolution) {
    const double res = cfg::positive(b, "resolution", fallback_resolution);
    const int per_segment = cfg::positive_int(b, "per_segment", 8);
    const int bands = cfg::positive_int(b, "bands", 6);
    const double min_width = cfg::get<double>(b, "min_width", 0.0);
    const std::string path = cfg::get<std::string>(b, "path", "full");
    if (path == "full") return bulk_gaps(m, res, per_segment, bands, min_width, interior_options(b, cfg.seed));
    if (path != "normal") throw ConfigError("bands path must be 'full' or 'normal'");
    std::vector<Vec3> ks;
    for (int i = 0; i <= per_segment; ++i) ks.push_back({0.0, std::numbers::pi / m.period[1] * i / per_segment, 0.0});
    BulkGaps out;
    out.bands = band_structure(build_unit_cell(m, res), ks, bands, interior_options(b, cfg.seed));
    out.gaps = find_gaps(out.bands, min_width);
    return out;
}

// Gap from the block or, failing that, from the bulk band structure.
GapInterval resolve_gap(const RunConfig& cfg, const json& b, const MediumSpec& m) {
    if (auto g = cfg::gap(b)) return *g;
    const BulkGaps bg = configured_bulk_gaps(cfg, block_or_empty(cfg, "bands"), m, cfg::positive(b, "resolution", 32.0));
    const int index = cfg::get<int>(b, "gap_index", 0);
    if (index < 0 || index >= static_cast<int>(bg.gaps.gaps.size()))
        throw ConfigError("the bulk medium has no gap with index " + std::to_string(index));
    return bg.gaps.gaps[static_cast<std::size_t>(index)];
}

double resolve_nu(const json& b, const CrossSection& cs) {
    if (b.contains("nu") && !b.at("nu").is_null()) return cfg::positive(b, "nu");
    return cross_section_nu(cs, cfg::positive_int(b, "nu_cells", 64)).value;
}

std::vector<double> k1_list(const json& b, double period) {
    const auto v = cfg::number_list(b, "k1", {});
    if (!v.empty()) return v;
    return uniform_k1(period, cfg::positive_int(b, "k1_samples", 8));
}

struct DefectRun {
    SampledEpsilon eps;
    GapInterval gap;
    double delta = 0.0;
    double nu = 0.0;
    DefectSpectrum spectrum;
    std::vector<double> mu;
    std::vector<double> k1;
    SupercellSpec sc;
    InteriorOptions opt;
};

DefectRun defect_run(const RunConfig& cfg, const json& b, const MediumSpec& m) {
    if (!m.defect) throw ConfigError("medium has no defect strip");
    DefectRun r;
    r.sc = supercell(b);
    r.gap = resolve_gap(cfg, b, m);
    r.nu = resolve_nu(b, m.defect->cross_section);
    const double l = m.defect->l, e = m.defect->eps_inside;
    r.delta = b.contains("delta") && !b.at("delta").is_null() ? cfg::positive(b, "delta")
                                                             : cfg::positive(b, "delta_factor", 1.5) * r.nu / (l * l * e);
    r.eps = build_supercell(m, r.sc);
    r.k1 = k1_list(b, r.eps.grid.extent(0));
    r.mu = uniform_mu(r.gap, cfg::positive_int(b, "mu_points", 9));
    r.opt = interior_options(b, cfg.seed);
    r.spectrum = defect_spectrum(r.eps, r.gap, r.k1, r.delta, r.mu, r.sc.transverse, r.opt);
    return r;
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"nu", "check", "residual", "bands", "defect", "decay", "sweep", "report"};
    return c;
}

std::string usage() {
    std::string s = "usage: gapguide <command> --config <path> [--out <dir>] [--seed <int>] [--threads <int>]\ncommands:";
    for (const auto& c : commands()) s += " " + c;
    return s + "\n";
}

std::string check_line(bool satisfied, double margin) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "condition %s, margin %.3f", satisfied ? "satisfied" : "not satisfied", margin);
    return buf;
}

json run_nu(const RunConfig& cfg) {
    const json& b = block_or_empty(cfg, "nu");
    const CrossSection cs = cfg.cross_section();
    const std::string op = cfg::get<std::string>(b, "operator", cs.dim() == 1 ? "scalar" : "vector");
    if (op != "scalar" && op != "vector") throw ConfigError("operator must be 'scalar' or 'vector'");
    const std::vector<int> cells = int_list(b, "cells", {64, 128, 256});
    const double tol = cfg::positive(b, "tol", 1e-12);

    io::CsvTable grids(with_prov({"cells", "h", "value", "unknowns", "iterations", "residual", "quotient"}));
    std::vector<std::pair<double, double>> seq;
    std::optional<NuSolution> finest;
    json out;
    for (int c : cells) {
        const double h = cs.diameter() / c;
        NuEstimate e;
        if (op == "vector") {
            NuOptions no;
            no.tol = tol;
            NuSolution s = solve_nu_vector_full(cs, h, no);
            e = s.estimate;
            out["euler_lagrange_spread"] = s.euler_lagrange_spread;
            if (!finest || h < finest->estimate.grid_h) finest = std::move(s);
        } else {
            e = solve_nu_scalar(cs, h, tol);
        }
        seq.emplace_back(h, e.value);
        grids.add(row({std::to_string(c), num(h), num(e.value), std::to_string(e.unknowns), std::to_string(e.iterations),
                       num(e.residual), num(e.achieved_quotient)},
                      "xsection", cfg, h));
    }
    const double hmin = seq.empty() ? 0.0 : std::min_element(seq.begin(), seq.end())->first;
    out["provenance"] = provenance("xsection", cfg, hmin);
    out["cross_section"] = cs.to_json();
    out["operator"] = op;
    out["grids"] = json::array();
    for (auto [h, v] : seq) out["grids"].push_back({{"h", h}, {"value", v}});
    if (seq.size() >= 3) {
        const NuEstimate ex = refine_extrapolate(seq);
        out["value"] = ex.value;
        out["extrapolated"] = ex.extrapolated;
        out["order"] = ex.order;
        if (!ex.warning.empty()) out["warning"] = ex.warning;
    } else {
        out["value"] = seq.back().second;
        out["extrapolated"] = false;
    }
    grids.write(cfg.out_dir / "nu_grids.csv");

    const auto rhos = cfg::number_list(b, "rho", {});
    if (!rhos.empty()) {
        if (!finest) throw ConfigError("test fields need the vector operator");
        io::CsvTable tf(with_prov({"rho", "quotient", "nu", "ratio", "max_divergence", "support_margin"}));
        out["test_fields"] = json::array();
        for (double rho : rhos) {
            const TestField t = make_test_field(*finest, cs, rho);
            const double nu = out["value"].get<double>();
            tf.add(row({num(rho), num(t.quotient), num(nu), num(t.quotient / nu), num(t.max_divergence), num(t.support_margin)},
                       "xsection", cfg, t.h));
            out["test_fields"].push_back({{"rho", rho}, {"quotient", t.quotient}, {"max_divergence", t.max_divergence}});
        }
        tf.write(cfg.out_dir / "test_fields.csv");
    }
    io::write_json(cfg.out_dir / "nu.json", out);
    return out;
}

json run_check(const RunConfig& cfg) {
    const json& b = cfg.block("check");
    const double l = cfg::positive(b, "l");
    const double eps = cfg::positive(b, "eps");
    const auto gap = cfg::gap(b);
    if (!gap) throw ConfigError("check needs 'gap'");
    double nu = 0.0;
    bool computed = false;
    if (b.contains("nu") && !b.at("nu").is_null()) {
        nu = cfg::positive(b, "nu");
    } else {
        nu = cross_section_nu(cfg.cross_section(), cfg::positive_int(b, "nu_cells", 64)).value;
        computed = true;
    }
    const ConditionResult c = check_condition(l, eps, *gap, nu);
    json out;
    out["provenance"] = provenance("existence", cfg, 0.0);
    out["l"] = l;
    out["eps"] = eps;
    out["gap"] = {gap->alpha, gap->beta};
    out["nu"] = nu;
    out["nu_computed"] = computed;
    out["satisfied"] = c.satisfied;
    out["lhs"] = c.lhs;
    out["rhs"] = c.rhs;
    out["margin"] = c.margin;
    out["relative_margin"] = c.margin / c.rhs;
    out["delta_star"] = c.delta_star;
    out["verdict"] = check_line(c.satisfied, c.margin);
    if (b.contains("delta")) {
        const DeltaCondition d = check_delta_condition(l, eps, cfg::positive(b, "delta"), nu);
        out["delta_form"] = {{"delta", cfg::positive(b, "delta")}, {"satisfied", d.satisfied}, {"lhs", d.lhs},
                             {"rhs", d.rhs}, {"margin", d.margin}};
    }
    io::write_json(cfg.out_dir / "check.json", out);
    return out;
}

json run_residual(const RunConfig& cfg) {
    const json& b = cfg.block("residual");
    const CrossSection cs = cfg.cross_section();
    const int cells = cfg::positive_int(b, "cells", 128);
    const double h = cs.diameter() / cells;
    const double rho = cfg::positive(b, "rho", 0.05 * cs.inradius());
    auto g = std::make_shared<const TestField>(make_test_field(cs, rho, h));

    TrialParams tp;
    tp.l = cfg::positive(b, "l");
    tp.eps = cfg::positive(b, "eps");
    tp.delta = cfg::positive(b, "delta");
    tp.g = g;
    const auto gap = cfg::gap(b);
    const int slices = cfg::positive_int(b, "slices", 2000);

    json out;
    out["provenance"] = provenance("existence", cfg, h);
    out["rho"] = rho;
    out["quotient"] = g->quotient;
    out["floor"] = g->lap_norm2 / std::pow(tp.l, 4);

    std::vector<double> mus = cfg::number_list(b, "mu", {});
    if (mus.empty()) {
        if (!gap) throw ConfigError("residual needs 'mu' or 'gap'");
        mus = uniform_mu(*gap, cfg::positive_int(b, "mu_points", 9));
    }
    const bool auto_n = !b.contains("n") || b.at("n").is_string();
    io::CsvTable sweep(with_prov({"l", "eps", "mu", "delta", "n_star", "floor", "threshold", "passes", "inside_gap"}));
    out["points"] = json::array();
    for (double mu : mus) {
        tp.mu = mu;
        tp.n = 1.0;
        const MinimalN mn = minimal_n(tp);
        tp.n = auto_n ? (mn.reachable ? static_cast<double>(mn.n) : 1.0) : cfg::positive(b, "n");
        ResidualReport r = residual_closed_form(tp);
        r.quadrature = residual_quadrature(tp, slices);
        const bool inside = gap && mu - tp.delta >= gap->alpha && mu + tp.delta <= gap->beta;
        sweep.add(row({num(tp.l), num(tp.eps), num(mu), num(tp.delta), mn.reachable ? std::to_string(mn.n) : "unreachable",
                       num(mn.floor), num(mn.threshold), r.passes ? "1" : "0", inside ? "1" : "0"},
                      "existence", cfg, h));
        out["points"].push_back({{"mu", mu},
                                 {"n", tp.n},
                                 {"n_star", mn.reachable ? json(mn.n) : json("unreachable")},
                                 {"terms", r.terms},
                                 {"closed_form", r.closed_form},
                                 {"quadrature", r.quadrature},
                                 {"relative_difference", std::abs(r.quadrature - r.closed_form) / r.closed_form},
                                 {"threshold", r.threshold},
                                 {"passes", r.passes},
                                 {"psi_identity", r.psi_identity},
                                 {"g_identity", r.g_identity},
                                 {"norm", std::sqrt(trial_norm2(tp, slices))}});
    }
    sweep.write(cfg.out_dir / "residual_sweep.csv");
    io::write_json(cfg.out_dir / "residual.json", out);
    return out;
}

json run_bands(const RunConfig& cfg) {
    const json& b = block_or_empty(cfg, "bands");
    const MediumSpec m = cfg.medium();
    const double res = cfg::positive(b, "resolution", 32.0);
    const BulkGaps bg = configured_bulk_gaps(cfg, b, m, res);
    const double h = 1.0 / res;
    io::CsvTable t(with_prov({"k_index", "k1", "k2", "k3", "band", "lambda", "residual"}));
    for (std::size_t i = 0; i < bg.bands.k.size(); ++i)
        for (std::size_t j = 0; j < bg.bands.bands[i].size(); ++j)
            t.add(row({std::to_string(i), num(bg.bands.k[i][0]), num(bg.bands.k[i][1]), num(bg.bands.k[i][2]),
                       std::to_string(j), num(bg.bands.bands[i][j]), num(bg.bands.residuals[i][j])},
                      "eigen", cfg, h));
    t.write(cfg.out_dir / "bands.csv");
    json out;
    out["provenance"] = provenance("eigen", cfg, h);
    out["k_samples"] = bg.gaps.k_samples;
    out["caveat"] = bg.gaps.caveat;
    out["gaps"] = json::array();
    for (const auto& g : bg.gaps.gaps) out["gaps"].push_back({{"alpha", g.alpha}, {"beta", g.beta}, {"width", g.width()}});
    io::write_json(cfg.out_dir / "gaps.json", out);
    return out;
}

json run_defect(const RunConfig& cfg) {
    const json& b = cfg.block("defect");
    const MediumSpec m = cfg.medium();
    DefectRun r = defect_run(cfg, b, m);
    const double h = r.eps.grid.h[0];

    io::CsvTable modes(with_prov({"k1", "index", "lambda", "residual", "divergence"}));
    for (std::size_t i = 0; i < r.spectrum.modes.size(); ++i) {
        const auto& md = r.spectrum.modes[i];
        modes.add(row({num(md.k1), std::to_string(i), num(md.lambda), num(md.residual), num(md.divergence)}, "eigen", cfg, h));
    }
    modes.write(cfg.out_dir / "defect_modes.csv");
    io::CsvTable net(with_prov({"mu", "distance", "delta", "covered"}));
    for (const auto& c : r.spectrum.mu)
        net.add(row({num(c.mu), num(c.nearest), num(r.delta), c.covered ? "1" : "0"}, "eigen", cfg, h));
    net.write(cfg.out_dir / "delta_net.csv");

    json out;
    out["provenance"] = provenance("eigen", cfg, h);
    out["gap"] = {r.gap.alpha, r.gap.beta};
    out["nu"] = r.nu;
    out["delta"] = r.delta;
    out["l"] = m.defect->l;
    out["eps"] = m.defect->eps_inside;
    const ConditionResult c = check_condition(m.defect->l, m.defect->eps_inside, r.gap, r.nu);
    out["condition_margin"] = c.margin;
    out["condition_relative_margin"] = c.margin / c.rhs;
    out["delta_condition"] = check_delta_condition(m.defect->l, m.defect->eps_inside, r.delta, r.nu).satisfied;
    out["mode_count"] = r.spectrum.modes.size();
    out["all_covered"] = r.spectrum.all_covered;
    out["slices_complete"] = r.spectrum.stats.complete;
    out["k1"] = r.k1;
    out["grid"] = {{"n", r.eps.grid.n}, {"h", r.eps.grid.h}};

    if (cfg::get<bool>(b, "bulk_check", true)) {
        MediumSpec bulk = m;
        bulk.defect.reset();
        const SampledEpsilon e0 = build_supercell(bulk, r.sc);
        const DefectSpectrum ds0 = defect_spectrum(e0, r.gap, r.k1, r.delta, {}, r.sc.transverse, r.opt);
        const double band = cfg::get<double>(b, "edge_band", 0.02) * r.gap.width();
        int inside = 0;
        for (const auto& md : ds0.modes)
            if (md.lambda > r.gap.alpha + band && md.lambda < r.gap.beta - band) ++inside;
        out["bulk_modes_inside"] = inside;
        out["bulk_modes_in_window"] = ds0.modes.size();
        out["edge_band"] = band;
    }
    if (cfg::get<bool>(b, "dump_fields", false)) {
        for (std::size_t i = 0; i < r.spectrum.modes.size(); ++i) {
            const auto& md = r.spectrum.modes[i];
            char name[32];
            std::snprintf(name, sizeof name, "mode_%03zu", i);
            io::write_field(cfg.out_dir / "fields" / name, md.field,
                            {{"shape", r.eps.grid.n},
                             {"dim", r.eps.grid.dim},
                             {"staggering", r.eps.grid.dim == 2 ? "cell-centered" : "yee-edges"},
                             {"bloch_k1", md.k1},
                             {"lambda", md.lambda},
                             {"h", r.eps.grid.h},
                             {"origin", r.eps.grid.origin},
                             {"config_hash", cfg.hash}});
        }
    }
    io::write_json(cfg.out_dir / "defect.json", out);
    return out;
}

json run_decay(const RunConfig& cfg) {
    const json& db = block_or_empty(cfg, "decay");
    const json& b = cfg.block("defect");
    const MediumSpec m = cfg.medium();
    DefectRun r = defect_run(cfg, b, m);
    const double h = r.eps.grid.h[0];
    ProfileOptions po;
    po.step = cfg::positive(db, "step", 0.25);
    po.half_side = cfg::positive(db, "half_side", 1.0);
    po.outer_fraction = cfg::get<double>(db, "outer_fraction", 0.25);
    const double edge = cfg::get<double>(db, "edge_band", 0.02) * r.gap.width();

    std::optional<MaxwellOperator> mop;
    FieldLayout layout;
    if (r.eps.grid.dim == 2) {
        layout = scalar_layout(r.eps);
    } else {
        const AxisBC tb = r.sc.transverse == Transverse::Wall ? AxisBC::wall() : AxisBC::bloch(0.0);
        mop.emplace(r.eps, std::array<AxisBC, 3>{AxisBC::bloch(0.0), tb, tb});
        layout = maxwell_layout(*mop);
    }

    io::CsvTable fits(with_prov({"mode", "k1", "lambda", "rate", "r2", "ct_shape", "d_min", "d_max", "used"}));
    io::CsvTable prof(with_prov({"mode", "ray", "dist", "norm", "log_norm", "in_window"}));
    std::vector<double> rates, shapes;
    double min_r2 = 1.0, min_rate = std::numeric_limits<double>::infinity();
    json out;
    out["modes"] = json::array();
    int idx = 0;
    for (const auto& md : r.spectrum.modes) {
        if (!(md.lambda > r.gap.alpha + edge && md.lambda < r.gap.beta - edge)) continue;
        const ModeDecay d = analyze_decay(md, r.eps, layout, r.gap, po);
        fits.add(row({std::to_string(idx), num(md.k1), num(md.lambda), num(d.fit.rate), num(d.fit.r2), num(d.ct),
                      num(d.fit.d_min), num(d.fit.d_max), std::to_string(d.fit.used)},
                     "decay", cfg, h));
        for (std::size_t ray = 0; ray < d.profiles.size(); ++ray)
            for (const auto& s : d.profiles[ray].samples)
                prof.add(row({std::to_string(idx), std::to_string(ray), num(s.dist), num(s.norm),
                              num(s.norm > 0 ? std::log(s.norm) : -INFINITY), s.in_window ? "1" : "0"},
                             "decay", cfg, h));
        rates.push_back(d.fit.rate);
        shapes.push_back(d.ct);
        min_r2 = std::min(min_r2, d.fit.r2);
        min_rate = std::min(min_rate, d.fit.rate);
        out["modes"].push_back({{"k1", md.k1}, {"lambda", md.lambda}, {"rate", d.fit.rate}, {"r2", d.fit.r2}, {"ct_shape", d.ct}});
        ++idx;
    }
    // Negative control: lowest bulk mode at the first k₁ > 0, profiled from the same strip geometry.
    if (cfg::get<bool>(db, "negative_control", true)) {
        const auto kpos = std::find_if(r.k1.begin(), r.k1.end(), [](double k) { return k > 0.0; });
        const double kc = kpos == r.k1.end() ? 0.5 * std::numbers::pi / r.eps.grid.extent(0) : *kpos;
        MediumSpec bulk = m;
        bulk.defect.reset();
        SampledEpsilon e0 = build_supercell(bulk, r.sc);
        e0.strip = m.defect;
        const AxisBC tb = r.sc.transverse == Transverse::Wall ? AxisBC::wall() : AxisBC::bloch(0.0);
        ModeResult bm;
        if (e0.grid.dim == 2) {
            bm = lowest_eigs(ScalarOperator(e0, {AxisBC::bloch(kc), tb}, Exec::Serial), 1, r.opt).front();
        } else {
            MaxwellOperator op(e0, {AxisBC::bloch(kc), tb, tb}, Exec::Serial);
            op.set_penalty(4.0 / e0.c0);
            bm = lowest_eigs(op, 1, r.opt).front();
        }
        bm.k1 = kc;
        const ModeDecay d = analyze_decay(bm, e0, layout, GapInterval{r.gap.alpha, r.gap.beta}, po);
        fits.add(row({"control", num(kc), num(bm.lambda), num(d.fit.rate), num(d.fit.r2), num(d.ct), num(d.fit.d_min),
                      num(d.fit.d_max), std::to_string(d.fit.used)},
                     "decay", cfg, h));
        out["negative_control"] = {{"k1", kc}, {"lambda", bm.lambda}, {"rate", d.fit.rate}, {"r2", d.fit.r2}};
        out["control_ratio"] = idx && min_rate > 0.0 ? std::abs(d.fit.rate) / min_rate : 0.0;
    }
    fits.write(cfg.out_dir / "decay_fits.csv");
    prof.write(cfg.out_dir / "decay_profiles.csv");
    out["provenance"] = provenance("decay", cfg, h);
    out["model"] = DecayFit{}.model;
    out["gap"] = {r.gap.alpha, r.gap.beta};
    out["mode_count"] = idx;
    out["min_r2"] = idx ? min_r2 : 0.0;
    out["min_rate"] = idx ? min_rate : 0.0;
    out["spearman"] = rates.size() >= 2 ? spearman(rates, shapes) : 0.0;
    io::write_text(cfg.out_dir / "plot_decay.py",
                   "import csv, collections\nimport matplotlib\nmatplotlib.use('Agg')\nimport matplotlib.pyplot as plt\n"
                   "rows = list(csv.DictReader(open('decay_profiles.csv')))\nby = collections.defaultdict(list)\n"
                   "for r in rows: by[(r['mode'], r['ray'])].append((float(r['dist']), float(r['norm'])))\n"
                   "for (m, ray), pts in sorted(by.items()):\n"
                   "    d, n = zip(*pts)\n    plt.figure(); plt.semilogy(d, n, 'o-')\n"
                   "    plt.xlabel('dist to strip'); plt.ylabel('window norm'); plt.title(f'mode {m} ray {ray}')\n"
                   "    plt.savefig(f'decay_mode{m}_ray{ray}.png', dpi=100); plt.close()\n");
    io::write_json(cfg.out_dir / "decay.json", out);
    return out;
}

json run_sweep(const RunConfig& cfg) {
    const json& b = cfg.block("sweep");
    const MediumSpec m = cfg.medium();
    const auto ls = cfg::number_list(b, "l", {});
    const auto es = cfg::number_list(b, "eps", {});
    if (ls.empty() || es.empty()) throw ConfigError("sweep needs non-empty 'l' and 'eps' lists");
    for (double v : ls)
        if (!(v > 0.0)) throw ConfigError("sweep 'l' values must be positive");
    for (double v : es)
        if (!(v > 0.0)) throw ConfigError("sweep 'eps' values must be positive");
    const CrossSection cs = m.defect ? m.defect->cross_section : cfg.cross_section();
    const GapInterval gap = resolve_gap(cfg, b, m);
    const double nu = resolve_nu(b, cs);
    const bool spectra = cfg::get<bool>(b, "spectra", m.dim == 2);
    const SupercellSpec sc = supercell(b);
    const InteriorOptions opt = interior_options(b, cfg.seed);
    const int mu_points = cfg::positive_int(b, "mu_points", 9);
    const double factor = cfg::positive(b, "delta_factor", 1.5);

    struct Cell {
        double l = 0.0, eps = 0.0, margin = 0.0, delta = 0.0;
        bool satisfied = false, covered = false;
        int count = -1;
        std::string error;
    };
    std::vector<Cell> cells;
    for (double l : ls)
        for (double e : es) {
            Cell c;
            c.l = l;
            c.eps = e;
            cells.push_back(c);
        }
    const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::size_t i = 0; i < cells.size(); ++i) {
        Cell& c = cells[i];
        try {
            const ConditionResult cr = check_condition(c.l, c.eps, gap, nu);
            c.margin = cr.margin;
            c.satisfied = cr.satisfied;
            c.delta = factor * nu / (c.l * c.l * c.eps);
            if (spectra) {
                MediumSpec mm = m;
                StripSpec st;
                st.cross_section = cs;
                st.l = c.l;
                st.eps_inside = c.eps;
                mm.defect = st;
                const SampledEpsilon e = build_supercell(mm, sc);
                const std::vector<double> k1 = k1_list(b, e.grid.extent(0));
                const DefectSpectrum ds = defect_spectrum(e, gap, k1, c.delta, uniform_mu(gap, mu_points), sc.transverse, opt);
                const double band = cfg::get<double>(b, "edge_band", 0.02) * gap.width();
                c.count = 0;
                for (const auto& md : ds.modes)
                    if (md.lambda > gap.alpha + band && md.lambda < gap.beta - band) ++c.count;
                c.covered = ds.all_covered;
            }
        } catch (const std::exception& ex) {
            c.error = ex.what();
        }
    }
    io::CsvTable t(with_prov({"l", "eps", "margin", "satisfied", "delta", "in_gap_count", "delta_net", "error"}));
    json out;
    out["cells"] = json::array();
    int failures = 0;
    for (const auto& c : cells) {
        std::string err = c.error;
        std::replace(err.begin(), err.end(), ',', ';');
        if (!c.error.empty()) ++failures;
        t.add(row({num(c.l), num(c.eps), num(c.margin), c.satisfied ? "1" : "0", num(c.delta),
                   c.count < 0 ? "" : std::to_string(c.count), spectra ? (c.covered ? "1" : "0") : "", err},
                  "cli", cfg, sc.resolution > 0 ? 1.0 / sc.resolution : 0.0));
        out["cells"].push_back({{"l", c.l}, {"eps", c.eps}, {"margin", c.margin}, {"satisfied", c.satisfied},
                                {"in_gap_count", c.count}, {"delta_net", c.covered}, {"error", c.error}});
    }
    t.write(cfg.out_dir / "existence_map.csv");
    out["provenance"] = provenance("cli", cfg, 1.0 / sc.resolution);
    out["gap"] = {gap.alpha, gap.beta};
    out["nu"] = nu;
    out["failures"] = failures;
    io::write_json(cfg.out_dir / "sweep.json", out);
    return out;
}

json run(const std::string& command, const RunConfig& cfg) {
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    if (command == "nu") return run_nu(cfg);
    if (command == "check") return run_check(cfg);
    if (command == "residual") return run_residual(cfg);
    if (command == "bands") return run_bands(cfg);
    if (command == "defect") return run_defect(cfg);
    if (command == "decay") return run_decay(cfg);
    if (command == "sweep") return run_sweep(cfg);
    if (command == "report") return run_report(cfg.out_dir);
    throw ConfigError("unknown command '" + command + "'");
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Guided-mode existence and confinement toolkit"};
    std::string command, config;
    std::optional<std::string> out_dir;
    std::optional<long long> seed;
    std::optional<int> threads;
    app.add_option("command", command, "command to run")->required();
    app.add_option("--config", config, "run configuration (JSON)")->required();
    app.add_option("--out", out_dir, "artifact directory");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--threads", threads, "worker threads");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << usage();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << usage();
        return kConfigError;
    }
    if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
        err << "error: unknown command '" << command << "'\n" << usage();
        return kConfigError;
    }
    try {
        ConfigOverrides ov;
        if (out_dir) ov.out = *out_dir;
        if (seed) {
            if (*seed < 0) throw ConfigError("seed must be nonnegative");
            ov.seed = static_cast<std::uint64_t>(*seed);
        }
        if (threads) {
            if (*threads < 0) throw ConfigError("threads must be nonnegative");
            ov.threads = *threads;
        }
        const RunConfig cfg = load_config(config, ov);
        const json summary = run(command, cfg);
        if (command == "check") out << summary.at("verdict").get<std::string>() << "\n";
        out << summary.dump() << "\n";
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ValidationError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const GeometryError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ResolutionError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const IterationError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    }
}

}  // namespace gapguide::cli
