#include <cstdio>
#include <sstream>

#include "gapguide/cli.hpp"
#include "gapguide/io.hpp"

namespace gapguide::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::optional<json> try_json(const fs::path& p) {
    if (!fs::exists(p)) return std::nullopt;
    try {
        return io::read_json(p);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string fmt(const json& v, const char* spec = "%.6g") {
    if (v.is_number()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, spec, v.get<double>());
        return buf;
    }
    if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
    if (v.is_null()) return "–";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string at(const json& j, const std::string& key, const char* spec = "%.6g") {
    return j.contains(key) ? fmt(j.at(key), spec) : "–";
}

const char* kBandsPlot =
    "import csv, collections\nimport matplotlib\nmatplotlib.use('Agg')\nimport matplotlib.pyplot as plt\n"
    "rows = list(csv.DictReader(open('bands.csv')))\nbands = collections.defaultdict(list)\n"
    "for r in rows: bands[int(r['band'])].append((int(r['k_index']), float(r['lambda'])))\n"
    "for b, pts in sorted(bands.items()):\n    k, lam = zip(*sorted(pts)); plt.plot(k, lam, 'k.-')\n"
    "plt.xlabel('k-path index'); plt.ylabel('lambda'); plt.savefig('bands.png', dpi=100)\n";

const char* kMapPlot =
    "import csv\nimport matplotlib\nmatplotlib.use('Agg')\nimport matplotlib.pyplot as plt\n"
    "rows = list(csv.DictReader(open('existence_map.csv')))\n"
    "l = [float(r['l']) for r in rows]; e = [float(r['eps']) for r in rows]\n"
    "c = ['tab:green' if r['satisfied'] == '1' else 'tab:red' for r in rows]\n"
    "plt.scatter(l, e, c=c)\n"
    "for r in rows:\n    if r['in_gap_count']: plt.annotate(r['in_gap_count'], (float(r['l']), float(r['eps'])))\n"
    "plt.xlabel('l'); plt.ylabel('eps'); plt.title('green: condition satisfied; labels: in-gap count')\n"
    "plt.savefig('existence_map.png', dpi=100)\n";

const char* kDecayPlot =
    "import csv, collections\nimport matplotlib\nmatplotlib.use('Agg')\nimport matplotlib.pyplot as plt\n"
    "rows = list(csv.DictReader(open('decay_profiles.csv')))\nby = collections.defaultdict(list)\n"
    "for r in rows: by[(r['mode'], r['ray'])].append((float(r['dist']), float(r['norm'])))\n"
    "for (m, ray), pts in sorted(by.items()):\n    d, n = zip(*pts)\n    plt.figure(); plt.semilogy(d, n, 'o-')\n"
    "    plt.xlabel('dist to strip'); plt.ylabel('window norm'); plt.title(f'mode {m} ray {ray}')\n"
    "    plt.savefig(f'decay_mode{m}_ray{ray}.png', dpi=100); plt.close()\n";

}  // namespace

json run_report(const fs::path& dir) {
    std::ostringstream md;
    std::vector<std::string> missing, present;
    md << "# gapguide summary\n\nArtifacts: `" << dir.filename().string() << "`\n";

    const auto need = [&](const std::string& name) {
        auto j = try_json(dir / name);
        (j ? present : missing).push_back(name);
        return j;
    };

    if (auto nu = need("nu.json")) {
        md << "\n## Cross-section constant ν\n\n| h | value |\n|---|---|\n";
        for (const auto& g : nu->value("grids", json::array())) md << "| " << at(g, "h") << " | " << at(g, "value", "%.8g") << " |\n";
        md << "\nExtrapolated ν = " << at(*nu, "value", "%.8g") << " (order " << at(*nu, "order", "%.3f") << ")";
        if (nu->contains("warning")) md << "; warning: " << nu->at("warning").get<std::string>();
        md << "\n";
        if (nu->contains("test_fields")) {
            md << "\n| ρ | quotient ‖Δg‖ |\n|---|---|\n";
            for (const auto& t : nu->at("test_fields")) md << "| " << at(t, "rho") << " | " << at(t, "quotient", "%.8g") << " |\n";
        }
    }
    if (auto c = need("check.json")) {
        md << "\n## Existence condition\n\n| l | ε | ν | gap | lhs | rhs | margin | verdict |\n|---|---|---|---|---|---|---|---|\n";
        md << "| " << at(*c, "l") << " | " << at(*c, "eps") << " | " << at(*c, "nu", "%.6f") << " | "
           << c->value("gap", json::array()).dump() << " | " << at(*c, "lhs") << " | " << at(*c, "rhs") << " | "
           << at(*c, "margin", "%.3f") << " | " << at(*c, "verdict") << " |\n";
    }
    if (auto r = need("residual.json")) {
        md << "\n## Trial-function residuals\n\n| μ | n | closed form | quadrature | threshold δ²ε² | passes |\n"
              "|---|---|---|---|---|---|\n";
        for (const auto& p : r->value("points", json::array()))
            md << "| " << at(p, "mu") << " | " << at(p, "n") << " | " << at(p, "closed_form") << " | " << at(p, "quadrature")
               << " | " << at(p, "threshold") << " | " << at(p, "passes") << " |\n";
    }
    if (auto g = need("gaps.json")) {
        md << "\n## Bulk gaps\n\n| α | β | width |\n|---|---|---|\n";
        for (const auto& x : g->value("gaps", json::array()))
            md << "| " << at(x, "alpha", "%.8g") << " | " << at(x, "beta", "%.8g") << " | " << at(x, "width", "%.6g") << " |\n";
        md << "\n" << at(*g, "caveat") << "\n";
    }
    if (auto d = need("defect.json")) {
        md << "\n## Defect spectrum and δ-net\n\n";
        md << "- gap: " << d->value("gap", json::array()).dump() << "\n";
        md << "- δ = " << at(*d, "delta") << ", ν = " << at(*d, "nu", "%.6f") << ", condition margin "
           << at(*d, "condition_margin", "%.4g") << " (relative " << at(*d, "condition_relative_margin", "%.3g") << ")\n";
        md << "- modes in window: " << at(*d, "mode_count", "%.0f") << "\n";
        md << "- every sampled μ covered within δ: " << at(*d, "all_covered") << "\n";
        if (d->contains("bulk_modes_inside"))
            md << "- bulk (no defect) modes strictly inside the gap: " << at(*d, "bulk_modes_inside", "%.0f") << "\n";
        if (fs::exists(dir / "delta_net.csv")) {
            const io::CsvTable t = io::CsvTable::read(dir / "delta_net.csv");
            const int mu = t.column("mu"), near = t.column("distance"), cov = t.column("covered");
            md << "\n| μ | distance to nearest λ | covered |\n|---|---|---|\n";
            for (const auto& row : t.rows())
                md << "| " << row[static_cast<std::size_t>(mu)] << " | " << row[static_cast<std::size_t>(near)] << " | "
                   << (row[static_cast<std::size_t>(cov)] == "1" ? "yes" : "no") << " |\n";
        }
    }
    if (auto d = need("decay.json")) {
        md << "\n## Confinement\n\n| k₁ | λ | rate | R² | ct_shape |\n|---|---|---|---|---|\n";
        for (const auto& m : d->value("modes", json::array()))
            md << "| " << at(m, "k1", "%.4f") << " | " << at(m, "lambda", "%.6f") << " | " << at(m, "rate", "%.4f") << " | "
               << at(m, "r2", "%.4f") << " | " << at(m, "ct_shape", "%.4f") << " |\n";
        md << "\nRank correlation (rate vs √((λ−α)(β−λ))): " << at(*d, "spearman", "%.4f") << "; min R² "
           << at(*d, "min_r2", "%.4f") << "\n";
    }
    if (auto s = need("sweep.json")) {
        md << "\n## Existence map\n\nν = " << at(*s, "nu", "%.6f") << ", gap " << s->value("gap", json::array()).dump()
           << ", failed cells: " << at(*s, "failures", "%.0f") << "\n\n| l | ε | margin | satisfied | in-gap count | δ-net |\n"
           << "|---|---|---|---|---|---|\n";
        for (const auto& c : s->value("cells", json::array()))
            md << "| " << at(c, "l") << " | " << at(c, "eps") << " | " << at(c, "margin", "%.4g") << " | " << at(c, "satisfied")
               << " | " << at(c, "in_gap_count", "%.0f") << " | " << at(c, "delta_net") << " |\n";
    }

    if (present.empty()) {
        md << "\nNo artifacts found in this directory.\n";
    } else if (!missing.empty()) {
        md << "\n## Missing artifacts\n\n";
        for (const auto& m : missing) md << "- " << m << "\n";
    }

    json out;
    out["present"] = present;
    out["missing"] = missing;
    if (fs::exists(dir)) {
        io::write_text(dir / "summary.md", md.str());
        io::write_text(dir / "plot_bands.py", kBandsPlot);
        io::write_text(dir / "plot_existence_map.py", kMapPlot);
        io::write_text(dir / "plot_decay.py", kDecayPlot);
        out["summary"] = (dir / "summary.md").string();
    } else {
        out["summary"] = nullptr;
        out["notice"] = "no artifacts";
    }
    return out;
}

}  // namespace gapguide::cli
