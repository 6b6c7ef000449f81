// tridecoh: command line front end: figure presets, config-driven runs and
// the leakage check.
//
// Frequencies in configs are read as 10^6 rad/s (no 2*pi factor). Internally
// everything runs in units where a11 = 1; the abscissa of every output is
// T_deg = a11 t * 180 / pi.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tridecoh/leakage.hpp"
#include "tridecoh/scenario.hpp"
#include "tridecoh/units.hpp"

namespace {

struct OutputOptions {
    std::string out = "out";
    std::string format = "csv";
    int grid_points = 0;
    std::vector<double> kappas;
};

void apply_overrides(tridecoh::ScenarioConfig& cfg, const OutputOptions& o) {
    if (o.grid_points != 0) cfg.grid_points = o.grid_points;
    if (!o.kappas.empty()) cfg.kappas = o.kappas;
    tridecoh::validate(cfg);
}

void emit(const tridecoh::ObservableSeries& series, const OutputOptions& o) {
    std::vector<std::filesystem::path> files;
    if (o.format == "csv" || o.format == "both") {
        auto f = tridecoh::emit_csv(series, o.out);
        files.insert(files.end(), f.begin(), f.end());
    }
    if (o.format == "svg" || o.format == "both") {
        auto f = tridecoh::emit_svg(series, o.out);
        files.insert(files.end(), f.begin(), f.end());
    }
    for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
}

int leakage_report(const tridecoh::ScenarioConfig& cfg, const OutputOptions& o) {
    using namespace tridecoh;
    const SystemParams params = scaled_params(cfg.alpha);
    const FockSpace base{cfg.fock_cutoffs[0], cfg.fock_cutoffs[1]};
    const FockSpace doubled{2 * base.phonon_cut, 2 * base.photon_cut};
    const FullSpacePropagator prop(params, base);
    const FullSpacePropagator prop2(params, doubled);

    std::vector<double> t, p;
    for (int k = 0; k < 10; ++k) {
        t.push_back(0.01 * (k + 1));
        p.push_back(prop.leakage(t.back()));
    }
    const auto fit = fit_power_law(t, p);
    double worst = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k)
        worst = std::max(worst, std::abs(prop2.leakage(t[k]) - p[k]) / p[k]);

    std::printf("leakage power law over a11 t in [0.01, 0.1]: exponent %.4f (r^2 %.6f)\n", fit.exponent, fit.r2);
    std::printf("cutoff (%d,%d) -> (%d,%d): max relative change %.3e\n", base.phonon_cut, base.photon_cut,
                doubled.phonon_cut, doubled.photon_cut, worst);
    std::printf("leakage at a11 t = pi/4: %.6g\n", prop.leakage(units::deg_to_rad(45.0)));

    ScenarioConfig leak = cfg;
    leak.outputs = {"leakage"};
    leak.kappas = {0.0};
    leak.title = "Leakage out of the four-state model space";
    emit(run_scenario(leak), o);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dephasing of a trapped ion coupled to a cavity, treated as three qubits"};
    app.require_subcommand(1);

    OutputOptions opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
        sub->add_option("--format", opts.format, "csv, svg or both")
            ->check(CLI::IsMember({"csv", "svg", "both"}))
            ->capture_default_str();
        sub->add_option("--grid-points", opts.grid_points, "Number of grid points on [0, t_max_deg]");
        sub->add_option("--kappa", opts.kappas, "Bath coupling; repeat to sweep (overrides config)");
    };

    int figure = 0;
    auto* fig = app.add_subcommand("figure", "Reproduce one of the preset figures (1..6)");
    fig->add_option("n", figure, "Figure number")->required();
    add_common(fig);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run a scenario from a config file (key = value or JSON)");
    run->add_option("--config", config_path, "Config file")->required();
    add_common(run);

    std::string leak_config;
    auto* leak = app.add_subcommand("leakage", "Leakage out of the model space under the full Hamiltonian");
    leak->add_option("--config", leak_config, "Optional config file (alpha, fock_cutoffs, grid)");
    add_common(leak);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*fig) {
            auto cfg = tridecoh::figure_preset(figure);
            apply_overrides(cfg, opts);
            emit(tridecoh::run_scenario(cfg), opts);
        } else if (*run) {
            auto cfg = tridecoh::parse_config(config_path);
            apply_overrides(cfg, opts);
            emit(tridecoh::run_scenario(cfg), opts);
        } else if (*leak) {
            auto cfg = leak_config.empty() ? tridecoh::ScenarioConfig{} : tridecoh::parse_config(leak_config);
            apply_overrides(cfg, opts);
            return leakage_report(cfg, opts);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "tridecoh: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
