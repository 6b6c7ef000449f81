// scenario.hpp: scenario configuration, kappa sweeps, figure presets and
// CSV / SVG emission.

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tridecoh/bath.hpp"
#include "tridecoh/entanglement.hpp"
#include "tridecoh/errors.hpp"
#include "tridecoh/evolution.hpp"
#include "tridecoh/leakage.hpp"
#include "tridecoh/model.hpp"
#include "tridecoh/observables.hpp"
#include "tridecoh/units.hpp"

namespace tridecoh {

// Column names produced by run_scenario. "negativity" and "linear_entropy"
// expand to all three cuts; the cut-qualified names select one.
inline const std::vector<std::string>& known_outputs() {
    static const std::vector<std::string> names{
        "pghz",          "inversion",        "negativity",       "negativity_A",     "negativity_B",
        "negativity_C",  "linear_entropy",   "linear_entropy_A", "linear_entropy_B", "linear_entropy_C",
        "leakage",
    };
    return names;
}

struct ScenarioConfig {
    double omega_rabi_e6rad = 8.95;
    double alpha = 4.0;
    double bath_cutoff_e6rad = 1200.0;
    double temperature_k = 0.03;
    std::vector<double> kappas{0.0, 0.001, 0.01, 0.02, 0.05, 0.1};
    double t_max_deg = 180.0;
    int grid_points = 721;
    std::array<int, 2> fock_cutoffs{6, 6};
    std::vector<std::string> outputs{"pghz", "inversion", "negativity", "linear_entropy"};
    std::string title;  // set by figure presets, not a config key
};

inline void validate(const ScenarioConfig& cfg) {
    std::vector<std::string> issues;
    if (!(cfg.omega_rabi_e6rad > 0.0)) issues.push_back("omega_rabi_e6rad must be > 0");
    if (!(cfg.alpha > 1.0)) issues.push_back("alpha must be > 1");
    if (!(cfg.bath_cutoff_e6rad > 0.0)) issues.push_back("bath_cutoff_e6rad must be > 0");
    if (!(cfg.temperature_k > 0.0)) issues.push_back("temperature_k must be > 0");
    if (cfg.kappas.empty()) issues.push_back("kappas must not be empty");
    for (double k : cfg.kappas)
        if (!(k >= 0.0)) issues.push_back("kappas must all be >= 0 (got " + std::to_string(k) + ")");
    if (!(cfg.t_max_deg > 0.0)) issues.push_back("t_max_deg must be > 0");
    if (cfg.grid_points < 2) issues.push_back("grid_points must be >= 2");
    if (cfg.fock_cutoffs[0] < 4 || cfg.fock_cutoffs[1] < 4) issues.push_back("fock_cutoffs must both be >= 4");
    if (cfg.outputs.empty()) issues.push_back("outputs must not be empty");
    for (const auto& o : cfg.outputs)
        if (std::find(known_outputs().begin(), known_outputs().end(), o) == known_outputs().end())
            issues.push_back("unknown output '" + o + "'");
    if (issues.empty()) return;
    std::string msg = "invalid scenario:";
    for (const auto& i : issues) msg += " " + i + ";";
    throw ValidationError(msg);
}

namespace detail {

inline std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

inline std::vector<std::string> split_list(std::string v) {
    v = trim(std::move(v));
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') throw ParseError("unterminated list '" + v + "'");
        v = v.substr(1, v.size() - 2);
    }
    std::vector<std::string> out;
    std::stringstream ss(v);
    for (std::string item; std::getline(ss, item, ',');) {
        item = trim(item);
        if (item.size() >= 2 && (item.front() == '"' || item.front() == '\'') && item.back() == item.front())
            item = item.substr(1, item.size() - 2);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double parse_number(const std::string& text, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ParseError(where + ": expected a number, got '" + text + "'");
    }
    if (used != text.size()) throw ParseError(where + ": expected a number, got '" + text + "'");
    return v;
}

inline int parse_int(const std::string& text, const std::string& where) {
    const double v = parse_number(text, where);
    if (v != std::floor(v)) throw ParseError(where + ": expected an integer, got '" + text + "'");
    return static_cast<int>(v);
}

inline void assign_key(ScenarioConfig& cfg, const std::string& key, const std::string& raw, const std::string& where) {
    const std::string value = trim(raw);
    if (key == "omega_rabi_e6rad") cfg.omega_rabi_e6rad = parse_number(value, where);
    else if (key == "alpha") cfg.alpha = parse_number(value, where);
    else if (key == "bath_cutoff_e6rad") cfg.bath_cutoff_e6rad = parse_number(value, where);
    else if (key == "temperature_k") cfg.temperature_k = parse_number(value, where);
    else if (key == "t_max_deg") cfg.t_max_deg = parse_number(value, where);
    else if (key == "grid_points") cfg.grid_points = parse_int(value, where);
    else if (key == "kappas") {
        cfg.kappas.clear();
        for (const auto& item : split_list(value)) cfg.kappas.push_back(parse_number(item, where));
    } else if (key == "fock_cutoffs") {
        const auto items = split_list(value);
        if (items.size() != 2) throw ParseError(where + ": fock_cutoffs needs two integers");
        cfg.fock_cutoffs = {parse_int(items[0], where), parse_int(items[1], where)};
    } else if (key == "outputs") {
        cfg.outputs = split_list(value);
    } else {
        throw ParseError(where + ": unknown key '" + key + "'");
    }
}

inline ScenarioConfig parse_json_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON config: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("JSON config: top level must be an object");
    ScenarioConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        const std::string where = "key '" + key + "'";
        std::string flat;
        if (value.is_array()) {
            for (const auto& item : value) {
                if (!flat.empty()) flat += ",";
                flat += item.is_string() ? item.get<std::string>() : item.dump();
            }
        } else {
            flat = value.is_string() ? value.get<std::string>() : value.dump();
        }
        assign_key(cfg, key, flat, where);
    }
    return cfg;
}

} // namespace detail

/// `key = value` lines ('#' comments, lists as `[a, b]` or `a, b`), or a JSON
/// object with the same keys. Missing keys keep their defaults.
inline ScenarioConfig parse_config_text(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    ScenarioConfig cfg;
    if (first != std::string::npos && text[first] == '{') {
        cfg = detail::parse_json_config(text);
    } else {
        std::stringstream in(text);
        int line_no = 0;
        std::set<std::string> seen;
        for (std::string line; std::getline(in, line);) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            const auto eq = line.find_first_of("=:");
            const std::string where = "line " + std::to_string(line_no);
            if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
            const std::string key = detail::trim(line.substr(0, eq));
            if (!seen.insert(key).second) throw ParseError(where + ": duplicate key '" + key + "'");
            detail::assign_key(cfg, key, line.substr(eq + 1), where + " key '" + key + "'");
        }
    }
    validate(cfg);
    return cfg;
}

inline ScenarioConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

/// Everything needed for a run, already in a_11 = 1 units.
struct ScaledScenario {
    double alpha = 4.0;
    double bath_cutoff = 1.0;
    double beta = 1.0;
    std::vector<double> kappas;
    std::vector<double> t_deg;  // abscissa; scaled time is t_deg * pi / 180
    std::array<int, 2> fock_cutoffs{6, 6};
    std::vector<std::string> outputs;
};

inline std::vector<double> degree_grid(double t_max_deg, int points) {
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = t_max_deg * k / (points - 1);
    return g;
}

inline ScaledScenario to_scaled(const ScenarioConfig& cfg) {
    validate(cfg);
    const double a11 = units::a11_rad_per_s(cfg.omega_rabi_e6rad * units::mega, cfg.alpha);
    ScaledScenario s;
    s.alpha = cfg.alpha;
    s.bath_cutoff = cfg.bath_cutoff_e6rad * units::mega / a11;
    s.beta = units::beta_seconds(cfg.temperature_k) * a11;
    s.kappas = cfg.kappas;
    s.t_deg = degree_grid(cfg.t_max_deg, cfg.grid_points);
    s.fock_cutoffs = cfg.fock_cutoffs;
    s.outputs = cfg.outputs;
    return s;
}

struct ObservableColumn {
    std::string name;
    std::vector<std::vector<double>> per_kappa;  // [kappa][grid]
};

struct ObservableSeries {
    std::vector<double> t_deg;
    std::vector<double> kappas;
    std::vector<ObservableColumn> columns;
    std::string title;

    const ObservableColumn& column(const std::string& name) const {
        for (const auto& c : columns)
            if (c.name == name) return c;
        throw Error("ObservableSeries: no column '" + name + "'");
    }
    bool has(const std::string& name) const {
        return std::any_of(columns.begin(), columns.end(), [&](const auto& c) { return c.name == name; });
    }
};

inline std::vector<double> scaled_times(const std::vector<double>& t_deg) {
    std::vector<double> t(t_deg.size());
    std::transform(t_deg.begin(), t_deg.end(), t.begin(), units::deg_to_rad);
    return t;
}

/// Dephasing profile for kappa = 1 on the scenario grid; rescale with with_kappa().
inline DephasingProfile unit_profile(const ScaledScenario& s, const SystemParams& params) {
    BathSpec spec;
    spec.kappa = 1.0;
    spec.cutoff = s.bath_cutoff;
    spec.beta = s.beta;
    return build_profile(spec, params, scaled_times(s.t_deg));
}

/// rho(t) on every grid point for rho(0) = |g,0,0>.
inline std::vector<DensityOperator> evolve_series(const SystemParams& params, const DephasingProfile& profile) {
    const auto eig = analytic_eigensystem(params);
    const auto rho0 = InitialState{}.density();
    std::vector<DensityOperator> out(profile.size());
    detail::parallel_for(profile.size(), [&](std::size_t k) {
        out[k] = evolve_dephasing(rho0, eig, profile, profile.grid()[k]);
    });
    return out;
}

inline ObservableSeries run_scaled(const ScaledScenario& s) {
    std::set<std::string> wanted;
    for (const auto& o : s.outputs) {
        if (o == "negativity" || o == "linear_entropy") {
            for (const char* cut : {"_A", "_B", "_C"}) wanted.insert(o + cut);
        } else {
            wanted.insert(o);
        }
    }

    const SystemParams params = scaled_params(s.alpha);
    ObservableSeries series;
    series.t_deg = s.t_deg;
    series.kappas = s.kappas;

    // fixed column order, independent of the order outputs were requested in
    std::vector<std::string> order;
    for (const auto& name : known_outputs())
        if (wanted.count(name)) order.push_back(name);
    for (const auto& name : order) series.columns.push_back({name, {}});

    auto col = [&](const std::string& name) -> ObservableColumn* {
        for (auto& c : series.columns)
            if (c.name == name) return &c;
        return nullptr;
    };

    bool needs_states = false;
    for (const auto& name : order) needs_states = needs_states || name != "leakage";

    const auto t = scaled_times(s.t_deg);
    const std::size_t n = t.size();
    std::optional<DephasingProfile> unit;
    if (needs_states && std::any_of(s.kappas.begin(), s.kappas.end(), [](double k) { return k > 0.0; }))
        unit = unit_profile(s, params);

    std::vector<double> leakage;
    if (col("leakage")) {
        const FullSpacePropagator prop(params, FockSpace{s.fock_cutoffs[0], s.fock_cutoffs[1]});
        leakage.resize(n);
        detail::parallel_for(n, [&](std::size_t k) { leakage[k] = prop.leakage(t[k]); });
    }

    const auto minus = GhzTarget::make(GhzSign::minus);
    const TripartiteIndex idx;
    const bool tri = std::any_of(order.begin(), order.end(), [](const std::string& name) {
        return name.rfind("negativity", 0) == 0 || name.rfind("linear_entropy", 0) == 0;
    });
    for (double kappa : s.kappas) {
        for (auto& c : series.columns) c.per_kappa.emplace_back(n, 0.0);
        if (!needs_states) {
            col("leakage")->per_kappa.back() = leakage;
            continue;
        }
        const DephasingProfile profile =
            kappa > 0.0 ? unit->with_kappa(kappa)
                        : DephasingProfile(t, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0,
                                           4.0 * params.mu_mn * params.a_mn);
        const auto states = evolve_series(params, profile);
        detail::parallel_for(n, [&](std::size_t k) {
            const auto& rho = states[k];
            if (auto* c = col("pghz")) c->per_kappa.back()[k] = ghz_probability(rho, minus);
            if (auto* c = col("inversion")) c->per_kappa.back()[k] = population_inversion(rho);
            if (auto* c = col("leakage")) c->per_kappa.back()[k] = leakage[k];
            if (!tri) return;
            const auto rho8 = embed_tripartite(rho, idx);
            for (Subsystem cut : {Subsystem::A, Subsystem::B, Subsystem::C}) {
                const std::string suffix = std::string("_") + subsystem_name(cut);
                if (auto* c = col("negativity" + suffix)) c->per_kappa.back()[k] = negativity(rho8, idx, cut);
                if (auto* c = col("linear_entropy" + suffix))
                    c->per_kappa.back()[k] = linear_entropy(reduced_density(rho8, idx, cut));
            }
        });
    }
    return series;
}

inline ObservableSeries run_scenario(const ScenarioConfig& cfg) {
    try {
        auto series = run_scaled(to_scaled(cfg));
        series.title = cfg.title;
        return series;
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw Error(std::string("scenario run failed: ") + e.what());
    }
}

inline ScenarioConfig figure_preset(int n) {
    ScenarioConfig cfg;
    const std::vector<double> four{0.0, 0.001, 0.01, 0.1};
    const std::vector<double> six{0.0, 0.001, 0.01, 0.02, 0.05, 0.1};
    switch (n) {
        case 1:
            cfg.kappas = four;
            cfg.outputs = {"pghz"};
            cfg.title = "P_GHZ";
            break;
        case 2:
            cfg.kappas = four;
            cfg.outputs = {"inversion"};
            cfg.title = "Population inversion I";
            break;
        case 3:
            cfg.kappas = six;
            cfg.outputs = {"negativity_A"};
            cfg.title = "Negativity from the partial transpose on A";
            break;
        case 4:
            cfg.kappas = six;
            cfg.outputs = {"negativity_B", "negativity_C"};
            cfg.title = "Negativity from the partial transpose on B (= C)";
            break;
        case 5:
            cfg.kappas = six;
            cfg.outputs = {"linear_entropy_A"};
            cfg.title = "Linear entropy of subsystem A";
            break;
        case 6:
            cfg.kappas = six;
            cfg.outputs = {"linear_entropy_B", "linear_entropy_C"};
            cfg.title = "Linear entropy of subsystem B (= C)";
            break;
        default:
            throw UnknownFigure("unknown figure " + std::to_string(n) + " (expected 1..6)");
    }
    return cfg;
}

// ------------------------------- emission -----------------------------------

inline std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
    return buf;
}

/// Long format: T_deg,kappa,<name> with one row per (kappa, grid point).
inline std::string csv_text(const ObservableSeries& series, const ObservableColumn& column) {
    std::string out = "T_deg,kappa," + column.name + "\n";
    for (std::size_t q = 0; q < series.kappas.size(); ++q)
        for (std::size_t k = 0; k < series.t_deg.size(); ++k) {
            const double v = column.per_kappa.at(q).at(k);
            if (!std::isfinite(v)) throw Error("csv: non-finite value in column " + column.name);
            out += format_g12(series.t_deg[k]) + "," + format_g12(series.kappas[q]) + "," + format_g12(v) + "\n";
        }
    return out;
}

inline std::string svg_text(const ObservableSeries& series, const ObservableColumn& column) {
    static constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                        "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
    const double width = 720, height = 440, left = 70, right = 150, top = 40, bottom = 55;
    const double pw = width - left - right, ph = height - top - bottom;

    double xmin = series.t_deg.front(), xmax = series.t_deg.back();
    if (xmax == xmin) xmax = xmin + 1.0;
    double ymin = 0.0, ymax = 0.0;
    for (const auto& row : column.per_kappa)
        for (double v : row) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

    auto fmt = [](double v, const char* spec = "%.2f") {
        char buf[32];
        std::snprintf(buf, sizeof buf, spec, v);
        return std::string(buf);
    };
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(width, "%.0f") +
         "\" height=\"" + fmt(height, "%.0f") + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const std::string title = (series.title.empty() ? column.name : series.title + " (" + column.name + ")") +
                              " as a function of scaled time variable T = a11 t";
    s += "<text x=\"" + fmt(width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + title +
         "</text>\n";
    s += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        s += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(top + ph + 18) +
             "\" text-anchor=\"middle\" font-size=\"11\">" + fmt(xv, "%.0f") + "</text>\n";
        s += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(py(yv) + 4) +
             "\" text-anchor=\"end\" font-size=\"11\">" + fmt(yv, "%.3g") + "</text>\n";
    }
    s += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(height - 12) +
         "\" text-anchor=\"middle\" font-size=\"12\">scaled time variable T (degrees)</text>\n";
    s += "<text x=\"18\" y=\"" + fmt(top + ph / 2) + "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 " +
         fmt(top + ph / 2) + ")\">" + column.name + "</text>\n";

    for (std::size_t q = 0; q < column.per_kappa.size(); ++q) {
        const char* colour = palette[q % palette.size()];
        s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < series.t_deg.size(); ++k) {
            if (k) s += " ";
            s += fmt(px(series.t_deg[k])) + "," + fmt(py(column.per_kappa[q][k]));
        }
        s += "\"/>\n";
        const double ly = top + 14 + 18.0 * static_cast<double>(q);
        s += "<line x1=\"" + fmt(left + pw + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(left + pw + 36) +
             "\" y2=\"" + fmt(ly) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + fmt(left + pw + 42) + "\" y=\"" + fmt(ly + 4) + "\" font-size=\"11\">kappa = " +
             format_g12(series.kappas[q]) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

namespace detail {
inline std::filesystem::path write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    return path;
}

inline void require_nonempty(const ObservableSeries& series) {
    if (series.t_deg.empty() || series.kappas.empty() || series.columns.empty())
        throw Error("emit: empty series");
}
} // namespace detail

/// One `<dir>/<column>.csv` per observable column.
inline std::vector<std::filesystem::path> emit_csv(const ObservableSeries& series, const std::filesystem::path& dir) {
    detail::require_nonempty(series);
    std::vector<std::filesystem::path> written;
    for (const auto& c : series.columns) written.push_back(detail::write_text(dir / (c.name + ".csv"), csv_text(series, c)));
    return written;
}

inline std::vector<std::filesystem::path> emit_svg(const ObservableSeries& series, const std::filesystem::path& dir) {
    detail::require_nonempty(series);
    std::vector<std::filesystem::path> written;
    for (const auto& c : series.columns) written.push_back(detail::write_text(dir / (c.name + ".svg"), svg_text(series, c)));
    return written;
}

} // namespace tridecoh
