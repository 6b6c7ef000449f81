#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tridecoh/scenario.hpp"

using namespace tridecoh;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("tridecoh_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

double value_at(const ObservableSeries& s, const std::string& col, std::size_t kappa_idx, double t_deg) {
    for (std::size_t k = 0; k < s.t_deg.size(); ++k)
        if (std::abs(s.t_deg[k] - t_deg) < 1e-9) return s.column(col).per_kappa.at(kappa_idx).at(k);
    ADD_FAILURE() << "no grid point at " << t_deg;
    return NAN;
}

} // namespace

TEST(Config, EmptyTextGivesDefaults) {
    const auto cfg = parse_config_text("");
    EXPECT_EQ(cfg.omega_rabi_e6rad, 8.95);
    EXPECT_EQ(cfg.alpha, 4.0);
    EXPECT_EQ(cfg.bath_cutoff_e6rad, 1200.0);
    EXPECT_EQ(cfg.temperature_k, 0.03);
    EXPECT_EQ(cfg.kappas, (std::vector<double>{0.0, 0.001, 0.01, 0.02, 0.05, 0.1}));
    EXPECT_EQ(cfg.t_max_deg, 180.0);
    EXPECT_EQ(cfg.grid_points, 721);
    EXPECT_EQ(cfg.fock_cutoffs[0], 6);
    EXPECT_EQ(cfg.fock_cutoffs[1], 6);
}

TEST(Config, KeyValueSyntax) {
    const auto cfg = parse_config_text(
        "# sweep\n"
        "alpha = 3.5\n"
        "kappas = [0, 0.02]   # two curves\n"
        "grid_points: 11\n"
        "outputs = pghz, negativity_A\n"
        "fock_cutoffs = [5, 7]\n");
    EXPECT_EQ(cfg.alpha, 3.5);
    EXPECT_EQ(cfg.kappas, (std::vector<double>{0.0, 0.02}));
    EXPECT_EQ(cfg.grid_points, 11);
    EXPECT_EQ(cfg.outputs, (std::vector<std::string>{"pghz", "negativity_A"}));
    EXPECT_EQ(cfg.fock_cutoffs[1], 7);
}

TEST(Config, JsonSyntax) {
    const auto cfg = parse_config_text(R"({"kappas": [0.1], "t_max_deg": 90, "outputs": ["inversion"]})");
    EXPECT_EQ(cfg.kappas, std::vector<double>{0.1});
    EXPECT_EQ(cfg.t_max_deg, 90.0);
    EXPECT_EQ(cfg.outputs, std::vector<std::string>{"inversion"});
    EXPECT_THROW(parse_config_text(R"({"kapas": [0.1]})"), ParseError);
    EXPECT_THROW(parse_config_text("{ not json"), ParseError);
}

TEST(Config, Diagnostics) {
    try {
        parse_config_text("alpha = 4\nkapa = 0.1\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
        EXPECT_NE(msg.find("kapa"), std::string::npos) << msg;
    }
    EXPECT_THROW(parse_config_text("alpha = four\n"), ParseError);
    EXPECT_THROW(parse_config_text("alpha 4\n"), ParseError);
    EXPECT_THROW(parse_config_text("grid_points = 10.5\n"), ParseError);
    EXPECT_THROW(parse_config_text("alpha = 4\nalpha = 5\n"), ParseError);
}

TEST(Config, InvariantViolations) {
    EXPECT_THROW(parse_config_text("kappas = [-0.1]\n"), ValidationError);
    EXPECT_THROW(parse_config_text("grid_points = 1\n"), ValidationError);
    EXPECT_THROW(parse_config_text("t_max_deg = 0\n"), ValidationError);
    EXPECT_THROW(parse_config_text("outputs = [fidelity]\n"), ValidationError);
    try {
        parse_config_text("grid_points = 1\nt_max_deg = -5\n");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("grid_points"), std::string::npos);
        EXPECT_NE(msg.find("t_max_deg"), std::string::npos);
    }
}

TEST(Config, FileErrors) {
    EXPECT_THROW(parse_config("/nonexistent/tridecoh.cfg"), IoError);
    const auto dir = scratch_dir("cfg");
    std::ofstream(dir / "bad.cfg") << "bogus = 1\n";
    try {
        parse_config(dir / "bad.cfg");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("bad.cfg"), std::string::npos);
    }
}

TEST(Presets, FigureContents) {
    const auto f1 = figure_preset(1);
    EXPECT_EQ(f1.kappas, (std::vector<double>{0.0, 0.001, 0.01, 0.1}));
    EXPECT_EQ(f1.outputs, std::vector<std::string>{"pghz"});
    EXPECT_EQ(figure_preset(2).outputs, std::vector<std::string>{"inversion"});
    const auto f3 = figure_preset(3);
    EXPECT_EQ(f3.kappas, (std::vector<double>{0.0, 0.001, 0.01, 0.02, 0.05, 0.1}));
    EXPECT_EQ(f3.outputs, std::vector<std::string>{"negativity_A"});
    EXPECT_EQ(figure_preset(4).outputs, (std::vector<std::string>{"negativity_B", "negativity_C"}));
    EXPECT_EQ(figure_preset(5).outputs, std::vector<std::string>{"linear_entropy_A"});
    EXPECT_EQ(figure_preset(6).outputs, (std::vector<std::string>{"linear_entropy_B", "linear_entropy_C"}));
    EXPECT_THROW(figure_preset(7), UnknownFigure);
    EXPECT_THROW(figure_preset(0), UnknownFigure);
}

TEST(Run, GhzPointsAndInversion) {
    ScenarioConfig cfg;
    cfg.kappas = {0.0};
    cfg.outputs = {"pghz", "inversion"};
    const auto s = run_scenario(cfg);
    EXPECT_EQ(s.t_deg.size(), 721u);
    EXPECT_NEAR(value_at(s, "pghz", 0, 45.0), 1.0, 1e-9);
    EXPECT_NEAR(value_at(s, "pghz", 0, 135.0), 0.0, 1e-9);
    EXPECT_NEAR(value_at(s, "inversion", 0, 0.0), 1.0, 1e-12);
}

TEST(Run, ExpandsEntanglementOutputs) {
    ScenarioConfig cfg;
    cfg.kappas = {0.0, 0.01};
    cfg.grid_points = 9;
    cfg.outputs = {"linear_entropy", "negativity_B", "leakage"};
    const auto s = run_scenario(cfg);
    for (const char* name : {"linear_entropy_A", "linear_entropy_B", "linear_entropy_C", "negativity_B", "leakage"})
        EXPECT_TRUE(s.has(name)) << name;
    EXPECT_FALSE(s.has("pghz"));
    for (const auto& c : s.columns) {
        ASSERT_EQ(c.per_kappa.size(), 2u);
        for (const auto& row : c.per_kappa) {
            ASSERT_EQ(row.size(), 9u);
            for (double v : row) EXPECT_TRUE(std::isfinite(v));
        }
    }
    // leakage is a property of the closed dynamics and does not depend on kappa
    EXPECT_EQ(s.column("leakage").per_kappa[0], s.column("leakage").per_kappa[1]);
}

TEST(Run, PhysicalAndHandScaledInputsAgree) {
    ScenarioConfig cfg;
    cfg.kappas = {0.0, 0.001, 0.1};
    cfg.grid_points = 61;
    cfg.t_max_deg = 90.0;
    const auto physical = run_scenario(cfg);

    ScaledScenario hand;
    hand.alpha = 4.0;
    hand.bath_cutoff = 1200.0 * std::sqrt(15.0) / 8.95;
    hand.beta = 1.054571817e-34 / (1.380649e-23 * 0.03) * 8.95e6 / std::sqrt(15.0);
    hand.kappas = cfg.kappas;
    hand.t_deg = degree_grid(90.0, 61);
    hand.fock_cutoffs = cfg.fock_cutoffs;
    hand.outputs = cfg.outputs;
    const auto scaled = run_scaled(hand);

    ASSERT_EQ(physical.columns.size(), scaled.columns.size());
    for (std::size_t c = 0; c < physical.columns.size(); ++c)
        for (std::size_t q = 0; q < cfg.kappas.size(); ++q)
            for (std::size_t k = 0; k < physical.t_deg.size(); ++k)
                EXPECT_NEAR(physical.columns[c].per_kappa[q][k], scaled.columns[c].per_kappa[q][k], 1e-9);
}

TEST(Emit, CsvFormatAndDeterminism) {
    auto cfg = figure_preset(1);
    cfg.grid_points = 37;
    const auto dir = scratch_dir("csv");
    const auto first = run_scenario(cfg);
    const auto files = emit_csv(first, dir / "a");
    ASSERT_EQ(files.size(), 1u);
    const auto text = slurp(files[0]);
    EXPECT_EQ(text.rfind("T_deg,kappa,pghz\n", 0), 0u);
    EXPECT_EQ(count(text, "\n"), 1u + 4u * 37u);
    EXPECT_EQ(count(text, "\r"), 0u);
    EXPECT_NE(text.find("\n45,0,1\n"), std::string::npos);

    emit_csv(run_scenario(cfg), dir / "b");
    EXPECT_EQ(text, slurp(dir / "b" / "pghz.csv"));
    emit_csv(first, dir / "a");
    EXPECT_EQ(text, slurp(files[0]));
}

TEST(Emit, SinglePointCsv) {
    ObservableSeries s;
    s.t_deg = {0.0};
    s.kappas = {0.0};
    s.columns.push_back({"pghz", {{0.5}}});
    EXPECT_EQ(csv_text(s, s.columns[0]), "T_deg,kappa,pghz\n0,0,0.5\n");
    EXPECT_EQ(format_g12(1.0 / 3.0), "0.333333333333");
}

TEST(Emit, SvgHasOnePolylinePerKappa) {
    auto cfg = figure_preset(1);
    cfg.grid_points = 37;
    const auto dir = scratch_dir("svg");
    const auto files = emit_svg(run_scenario(cfg), dir);
    ASSERT_EQ(files.size(), 1u);
    const auto text = slurp(files[0]);
    EXPECT_EQ(count(text, "<polyline"), 4u);
    EXPECT_NE(text.find("as a function of scaled time variable T"), std::string::npos);
    EXPECT_NE(text.find("version=\"1.1\""), std::string::npos);
}

TEST(Emit, Errors) {
    ObservableSeries empty;
    EXPECT_THROW(emit_csv(empty, scratch_dir("empty")), Error);
    ObservableSeries s;
    s.t_deg = {0.0};
    s.kappas = {0.0};
    s.columns.push_back({"pghz", {{0.5}}});
    const auto dir = scratch_dir("io");
    std::ofstream(dir / "blocker") << "x";
    EXPECT_THROW(emit_csv(s, dir / "blocker"), IoError);
}
