#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sbpsat/cli.hpp"
#include "sbpsat/io.hpp"

using namespace sbpsat;
namespace fs = std::filesystem;

namespace {
std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ErrorRecord record(int n, double err, double div) {
    ErrorRecord r;
    r.nx = r.ny = n;
    r.grid = std::to_string(n) + "x" + std::to_string(n);
    r.error_percent = err;
    r.div_l2 = div;
    r.energy = 1.0;
    r.time = 0.5;
    return r;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("sbpsat_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

cli::RunConfig parse(std::vector<std::string> args) {
    args.insert(args.begin(), "sbpsat");
    return cli::parse_args(args);
}
} // namespace

TEST(ErrorTable, SingleRecord) {
    const auto l = lines_of(format_error_table({record(10, 1.5, 0.25)}));
    ASSERT_EQ(l.size(), 2u);
    EXPECT_EQ(l[0], "grid,error_percent,error_rate,div_l2,div_rate,energy,time");
    EXPECT_EQ(l[1], "10x10,1.5,,0.25,,1,0.5");
}

TEST(ErrorTable, RatesAndOrdering) {
    const auto l = lines_of(format_error_table(
        {record(80, 0.25, 0.5), record(10, 16, 4), record(40, 1, 1), record(20, 4, 2)}));
    ASSERT_EQ(l.size(), 5u);
    EXPECT_EQ(l[1], "10x10,16,,4,,1,0.5");
    EXPECT_EQ(l[2], "20x20,4,2,2,1,1,0.5");
    EXPECT_EQ(l[4], "80x80,0.25,2,0.5,1,1,0.5");
}

TEST(ErrorTable, FailedRowIsBlank) {
    auto bad = record(20, 0, 0);
    bad.failed = true;
    const auto l = lines_of(format_error_table({record(10, 4, 1), bad, record(40, 1, 0.5)}));
    EXPECT_EQ(l[2], "20x20,,,,,,");
    EXPECT_EQ(l[3], "40x40,1,,0.5,,1,0.5");
    EXPECT_THROW(format_error_table({}), Error);
}

TEST(ErrorTable, WritesFile) {
    const auto d = scratch_dir("table");
    write_error_table({record(10, 1, 1)}, (d / "e.csv").string());
    EXPECT_EQ(slurp(d / "e.csv"), format_error_table({record(10, 1, 1)}));
    EXPECT_THROW(write_error_table({record(10, 1, 1)}, (d / "missing" / "e.csv").string()), Error);
}

TEST(FieldDump, LayoutAndMetadata) {
    const Grid2D g(0, 1, 0, 1, 3, 3);
    const auto v = MagneticField::sample(g, [](double x, double y) { return Vec2{3.0 * x, 4.0 * x + y}; });
    std::vector<double> div(g.size(), 0.0);
    div[4] = 7.0;
    const auto d = scratch_dir("dump");
    const auto path = (d / "f.csv").string();
    write_field_dump(v, g, div, 0.25, path, {1, "sbp4"});

    const auto l = lines_of(slurp(path));
    ASSERT_EQ(l.size(), 10u);
    EXPECT_EQ(l[0], "x,y,B1,B2,Bmag,divP");
    EXPECT_EQ(l[1], "0,0,0,0,0,0");
    EXPECT_EQ(l[5], "0.5,0.5,1.5,2.5,2.915475947,7");
    EXPECT_EQ(l[7], "1,0,3,4,5,0");
    EXPECT_EQ(slurp(path + ".meta"), "# experiment=1 scheme=sbp4 t=0.25 grid=2x2\n");

    write_field_dump(v, g, div, 0.25, (d / "g.csv").string(), {1, "sbp4"});
    EXPECT_EQ(slurp(path), slurp(d / "g.csv"));
}

TEST(FieldDump, ShapeErrors) {
    const Grid2D g(0, 1, 0, 1, 3, 3);
    const std::vector<double> short_div(4);
    EXPECT_THROW(write_field_dump(MagneticField(g), g, short_div, 0, "unused.csv"), DimensionError);
}

TEST(Cli, Defaults) {
    const auto c = parse({});
    EXPECT_EQ(c.experiment, 1);
    EXPECT_EQ(c.scheme, Scheme::sbp2);
    EXPECT_EQ(c.nx, 100);
    EXPECT_EQ(c.ny, 100);
    EXPECT_EQ(c.cfl, 0.45);
    EXPECT_EQ(c.integrator, Integrator::rk2);
    EXPECT_FALSE(c.study);
}

TEST(Cli, ParsesRun) {
    const auto c = parse({"--experiment", "1", "--scheme", "sbp4", "--nx", "160", "--ny", "160"});
    EXPECT_EQ(c.scheme, Scheme::sbp4);
    EXPECT_EQ(c.nx, 160);
    EXPECT_EQ(c.ny, 160);
    EXPECT_EQ(c.scheme_config().order, 4);
    EXPECT_NEAR(c.integrator_config().t_final, 2.0 * std::numbers::pi, 1e-15);
    EXPECT_EQ(parse({"--nx", "40"}).ny, 40);
    EXPECT_EQ(parse({"--nx", "40", "--ny", "20"}).ny, 20);
}

TEST(Cli, DissipationChoices) {
    const auto a = parse({"--experiment", "3", "--scheme", "sbp2", "--dissipation", "accurate"});
    EXPECT_EQ(a.scheme_config().dissipation, DissipationScaling::accurate);
    const auto n = parse({"--experiment", "3", "--scheme", "sbp2", "--dissipation", "none"});
    EXPECT_FALSE(n.scheme_config().dissipation);
    EXPECT_EQ(parse({"--experiment", "3", "--scheme", "sbp1"}).scheme_config().dissipation,
              DissipationScaling::upwind);
    EXPECT_THROW(parse({"--scheme", "sbp1", "--dissipation", "accurate"}), cli::UsageError);
}

TEST(Cli, Rejections) {
    EXPECT_THROW(parse({"--scheme", "sbp9"}), cli::UsageError);
    EXPECT_THROW(parse({"--experiment", "4"}), cli::UsageError);
    EXPECT_THROW(parse({"--bogus"}), cli::UsageError);
    EXPECT_THROW(parse({"--cfl", "0"}), cli::UsageError);
    EXPECT_THROW(parse({"--cfl", "1.5"}), cli::UsageError);
    EXPECT_THROW(parse({"--theta", "0.4"}), cli::UsageError);
    EXPECT_THROW(parse({"--experiment", "3", "--rotations", "2"}), cli::UsageError);
    EXPECT_THROW(parse({"--study", "--rotations", "2"}), cli::UsageError);
    EXPECT_THROW(parse({"--scheme", "sbp4", "--nx", "5"}), cli::UsageError);
    EXPECT_THROW(parse({"--nx", "-3"}), cli::UsageError);
}

TEST(Cli, HelpListsExamplesThatParse) {
    std::string help;
    try {
        parse({"--help"});
        FAIL() << "expected help";
    } catch (const cli::HelpRequested& h) {
        help = h.what();
    }
    int examples = 0;
    for (const auto& line : lines_of(help)) {
        const auto pos = line.find("sbpsat --");
        if (pos == std::string::npos) continue;
        std::vector<std::string> args;
        std::istringstream in(line.substr(pos));
        for (std::string w; in >> w;) args.push_back(w);
        EXPECT_NO_THROW(cli::parse_args(args)) << line;
        ++examples;
    }
    EXPECT_GE(examples, 4);
}
