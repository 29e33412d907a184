#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include <fpade/error.hpp>

#include "commands.hpp"
#include "config.hpp"

using namespace fp;

namespace {

std::string read_config(const std::string& name)
{
    std::ifstream in(std::string(FPADE_CONFIG_DIR) + "/" + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fpade::Error parse_error(const std::string& text, Command c)
{
    try {
        (void)parse_config(text, c);
    } catch (const fpade::Error& e) {
        return e;
    }
    ADD_FAILURE() << "config accepted";
    return fpade::Error(fpade::ErrorKind::numerical, "none");
}

bool mentions(const fpade::Error& e, const std::string& what)
{
    if (std::string(e.what()).find(what) != std::string::npos) return true;
    for (const auto& d : e.details())
        if (d.find(what) != std::string::npos) return true;
    return false;
}

} // namespace

TEST(Cli, CommandNames)
{
    for (Command c : {Command::orthopoly, Command::linear, Command::nonlinear, Command::equilibrium, Command::zeros,
                      Command::rates})
        EXPECT_EQ(parse_command(to_string(c)), c);
    EXPECT_FALSE(parse_command("pade").has_value());
}

TEST(Cli, ParsesEveryReferenceConfig)
{
    const auto lin = parse_config(read_config("linear.json"), Command::linear);
    ASSERT_TRUE(lin.multi_index.has_value());
    EXPECT_EQ(lin.multi_index->values(), (std::vector<int>{3, 2}));
    EXPECT_EQ(lin.system->m(), 2u);

    const auto non = parse_config(read_config("nonlinear.json"), Command::nonlinear);
    EXPECT_EQ(non.solver.tol, 1e-11);

    const auto eq = parse_config(read_config("equilibrium.json"), Command::equilibrium);
    ASSERT_TRUE(eq.equilibrium.has_value());
    EXPECT_EQ(eq.equilibrium->kind, fpade::InteractionKind::C2);
    EXPECT_EQ(eq.equilibrium->grid_size, 200u);

    const auto rates = parse_config(read_config("rates.json"), Command::rates);
    EXPECT_EQ(rates.test_points.size(), 6u);
    EXPECT_EQ(rates.test_points[1], fpade::Complex(0.0, 0.5));
    EXPECT_EQ(rates.equilibrium->kind, fpade::InteractionKind::C2);

    EXPECT_NO_THROW((void)parse_config(read_config("zeros.json"), Command::zeros));
    EXPECT_NO_THROW((void)parse_config(read_config("orthopoly.json"), Command::orthopoly));
}

TEST(Cli, CommandMismatchRejected)
{
    const auto e = parse_error(read_config("linear.json"), Command::nonlinear);
    EXPECT_EQ(e.kind(), fpade::ErrorKind::validation);
    EXPECT_TRUE(mentions(e, "/command"));
}

TEST(Cli, OverlapNamesBothIntervals)
{
    const auto e = parse_error(read_config("invalid/overlap.json"), Command::linear);
    EXPECT_EQ(e.kind(), fpade::ErrorKind::validation);
    EXPECT_TRUE(mentions(e, "[0.5, 2]"));
}

TEST(Cli, RaySumRejected)
{
    const auto e = parse_error(read_config("invalid/ray_sum.json"), Command::rates);
    EXPECT_EQ(e.kind(), fpade::ErrorKind::validation);
    EXPECT_TRUE(mentions(e, "sum"));
}

TEST(Cli, DegreeCeiling)
{
    const auto e = parse_error(read_config("invalid/ceiling.json"), Command::linear);
    EXPECT_TRUE(mentions(e, "|n| = 80"));
}

TEST(Cli, MalformedJsonReportsPosition)
{
    const auto e = parse_error(read_config("invalid/malformed.json"), Command::linear);
    EXPECT_EQ(e.kind(), fpade::ErrorKind::validation);
    EXPECT_TRUE(mentions(e, "line 3"));
}

TEST(Cli, ProblemsAreAggregated)
{
    const auto e = parse_error(read_config("invalid/many_errors.json"), Command::linear);
    EXPECT_GE(e.details().size(), 6u);
    EXPECT_TRUE(mentions(e, "/unexpected"));
    EXPECT_TRUE(mentions(e, "colour"));
    EXPECT_TRUE(mentions(e, "triangle"));
    EXPECT_TRUE(mentions(e, "/solver/damping"));
}

TEST(Cli, UnknownKeyRejected)
{
    const auto e = parse_error(R"({"system": "reference", "multi_index": [1, 1], "tolerance": 1})", Command::linear);
    EXPECT_TRUE(mentions(e, "/tolerance"));
}

TEST(Cli, TestPointsTooCloseRejected)
{
    std::string text = read_config("rates.json");
    text.replace(text.find("[0, 0.5]"), 8, "[0, 0.05]");
    EXPECT_EQ(parse_error(text, Command::rates).kind(), fpade::ErrorKind::validation);
}

TEST(Cli, OverridesApply)
{
    auto eq = parse_config(read_config("equilibrium.json"), Command::equilibrium);
    Overrides o;
    o.grid_size = 120;
    o.tol = 1e-5;
    apply_overrides(eq, o);
    EXPECT_EQ(eq.equilibrium->grid_size, 120u);
    EXPECT_EQ(eq.equilibrium->tol, 1e-5);

    auto lin = parse_config(read_config("linear.json"), Command::linear);
    Overrides s;
    s.tol = 1e-9;
    s.damping = 0.5;
    s.max_iter = 17;
    apply_overrides(lin, s);
    const auto opt = solver_options(lin, fpade::ApproximantKind::linear);
    EXPECT_EQ(opt.tol, 1e-9);
    EXPECT_EQ(opt.damping, 0.5);
    EXPECT_EQ(opt.max_iter, 17);

    Overrides bad;
    bad.damping = 3.0;
    EXPECT_THROW(apply_overrides(lin, bad), fpade::Error);
}

TEST(Cli, RunsAreDeterministic)
{
    for (const auto& [name, cmd] : {std::pair{"linear.json", Command::linear}, {"orthopoly.json", Command::orthopoly},
                                    {"nonlinear.json", Command::nonlinear}}) {
        const auto cfg = parse_config(read_config(name), cmd);
        const auto a = run_command(cfg);
        const auto b = run_command(cfg);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].name, b[i].name);
            EXPECT_EQ(a[i].content, b[i].content) << a[i].name;
        }
    }
}

TEST(Cli, ArtifactsWrittenAtomically)
{
    const auto dir = std::filesystem::temp_directory_path() / "fpade_cli_test";
    std::filesystem::remove_all(dir);
    write_artifacts(dir, {{"a.txt", "alpha\n"}, {"b.csv", "x,y\n"}});
    std::ifstream in(dir / "a.txt");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "alpha");
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        EXPECT_EQ(entry.path().filename().string().find(".tmp"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(Cli, RealFormatting)
{
    EXPECT_EQ(format_real(0.5), "0.5");
    EXPECT_EQ(format_real(std::nan("")), "nan");
    EXPECT_EQ(format_real(-INFINITY), "-inf");
    EXPECT_EQ(format_real(0.1), "0.10000000000000001");
}
