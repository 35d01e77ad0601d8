// Drives the polya binary as a subprocess.

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "reference_values.hpp"

namespace {

struct run_result
{
    int status = -1;
    std::string out;
    std::string err;
};

run_result run(const std::string& args)
{
    const std::string err_path = testing::TempDir() + "polya_cli_stderr.txt";
    const std::string cmd = std::string(POLYA_CLI_PATH) + " " + args + " 2>" + err_path;
    run_result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    if (FILE* f = std::fopen(err_path.c_str(), "r")) {
        while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0)
            r.err.append(buf.data(), n);
        std::fclose(f);
    }
    return r;
}

std::vector<std::string> lines_of(const std::string& s)
{
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
        v.push_back(line);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string cell; std::getline(in, cell, sep);)
        v.push_back(cell);
    return v;
}

// Column `name` of the first data row of a CSV table.
double csv_value(const std::string& table, const std::string& name)
{
    const auto rows = lines_of(table);
    const auto header = split(rows.at(0), ',');
    const auto row = split(rows.at(1), ',');
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return std::stod(row.at(i));
    ADD_FAILURE() << "no column " << name;
    return std::nan("");
}

constexpr double p3 = 0.3405373296;

} // namespace

TEST(Cli, PdAllThreeMethodsAgree)
{
    const auto r = run("pd --d 3 --method all --format json");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto rows = lines_of(r.out);
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& line : rows) {
        const auto j = nlohmann::json::parse(line);
        EXPECT_EQ(j.at("d").get<int>(), 3);
        EXPECT_NEAR(j.at("value").get<double>(), p3, 1e-9) << line;
        EXPECT_LT(j.at("max_rel_diff").get<double>(), 1e-9);
    }
}

TEST(Cli, PdSeriesCsvRange)
{
    const auto r = run("pd --d 3..5 --method series --format csv");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto rows = lines_of(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "d,method,value,error_estimate,elapsed_ms");
    for (int d = 3; d <= 5; ++d) {
        const auto cells = split(rows[d - 2], ',');
        ASSERT_EQ(cells.size(), 5u);
        EXPECT_EQ(cells[0], std::to_string(d));
        EXPECT_EQ(cells[1], "series");
        EXPECT_NEAR(std::stod(cells[2]), 1 - 1 / polya::reference::u_by_dimension[d], 1e-11);
    }
}

TEST(Cli, PdRejectsRecurrentDimensions)
{
    for (const char* d : {"1", "2", "2..4"}) {
        const auto r = run(std::string("pd --d ") + d);
        EXPECT_EQ(r.status, 1) << d;
        EXPECT_TRUE(r.out.empty());
        EXPECT_NE(r.err.find("not convergent for d=1,2"), std::string::npos) << r.err;
    }
}

TEST(Cli, PdGammaOnlyAtThree)
{
    EXPECT_EQ(run("pd --d 4 --method gamma").status, 1);
    const auto r = run("pd --d 3 --method gamma");
    ASSERT_EQ(r.status, 0);
    EXPECT_NEAR(csv_value(r.out, "value"), p3, 1e-10);
}

TEST(Cli, PdToleranceBreachExitsThree)
{
    // Series and quadrature differ by a few 1e-12 at d = 3, far above 10 x 1e-15.
    const auto r = run("pd --d 3 --method all --tolerance 1e-15");
    EXPECT_EQ(r.status, 3) << r.out << r.err;
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, FcExamples)
{
    auto r = run("fc --a 1 --b 0.5 --c 1,1,1 --x 0.1111111111,0.1111111111,0.1111111111");
    ASSERT_EQ(r.status, 0) << r.err;
    // The rounded argument sits just inside the boundary, where the function has a sqrt singularity.
    EXPECT_NEAR(csv_value(r.out, "value"), polya::reference::u_3, 2e-5);

    r = run("fc --a 1 --b 1 --c 2 --x 0.5");
    ASSERT_EQ(r.status, 0);
    EXPECT_NEAR(csv_value(r.out, "value"), 2 * std::log(2.0), 1e-10);

    r = run("fc --a 1 --b 0.5 --c 1,1 --x 0,0 --format json");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out).at("value").get<double>(), 1.0);
}

TEST(Cli, FcLengthMismatchIsUsageError)
{
    const auto r = run("fc --a 1 --b 0.5 --c 1,1 --x 0.1");
    EXPECT_EQ(r.status, 1);
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, FcBadParameterIsConstraintError)
{
    EXPECT_EQ(run("fc --a 1 --b 0.5 --c -1 --x 0.1").status, 2);
}

TEST(Cli, FcWarnsOnBoundary)
{
    const auto r = run("fc --a 1 --b 0.5 --c 1,1,1 --x 0.25,0.25,0.25 --nmax 2000");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    EXPECT_FALSE(r.out.empty());
}

TEST(Cli, LaplaceCheck)
{
    const auto r = run("laplace-check --count 50 --seed 1");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_LT(csv_value(r.out, "max_rel_diff"), 1e-6);
    EXPECT_EQ(run("laplace-check --count 5 --seed 1 --tolerance 1e-30").status, 3);
}

TEST(Cli, MonteCarloSmall)
{
    const auto r = run("mc --d 3 --walks 20000 --horizon 20000 --seed 7 --format json");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("method").get<std::string>(), "mc");
    const double se = j.at("error_estimate").get<double>();
    // Horizon 2e4 leaves a one-sided bias near 0.3/sqrt(2e4).
    EXPECT_LT(std::fabs(j.at("value").get<double>() - p3), 4 * se + 0.3 / std::sqrt(2e4));
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, MonteCarloExitCodes)
{
    EXPECT_EQ(run("mc --d 3 --walks 0").status, 1);
    EXPECT_EQ(run("mc --d 3 --walks 10000000 --horizon 10000000").status, 4);
    EXPECT_EQ(run("mc --d 3 --walks 1000 --horizon 100 --seed 1 --tolerance 1e-9").status, 3);
}

TEST(Cli, WatsonNormalised)
{
    const auto r = run("watson --d 3 --samples 1000000 --seed 1 --normalize");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NEAR(csv_value(r.out, "value"), polya::reference::u_3, 5e-3);
    const auto raw = run("watson --d 3 --samples 1000000 --seed 1 --no-normalize");
    ASSERT_EQ(raw.status, 0);
    EXPECT_NEAR(csv_value(raw.out, "value") * 3 / std::pow(2 * M_PI, 3), csv_value(r.out, "value"), 1e-12);
    EXPECT_EQ(run("watson --d 2").status, 1);
}

TEST(Cli, IdempotentOutput)
{
    for (const char* args : {"pd --d 3..6 --method all", "pd --d 4 --method quad --format json",
                             "fc --a 1 --b 0.5 --c 1,1 --x 0.1,0.2", "laplace-check --count 10 --seed 4",
                             "mc --d 4 --walks 3000 --horizon 3000 --seed 2 --workers 3",
                             "watson --d 4 --samples 100000 --seed 3"}) {
        const auto a = run(args), b = run(args);
        EXPECT_EQ(a.status, 0) << args;
        EXPECT_EQ(a.out, b.out) << args;
    }
}

TEST(Cli, WorkersDoNotChangeMonteCarlo)
{
    const auto one = run("mc --d 3 --walks 4000 --horizon 4000 --seed 5 --workers 1");
    const auto four = run("mc --d 3 --walks 4000 --horizon 4000 --seed 5 --workers 4");
    EXPECT_EQ(one.out, four.out);
}

TEST(Cli, JsonMatchesCsv)
{
    const auto csv = run("pd --d 3..4 --method quad");
    const auto json = run("pd --d 3..4 --method quad --format json");
    const auto rows = lines_of(csv.out);
    const auto objs = lines_of(json.out);
    ASSERT_EQ(rows.size(), 3u);
    ASSERT_EQ(objs.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto cells = split(rows[i + 1], ',');
        const auto j = nlohmann::json::parse(objs[i]);
        EXPECT_EQ(std::stod(cells[2]), j.at("value").get<double>());
        EXPECT_EQ(std::stod(cells[3]), j.at("error_estimate").get<double>());
    }
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run("").status, 1);
    EXPECT_EQ(run("nosuch").status, 1);
    EXPECT_EQ(run("pd").status, 1);
    EXPECT_EQ(run("pd --d 3 --method simpson").status, 1);
    EXPECT_EQ(run("pd --d 5..3").status, 1);
    EXPECT_EQ(run("pd --d 65").status, 1);
    EXPECT_EQ(run("pd --d x").status, 1);
    EXPECT_EQ(run("pd --d 3 --format xml").status, 1);
    EXPECT_EQ(run("pd --help").status, 0);
}
