#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "dksphere/io.hpp"

using namespace dksphere;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result run(const RunConfig& c)
{
    std::ostringstream out, err;
    const int s = run_command(c, out, err);
    return {s, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) {
        v.push_back(l);
    }
    return v;
}

RunConfig wavefunction_config(const std::string& family, int j, int n, int grid)
{
    RunConfig c;
    c.command = Command::wavefunction;
    c.family  = family;
    c.j       = j;
    c.n       = n;
    c.grid    = grid;
    c.mass    = Rational(1);
    return c;
}

}  // namespace

TEST(SpectrumCommand, SingleFamilyCsv)
{
    RunConfig c;
    c.family = "f1";
    c.j      = 1;
    c.n_max  = 2;
    const auto r = run(c);
    ASSERT_EQ(r.status, kExitOk) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 5u);
    EXPECT_EQ(l[1], "family,j,n,p_sq,p_sq_float,eps_sq,eps,degenerate_partner");
    EXPECT_EQ(l[2], "F1,1,0,8,8,8,2.8284271247461903,F2 j=2 n=0");
    EXPECT_EQ(l[4].substr(0, 9), "F1,1,2,48");
}

TEST(SpectrumCommand, DiracFractions)
{
    RunConfig c;
    c.family = "dirac";
    c.J      = Rational(1, 2);
    c.mass   = Rational(1, 2);
    const auto r = run(c);
    ASSERT_EQ(r.status, kExitOk);
    EXPECT_EQ(lines(r.out)[2], "DIRAC,1/2,0,9/4,2.25,5/2,1.5811388300841898,");
}

TEST(SpectrumCommand, AllFamiliesJson)
{
    RunConfig c;
    c.j_max  = 2;
    c.format = Format::json;
    const auto r = run(c);
    ASSERT_EQ(r.status, kExitOk);
    const auto doc = json::parse(r.out);
    EXPECT_EQ(doc["rows"].size(), 9u);  // J0 plus four families for j = 1, 2
    EXPECT_EQ(doc["rows"][0]["family"], "J0");
    EXPECT_TRUE(doc["rows"][0]["degenerate_partner"].is_null());
}

TEST(SpectrumCommand, UsageErrors)
{
    RunConfig c;
    c.family = "f2";
    EXPECT_EQ(run(c).status, kExitUsage);  // missing --j
    c.family = "f7";
    c.j      = 1;
    EXPECT_EQ(run(c).status, kExitUsage);
    c.family = "dirac";
    EXPECT_EQ(run(c).status, kExitUsage);  // missing --J
    c.family = "f1";
    c.n      = 1;
    c.n_max  = 2;
    const auto r = run(c);
    EXPECT_EQ(r.status, kExitUsage);
    EXPECT_NE(r.err.find("--n-max"), std::string::npos);
}

TEST(WavefunctionCommand, EquatorRow)
{
    const auto r = run(wavefunction_config("f1", 1, 0, 5));
    ASSERT_EQ(r.status, kExitOk) << r.err;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 8u + 1u + 5u);
    EXPECT_EQ(l[0], "# family=F1");
    EXPECT_EQ(l[8], "r,x,K,L,M,N");
    std::istringstream row(l[11]);
    std::vector<double> v;
    for (std::string cell; std::getline(row, cell, ',');) {
        v.push_back(std::stod(cell));
    }
    ASSERT_EQ(v.size(), 6u);
    EXPECT_DOUBLE_EQ(v[0], std::numbers::pi / 2);
    EXPECT_LT(std::abs(v[1]), 1e-30);
    EXPECT_LT(std::abs(v[2]), 1e-15);
    EXPECT_NEAR(v[4], 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(WavefunctionCommand, J0Columns)
{
    auto c = wavefunction_config("j0", 0, 0, 5);
    c.j.reset();
    const auto r = run(c);
    ASSERT_EQ(r.status, kExitOk) << r.err;
    const auto l = lines(r.out);
    EXPECT_EQ(l[8], "r,x,M,N");
    const auto n_mid = std::stod(l[11].substr(l[11].rfind(',') + 1));
    EXPECT_LT(std::abs(n_mid), 1e-15);
}

TEST(WavefunctionCommand, RejectsBadRequests)
{
    auto c = wavefunction_config("all-dk", 1, 0, 5);
    EXPECT_EQ(run(c).status, kExitUsage);
    c = wavefunction_config("f1", 1, 0, 0);
    EXPECT_EQ(run(c).status, kExitUsage);
    c = wavefunction_config("f1", 1, 0, 5);
    c.eps_sign    = -1;
    c.mass        = Rational(0);
    c.lambda_sign = 1;
    // eps = -sqrt(8) with m = 0 is fine; eps + m = 0 needs p = 0 which is never a level.
    EXPECT_EQ(run(c).status, kExitOk);
}

TEST(WavefunctionCsv, RoundTripPassesFiniteDifferenceCheck)
{
    for (const auto& [fam, j, n] : {std::tuple{"f1", 1, 0}, std::tuple{"f2", 2, 1}, std::tuple{"f3", 1, 2},
                                    std::tuple{"f4", 3, 1}, std::tuple{"j0", 0, 2}}) {
        auto c = wavefunction_config(fam, j, n, 2001);
        if (std::string(fam) == "j0") {
            c.j.reset();
        }
        const auto r = run(c);
        ASSERT_EQ(r.status, kExitOk) << r.err;
        std::istringstream is(r.out);
        const auto table  = read_wavefunction_csv(is);
        const auto report = verify_wavefunction_table(table);
        EXPECT_TRUE(report.pass) << fam << " " << report.max_rel_residual;
        EXPECT_GT(report.sample_count, 1000);
    }
}

TEST(WavefunctionCsv, CorruptedTableFails)
{
    const auto r = run(wavefunction_config("f3", 1, 1, 2001));
    std::istringstream is(r.out);
    auto table = read_wavefunction_csv(is);
    table.meta["p_sq"] = "26";
    EXPECT_FALSE(verify_wavefunction_table(table).pass);
}

TEST(WavefunctionCsv, OutputIsDeterministic)
{
    const auto a = run(wavefunction_config("f2", 2, 2, 301));
    const auto b = run(wavefunction_config("f2", 2, 2, 301));
    EXPECT_EQ(a.out, b.out);
}

TEST(VerifyCommand, AllSuiteReportsJson)
{
    RunConfig c;
    c.command = Command::verify;
    c.j       = 1;
    c.n       = 1;
    c.mass    = Rational(1);
    const auto r = run(c);
    ASSERT_EQ(r.status, kExitOk) << r.out;
    const auto doc = json::parse(r.out);
    EXPECT_TRUE(doc["pass"].get<bool>());
    const auto& first = doc["checks"][0];
    for (const char* key : {"check_name", "pass", "max_rel_residual", "tolerance", "samples", "worst_points"}) {
        EXPECT_TRUE(first.contains(key)) << key;
    }
    EXPECT_EQ(doc["checks"].size(), 4u * 4u + 2u + 2u);  // K4, M4, system, companion per family
}

TEST(VerifyCommand, SuiteSelectionAndErrors)
{
    RunConfig c;
    c.command = Command::verify;
    c.suite   = "j0";
    c.j       = 0;
    c.n       = 2;
    c.mass    = Rational(1);
    c.lambda_sign = -1;
    EXPECT_EQ(run(c).status, kExitOk);
    c.suite = "factorization";
    EXPECT_EQ(run(c).status, kExitUsage);
    c.suite = "nonsense";
    c.j     = 1;
    EXPECT_EQ(run(c).status, kExitUsage);
    c.suite  = "wronskian";
    c.format = Format::csv;
    const auto r = run(c);
    EXPECT_EQ(r.status, kExitOk);
    EXPECT_EQ(lines(r.out).size(), 4u);
}

TEST(OracleCommand, CompareWithClosedForms)
{
    RunConfig c;
    c.command           = Command::oracle;
    c.j                 = 1;
    c.compare           = true;
    c.shooting.eps_min  = 0.5;
    c.shooting.eps_max  = 4.5;
    const auto r = run(c);
    ASSERT_EQ(r.status, kExitOk) << r.out;
    const auto doc = json::parse(r.out);
    EXPECT_EQ(doc["comparison"]["matched"].size(), 6u);
    EXPECT_EQ(doc["eigenvalues"][0]["family"], "F2 j=1 n=0");

    c.shooting.eps_step = 0.0;
    EXPECT_EQ(run(c).status, kExitUsage);
    c.j = -1;
    c.shooting.eps_step = 0.01;
    EXPECT_EQ(run(c).status, kExitUsage);
}

TEST(OracleCommand, CoarseScanMissesLevels)
{
    RunConfig c;
    c.command          = Command::oracle;
    c.j                = 1;
    c.compare          = true;
    c.shooting.eps_min = 0.5;
    c.shooting.eps_max = 4.5;
    c.shooting.eps_step = 1.0;
    EXPECT_EQ(run(c).status, kExitCheckFailed);
}

TEST(DegeneracyCommand, DefaultRange)
{
    RunConfig c;
    c.command = Command::degeneracy;
    const auto r = run(c);
    ASSERT_EQ(r.status, kExitOk);
    const auto l = lines(r.out);
    EXPECT_EQ(l[0], "# degeneracy j_max=5 n_max=5 pairs=48");
    EXPECT_EQ(l.size(), 2u + 48u);
    EXPECT_EQ(l[2], "F2,2,F1,1,0,8,true");
    c.j_max = 1;
    EXPECT_EQ(run(c).status, kExitUsage);
}
