#include <gtest/gtest.h>

#include <sstream>

#include "pbox/cli.hpp"

using namespace pbox;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;

    Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = cli::dispatch(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string sample(const char* name) { return std::string(PBOX_SAMPLES_DIR) + "/" + name; }

// Report minus its timing field, for byte comparisons.
std::string stable(const Run& r)
{
    auto j = r.json();
    j.erase("timing_ms");
    return j.dump();
}

} // namespace

TEST(Cli, CheckE1OnI1)
{
    auto r = run({"check-e1", sample("i1.box")});
    EXPECT_EQ(r.code, 2);
    auto j = r.json();
    EXPECT_EQ(j["command"], "check-e1");
    EXPECT_EQ(j["verdict"], "fail");
    ASSERT_EQ(j["certificates"].size(), 2u);
    for (const auto& c : j["certificates"]) {
        EXPECT_EQ(c["total"], "3/2");
        EXPECT_TRUE(c["verified"].get<bool>());
    }
    EXPECT_TRUE(j.contains("timing_ms"));
    EXPECT_EQ(j["inputs"]["file"], sample("i1.box"));
}

TEST(Cli, CheckE1PassesOnDeterministic)
{
    EXPECT_EQ(run({"check-e1", sample("d1.box")}).code, 0);
}

TEST(Cli, Vertices)
{
    auto r = run({"vertices"});
    EXPECT_EQ(r.code, 0);
    auto j = r.json();
    EXPECT_EQ(j["certificates"].size(), 12u);
    EXPECT_EQ(j["value"], 12);
    for (const auto& v : j["certificates"]) {
        EXPECT_NO_THROW(box_from_json(v["box"]));
    }
}

TEST(Cli, CertifyGm)
{
    auto r = run({"certify-gm", "--c", "1/6"});
    EXPECT_EQ(r.code, 0) << r.err;
    auto j = r.json();
    ASSERT_EQ(j["certificates"].size(), 1u);
    const auto& c = j["certificates"][0];
    EXPECT_TRUE(c["verified"].get<bool>());
    EXPECT_EQ(c["forced_point"], Json::array({"1/12", "1/12", "1/12"}));
    EXPECT_EQ(c["lhv"]["kind"], "farkas");
    EXPECT_TRUE(c["lhv"]["verified"].get<bool>());
}

TEST(Cli, CertifyGmGrid)
{
    auto r = run({"certify-gm", "--grid", "4"});
    EXPECT_EQ(r.code, 0) << r.err;
    auto j = r.json();
    ASSERT_EQ(j["certificates"].size(), 4u);
    EXPECT_EQ(j["certificates"][0]["c"], "1/12");
    EXPECT_EQ(j["certificates"][3]["c"], "1/3");
}

TEST(Cli, GmEmitsReadableBox)
{
    auto r = run({"gm", "--c", "1/6"});
    EXPECT_EQ(r.code, 0);
    auto box = parse_box(r.out);
    EXPECT_EQ(box, gm::gm_box(Rational(1, 6)).box);
    EXPECT_EQ(run({"gm", "--c", "1/2"}).code, 1);
    EXPECT_EQ(run({"gm", "--c", "0.1"}).code, 1);
}

TEST(Cli, CheckNd)
{
    EXPECT_EQ(run({"check-nd", sample("gm_1_6.box")}).code, 0);
}

TEST(Cli, CheckLo)
{
    EXPECT_EQ(run({"check-lo", sample("pr.box"), "--copies", "1"}).code, 0);
    auto r = run({"check-lo", sample("pr.box"), "--copies", "2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.json()["certificates"][0]["verified"].get<bool>());
    EXPECT_EQ(run({"check-lo", sample("pr.box"), "--copies", "3"}).code, 1);
}

TEST(Cli, Extend)
{
    auto pr = run({"extend", sample("pr.box")});
    EXPECT_EQ(pr.code, 2);
    EXPECT_EQ(pr.json()["certificates"][0]["kind"], "farkas");
    auto side = run({"extend", sample("pr.box"), "--vars", "sideA"});
    EXPECT_EQ(side.code, 0);
    EXPECT_EQ(side.json()["certificates"][0]["variables"], Json::array({"A1", "A2"}));
    EXPECT_EQ(run({"extend", sample("i1.box"), "--vars", "sideB"}).code, 1);
    EXPECT_EQ(run({"extend", sample("i1.box"), "--vars", "nobody"}).code, 1);
}

TEST(Cli, Ch)
{
    auto gm = run({"ch", sample("gm_1_6.box")});
    EXPECT_EQ(gm.code, 0);
    EXPECT_EQ(gm.json()["certificates"].size(), 72u);
    auto pr = run({"ch", sample("pr.box")});
    EXPECT_EQ(pr.code, 2);
    EXPECT_EQ(pr.json()["value"], "1/2");
}

TEST(Cli, NoiseThreshold)
{
    auto r = run({"noise-threshold", "--vertex", "I1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.json()["value"], "1/3");
    EXPECT_EQ(run({"noise-threshold", "--vertex", "D1"}).code, 1);
}

TEST(Cli, TextFormat)
{
    auto r = run({"--format", "text", "check-e1", sample("i1.box")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("verdict: fail"), std::string::npos);
    auto after = run({"check-e1", sample("i1.box"), "--format", "text"});
    EXPECT_NE(after.out.find("certificates: 2"), std::string::npos);
    EXPECT_EQ(run({"--format", "xml", "vertices"}).code, 1);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"check-e1"}).code, 1);
    EXPECT_EQ(run({"check-e1", "/nonexistent.box"}).code, 1);
    EXPECT_EQ(run({"certify-gm"}).code, 1);
    EXPECT_EQ(run({"certify-gm", "--c", "1/6", "--grid", "3"}).code, 1);
    auto bad = run({"check-e1", sample("../tests/cli_test.cpp")});
    EXPECT_EQ(bad.code, 1);
    EXPECT_FALSE(bad.err.empty());
}

TEST(Cli, DeterministicReports)
{
    for (std::vector<std::string> args : {std::vector<std::string>{"vertices"},
                                          {"check-e1", sample("i1.box")},
                                          {"certify-gm", "--c", "1/7"},
                                          {"check-lo", sample("pr.box"), "--copies", "2"}}) {
        EXPECT_EQ(stable(run(args)), stable(run(args)));
    }
}
