#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include <zfilt/cli.hpp>

using zfilt::cli::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = zfilt::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Every number in a JSON report must be a decimal string, except the
// floating-point fit statistics.
void expect_no_json_integers(const json& j, const std::string& path = "") {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) expect_no_json_integers(it.value(), path + "/" + it.key());
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) expect_no_json_integers(j[i], path + "/" + std::to_string(i));
    } else {
        EXPECT_FALSE(j.is_number_integer()) << path;
    }
}

}  // namespace

TEST(CliWitt, Rows) {
    auto r = run({"witt", "--r", "2", "--p", "2", "--nmax", "3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "n\tw_n\tc_n\tcumlog\n1\t2\t2\t2\n2\t1\t3\t5\n3\t2\t2\t7\n");
}

TEST(CliWitt, RankOneAndEmpty) {
    auto r = run({"witt", "--r", "1", "--nmax", "5", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    for (std::size_t i = 1; i < 5; ++i) EXPECT_EQ(j["rows"][i]["w_n"], "0");
    auto e = run({"witt", "--nmax", "0"});
    EXPECT_EQ(e.code, 0);
    EXPECT_EQ(e.out, "n\tw_n\tc_n\tcumlog\n");
}

TEST(CliWitt, InvalidConfig) {
    EXPECT_EQ(run({"witt", "--p", "4"}).code, 2);
    EXPECT_EQ(run({"witt", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"witt", "--nmax", "-1"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(CliScan, ShapeAndBounds) {
    for (auto [r, p, n] : {std::tuple{"2", "2", "40"}, std::tuple{"5", "3", "30"}}) {
        auto res = run({"scan27", "--r", r, "--p", p, "--nmax", n, "--format", "json"});
        ASSERT_EQ(res.code, 0);
        auto j = json::parse(res.out);
        EXPECT_EQ(j["rows"].size(), std::stoul(n));
        for (const char* key : {"dimension_bound", "index_bound"}) {
            EXPECT_TRUE(j[key].contains("threshold"));
            EXPECT_TRUE(j[key]["exceptions"].is_array());
        }
        expect_no_json_integers(j);
    }
    auto bad = run({"scan27", "--nmax", "1"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("nmax"), std::string::npos);
}

TEST(CliLemma, ExitCodes) {
    auto inner = run({"lemma22", "--nmax", "4", "--image", "x1", "--image", "x1*x2*x1^-1"});
    EXPECT_EQ(inner.code, 0) << inner.err;
    auto swap = run({"lemma22", "--image", "x2", "--image", "x1"});
    EXPECT_EQ(swap.code, 2);
    EXPECT_NE(swap.err.find("precondition"), std::string::npos);
    auto parse = run({"lemma22", "--image", "x3", "--image", "x1"});
    EXPECT_EQ(parse.code, 2);
    EXPECT_NE(parse.err.find("position 0"), std::string::npos);
    EXPECT_EQ(run({"lemma22", "--image", "x1"}).code, 2);  // wrong number of images
}

TEST(CliLemma, JsonEntries) {
    auto r = run({"lemma22", "--p", "3", "--nmax", "3", "--format", "json", "--image", "x1*x1*x2*x1^-1*x2^-1",
                  "--image", "x2"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "pass");
    ASSERT_FALSE(j["entries"].empty());
    for (const auto& e : j["entries"])
        for (const char* key : {"phi", "n", "basis_element", "valuation", "verdict"}) EXPECT_TRUE(e.contains(key));
    expect_no_json_integers(j);
}

TEST(CliCensus, Rows) {
    auto r = run({"census", "--nmax", "2"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('#')),
              "n\tdimU\tindex_exponent\tcount\texact\n1\t0\t2\t1\texact\n2\t0\t5\t1\texact\n2\t1\t4\t1\texact\n"
              "2\t2\t3\t1\texact\n");
    auto one = run({"census", "--nmax", "1", "--format", "json"});
    auto j = json::parse(one.out);
    EXPECT_EQ(j["rows"].size(), 1u);
    EXPECT_EQ(j["fit"]["status"], "insufficient data");
    expect_no_json_integers(j);
}

TEST(CliCensus, RankThreeExponents) {
    auto r = run({"census", "--r", "3", "--nmax", "3", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    for (const auto& row : j["rows"]) {
        unsigned n = std::stoul(row["n"].get<std::string>());
        auto expected = zfilt::cumulative_log_index(3, n, 2) - zfilt::ArbInt(std::stoul(row["dimU"].get<std::string>()));
        EXPECT_EQ(row["index_exponent"], zfilt::cli::dec(expected));
    }
}

TEST(CliCensus, PartialStillExitsZero) {
    auto r = run({"census", "--nmax", "4", "--budget", "5", "--format", "json"});
    EXPECT_EQ(r.code, 0);
    EXPECT_FALSE(json::parse(r.out)["exact"].get<bool>());
}

TEST(CliWreath, Instances) {
    auto a = json::parse(run({"wreath", "--instance", "a5wrc2", "--format", "json"}).out);
    EXPECT_EQ(a["dichotomy"]["normal_subgroup_count"], "3");
    EXPECT_EQ(a["dichotomy"]["dichotomy"], "holds");
    auto t = json::parse(run({"wreath", "--instance", "tower:1,1", "--format", "json"}).out);
    EXPECT_EQ(t["formula_count"], "3");
    EXPECT_EQ(t["structural_count"], "3");
    auto d = run({"wreath", "--instance", "d8-negative-control", "--format", "json"});
    EXPECT_EQ(d.code, 0);
    auto dj = json::parse(d.out);
    EXPECT_EQ(dj["dichotomy"]["dichotomy"], "fails");
    EXPECT_EQ(dj["control"], "pass");
    EXPECT_EQ(json::parse(run({"wreath", "--instance", "a4", "--format", "json"}).out)["normal_subgroup_count"], "3");
    EXPECT_EQ(run({"wreath", "--instance", "tower:x"}).code, 2);
    EXPECT_EQ(run({"wreath", "--instance", "s7"}).code, 2);
}

TEST(CliWreath, CapExceededExitsThree) {
    EXPECT_EQ(run({"wreath", "--instance", "a5wrc2", "--budget", "100"}).code, 3);
}

TEST(CliWreath, LargeTowerFallsBackToFormula) {
    auto r = run({"wreath", "--instance", "tower:2,3", "--format", "json"});
    EXPECT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    EXPECT_EQ(j["formula_count"], "11");
    EXPECT_TRUE(j["structural_count"].is_null());
}

TEST(CliFiltration, Deterministic) {
    auto a = run({"filtration", "--nmax", "4", "--samples", "20", "--seed", "9", "--format", "json"});
    auto b = run({"filtration", "--nmax", "4", "--samples", "20", "--seed", "9", "--format", "json"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(json::parse(a.out)["verdict"], "pass");
}

TEST(CliOutput, SortedKeysAndOutFile) {
    auto r = run({"witt", "--nmax", "2", "--format", "json"});
    auto j = json::parse(r.out);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
    EXPECT_EQ(r.out, j.dump(2) + "\n");

    const std::string path = ::testing::TempDir() + "zfilt_cli_out.tsv";
    auto w = run({"witt", "--nmax", "2", "--out", path});
    EXPECT_EQ(w.code, 0);
    EXPECT_TRUE(w.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    EXPECT_EQ(ss.str(), run({"witt", "--nmax", "2"}).out);
    std::remove(path.c_str());
}
