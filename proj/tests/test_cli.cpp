#include "cli.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace quantcurv::cli;

namespace {

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("quantcurv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  std::string out_path(const std::string& name) const { return (dir_ / name).string(); }

  /// Bargmann and Teichmuller runs small enough for a unit test.
  std::string quick_config(int seed = 7) const {
    json j = {{"seed", seed},
              {"workers", 2},
              {"experiments",
               {{{"experiment", "bargmann-curvature"},
                 {"output_path", out_path("b.csv")},
                 {"parameters", {{"n_list", {1}}, {"projector_levels", {4}}, {"N", 4}, {"D", 10}, {"random_pairs", 3}}}},
                {{"experiment", "teichmuller-symbol"},
                 {"output_path", out_path("t.csv")},
                 {"parameters", {{"tuples", 50}}}}}}};
    return j.dump(2);
  }

  int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "quantcurv");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    out_.str("");
    err_.str("");
    return main(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  static std::string body(const fs::path& p) {
    std::ifstream in(p);
    std::string line, all;
    while (std::getline(in, line))
      if (line.rfind("#", 0) != 0) all += line + "\n";
    return all;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST(Fnv1a, KnownValues) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(CsvLine, QuotesAndEmbeddedCommas) {
  EXPECT_EQ(split_csv_line("a,\"b,c\",\"d\"\"e\","), (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("x,y"), "\"x,y\"");
}

TEST_F(CliTest, ShippedConfigsParse) {
  for (const char* name : {"bargmann.json", "sphere.json", "schrodinger.json", "teichmuller.json", "quick.json"}) {
    EXPECT_NO_THROW(load_config(fs::path(QUANTCURV_SOURCE_DIR) / "configs" / name)) << name;
  }
}

TEST_F(CliTest, MalformedConfigWritesNothing) {
  const fs::path p = write("bad.json", "{ \"seed\": 1, \"experiments\": [");
  EXPECT_EQ(invoke({"run", p.string()}), kExitUsage);
  EXPECT_NE(err_.str().find("config error"), std::string::npos);
}

TEST_F(CliTest, UnknownKeyIsRejectedBeforeAnyRun) {
  json j = json::parse(quick_config());
  j["experiments"][1]["parameters"]["tupels"] = 10;
  const fs::path p = write("typo.json", j.dump());
  EXPECT_EQ(invoke({"run", p.string()}), kExitUsage);
  EXPECT_NE(err_.str().find("tupels"), std::string::npos);
  EXPECT_FALSE(fs::exists(out_path("b.csv")));
  EXPECT_FALSE(fs::exists(out_path("t.csv")));
}

TEST_F(CliTest, InvalidValuesAreRejected) {
  for (const char* patch : {R"({"experiments":[{"experiment":"nope","output_path":"x.csv"}]})",
                            R"({"workers":0,"experiments":[{"experiment":"teichmuller-symbol","output_path":"x.csv"}]})",
                            R"({"experiments":[{"experiment":"teichmuller-symbol","output_path":"x.csv","parameters":{"tuples":-1}}]})",
                            R"({"experiments":[{"experiment":"teichmuller-symbol","output_path":"x.csv"},
                                               {"experiment":"teichmuller-symbol","output_path":"x.csv"}]})"}) {
    EXPECT_THROW(parse_config(json::parse(patch)), ConfigError) << patch;
  }
}

TEST_F(CliTest, RunIsReproducible) {
  const fs::path p = write("quick.json", quick_config());
  ASSERT_EQ(invoke({"run", p.string()}), kExitPass) << err_.str();
  EXPECT_NE(out_.str().find("PASS bargmann-curvature"), std::string::npos);
  EXPECT_NE(out_.str().find("PASS teichmuller-symbol"), std::string::npos);
  const std::string b1 = body(out_path("b.csv")), t1 = body(out_path("t.csv"));
  EXPECT_FALSE(fs::exists(out_path("b.csv.tmp")));
  ASSERT_EQ(invoke({"run", p.string(), "--workers", "1"}), kExitPass);
  EXPECT_EQ(body(out_path("b.csv")), b1);
  EXPECT_EQ(body(out_path("t.csv")), t1);
  std::ifstream in(out_path("t.csv"));
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first.rfind("# generated ", 0), 0u);

  ASSERT_EQ(invoke({"summarize", out_path("b.csv"), out_path("t.csv")}), kExitPass);
  EXPECT_EQ(out_.str(), "PASS bargmann-curvature\nPASS teichmuller-symbol\n");
}

TEST_F(CliTest, SeedOverrideChangesHashAndData) {
  const fs::path p = write("quick.json", quick_config());
  ASSERT_EQ(invoke({"run", p.string()}), kExitPass);
  const std::string a = body(out_path("t.csv"));
  ASSERT_EQ(invoke({"run", p.string(), "--seed", "8"}), kExitPass);
  const std::string b = body(out_path("t.csv"));
  EXPECT_NE(a.substr(a.find('\n') + 1, 16), b.substr(b.find('\n') + 1, 16));
  EXPECT_NE(parse_config(json::parse(quick_config())).experiments[0].hash,
            parse_config(json::parse(quick_config()), 8).experiments[0].hash);
}

TEST_F(CliTest, SummarizeReportsSlopeAndFailures) {
  const fs::path s = write("s.csv",
                           "# generated\n"
                           "config_hash,experiment,check,N,eps_N,value,comparison,tolerance,tolerance_hi,pass\n"
                           "h,sphere-convergence,eps,8,0.5,0.5,report,,,true\n"
                           "h,sphere-convergence,eps,16,0.25,0.25,report,,,true\n"
                           "h,sphere-convergence,eps,32,0.125,0.125,report,,,true\n");
  ASSERT_EQ(invoke({"summarize", s.string()}), kExitPass);
  EXPECT_EQ(out_.str(), "PASS sphere-convergence slope -1\n");

  const fs::path m = write("m.csv",
                           "experiment,check,pass\n"
                           "teichmuller-symbol,pairing_trace_vs_closed,true\n"
                           "teichmuller-symbol,wp_reduction,false\n");
  EXPECT_EQ(invoke({"summarize", m.string()}), kExitFail);
  EXPECT_EQ(out_.str(), "FAIL teichmuller-symbol failing: wp_reduction\n");
}

TEST_F(CliTest, SummarizeRejectsBadInput) {
  const fs::path a = write("a.csv", "experiment,value\nx,1\n");
  EXPECT_EQ(invoke({"summarize", a.string()}), kExitUsage);
  const fs::path b = write("b.csv", "experiment,check,pass\nx,y,maybe\n");
  EXPECT_EQ(invoke({"summarize", b.string()}), kExitUsage);
  EXPECT_EQ(invoke({"summarize", out_path("missing.csv")}), kExitUsage);
  EXPECT_EQ(invoke({}), kExitUsage);
}
