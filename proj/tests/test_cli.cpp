#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "commands.hpp"

using namespace scalex;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("scalex_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  fs::path dir;
};

}  // namespace

TEST(CliClassify, Examples) {
  auto r = run({"classify", "--spec", "{0,1}"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.report();
  EXPECT_EQ(j["infinite_projection"], true);
  EXPECT_EQ(j["nonproper_admissible"], false);
  EXPECT_EQ(j["k_proper"], json::array({1, 0}));
  EXPECT_EQ(j["infinite_projection_criteria"]["agree"], true);

  j = run({"classify", "--spec", "[0,1]"}).report();
  EXPECT_EQ(j["infinite_projection"], false);
  EXPECT_EQ(j["k_proper"], json::array({0, 0}));
  EXPECT_TRUE(j["gap_point"].is_null());

  j = run({"classify", "--spec", "{0} u [1/2,1]"}).report();
  EXPECT_EQ(j["infinite_projection"], true);
  EXPECT_EQ(j["nonproper_admissible"], false);
  EXPECT_EQ(j["gap_point"], 0.25);

  j = run({"classify", "--spec", R"({"intervals": [[0,0],[0.5,0.5],[1,1]]})", "--properness", "nonproper"}).report();
  EXPECT_EQ(j["k_nonproper"], json::array({1, 0}));
  EXPECT_EQ(j["k"], json::array({1, 0}));
}

TEST(CliClassify, ExitCodes) {
  EXPECT_EQ(run({"classify", "--spec", R"({"intervals": [[0, 0.5]]})"}).code, 2);
  EXPECT_EQ(run({"classify", "--spec", R"({"intervals": [[1, 0]]})"}).code, 2);
  EXPECT_EQ(run({"classify", "--spec", "{0,1", }).code, 2);
  EXPECT_EQ(run({"classify"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"classify", "--spec", "{0,1}", "--properness", "nonproper"}).code, 3);
}

TEST(CliHomcheck, Examples) {
  auto j = run({"homcheck", "--from", "proper:{0,1/2,1}", "--to", "proper:{0,1}"}).report();
  EXPECT_EQ(j["hom_exists"], true);
  EXPECT_TRUE(j["reason"].is_null());
  j = run({"homcheck", "--from", "proper:{0,1}", "--to", "proper:{0,1/2,1}"}).report();
  EXPECT_EQ(j["hom_exists"], false);
  EXPECT_EQ(j["reason"], "subset");
  j = run({"homcheck", "--from", "nonproper:{0,1/2,1}", "--to", "proper:{0,1/2,1}"}).report();
  EXPECT_EQ(j["hom_exists"], false);
  EXPECT_EQ(j["reason"], "properness");
  EXPECT_EQ(run({"homcheck", "--from", "proper:{0,1", "--to", "proper:{0,1}"}).code, 2);
}

TEST(CliIsocheck, Examples) {
  auto j = run({"isocheck", "--from", "proper:{0,1/2,1}", "--to", "nonproper:{0,1/2,1}"}).report();
  EXPECT_EQ(j["iso_exists"], false);
  EXPECT_EQ(j["reason"], "properness");
  j = run({"isocheck", "--from", R"({"spectrum": {"intervals": [[0,1]]}, "proper": true})", "--to", "proper:[0,1]"}).report();
  EXPECT_EQ(j["iso_exists"], true);
}

TEST(CliKgroups, SpecAndPuncturedSet) {
  auto j = run({"kgroups", "--spec", "{0,1/2,1}", "--properness", "nonproper"}).report();
  EXPECT_EQ(j["k0"], 1);
  EXPECT_EQ(j["k1"], 0);
  j = run({"kgroups", "--in", R"({"base": {"intervals": [[0,1],[2,3]]}, "removed": [0, 2.5]})"}).report();
  EXPECT_EQ(j["k0"], 0);
  EXPECT_EQ(j["k1"], 0);
  EXPECT_EQ(j["components"].size(), 3u);
  EXPECT_EQ(run({"kgroups", "--in", R"({"base": {"intervals": [[0,1]]}, "removed": [5]})"}).code, 2);
  EXPECT_EQ(run({"kgroups"}).code, 2);
}

TEST_F(CliFiles, SynthThenVerifyRoundTrip) {
  auto mat = path("np.mat");
  auto s = run({"synth", "--spec", "{0,1/2,1}", "--properness", "nonproper", "--depth", "6", "--out", mat, "--seed", "3"});
  ASSERT_EQ(s.code, 0) << s.err;
  auto v = run({"verify", "--in", mat});
  ASSERT_EQ(v.code, 0) << v.err;
  auto j = v.report();
  EXPECT_EQ(j["properness"]["verdict"], "NonProper");
  EXPECT_EQ(j["scaling_spectrum"], true);
  EXPECT_EQ(j["infinite_projection"], true);
  EXPECT_EQ(j["scaling_defect"]["boundary_localized"], true);

  auto model = path("p.json");
  ASSERT_EQ(run({"synth", "--spec", "{0} u [1/2,1]", "--out", model}).code, 0);
  j = run({"verify", "--in", model}).report();
  EXPECT_EQ(j["properness"]["verdict"], "Proper");
  EXPECT_EQ(j["boundary_rank"], 4);
}

TEST_F(CliFiles, SynthIsDeterministic) {
  auto a = run({"synth", "--spec", "[0,1] u {2}", "--samples", "5", "--seed", "9", "--out", path("a.mat")});
  auto b = run({"synth", "--spec", "[0,1] u {2}", "--samples", "5", "--seed", "9", "--out", path("b.mat")});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(read_file(path("a.mat")), read_file(path("b.mat")));
  auto ra = run({"verify", "--in", path("a.mat")});
  auto rb = run({"verify", "--in", path("a.mat")});
  EXPECT_EQ(ra.out, rb.out);

  ::setenv("SCALEX_SEED", "9", 1);
  run({"synth", "--spec", "[0,1] u {2}", "--samples", "5", "--out", path("c.mat")});
  ::unsetenv("SCALEX_SEED");
  EXPECT_EQ(read_file(path("a.mat")), read_file(path("c.mat")));
}

TEST_F(CliFiles, WoldOnShift) {
  write_matrix(path("shift.mat"), block_shift(ComplexMatrix::Identity(1, 1), 5));
  auto r = run({"wold", "--in", path("shift.mat")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.report();
  EXPECT_EQ(j["q_ranks"], json::array({1, 1, 1, 1}));
  EXPECT_EQ(j["unitary_rank"], 0);
  EXPECT_EQ(j["boundary_flags"], json::array({4}));
  EXPECT_EQ(run({"wold", "--in", path("shift.mat"), "--boundary", "none"}).code, 3);
  EXPECT_EQ(run({"wold", "--in", path("shift.mat"), "--fiber-dim", "1"}).report()["q_ranks"], j["q_ranks"]);
  EXPECT_EQ(run({"wold", "--in", path("shift.mat"), "--max-steps", "2"}).code, 3);
}

TEST_F(CliFiles, ErrorsOnBadMatrices) {
  write_file(path("junk.mat"), "2 2\n1,0\n");
  EXPECT_EQ(run({"wold", "--in", path("junk.mat")}).code, 2);
  EXPECT_EQ(run({"verify", "--in", path("missing.mat")}).code, 2);
  ComplexMatrix generic(2, 2);
  generic << 1, 2, 3, 4;
  write_matrix(path("generic.mat"), generic);
  EXPECT_EQ(run({"wold", "--in", path("generic.mat")}).code, 3);
  EXPECT_EQ(run({"verify", "--in", path("generic.mat")}).code, 3);
}

TEST_F(CliFiles, ClassifyAndWitnessAgree) {
  auto c = run({"classify", "--spec", "{0,1}"}).report();
  ASSERT_EQ(run({"synth", "--spec", "{0,1}", "--out", path("s.mat")}).code, 0);
  auto w = run({"witness", "--in", path("s.mat")});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_EQ(c["infinite_projection"], true);
  EXPECT_EQ(w.report()["infinite_projection"], true);

  ASSERT_EQ(run({"synth", "--spec", "[0,1]", "--samples", "24", "--out", path("u.mat")}).code, 0);
  EXPECT_EQ(run({"witness", "--in", path("u.mat")}).code, 3);
  EXPECT_EQ(run({"witness", "--in", path("u.mat"), "--gap", "0.5"}).code, 3);
}

TEST_F(CliFiles, SpecEstimateAndReportFile) {
  ASSERT_EQ(run({"synth", "--spec", "{0,1/4,1}", "--out", path("m.mat")}).code, 0);
  auto r = run({"specestimate", "--in", path("m.mat"), "--out", path("spec.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  auto s = spectral_set_from_json(json::parse(read_file(path("spec.json"))));
  EXPECT_EQ(s, parse_spectral_set("{0,1/4,1}"));
}

TEST_F(CliFiles, ArgumentsMayBeFiles) {
  write_file(path("spec.json"), R"({"intervals": [[0,0],[1,1]]})");
  auto j = run({"classify", "--spec", path("spec.json")}).report();
  EXPECT_EQ(j["k_proper"], json::array({1, 0}));
}
