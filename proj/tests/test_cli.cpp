#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code;
  std::string out;
};

Run napt(const std::string& args) {
  const std::string cmd = std::string(NAPT_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const char* name) { return std::string(NAPT_FIXTURES) + "/" + name; }

}  // namespace

TEST(Cli, MongeAmpere) {
  EXPECT_EQ(napt("ma " + fixture("g1.json") + " vshape").out, "m: 1/1\n");
  EXPECT_EQ(napt("ma " + fixture("square.json") + " h").out, "(0,0): 1/1\n");
  EXPECT_EQ(napt("ma " + fixture("g1.json") + " missing").code, 3);
  EXPECT_EQ(napt("ma " + fixture("g1.json") + " tent").code, 3);
}

TEST(Cli, Solve) {
  auto r = napt("solve " + fixture("g1.json") + " delta_m");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "a: 0/1\nm: -1/2\nb: 0/1\nsup: 0/1\nresidual: 0/1\n");
  r = napt("solve " + fixture("interval.json") + " ends");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "max(0, 1/2*w, w - 1/2)");
  EXPECT_EQ(napt("solve " + fixture("g1.json") + " heavy").code, 3);
}

TEST(Cli, Energies) {
  auto r = napt("energy " + fixture("g1.json") + " vshape reference");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("E: -1/4\nI: 1/2\nJ: 1/4\nI-J: 1/4\n"), std::string::npos);
  EXPECT_NE(r.out.find("i_minus_j.upper margin: 0/1"), std::string::npos);
  r = napt("energy " + fixture("g1.json") + " tilt tilt");
  EXPECT_NE(r.out.find("E: 0/1\nI: 0/1\nJ: 0/1\n"), std::string::npos);
  EXPECT_EQ(napt("measure-energy " + fixture("g1.json") + " delta_m").out, "E*: 1/4\n");
  EXPECT_EQ(napt("energy " + fixture("g1_algebra.json") + " vshape").out,
            napt("energy " + fixture("g1.json") + " vshape").out);
}

TEST(Cli, Check) {
  auto r = napt("check " + fixture("g1.json") + " --seed 7 --samples 50");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("result: pass"), std::string::npos);
  EXPECT_EQ(r.out, napt("check " + fixture("g1.json") + " --seed 7 --samples 50").out);
  r = napt("check " + fixture("nonpsd_algebra.json"));
  EXPECT_EQ(r.code, 5);
  EXPECT_NE(r.out.find("positive semidefinite"), std::string::npos);
  r = napt("check " + fixture("g1.json") + " --samples 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("count"), std::string::npos);
}

TEST(Cli, ParseAndUsageErrors) {
  EXPECT_EQ(napt("ma /nonexistent/file.json x").code, 2);
  const std::string bad = ::testing::TempDir() + "napt_bad.json";
  std::ofstream(bad) << "{\"napt_version\": 1, \"kind\": ";
  EXPECT_EQ(napt("ma " + bad + " x").code, 2);
  EXPECT_EQ(napt("frobnicate " + fixture("g1.json")).code, 2);
}

TEST(Cli, EnvelopeAndRender) {
  auto r = napt("envelope " + fixture("square.json") + " tent");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "max(0, w2, w1, w1 + w2)\northogonality defect: 0/1\n");
  r = napt("envelope " + fixture("g1.json") + " tent --grid 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("m: 0/1"), std::string::npos);

  const std::string out = ::testing::TempDir() + "napt_render.svg";
  EXPECT_EQ(napt("render " + fixture("g1.json") + " quarter --out " + out).code, 0);
  std::ifstream f(out);
  std::stringstream s;
  s << f.rdbuf();
  EXPECT_EQ(s.str(), napt("render " + fixture("g1.json") + " quarter").out);
  EXPECT_EQ(napt("render " + fixture("g1.json") + " nothing").code, 3);
}
