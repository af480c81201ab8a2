// Drives the qnetsim executable as a subprocess.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string line = std::string("\"") + QNETSIM_CLI + "\" " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(line.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("qnetsim_cli_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_file(const TempDir& d, const std::string& name, const std::string& text) {
  std::ofstream(d.file(name)) << text;
  return d.file(name);
}

}  // namespace

TEST_CASE("validate accepts every bundled preset") {
  const Run r = cli("validate");
  CHECK(r.code == 0);
  for (const char* p : {"fig3", "protocol", "network_eig", "jc_resonant", "qubit_rabi", "entropy"})
    CHECK(r.out.find(std::string(p) + ".yaml: ok") != std::string::npos);
}

TEST_CASE("configuration problems exit with 1") {
  TempDir d;
  const std::string bad = write_file(d, "bad.yaml", "- name: x\n  operation: eig\n  system: {kind: qubit}\n");
  const std::string broken = write_file(d, "broken.yaml", "- name: [\n");
  CHECK(cli("validate --config " + bad).code == 1);
  CHECK(cli("eig --config " + broken).code == 1);
  CHECK(cli("eig --config " + bad + " --preset fig3").code == 1);
  CHECK(cli("eig --preset no_such_preset").code == 1);
  CHECK(cli("eig --bogus").code == 1);
  CHECK(cli("").code == 1);
  CHECK(cli("fig3 --preset protocol").code == 1);
  CHECK(cli("protocol --samples 1").code == 1);
}

TEST_CASE("each command writes its table") {
  TempDir d;
  const struct {
    const char* command;
    const char* header;
  } cases[] = {
      {"fig3", "scenario,t,coefficient"},
      {"protocol", "shot,outcome,p_outcome,q2_ground_prob"},
      {"eig", "scenario,t,index,energy_analytic,energy_numeric,residual"},
      {"evolve", "scenario,t,p_qubit_excited,p_cavity_excited,norm"},
      {"entropy", "scenario,state,partition,entropy"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.command);
    const std::string out = d.file(std::string(c.command) + ".csv");
    REQUIRE(cli(std::string(c.command) + " --out " + out).code == 0);
    const std::string text = slurp(out);
    CHECK(first_line(text).rfind(c.header, 0) == 0);
    CHECK(text.back() == '\n');
  }
}

TEST_CASE("--out - writes to stdout and matches the file output") {
  TempDir d;
  const Run r = cli("eig --out -");
  REQUIRE(r.code == 0);
  REQUIRE(cli("eig --out " + d.file("eig.csv")).code == 0);
  CHECK(r.out == slurp(d.file("eig.csv")));
}

TEST_CASE("seed and sample overrides") {
  const Run a = cli("protocol --seed 1 --out -");
  const Run b = cli("protocol --seed 1 --out -");
  const Run c = cli("protocol --seed 2 --out -");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);

  const Run fig = cli("fig3 --samples 11 --out -");
  REQUIRE(fig.code == 0);
  size_t lines = 0;
  for (char ch : fig.out) lines += ch == '\n';
  CHECK(lines == 1 + 7 * 11);
}

TEST_CASE("config files run and write per-scenario outputs") {
  TempDir d;
  const std::string cfg = write_file(d, "run.yaml",
                                     "- name: q\n"
                                     "  operation: evolve\n"
                                     "  system: {kind: qubit, ep1: 0, ep2: 0, ts_mag: 0.5}\n"
                                     "  grid: {t0: 0, t1: 3, samples: 4}\n"
                                     "  initial: {index: 0}\n"
                                     "  output: " + d.file("q_out.csv") + "\n");
  REQUIRE(cli("evolve --config " + cfg).code == 0);
  const std::string text = slurp(d.file("q_out.csv"));
  size_t lines = 0;
  for (char ch : text) lines += ch == '\n';
  CHECK(lines == 5);
}

TEST_CASE("jobs count does not change output") {
  const Run one = cli("fig3 --jobs 1 --out -");
  const Run many = cli("fig3 --jobs 8 --out -");
  REQUIRE(one.code == 0);
  CHECK(one.out == many.out);
}
