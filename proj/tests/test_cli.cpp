#include <sys/wait.h>

#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "dvortex/version.hpp"

namespace {

struct Run {
  int rc = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(DVORTEX_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
  int st = pclose(f);
  r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::stringstream ss(s);
  std::string l;
  while (std::getline(ss, l)) v.push_back(l);
  return v;
}

// data rows: everything after the first non-comment line (the column header)
std::vector<std::string> rows(const std::string& s, std::string* columns = nullptr) {
  std::vector<std::string> v;
  bool seen = false;
  for (auto& l : lines(s)) {
    if (l.empty() || l[0] == '#') continue;
    if (!seen) {
      seen = true;
      if (columns) *columns = l;
      continue;
    }
    v.push_back(l);
  }
  return v;
}

}  // namespace

TEST_CASE("tau-scan example gives 25 rows with a parameter header") {
  Run r = run("tau-scan --nu1 -0.5 --nu2 -0.5 --b 0.25 --mu-from m=1,E=0 --s 0.90:0.998:25");
  REQUIRE(r.rc == 0);
  std::string cols;
  CHECK(rows(r.out, &cols).size() == 25);
  CHECK(cols == "s,l_s,tau,one_minus_tau,dlntau_ds,trace1,n_nodes,cutoff,est_err");
  CHECK(r.out.rfind(std::string("# dvortex ") + DVORTEX_VERSION, 0) == 0);
  for (const char* key : {"# nu1 = ", "# nu2 = ", "# b = ", "# mu = 0.559016994", "# theta = -1.57079632"})
    CHECK(r.out.find(key) != std::string::npos);
}

TEST_CASE("kernel-check reports the maximum difference in the footer") {
  Run r = run("kernel-check --grid -2:2:5");
  REQUIRE(r.rc == 0);
  CHECK(rows(r.out).size() == 25);
  auto ls = lines(r.out);
  REQUIRE(ls.size() >= 2);
  const std::string key = "# max_abs_diff = ";
  REQUIRE(ls[ls.size() - 2].rfind(key, 0) == 0);
  CHECK(std::stod(ls[ls.size() - 2].substr(key.size())) < 1e-6);
}

TEST_CASE("spectrum emits a JSON report") {
  Run r = run("spectrum --b 2.3 --nu -0.4 --theta -pi/2");
  REQUIRE(r.rc == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["version"] == DVORTEX_VERSION);
  CHECK(j["params"]["b"].get<double>() == 2.3);
  CHECK(j["params"]["theta"].get<double>() == doctest::Approx(-1.5707963267948966).epsilon(1e-15));
  CHECK(j["landau"].size() == 2);  // n < |b|
  CHECK(j.contains("vortex_levels"));
  for (auto& x : j["l0_roots"]) CHECK(x["residual"].get<double>() < 1e-10);
}

TEST_CASE("green-eval splits G into phase * G0 + Delta") {
  Run r = run("green-eval --z 0.3,0.1 --zp -0.2,0.25");
  REQUIRE(r.rc == 0);
  auto j = nlohmann::json::parse(r.out);
  auto c = [](const nlohmann::json& e) { return std::complex<double>(e["re"], e["im"]); };
  const std::complex<double> ph = c(j["vortex_phase"]);
  CHECK(std::abs(std::abs(ph) - 1.0) < 1e-14);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      auto g = c(j["G"][a][b]), g0 = c(j["G0"][a][b]), d = c(j["Delta"][a][b]);
      CHECK(std::abs(g - ph * g0 - d) < 1e-12 * (1.0 + std::abs(g)));
    }
}

TEST_CASE("validation errors exit with code 2") {
  CHECK(run("tau-scan --b nan").rc == 2);
  CHECK(run("tau-scan --s 0.9:1.2:3").rc == 2);
  CHECK(run("tau-scan --s 0.9:0.99").rc == 2);
  CHECK(run("tau-scan --bogus").rc == 2);
  CHECK(run("spectrum --nu 1.5").rc == 2);
  CHECK(run("spectrum --theta halfpi").rc == 2);
  CHECK(run("green-eval --z 1.2,0 --zp 0.1,0").rc == 2);
  CHECK(run("green-eval --z 0.2,0").rc == 2);
  CHECK(run("tau-scan --mu-from m=1,E=2").rc == 2);
  CHECK(run("pvi-verify --mu 0.4 --s 0.9:0.99:3").rc == 2);
  CHECK(run("").rc == 2);
}

TEST_CASE("non-convergence exits with code 3 and keeps the partial rows") {
  Run r = run("tau-scan --s 0.001:0.3:3");
  CHECK(r.rc == 3);
  CHECK(rows(r.out).size() == 3);
  CHECK(r.out.find("# INCOMPLETE") != std::string::npos);
}

TEST_CASE("re-runs are bit-identical across thread counts") {
  const std::string args = "tau-scan --s 0.9:0.99:6";
  Run a = run("--threads 1 " + args), b = run("--threads 4 " + args), c = run("--threads 4 " + args);
  REQUIRE(a.rc == 0);
  CHECK(a.out == b.out);
  CHECK(b.out == c.out);
  Run k1 = run("--threads 1 kernel-check --grid -1:1:3"), k8 = run("--threads 8 kernel-check --grid -1:1:3");
  CHECK(k1.out == k8.out);
}

TEST_CASE("config file values are overridden by flags") {
  const std::string path = "dvortex_cli_test.toml";
  {
    std::ofstream f(path);
    f << "[spectrum]\nb = 2.3\nnu = -0.4\n";
  }
  auto from_file = nlohmann::json::parse(run("--config " + path + " spectrum").out);
  CHECK(from_file["params"]["b"].get<double>() == 2.3);
  CHECK(from_file["params"]["nu"].get<double>() == -0.4);
  auto overridden = nlohmann::json::parse(run("--config " + path + " spectrum --b 1.1").out);
  CHECK(overridden["params"]["b"].get<double>() == 1.1);
  CHECK(overridden["params"]["nu"].get<double>() == -0.4);
  std::remove(path.c_str());
}

TEST_CASE("output file and angle literals") {
  const std::string path = "dvortex_cli_test.csv";
  Run r = run("tau-plane --t 1:2:3 --theta pi/2 -o " + path);
  REQUIRE(r.rc == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(text.find("# theta = 1.5707963267948966") != std::string::npos);
  CHECK(rows(text).size() == 3);
  std::remove(path.c_str());
}

TEST_CASE("selftest passes") {
  Run r = run("selftest");
  CHECK(r.rc == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
