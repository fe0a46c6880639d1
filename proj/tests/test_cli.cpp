#include "nlfv/output.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("nlfv_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / (name + ".cfg");
  std::ofstream(p) << text;
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(NLFV_CLI) + " " + args + " > " +
                          (scratch() / "last.log").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_dir(const std::string& name) {
  return std::string(NLFV_CONFIG_DIR) + "/" + name + ".cfg";
}

const char* small_1d =
    "[grid]\ndx = 0.0125\n[time]\nt_end = 0.1\nsnapshots = 0, 0.05\n"
    "[model]\nname = nonlocal-lwr-1d\n[initial]\nname = riemann-ex1\n";

const char* small_2d =
    "[grid]\ndx = 0.2\n[time]\nt_end = 0.5\n[model]\nname = crowd-2d-nonlocal\n"
    "[scheme]\ncfl = warn\n[initial]\nname = annular\n";

void check_manifest(const fs::path& dir, const std::string& manifest_name) {
  const auto j = nlohmann::json::parse(slurp(dir / manifest_name));
  CHECK(j["tool"] == "nlfv");
  CHECK(j["version"] == nlfv::kVersion);
  CHECK(j["config"].is_object());
  CHECK(j.contains("wall_seconds"));
  std::set<std::string> listed;
  for (const auto& f : j["files"]) {
    const std::string name = f["path"];
    CHECK(listed.insert(name).second);
    const std::string bytes = slurp(dir / name);
    CHECK(f["sha256"] == nlfv::sha256_hex(bytes));
    CHECK(f["bytes"] == bytes.size());
  }
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name == manifest_name) continue;
    CAPTURE(name);
    CHECK(listed.count(name) == 1);
  }
}

}  // namespace

TEST_CASE("run1d writes snapshots and a complete manifest") {
  const fs::path cfg = write_config("small1d", small_1d);
  const fs::path out = scratch() / "run1d_a";
  REQUIRE(run("run1d -c " + cfg.string() + " -o " + out.string() + " --reference") == 0);
  CHECK(fs::exists(out / "small1d_t0.csv"));
  CHECK(fs::exists(out / "small1d_t0.05.csv"));
  CHECK(fs::exists(out / "small1d_final.csv"));
  CHECK(fs::exists(out / "small1d_local_reference.csv"));
  CHECK(fs::exists(out / "small1d_profiles.svg"));
  CHECK(fs::exists(out / "small1d_diagnostics.csv"));
  CHECK(fs::exists(out / "small1d_summary.json"));
  CHECK(slurp(out / "small1d_final.csv").rfind("x,u\n", 0) == 0);
  check_manifest(out, "small1d_manifest.json");
}

TEST_CASE("identical invocations give byte-identical CSV output") {
  const fs::path cfg = write_config("small1d", small_1d);
  const fs::path a = scratch() / "det_a", b = scratch() / "det_b";
  REQUIRE(run("run1d -q -c " + cfg.string() + " -o " + a.string()) == 0);
  REQUIRE(run("run1d -q -c " + cfg.string() + " -o " + b.string()) == 0);
  int compared = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().extension() != ".csv") continue;
    CAPTURE(e.path().filename().string());
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    ++compared;
  }
  CHECK(compared >= 3);

  const fs::path cfg2 = write_config("small2d", small_2d);
  const fs::path c = scratch() / "det_c", d = scratch() / "det_d";
  REQUIRE(run("run2d -q -c " + cfg2.string() + " -o " + c.string()) == 0);
  REQUIRE(::setenv("NLFV_THREADS", "1", 1) == 0);
  REQUIRE(run("run2d -q -c " + cfg2.string() + " -o " + d.string()) == 0);
  ::unsetenv("NLFV_THREADS");
  CHECK(slurp(c / "small2d_final.csv") == slurp(d / "small2d_final.csv"));
}

TEST_CASE("run2d writes a PGM and a CSV per snapshot") {
  const fs::path cfg = write_config("small2d", small_2d);
  const fs::path out = scratch() / "run2d";
  REQUIRE(run("run2d -c " + cfg.string() + " -o " + out.string() +
              " --snapshots 0,0.017,0.33,0.5") == 0);
  int pgm = 0, csv = 0;
  for (const auto& e : fs::directory_iterator(out)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("small2d_t", 0) != 0) continue;
    pgm += e.path().extension() == ".pgm";
    csv += e.path().extension() == ".csv";
  }
  CHECK(pgm == 4);
  CHECK(csv == 4);
  const std::string img = slurp(out / "small2d_t0.pgm");
  CHECK(img.rfind("P5\n40 40\n255\n", 0) == 0);
  CHECK(img.size() == std::string("P5\n40 40\n255\n").size() + 1600);
  check_manifest(out, "small2d_manifest.json");
}

TEST_CASE("converge on table1.cfg gives 4 rows and 3 rates") {
  const fs::path out = scratch() / "converge";
  REQUIRE(run("converge -q -c " + config_dir("table1") + " --levels 4 -o " + out.string()) == 0);
  std::istringstream in(slurp(out / "table1_convergence.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "dx,l1_distance,alpha");
  int rows = 0, alphas = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto comma = line.rfind(',');
    if (comma + 1 < line.size()) {
      const double a = std::stod(line.substr(comma + 1));
      CHECK(a > 0.5);
      CHECK(a < 1.0);
      ++alphas;
    }
  }
  CHECK(rows == 4);
  CHECK(alphas == 3);
  check_manifest(out, "table1_manifest.json");
}

TEST_CASE("eta-sweep writes one profile per radius") {
  const fs::path cfg = write_config("small1d", small_1d);
  const fs::path out = scratch() / "sweep";
  REQUIRE(run("eta-sweep -q -c " + cfg.string() + " --etas 0.1,0.05 -o " + out.string()) == 0);
  CHECK(fs::exists(out / "small1d_eta0.1.csv"));
  CHECK(fs::exists(out / "small1d_eta0.05.csv"));
  CHECK(fs::exists(out / "small1d_eta_sweep.csv"));
  check_manifest(out, "small1d_manifest.json");
  CHECK(run("eta-sweep -q -c " + cfg.string() + " --etas 0.01 -o " + out.string()) == 2);
}

TEST_CASE("check passes on fig1.cfg") {
  const fs::path out = scratch() / "check";
  CHECK(run("check -q -c " + config_dir("fig1") + " -o " + out.string()) == 0);
}

TEST_CASE("exit codes") {
  CHECK(run("--help") == 0);
  CHECK(run("") == 2);
  CHECK(run("run1d") == 2);
  CHECK(run("run1d -c /nonexistent.cfg") == 2);
  CHECK(run("run1d -c " + write_config("small1d", small_1d).string() + " --bogus") == 2);
  const fs::path bad = write_config(
      "theta", "[grid]\nn_cells = 10\n[model]\nname = nonlocal-lwr-1d\n[scheme]\ntheta = 0.7\n");
  CHECK(run("run1d -c " + bad.string()) == 2);
  CHECK(slurp(scratch() / "last.log").find("theta.cfg:6") != std::string::npos);
  CHECK(run("run2d -c " + write_config("small1d", small_1d).string()) == 2);
  REQUIRE(::setenv("NLFV_THREADS", "many", 1) == 0);
  CHECK(run("run1d -c " + write_config("small1d", small_1d).string()) == 2);
  ::unsetenv("NLFV_THREADS");

  const fs::path unstable = write_config(
      "unstable",
      "[grid]\ndx = 0.0125\n[time]\nt_end = 0.2\n[model]\nname = nonlocal-lwr-1d\n"
      "[scheme]\ntheta = 0.05\nlambda = 0.9\ncfl = warn\n[initial]\nname = riemann-ex1\n");
  const fs::path out = scratch() / "unstable";
  CHECK(run("check -c " + unstable.string() + " -o " + out.string()) == 1);
}
