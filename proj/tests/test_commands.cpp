#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "swlat/commands.hpp"

using namespace swlat;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("swlat_cmd_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string write_config(const fs::path& dir, const std::string& text) {
  const auto p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("minimize writes its artifacts") {
  TempDir tmp("minimize");
  std::ostringstream out;
  CommandOptions opts;
  opts.config_path = write_config(tmp.path, "grid.dims = 4,4,4\nrun.seed = 3\nrun.regauge_every = 20\n");
  opts.out_dir = (tmp.path / "out").string();
  opts.out = &out;
  CHECK(cmd_minimize(opts) == 0);
  for (const char* f : {"trace.csv", "report.json", "timing.json", "final_gauge.snap", "final_section.snap"}) {
    CHECK(fs::exists(tmp.path / "out" / f));
  }
  CHECK(fs::exists(tmp.path / "out" / "snapshots"));
  const auto rep = read_json(tmp.path / "out" / "report.json");
  CHECK(rep["result"]["converged"] == true);
  CHECK(rep.contains("config"));
  CHECK(rep.contains("bridge"));
  CHECK(rep.contains("palais_smale"));
  CHECK(nlohmann::json::parse(out.str())["status"] == "converged");
}

TEST_CASE("minimize is deterministic and the seed flag overrides the config") {
  TempDir tmp("determinism");
  std::ostringstream sink;
  CommandOptions opts;
  opts.config_path = write_config(tmp.path, "grid.dims = 4,5,4\nrun.seed = 3\nrun.max_iters = 40\n");
  opts.out = &sink;
  opts.out_dir = (tmp.path / "a").string();
  cmd_minimize(opts);
  opts.out_dir = (tmp.path / "b").string();
  cmd_minimize(opts);
  opts.out_dir = (tmp.path / "c").string();
  opts.seed = 4;
  cmd_minimize(opts);
  const auto ta = slurp(tmp.path / "a" / "trace.csv");
  CHECK(ta == slurp(tmp.path / "b" / "trace.csv"));
  auto ra = read_json(tmp.path / "a" / "report.json");
  auto rb = read_json(tmp.path / "b" / "report.json");
  ra["config"].erase("output.dir");
  rb["config"].erase("output.dir");
  CHECK(ra == rb);
  CHECK(ta != slurp(tmp.path / "c" / "trace.csv"));
}

TEST_CASE("init zero and max_iters exit codes") {
  TempDir tmp("codes");
  std::ostringstream sink;
  CommandOptions opts;
  opts.out = &sink;
  opts.out_dir = (tmp.path / "z").string();
  opts.config_path = write_config(tmp.path, "grid.dims = 4,4,4\nrun.init = zero\n");
  CHECK(cmd_minimize(opts) == 0);
  CHECK(read_json(tmp.path / "z" / "report.json")["energy"]["objective"] == 0.0);

  opts.out_dir = (tmp.path / "m").string();
  opts.config_path = write_config(tmp.path, "grid.dims = 4,4,4\nrun.max_iters = 2\nrun.amplitude = 0.5\n");
  CHECK(cmd_minimize(opts) == 2);
}

TEST_CASE("missing grid.dims is a configuration error naming the key") {
  TempDir tmp("missing");
  CommandOptions opts;
  opts.config_path = write_config(tmp.path, "run.seed = 1\n");
  opts.out_dir = tmp.path.string();
  try {
    cmd_minimize(opts);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
    CHECK(std::string(e.what()).find("grid.dims") != std::string::npos);
  }
  CHECK_THROWS_AS(run_command("frobnicate", opts), Error);
}

TEST_CASE("file initialization replays a snapshot") {
  TempDir tmp("file");
  std::ostringstream sink;
  CommandOptions opts;
  opts.out = &sink;
  opts.out_dir = (tmp.path / "first").string();
  opts.config_path = write_config(tmp.path, "grid.dims = 4,4,4\nrun.max_iters = 5\n");
  cmd_minimize(opts);
  const auto ga = (tmp.path / "first" / "final_gauge.snap").string();
  const auto gs = (tmp.path / "first" / "final_section.snap").string();
  opts.out_dir = (tmp.path / "second").string();
  opts.config_path = write_config(tmp.path, "grid.dims = 4,4,4\nrun.init = file\nrun.init_gauge = " + ga +
                                                "\nrun.init_section = " + gs + "\nrun.max_iters = 5\n");
  CHECK_NOTHROW(cmd_minimize(opts));
  opts.config_path = write_config(tmp.path, "grid.dims = 4,4,8\nrun.init = file\nrun.init_gauge = " + ga +
                                                "\nrun.init_section = " + gs + "\n");
  CHECK_THROWS_AS(cmd_minimize(opts), Error);
}

TEST_CASE("converge, gradcheck, gaugefix and bridge") {
  TempDir tmp("others");
  std::ostringstream sink;
  CommandOptions opts;
  opts.out = &sink;
  opts.out_dir = tmp.path.string();
  opts.config_path = write_config(tmp.path, "converge.sizes = 8,16\n");
  CHECK(cmd_converge(opts) == 0);
  CHECK(fs::exists(tmp.path / "converge.csv"));

  opts.config_path = write_config(tmp.path, "converge.sizes = 8\n");
  CHECK_THROWS_AS(cmd_converge(opts), Error);

  opts.config_path = write_config(tmp.path, "grid.dims = 4,4,4\nrun.amplitude = 0.5\n");
  CHECK(cmd_gradcheck(opts) == 0);
  CHECK(cmd_gaugefix(opts) == 0);
  CHECK(fs::exists(tmp.path / "transform.snap"));
  CHECK(cmd_bridge(opts) == 0);
}

TEST_CASE("check command summary") {
  std::ostringstream out;
  CommandOptions opts;
  opts.out = &out;
  CHECK(cmd_check(opts) == 0);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["status"] == "pass");
  CHECK(j["first_failure"].is_null());

  std::ostringstream bad;
  opts.out = &bad;
  CheckFaults faults;
  faults.flip_tau_sign = true;
  CHECK(cmd_check(opts, faults) == 2);
  CHECK(nlohmann::json::parse(bad.str())["first_failure"] == "tau_sw identity");
}
