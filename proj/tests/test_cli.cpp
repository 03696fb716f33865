#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "sigchar/cli.hpp"
#include "sigchar/io.hpp"
#include "sigchar/models.hpp"

using namespace sigchar;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
  Json report() const { return Json::parse(out); }
};

class Workdir {
public:
  Workdir() : dir_(fs::temp_directory_path() / ("sigchar_cli_" + std::to_string(counter_++))) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workdir() { fs::remove_all(dir_); }

  fs::path write(const std::string &name, const std::string &text) const {
    write_text_file(dir_ / name, text);
    return dir_ / name;
  }
  const fs::path &dir() const { return dir_; }

private:
  static inline int counter_ = 0;
  fs::path dir_;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Result run_manifest(const Workdir &w, const std::string &command, const std::string &manifest,
                    std::vector<std::string> extra = {}) {
  const fs::path m = w.write(command + "_manifest.json", manifest);
  std::vector<std::string> args{command, "--manifest", m.string()};
  args.insert(args.end(), extra.begin(), extra.end());
  return run(args);
}

const char *kLPath = R"({"width": 2, "times": [0, 1, 2], "points": [[0, 0], [1, 0], [1, 1]]})";

} // namespace

TEST_CASE("sig on the L-path") {
  Workdir w;
  const auto r = run_manifest(w, "sig", std::string(R"({"command": "sig", "seed": 5, "depth": 2, "path": )") + kLPath + "}");
  REQUIRE(r.code == cli::kExitOk);
  const Json rep = r.report();
  CHECK(rep["schema"] == "sigchar/1");
  CHECK(rep["command"] == "sig");
  CHECK(rep["seed"] == 5);
  CHECK(rep["manifest"]["depth"] == 2);
  const Json levels = rep["results"]["signature"]["levels"];
  CHECK(levels[1] == Json::parse("[1.0, 1.0]"));
  CHECK(levels[2] == Json::parse("[0.5, 1.0, 0.0, 0.5]"));
}

TEST_CASE("sig from a CSV file, written to an output directory") {
  Workdir w;
  w.write("l.csv", "t,x1,x2\n0,0,0\n1,1,0\n2,1,1\n");
  const fs::path out = w.dir() / "out";
  const auto r = run_manifest(w, "sig", R"({"depth": 2, "path": "l.csv"})", {"--out", out.string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(fs::exists(out / "sig.json"));
  const std::string csv = read_text_file(out / "signature.csv");
  CHECK(csv.rfind("word,level,coefficient\ne,0,1\n1,1,1\n2,1,1\n11,2,0.5\n12,2,1\n", 0) == 0);
  const auto quiet = run_manifest(w, "sig", R"({"depth": 2, "path": "l.csv"})", {"--out", out.string(), "--quiet"});
  CHECK(quiet.out.empty());
}

TEST_CASE("develop a scalar path under (i)") {
  Workdir w;
  const double a = 0.7;
  const auto r = run_manifest(w, "develop",
                              R"({"path": {"width": 1, "times": [0, 1], "points": [[0], [0.7]]},
                                  "rep": {"builtin": "scalar_i", "width": 1}})");
  REQUIRE(r.code == cli::kExitOk);
  const Json u = r.report()["results"]["unitary"];
  CHECK(u[0][0][0].get<double>() == doctest::Approx(std::cos(a)).epsilon(1e-15));
  CHECK(u[0][0][1].get<double>() == doctest::Approx(std::sin(a)).epsilon(1e-15));
}

TEST_CASE("charfn on the Lie exponential model reports the closed-form comparison") {
  Workdir w;
  const auto r = run_manifest(w, "charfn",
                              R"({"seed": 11, "n_mc": 4000, "r": [0.5, 1.0],
                                  "model": {"name": "lie_exponential", "q": 0.5, "pn": [1, 0, 0, 0, 0]}})");
  REQUIRE(r.code == cli::kExitOk);
  const Json table = r.report()["results"]["closed_form_comparison"];
  REQUIRE(table.size() == 2);
  for (const auto &row : table) {
    CHECK(row.contains("estimate"));
    CHECK(row.contains("displayed_series"));
    CHECK(row.contains("exact"));
  }
  // pn = delta_0: the displayed series uses r^0 = 1 and agrees with the exact value only at r = 1
  CHECK(table[0]["displayed_series"] != table[0]["exact"]);
  CHECK(table[1]["displayed_series"] == table[1]["exact"]);
  CHECK(table[0]["within_3sigma_exact"] == true);
  CHECK(table[1]["within_3sigma_exact"] == true);
}

TEST_CASE("every command runs on a small manifest") {
  Workdir w;
  const std::string rw = R"({"name": "random_walk", "n_steps": 4, "depth": 4})";
  CHECK(run_manifest(w, "greedy", std::string(R"({"p": 1, "alpha": 0.5, "path": )") + kLPath + "}").code == 0);
  CHECK(run_manifest(w, "expsig", R"({"n_mc": 200, "model": )" + rw + "}").code == 0);
  CHECK(run_manifest(w, "charfn", R"({"n_mc": 200, "panel": {"count": 2}, "model": )" + rw + "}").code == 0);
  CHECK(run_manifest(w, "phicurve",
                     R"({"n_mc": 200, "lambdas": [0, 0.5, 1], "rep": {"builtin": "su2_example"}, "model": )" + rw + "}")
            .code == 0);
  CHECK(run_manifest(w, "radii", R"({"n_mc": 200, "model": )" + rw + "}").code == 0);
  CHECK(run_manifest(w, "tails", R"({"n_mc": 20, "model": )" + rw + "}").code == 0);
  CHECK(run_manifest(w, "moments", R"({"n_mc": 200, "family": {"steps": [2, 4, 8]}, "panel": {"count": 2}})").code == 0);
  CHECK(run_manifest(w, "separate", R"({"tensor": {"width": 2, "depth": 2, "levels": [[0], [0, 0], [0, 1, -1, 0]]}})").code == 0);
  CHECK(run_manifest(w, "check", std::string(R"({"depth": 4, "paths": [)") + kLPath + "]}").code == 0);
  CHECK(run_manifest(w, "check", R"({"depth": 4, "n_mc": 5, "model": )" + rw + "}").code == 0);
}

TEST_CASE("greedy on a constant-speed line") {
  Workdir w;
  const auto r = run_manifest(w, "greedy", R"({"p": 1, "alpha": 0.3, "path": {"width": 1, "times": [0, 1], "points": [[0], [1]]}})");
  REQUIRE(r.code == 0);
  const Json res = r.report()["results"];
  CHECK(res["count"] == 3);
  CHECK(res["taus"].size() == 5);
  CHECK(res["taus"][2].get<double>() == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("seed handling and determinism") {
  Workdir w;
  const std::string m = R"({"seed": 3, "n_mc": 300, "model": {"name": "one_d", "law": "normal", "depth": 4}})";
  const auto a = run_manifest(w, "expsig", m);
  const auto b = run_manifest(w, "expsig", m);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = run_manifest(w, "expsig", m, {"--seed", "4"});
  CHECK(c.report()["seed"] == 4);
  CHECK(c.report()["results"] != a.report()["results"]);
  CHECK(run_manifest(w, "expsig", R"({"seed": -1, "model": {"name": "one_d"}})").code == cli::kExitValidation);
}

TEST_CASE("validation errors exit with 2") {
  Workdir w;
  const std::string sig = std::string(R"({"depth": 2, "path": )") + kLPath;
  auto unknown = run_manifest(w, "sig", sig + R"(, "colour": "red"})");
  CHECK(unknown.code == cli::kExitValidation);
  CHECK(unknown.err.find("colour") != std::string::npos);
  CHECK(run_manifest(w, "sig", sig + R"(, "command": "develop"})").code == cli::kExitValidation);
  CHECK(run_manifest(w, "sig", R"({"depth": 2})").code == cli::kExitValidation);
  CHECK(run_manifest(w, "sig", R"({"depth": 2, "path": "missing.json"})").code == cli::kExitValidation);
  CHECK(run_manifest(w, "sig", "{ not json").code == cli::kExitValidation);
  CHECK(run_manifest(w, "develop", std::string(R"({"rep": {"builtin": "scalar_i", "width": 1}, "path": )") + kLPath + "}").code ==
        cli::kExitValidation);
  CHECK(run_manifest(w, "expsig", R"({"model": {"name": "lie_exponential", "q": 0.5, "shape": 2}})").code ==
        cli::kExitValidation);
  CHECK(run_manifest(w, "expsig", R"({"model": {"name": "lie_exponential", "q": 1.5}})").code == cli::kExitValidation);
  CHECK(run_manifest(w, "separate", R"({"tensor": {"width": 2, "depth": 1, "levels": [[1], [0, 0]]}})").code ==
        cli::kExitValidation);
  CHECK(run({"frobnicate", "--manifest", "x.json"}).code == cli::kExitValidation);
  CHECK(run({"sig"}).code == cli::kExitValidation);
  CHECK(run({"sig", "--manifest"}).code == cli::kExitValidation);
  CHECK(run_manifest(w, "check", std::string(R"({"tolerances": {"chen": -1}, "paths": [)") + kLPath + "]}").code ==
        cli::kExitValidation);
}

TEST_CASE("a violated check exits with 3") {
  Workdir w;
  const auto r = run_manifest(w, "check", std::string(R"({"depth": 4, "tolerances": {"unitarity": 0}, "paths": [)") + kLPath +
                                              R"(, {"width": 2, "times": [0, 0.5, 3], "points": [[0, 0], [2, -1], [0.3, 4]]}]})");
  CHECK(r.code == cli::kExitNumeric);
  bool saw = false;
  const Json report = Json::parse(r.out);
  for (const auto &c : report["results"]["checks"]) {
    if (c["name"] == "unitarity") saw = c["passed"] == false;
  }
  CHECK(saw);
}

TEST_CASE("help and command list") {
  const auto h = run({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("--manifest") != std::string::npos);
  CHECK(cli::commands().size() == 11);
}

TEST_CASE("the installed binary") {
  const char *bin = std::getenv("SIGCHAR_BIN");
  if (!bin) return;
  Workdir w;
  const fs::path m = w.write("m.json", std::string(R"({"depth": 1, "path": )") + kLPath + "}");
  const fs::path out = w.dir() / "o";
  const std::string cmd = std::string(bin) + " sig --manifest " + m.string() + " --out " + out.string() + " --quiet";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(out / "sig.json"));
  const std::string bad = std::string(bin) + " sig --manifest " + (w.dir() / "nope.json").string() + " 2>/dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
