#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "gsk/csv.hpp"
#include "gsk/kernel_json.hpp"
#include "test_util.hpp"

using namespace gsk;
using nlohmann::json;

namespace {

std::string cli_path() {
  const char* env = std::getenv("GSK_CLI");
  REQUIRE_MESSAGE(env != nullptr, "GSK_CLI must point at the gsk binary");
  return env;
}

struct RunResult {
  int exit_code = -1;
  std::string stderr_text;
};

RunResult run_cli(const std::string& args, const std::string& tag) {
  const std::string err_path = "/tmp/gsk_cli_test_" + tag + ".stderr";
  const std::string cmd = cli_path() + " " + args + " >/dev/null 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream err(err_path);
  std::stringstream ss;
  ss << err.rdbuf();
  res.stderr_text = ss.str();
  return res;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

// The tests' scratch directory; recreated fresh by the first fixture use.
const std::string kDir = "/tmp/gsk_cli_test";

void reset_dir() {
  const int rc = std::system(("rm -rf " + kDir + " && mkdir -p " + kDir).c_str());
  REQUIRE(rc == 0);
}

std::string write_stationary_kernel(const std::string& name, double sigma2,
                                    double gamma, double omega, double noise) {
  StationaryComponent c;
  c.sigma2 = sigma2;
  c.gamma = Vec::Constant(1, gamma);
  c.omega = Vec::Constant(1, omega);
  const StationaryGSK k(BaseKernel{BaseKind::Matern32}, {c});
  const std::string path = kDir + "/" + name;
  save_kernel_file(path, AnyKernel{k}, noise);
  return path;
}

}  // namespace

TEST_CASE("gp-fit and gp-predict round trip") {
  reset_dir();
  const std::string kernel = write_stationary_kernel("k.json", 1.0, 0.5, 0.2, 0.05);

  // Synthetic 10-point dataset.
  std::vector<std::vector<double>> rows;
  Rng rng(71);
  for (int i = 0; i < 10; ++i) {
    const double x = 0.5 * i;
    rows.push_back({x, std::sin(x) + 0.05 * rng.normal()});
  }
  write_csv(kDir + "/train.csv", {"x1", "y"}, rows);

  const RunResult fit = run_cli("gp-fit --data " + kDir + "/train.csv --kernel " +
                                    kernel + " --out " + kDir +
                                    "/model.json --restarts 3 --seed 5 "
                                    "--max-iters 200",
                                "fit");
  REQUIRE(fit.exit_code == 0);

  SUBCASE("report MLL is at least the warm start's MLL") {
    const json report = json::parse(slurp(kDir + "/model.report.json"));
    const double mll = report["metrics"]["mll"].get<double>();
    for (const auto& trace : report["traces"])
      CHECK(mll >= -trace.front().get<double>());
  }

  SUBCASE("same seed reproduces the model byte for byte") {
    const RunResult fit2 = run_cli(
        "gp-fit --data " + kDir + "/train.csv --kernel " + kernel + " --out " +
            kDir + "/model2.json --restarts 3 --seed 5 --max-iters 200",
        "fit2");
    REQUIRE(fit2.exit_code == 0);
    CHECK(slurp(kDir + "/model.json") == slurp(kDir + "/model2.json"));
    // Reports agree on every run-determined field (paths and timing differ).
    const json r1 = json::parse(slurp(kDir + "/model.report.json"));
    const json r2 = json::parse(slurp(kDir + "/model2.report.json"));
    CHECK(r1["metrics"] == r2["metrics"]);
    CHECK(r1["traces"] == r2["traces"]);
    CHECK(r1["seed"] == r2["seed"]);
  }

  SUBCASE("prediction at a training input tracks the target") {
    // Hand-built model with near-zero noise: the posterior interpolates.
    StationaryComponent c;
    c.sigma2 = 1.0;
    c.gamma = Vec::Constant(1, 0.5);
    c.omega = Vec::Constant(1, 0.2);
    const StationaryGSK k(BaseKernel{BaseKind::Matern32}, {c});
    json model;
    model["schema_version"] = 1;
    model["kernel"] = kernel_to_json(AnyKernel{k}, 1e-10);
    json xs = json::array(), ys = json::array();
    for (const auto& r : rows) {
      xs.push_back(json::array({r[0]}));
      ys.push_back(r[1]);
    }
    model["training_data"] = {{"x", std::move(xs)}, {"y", std::move(ys)}};
    model["centered"] = false;
    model["y_mean"] = 0.0;
    spit(kDir + "/model3.json", model.dump(2) + "\n");

    write_csv(kDir + "/train_inputs.csv", {"x1"},
              [&] {
                std::vector<std::vector<double>> xs2;
                for (const auto& r : rows) xs2.push_back({r[0]});
                return xs2;
              }());
    const RunResult pred = run_cli("gp-predict --model " + kDir +
                                       "/model3.json --inputs " + kDir +
                                       "/train_inputs.csv --out " + kDir +
                                       "/pred.csv",
                                   "pred");
    REQUIRE(pred.exit_code == 0);
    std::ifstream in(kDir + "/pred.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "x1,mean,variance");
    int i = 0;
    while (std::getline(in, line)) {
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      const double mean = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
      CHECK(std::abs(mean - rows[i][1]) < 1e-3);
      ++i;
    }
    CHECK(i == 10);
  }

  SUBCASE("empty inputs produce a header-only CSV") {
    spit(kDir + "/empty.csv", "x1\n");
    const RunResult pred = run_cli("gp-predict --model " + kDir +
                                       "/model.json --inputs " + kDir +
                                       "/empty.csv --out " + kDir + "/pred_empty.csv",
                                   "pred_empty");
    REQUIRE(pred.exit_code == 0);
    CHECK(slurp(kDir + "/pred_empty.csv") == "x1,mean,variance\n");
  }
}

TEST_CASE("gp-predict matches explicit conditioning on two points") {
  reset_dir();
  // Hand-written model file with two training points.
  StationaryComponent c;
  c.sigma2 = 1.3;
  c.gamma = Vec::Constant(1, 0.6);
  c.omega = Vec::Constant(1, 0.15);
  const StationaryGSK k(BaseKernel{BaseKind::SE}, {c});
  const double noise = 0.1;

  json model;
  model["schema_version"] = 1;
  model["kernel"] = kernel_to_json(AnyKernel{k}, noise);
  model["training_data"] = {{"x", json::array({json::array({0.2}),
                                               json::array({1.1})})},
                            {"y", json::array({0.7, -0.4})}};
  model["centered"] = false;
  model["y_mean"] = 0.0;
  spit(kDir + "/model.json", model.dump(2) + "\n");
  write_csv(kDir + "/in.csv", {"x1"}, {{0.6}});

  const RunResult pred = run_cli("gp-predict --model " + kDir +
                                     "/model.json --inputs " + kDir +
                                     "/in.csv --out " + kDir + "/out.csv",
                                 "cond");
  REQUIRE(pred.exit_code == 0);

  // Brute-force conditioning.
  auto kv = [&](double a, double b) { return k(Vec::Constant(1, a - b)); };
  const double k00 = kv(0.2, 0.2) + noise, k01 = kv(0.2, 1.1);
  const double det = k00 * k00 - k01 * k01;
  const double ks0 = kv(0.6, 0.2), ks1 = kv(0.6, 1.1);
  const double a = (ks0 * k00 - ks1 * k01) / det;
  const double b = (ks1 * k00 - ks0 * k01) / det;
  const double want_mean = a * 0.7 + b * (-0.4);
  const double want_var = kv(0.6, 0.6) - (a * ks0 + b * ks1) + noise;

  std::ifstream in(kDir + "/out.csv");
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  const auto c1 = line.find(',');
  const auto c2 = line.find(',', c1 + 1);
  CHECK(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) ==
        doctest::Approx(want_mean).epsilon(1e-9));
  CHECK(std::stod(line.substr(c2 + 1)) == doctest::Approx(want_var).epsilon(1e-9));
}

TEST_CASE("malformed inputs exit with code 2") {
  reset_dir();
  const std::string kernel = write_stationary_kernel("k.json", 1.0, 0.5, 0.2, 0.05);

  SUBCASE("missing y column carries a line number") {
    spit(kDir + "/bad.csv", "x1\n1.0\n");
    const RunResult res = run_cli("gp-fit --data " + kDir + "/bad.csv --kernel " +
                                      kernel + " --out " + kDir + "/m.json",
                                  "bady");
    CHECK(res.exit_code == 2);
    CHECK(res.stderr_text.find(":1:") != std::string::npos);
  }

  SUBCASE("non-numeric data row carries its line number") {
    spit(kDir + "/bad2.csv", "x1,y\n1.0,2.0\noops,3.0\n");
    const RunResult res = run_cli("gp-fit --data " + kDir + "/bad2.csv --kernel " +
                                      kernel + " --out " + kDir + "/m.json",
                                  "badrow");
    CHECK(res.exit_code == 2);
    CHECK(res.stderr_text.find(":3:") != std::string::npos);
  }

  SUBCASE("unknown family flag") {
    const RunResult res = run_cli(
        "approx --family bogus --hurst 0.5 --out " + kDir + "/r.json", "badfam");
    CHECK(res.exit_code == 2);
  }

  SUBCASE("hurst outside (0,1)") {
    const RunResult res = run_cli(
        "approx --family ns-se --hurst 1.5 --out " + kDir + "/r.json", "badh");
    CHECK(res.exit_code == 2);
  }

  SUBCASE("rff rejects a nonstationary kernel") {
    Rng rng(5);
    const auto nk = testutil::random_nonstationary(rng, 2, 1, BaseKind::SE,
                                                   StarVariant::Separable);
    save_kernel_file(kDir + "/ns.json", AnyKernel{nk}, 0.0);
    const RunResult res = run_cli("rff --kernel " + kDir +
                                      "/ns.json --features 16 --out " + kDir +
                                      "/rff.csv",
                                  "rffns");
    CHECK(res.exit_code == 2);
  }

  SUBCASE("prior grid size cap") {
    const RunResult res = run_cli("sample-prior --kernel " + kernel +
                                      " --grid-min 0 --grid-max 1 --grid-steps "
                                      "4000 --out " +
                                      kDir + "/p.csv",
                                  "bigprior");
    CHECK(res.exit_code == 2);
  }
}

TEST_CASE("rff command output") {
  reset_dir();
  const std::string kernel = write_stationary_kernel("k.json", 1.7, 0.4, 0.6, 0.0);
  const RunResult res = run_cli("rff --kernel " + kernel +
                                    " --features 256 --seed 9 --tau-max 2 "
                                    "--tau-steps 21 --out " +
                                    kDir + "/rff.csv",
                                "rff");
  REQUIRE(res.exit_code == 0);
  std::ifstream in(kDir + "/rff.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "tau,exact,estimate,abs_error");
  std::getline(in, line);
  // First row is tau = 0: estimate equals the exact amplitude sum.
  CHECK(line == "0,1.7,1.7,0");
}

TEST_CASE("sample-prior behavior") {
  reset_dir();
  const std::string kernel = write_stationary_kernel("k.json", 1.0, 2.0, 0.0, 0.0);

  SUBCASE("fixed seed gives identical CSV") {
    const RunResult a = run_cli("sample-prior --kernel " + kernel +
                                    " --grid-min 0 --grid-max 10 --grid-steps "
                                    "200 --seed 4 --out " +
                                    kDir + "/a.csv",
                                "pa");
    const RunResult b = run_cli("sample-prior --kernel " + kernel +
                                    " --grid-min 0 --grid-max 10 --grid-steps "
                                    "200 --seed 4 --out " +
                                    kDir + "/b.csv",
                                "pb");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(slurp(kDir + "/a.csv") == slurp(kDir + "/b.csv"));
  }

  SUBCASE("sample variance is near k(0) for a wide grid") {
    const RunResult res = run_cli("sample-prior --kernel " + kernel +
                                      " --grid-min 0 --grid-max 50 --grid-steps "
                                      "1000 --seed 11 --out " +
                                      kDir + "/s.csv",
                                  "pvar");
    REQUIRE(res.exit_code == 0);
    std::ifstream in(kDir + "/s.csv");
    std::string line;
    std::getline(in, line);
    double sum = 0.0, sq = 0.0;
    int n = 0;
    while (std::getline(in, line)) {
      const double v = std::stod(line.substr(line.find(',') + 1));
      sum += v;
      sq += v * v;
      ++n;
    }
    const double var = sq / n - (sum / n) * (sum / n);
    CHECK(var > 1.0 / 3.0);
    CHECK(var < 3.0);
  }

  SUBCASE("near-zero amplitudes give a near-zero sample") {
    const std::string tiny =
        write_stationary_kernel("tiny.json", 1e-12, 1.0, 0.0, 0.0);
    const RunResult res = run_cli("sample-prior --kernel " + tiny +
                                      " --grid-min 0 --grid-max 1 --grid-steps "
                                      "100 --seed 3 --out " +
                                      kDir + "/t.csv",
                                  "ptiny");
    REQUIRE(res.exit_code == 0);
    std::ifstream in(kDir + "/t.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      const double v = std::stod(line.substr(line.find(',') + 1));
      CHECK(std::abs(v) < 1e-3);
    }
  }
}

TEST_CASE("approx self-fit reaches a realizable target") {
  reset_dir();
  const RunResult res = run_cli(
      "approx --family ns-se --components 3 --restarts 8 --seed 21 "
      "--max-iters 600 --self-fit --out " +
          kDir + "/self.json",
      "selffit");
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(slurp(kDir + "/self.json"));
  CHECK(report["metrics"]["normalized_rmse"].get<double>() < 0.01);
}
