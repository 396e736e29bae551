// gsk: spectral kernel experiments over CSV/JSON artifacts.
//
// Subcommands: gp-fit, gp-predict, approx, rff, sample-prior. Exit codes:
// 0 success, 2 malformed input, 3 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gsk/approx_bench.hpp"
#include "gsk/basis.hpp"
#include "gsk/csv.hpp"
#include "gsk/gp.hpp"
#include "gsk/kernel_json.hpp"
#include "gsk/objectives.hpp"
#include "gsk/rff.hpp"

namespace {

using gsk::AnyKernel;
using gsk::Dataset;
using gsk::Mat;
using gsk::Vec;
using nlohmann::json;

std::string replace_extension(const std::string& path, const std::string& ext) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + ext;
  return path.substr(0, dot) + ext;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return j;
}

json traces_to_json(const gsk::FitReport& rep) {
  json t = json::array();
  for (const auto& trace : rep.traces) t.push_back(trace);
  return t;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

// ---------------------------------------------------------------------------
// gp-fit

struct GpFitArgs {
  std::string data_path, kernel_path, out_path;
  int restarts = 5;
  std::uint64_t seed = 0;
  int max_iters = 2000;
  bool center = false;
};

int run_gp_fit(const GpFitArgs& args) {
  const Stopwatch watch;
  Dataset data = gsk::read_dataset_csv(args.data_path);
  const gsk::KernelConfig config = gsk::load_kernel_file(args.kernel_path);
  const gsk::KernelTemplate tmpl = gsk::template_of(config.kernel);
  data.validate(tmpl.dim);

  double y_mean = 0.0;
  if (args.center) {
    y_mean = data.y.mean();
    data.y.array() -= y_mean;
  }

  gsk::OptimizerConfig cfg;
  cfg.restarts = args.restarts;
  cfg.seed = args.seed;
  cfg.max_iterations = args.max_iters;
  // The kernel file provides restart 0's starting point.
  const Vec warm = gsk::pack(config.kernel, config.noise_variance);
  const gsk::FitReport rep = gsk::train_gp(data, tmpl, cfg, warm);
  const auto [kernel, noise] = gsk::unpack(rep.best_params, tmpl);

  json model;
  model["schema_version"] = 1;
  model["kernel"] = gsk::kernel_to_json(kernel, noise);
  json xs = json::array();
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) row.push_back(data.X(i, j));
    xs.push_back(std::move(row));
  }
  json ys = json::array();
  for (Eigen::Index i = 0; i < data.y.size(); ++i) ys.push_back(data.y[i]);
  model["training_data"] = {{"x", std::move(xs)}, {"y", std::move(ys)}};
  model["centered"] = args.center;
  model["y_mean"] = y_mean;
  write_json_file(args.out_path, model);

  const std::string report_path = replace_extension(args.out_path, ".report.json");
  json report;
  report["schema_version"] = 1;
  report["command"] = "gp-fit";
  report["config"] = {{"data", args.data_path},   {"kernel", args.kernel_path},
                      {"out", args.out_path},     {"restarts", args.restarts},
                      {"max_iters", args.max_iters}, {"center", args.center}};
  report["seed"] = args.seed;
  report["metrics"] = {{"mll", -rep.best_objective},
                       {"best_restart", rep.best_restart}};
  report["traces"] = traces_to_json(rep);
  report["outputs"] = json::array({args.out_path, report_path});
  report["wall_seconds"] = watch.seconds();
  write_json_file(report_path, report);

  std::cout << "gp-fit: mll " << gsk::format_double(-rep.best_objective)
            << ", model " << args.out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// gp-predict

struct GpPredictArgs {
  std::string model_path, inputs_path, out_path;
  bool latent_variance = false;
};

int run_gp_predict(const GpPredictArgs& args) {
  const json model = read_json_file(args.model_path);
  if (!model.contains("kernel") || !model.contains("training_data"))
    throw std::invalid_argument(args.model_path +
                                ": not a model file (missing kernel/training_data)");
  const gsk::KernelConfig config = gsk::kernel_from_json(model["kernel"]);
  Dataset data;
  const auto& td = model["training_data"];
  const auto& xs = td.at("x");
  const auto& ys = td.at("y");
  data.X.resize(static_cast<Eigen::Index>(xs.size()),
                gsk::kernel_dim(config.kernel));
  data.y.resize(static_cast<Eigen::Index>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& row = xs[i];
    if (static_cast<Eigen::Index>(row.size()) != data.X.cols())
      throw std::invalid_argument(args.model_path + ": ragged training_data.x");
    for (std::size_t j = 0; j < row.size(); ++j)
      data.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          row[j].get<double>();
    data.y[static_cast<Eigen::Index>(i)] = ys.at(i).get<double>();
  }
  const double y_mean = model.value("y_mean", 0.0);

  const Mat inputs = gsk::read_inputs_csv(args.inputs_path);
  gsk::check_dim(inputs.cols(), gsk::kernel_dim(config.kernel), "prediction inputs");

  Vec mean, variance;
  if (data.size() == 0) {
    const gsk::GPModel gp = gsk::GPModel::prior(
        config.kernel, config.noise_variance, gsk::kernel_dim(config.kernel));
    gp.predict(inputs, mean, variance, args.latent_variance);
  } else {
    const gsk::GPModel gp =
        gsk::GPModel::fit(config.kernel, config.noise_variance, data);
    gp.predict(inputs, mean, variance, args.latent_variance);
  }
  mean.array() += y_mean;

  std::vector<std::string> header;
  for (Eigen::Index j = 0; j < inputs.cols(); ++j)
    header.push_back("x" + std::to_string(j + 1));
  header.push_back("mean");
  header.push_back("variance");
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < inputs.cols(); ++j) row.push_back(inputs(i, j));
    row.push_back(mean[i]);
    row.push_back(variance[i]);
    rows.push_back(std::move(row));
  }
  gsk::write_csv(args.out_path, header, rows);
  std::cout << "gp-predict: " << inputs.rows() << " rows -> " << args.out_path
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// approx

struct ApproxArgs {
  std::string target = "ifbm";
  double hurst = 0.5;
  std::string family;
  int components = 5;
  int restarts = 10;
  std::uint64_t seed = 0;
  int max_iters = 2000;
  std::string out_path;
  bool self_fit = false;
};

int run_approx(const ApproxArgs& args) {
  const Stopwatch watch;
  if (args.target != "ifbm")
    throw std::invalid_argument("unknown --target '" + args.target +
                                "' (only ifbm is built in)");
  if (!(args.hurst > 0.0 && args.hurst < 1.0))
    throw std::invalid_argument("--hurst must lie in (0, 1)");
  const gsk::Family family = gsk::family_from_string(args.family);

  gsk::OptimizerConfig cfg;
  cfg.restarts = args.restarts;
  cfg.seed = args.seed;
  cfg.max_iterations = args.max_iters;

  const gsk::EvalGrid grid = gsk::EvalGrid::ifbm_default();
  const gsk::IFBMKernel ifbm{args.hurst};

  gsk::PairTarget target_fn;
  if (args.self_fit) {
    // Harness mode: the target is a realizable kernel from the same family,
    // drawn with mild parameters so the grid mean stays well positive.
    const gsk::KernelTemplate tmpl = gsk::family_template(family, args.components);
    gsk::InitRanges mild;
    mild.amplitude_lo = 0.5;
    mild.amplitude_hi = 1.0;
    mild.inverse_scale_lo = 0.2;
    mild.inverse_scale_hi = 1.0;
    mild.frequency_lo = 0.1;
    mild.frequency_hi = 0.8;
    gsk::Rng rng(args.seed, 777);
    const auto [target_kernel, target_noise] =
        gsk::unpack(gsk::sample_initial(tmpl, mild, rng), tmpl);
    (void)target_noise;
    const AnyKernel held = target_kernel;
    target_fn = [held](const Vec& a, const Vec& b) {
      return gsk::eval_pair(held, a, b);
    };
  } else {
    target_fn = [ifbm](const Vec& a, const Vec& b) { return ifbm(a[0], b[0]); };
  }

  gsk::ApproxResult res =
      gsk::fit_target(target_fn, grid, family, args.components, cfg);

  // Normalized RMSE against whichever target was fitted.
  double target_mean = 0.0;
  for (const auto& [a, b] : grid.pairs()) target_mean += target_fn(a, b);
  target_mean /= static_cast<double>(grid.pairs().size());
  res.norm_rmse = std::sqrt(res.sse / static_cast<double>(grid.pairs().size())) /
                  target_mean;

  const std::string kernel_path = replace_extension(args.out_path, ".kernel.json");
  gsk::save_kernel_file(kernel_path, res.kernel, 0.0);

  // Kernel sections along s = 0.5.
  const std::string sections_path =
      replace_extension(args.out_path, ".sections.csv");
  {
    std::vector<std::vector<double>> rows;
    Vec s(1);
    s[0] = 0.5;
    for (double t : grid.points) {
      Vec a(1);
      a[0] = t;
      rows.push_back({t, target_fn(a, s), gsk::eval_pair(res.kernel, a, s)});
    }
    gsk::write_csv(sections_path, {"t", "target", "fitted"}, rows);
  }

  json report;
  report["schema_version"] = 1;
  report["command"] = "approx";
  report["config"] = {{"target", args.target},
                      {"hurst", args.hurst},
                      {"family", args.family},
                      {"components", args.components},
                      {"restarts", args.restarts},
                      {"max_iters", args.max_iters},
                      {"self_fit", args.self_fit},
                      {"out", args.out_path}};
  report["seed"] = args.seed;
  report["metrics"] = {{"normalized_rmse", res.norm_rmse},
                       {"sse", res.sse},
                       {"best_restart", res.fit.best_restart}};
  report["traces"] = traces_to_json(res.fit);
  report["outputs"] = json::array({args.out_path, kernel_path, sections_path});
  report["wall_seconds"] = watch.seconds();
  write_json_file(args.out_path, report);

  std::cout << "approx: family " << args.family << ", normalized RMSE "
            << gsk::format_double(res.norm_rmse) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// rff

struct RffArgs {
  std::string kernel_path;
  int features = 1024;
  std::uint64_t seed = 0;
  double tau_max = 3.0;
  int tau_steps = 100;
  std::string out_path;
};

int run_rff(const RffArgs& args) {
  const gsk::KernelConfig config = gsk::load_kernel_file(args.kernel_path);
  const auto* stationary = std::get_if<gsk::StationaryGSK>(&config.kernel);
  if (stationary == nullptr)
    throw std::invalid_argument("rff requires a stationary kernel config");
  if (stationary->dim() != 1)
    throw std::invalid_argument("rff tau grid is 1-d; kernel has dim " +
                                std::to_string(stationary->dim()));
  if (args.features < 1) throw std::invalid_argument("--features must be >= 1");
  if (args.tau_steps < 1) throw std::invalid_argument("--tau-steps must be >= 1");
  if (!(args.tau_max >= 0.0)) throw std::invalid_argument("--tau-max must be >= 0");

  const gsk::RFFBasis basis =
      gsk::sample_frequencies(*stationary, args.features, args.seed);
  std::vector<Vec> taus;
  for (int i = 0; i < args.tau_steps; ++i) {
    Vec t(1);
    t[0] = args.tau_steps == 1
               ? 0.0
               : args.tau_max * i / static_cast<double>(args.tau_steps - 1);
    taus.push_back(std::move(t));
  }
  const Vec est = gsk::estimate_kernel(basis, taus);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double exact = (*stationary)(taus[i]);
    const double estimate = est[static_cast<Eigen::Index>(i)];
    rows.push_back({taus[i][0], exact, estimate, std::abs(estimate - exact)});
  }
  gsk::write_csv(args.out_path, {"tau", "exact", "estimate", "abs_error"}, rows);
  std::cout << "rff: " << args.features << " features, " << args.tau_steps
            << " lags -> " << args.out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sample-prior

struct SamplePriorArgs {
  std::string kernel_path;
  std::string inputs_path;
  double grid_min = 0.0;
  double grid_max = 1.0;
  int grid_steps = 0;
  std::uint64_t seed = 0;
  std::string out_path;
};

int run_sample_prior(const SamplePriorArgs& args) {
  const gsk::KernelConfig config = gsk::load_kernel_file(args.kernel_path);
  const int d = gsk::kernel_dim(config.kernel);

  Mat X;
  if (!args.inputs_path.empty()) {
    X = gsk::read_inputs_csv(args.inputs_path);
    gsk::check_dim(X.cols(), d, "prior sample inputs");
  } else {
    if (args.grid_steps < 1)
      throw std::invalid_argument(
          "provide --inputs or a grid via --grid-min/--grid-max/--grid-steps");
    if (d != 1)
      throw std::invalid_argument(
          "--grid-* options build a 1-d grid; kernel has dim " + std::to_string(d));
    X.resize(args.grid_steps, 1);
    for (int i = 0; i < args.grid_steps; ++i)
      X(i, 0) = args.grid_steps == 1
                    ? args.grid_min
                    : args.grid_min + (args.grid_max - args.grid_min) * i /
                                          static_cast<double>(args.grid_steps - 1);
  }
  if (X.rows() > 2000)
    throw std::invalid_argument("prior sampling grid capped at 2000 points (got " +
                                std::to_string(X.rows()) + ")");
  if (X.rows() < 1) throw std::invalid_argument("prior sampling grid is empty");

  const Mat G = gsk::gram(config.kernel, X);
  const Mat L = gsk::jittered_cholesky(G);  // NumericalError -> exit 3
  gsk::Rng rng(args.seed);
  Vec z(X.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  const Vec sample = L * z;

  std::vector<std::string> header;
  for (int j = 0; j < d; ++j) header.push_back("x" + std::to_string(j + 1));
  header.push_back("sample");
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    std::vector<double> row;
    for (int j = 0; j < d; ++j) row.push_back(X(i, j));
    row.push_back(sample[i]);
    rows.push_back(std::move(row));
  }
  gsk::write_csv(args.out_path, header, rows);
  std::cout << "sample-prior: " << X.rows() << " points -> " << args.out_path
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized spectral kernels: GP regression, kernel "
               "approximation, and random Fourier features"};
  app.require_subcommand(1);

  GpFitArgs fit_args;
  auto* fit = app.add_subcommand("gp-fit",
                                 "Fit GP hyperparameters by maximum marginal "
                                 "likelihood");
  fit->add_option("--data", fit_args.data_path, "Training CSV (x1..xd,y)")
      ->required();
  fit->add_option("--kernel", fit_args.kernel_path,
                  "Kernel config JSON (also restart 0's starting point)")
      ->required();
  fit->add_option("--out", fit_args.out_path, "Output model JSON")->required();
  fit->add_option("--restarts", fit_args.restarts, "Optimizer restarts");
  fit->add_option("--seed", fit_args.seed, "Random seed");
  fit->add_option("--max-iters", fit_args.max_iters, "Iteration cap per restart");
  fit->add_flag("--center", fit_args.center, "Subtract the training mean of y");

  GpPredictArgs predict_args;
  auto* predict =
      app.add_subcommand("gp-predict", "Predict from a fitted model file");
  predict->add_option("--model", predict_args.model_path, "Model JSON from gp-fit")
      ->required();
  predict->add_option("--inputs", predict_args.inputs_path, "Inputs CSV (x1..xd)")
      ->required();
  predict->add_option("--out", predict_args.out_path, "Output CSV")->required();
  predict->add_flag("--latent-variance", predict_args.latent_variance,
                    "Report latent (noise-free) predictive variance");

  ApproxArgs approx_args;
  auto* approx = app.add_subcommand(
      "approx", "Fit a spectral kernel family to a target covariance");
  approx->add_option("--target", approx_args.target, "Target kernel (ifbm)");
  approx->add_option("--hurst", approx_args.hurst, "IFBM Hurst index in (0,1)");
  approx
      ->add_option("--family", approx_args.family,
                   "s-se|ss|ns-se|ns-ma12|ns-ma32|ns-ma52")
      ->required();
  approx->add_option("--components", approx_args.components,
                     "Spectral components K");
  approx->add_option("--restarts", approx_args.restarts, "Optimizer restarts");
  approx->add_option("--seed", approx_args.seed, "Random seed");
  approx->add_option("--max-iters", approx_args.max_iters,
                     "Iteration cap per restart");
  approx->add_option("--out", approx_args.out_path, "Output report JSON")
      ->required();
  approx->add_flag("--self-fit", approx_args.self_fit,
                   "Replace the target by a random kernel from the same family");

  RffArgs rff_args;
  auto* rff = app.add_subcommand(
      "rff", "Random Fourier feature estimates of a stationary kernel");
  rff->add_option("--kernel", rff_args.kernel_path, "Stationary kernel JSON")
      ->required();
  rff->add_option("--features", rff_args.features, "Number of sampled frequencies");
  rff->add_option("--seed", rff_args.seed, "Random seed");
  rff->add_option("--tau-max", rff_args.tau_max, "Largest lag on the tau grid");
  rff->add_option("--tau-steps", rff_args.tau_steps, "Number of tau grid points");
  rff->add_option("--out", rff_args.out_path, "Output CSV")->required();

  SamplePriorArgs prior_args;
  auto* prior = app.add_subcommand("sample-prior",
                                   "Draw one zero-mean sample of the kernel's "
                                   "prior on a grid");
  prior->add_option("--kernel", prior_args.kernel_path, "Kernel JSON")->required();
  prior->add_option("--inputs", prior_args.inputs_path,
                    "Inputs CSV (alternative to --grid-*)");
  prior->add_option("--grid-min", prior_args.grid_min, "Grid start (1-d)");
  prior->add_option("--grid-max", prior_args.grid_max, "Grid end (1-d)");
  prior->add_option("--grid-steps", prior_args.grid_steps, "Grid size (<= 2000)");
  prior->add_option("--seed", prior_args.seed, "Random seed");
  prior->add_option("--out", prior_args.out_path, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (fit->parsed()) return run_gp_fit(fit_args);
    if (predict->parsed()) return run_gp_predict(predict_args);
    if (approx->parsed()) return run_approx(approx_args);
    if (rff->parsed()) return run_rff(rff_args);
    if (prior->parsed()) return run_sample_prior(prior_args);
  } catch (const gsk::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
