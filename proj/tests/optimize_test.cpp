#include <doctest.h>

#include <cmath>

#include "gsk/objectives.hpp"
#include "gsk/optimize.hpp"
#include "test_util.hpp"

using namespace gsk;
using namespace gsk::testutil;

namespace {

InitSampler fixed_start(const Vec& x0) {
  return [x0](int, Rng&) { return x0; };
}

bool reports_equal_modulo_time(const FitReport& a, const FitReport& b) {
  if (a.best_restart != b.best_restart) return false;
  if (a.best_objective != b.best_objective) return false;
  if (a.best_params.size() != b.best_params.size()) return false;
  for (Eigen::Index i = 0; i < a.best_params.size(); ++i)
    if (a.best_params[i] != b.best_params[i]) return false;
  if (a.traces != b.traces) return false;
  return a.seed == b.seed;
}

}  // namespace

TEST_CASE("minimize on convex scalar objectives") {
  OptimizerConfig cfg;
  cfg.restarts = 1;

  SUBCASE("quadratic with minimum at 3") {
    const ObjectiveFn f = [](const Vec& x, Vec& g) {
      g.resize(1);
      g[0] = 2.0 * (x[0] - 3.0);
      return (x[0] - 3.0) * (x[0] - 3.0);
    };
    const FitReport rep = minimize(f, fixed_start(Vec::Zero(1)), cfg);
    CHECK(std::abs(rep.best_params[0] - 3.0) < 1e-6);
    CHECK(rep.best_restart == 0);
  }

  SUBCASE("stationary start terminates immediately") {
    int evals = 0;
    const ObjectiveFn f = [&evals](const Vec& x, Vec& g) {
      ++evals;
      g.resize(1);
      g[0] = 4.0 * x[0] * x[0] * x[0];
      return x[0] * x[0] * x[0] * x[0];
    };
    const FitReport rep = minimize(f, fixed_start(Vec::Zero(1)), cfg);
    CHECK(rep.best_objective == 0.0);
    CHECK(evals == 1);
    REQUIRE(rep.traces.size() == 1);
    CHECK(rep.traces[0].size() == 1);
  }

  SUBCASE("2-d quadratic recovers the analytic minimizer") {
    Mat A(2, 2);
    A << 3.0, 0.5, 0.5, 1.0;
    Vec target(2);
    target << -1.2, 2.5;
    const ObjectiveFn f = [&](const Vec& x, Vec& g) {
      const Vec r = x - target;
      g = 2.0 * A * r;
      return r.dot(A * r);
    };
    const FitReport rep = minimize(f, fixed_start(Vec::Zero(2)), cfg);
    CHECK((rep.best_params - target).lpNorm<Eigen::Infinity>() < 1e-6);
  }
}

TEST_CASE("minimize restart behavior") {
  // Double well x^4 - 2 x^2: minima at +-1, value -1.
  const ObjectiveFn f = [](const Vec& x, Vec& g) {
    g.resize(1);
    g[0] = 4.0 * x[0] * x[0] * x[0] - 4.0 * x[0];
    return x[0] * x[0] * x[0] * x[0] - 2.0 * x[0] * x[0];
  };
  const InitSampler sampler = [](int, Rng& rng) {
    Vec v(1);
    v[0] = rng.uniform(-2.0, 2.0);
    return v;
  };

  OptimizerConfig cfg;
  cfg.restarts = 6;
  cfg.seed = 42;
  const FitReport rep = minimize(f, sampler, cfg);
  CHECK(rep.best_objective == doctest::Approx(-1.0).epsilon(1e-10));

  SUBCASE("best value never exceeds any restart's initialization") {
    for (const auto& trace : rep.traces) {
      REQUIRE(!trace.empty());
      CHECK(rep.best_objective <= trace.front());
      // Monotone decrease within each restart (Armijo line search).
      for (std::size_t i = 1; i < trace.size(); ++i)
        CHECK(trace[i] <= trace[i - 1]);
    }
  }

  SUBCASE("identical config and seed reproduce the report bit for bit") {
    const FitReport rep2 = minimize(f, sampler, cfg);
    CHECK(reports_equal_modulo_time(rep, rep2));
  }

  SUBCASE("adding restarts keeps the seed-stream prefix") {
    OptimizerConfig more = cfg;
    more.restarts = 9;
    const FitReport rep2 = minimize(f, sampler, more);
    for (std::size_t r = 0; r < rep.traces.size(); ++r)
      CHECK(rep2.traces[r] == rep.traces[r]);
    CHECK(rep2.best_objective <= rep.best_objective);
  }
}

TEST_CASE("minimize resamples non-finite initializations") {
  OptimizerConfig cfg;
  cfg.restarts = 1;

  SUBCASE("eventually finds a finite region") {
    // Finite only for x > 1.
    const ObjectiveFn f = [](const Vec& x, Vec& g) {
      g.resize(1);
      if (x[0] <= 1.0) {
        g[0] = 0.0;
        return std::numeric_limits<double>::quiet_NaN();
      }
      g[0] = 2.0 * (x[0] - 2.0);
      return (x[0] - 2.0) * (x[0] - 2.0);
    };
    const InitSampler sampler = [](int, Rng& rng) {
      Vec v(1);
      v[0] = rng.uniform(-4.0, 4.0);
      return v;
    };
    const FitReport rep = minimize(f, sampler, cfg);
    CHECK(std::abs(rep.best_params[0] - 2.0) < 1e-6);
  }

  SUBCASE("fails after 100 non-finite draws") {
    const ObjectiveFn f = [](const Vec&, Vec& g) {
      g.resize(1);
      g[0] = 0.0;
      return std::numeric_limits<double>::infinity();
    };
    CHECK_THROWS_AS(minimize(f, fixed_start(Vec::Zero(1)), cfg), NumericalError);
  }
}

TEST_CASE("SSE objective") {
  Rng rng(307);

  SUBCASE("fitting a kernel to itself gives zero value and gradient") {
    const auto k = random_stationary(rng, 2, 1, BaseKind::Matern32);
    const KernelTemplate tmpl = template_of(AnyKernel{k});
    std::vector<std::pair<Vec, Vec>> grid;
    for (int i = 0; i < 15; ++i)
      grid.emplace_back(random_vec(rng, 1, -2.0, 2.0), random_vec(rng, 1, -2.0, 2.0));
    const StationaryGSK kc = k;
    const PairTarget target = [kc](const Vec& x, const Vec& y) {
      return kc(Vec(x - y));
    };
    const SSEObjective obj(target, grid, tmpl);
    Vec grad;
    const double value = obj.value_and_grad(pack(AnyKernel{k}, 0.1), grad);
    CHECK(value == doctest::Approx(0.0).epsilon(1e-20));
    CHECK(grad.lpNorm<Eigen::Infinity>() < 1e-8);
  }

  SUBCASE("single pair with constant mismatch") {
    // k_theta(0) = 2 (two unit components), target 1 -> value 1.
    KernelTemplate tmpl;
    tmpl.type = KernelType::Stationary;
    tmpl.components = 2;
    tmpl.dim = 1;
    std::vector<std::pair<Vec, Vec>> grid;
    grid.emplace_back(Vec::Zero(1), Vec::Zero(1));
    const SSEObjective obj([](const Vec&, const Vec&) { return 1.0; }, grid, tmpl);
    Vec grad;
    const double value = obj.value_and_grad(Vec::Zero(tmpl.param_count()), grad);
    CHECK(value == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("gradient matches central finite differences") {
    for (int trial = 0; trial < 50; ++trial) {
      KernelTemplate tmpl;
      tmpl.dim = 1;
      tmpl.components = 1 + trial % 3;
      tmpl.base = base_cycle(trial);
      switch (trial % 3) {
        case 0:
          tmpl.type = KernelType::Stationary;
          break;
        case 1:
          tmpl.type = KernelType::Nonstationary;
          tmpl.star = trial % 2 ? StarVariant::Separable : StarVariant::Stationary;
          break;
        default:
          tmpl.type = KernelType::SparseSpectrum;
          break;
      }
      std::vector<std::pair<Vec, Vec>> grid;
      for (int i = 0; i < 10; ++i)
        grid.emplace_back(random_vec(rng, 1, 0.1, 2.0), random_vec(rng, 1, 0.1, 2.0));
      const PairTarget target = [](const Vec& x, const Vec& y) {
        return std::exp(-std::abs(x[0] - y[0])) + 0.3 * x[0] * y[0];
      };
      const SSEObjective obj(target, grid, tmpl);

      Vec theta(tmpl.param_count());
      for (Eigen::Index i = 0; i < theta.size(); ++i)
        theta[i] = rng.uniform(-1.0, 0.7);

      Vec analytic;
      obj.value_and_grad(theta, analytic);
      const auto f = [&](const Vec& th) {
        Vec g;
        return obj.value_and_grad(th, g);
      };
      CHECK(gradient_rel_error(analytic, central_differences(f, theta)) < 1e-5);
    }
  }

  SUBCASE("rejects an empty grid and non-finite targets") {
    KernelTemplate tmpl;
    CHECK_THROWS_AS(
        SSEObjective([](const Vec&, const Vec&) { return 1.0; }, {}, tmpl),
        std::invalid_argument);
    std::vector<std::pair<Vec, Vec>> grid;
    grid.emplace_back(Vec::Zero(1), Vec::Zero(1));
    CHECK_THROWS_AS(
        SSEObjective(
            [](const Vec&, const Vec&) {
              return std::numeric_limits<double>::infinity();
            },
            grid, tmpl),
        std::invalid_argument);
  }
}

TEST_CASE("every iterate of an SSE fit unpacks to a valid kernel") {
  Rng rng(311);
  KernelTemplate tmpl;
  tmpl.type = KernelType::Stationary;
  tmpl.base = BaseKind::Matern12;
  tmpl.components = 2;
  tmpl.dim = 1;
  std::vector<std::pair<Vec, Vec>> grid;
  for (int i = 0; i < 12; ++i)
    grid.emplace_back(random_vec(rng, 1, -2.0, 2.0), random_vec(rng, 1, -2.0, 2.0));
  const SSEObjective obj(
      [](const Vec& x, const Vec& y) { return std::exp(-std::abs(x[0] - y[0])); },
      grid, tmpl);

  const ObjectiveFn checked = [&](const Vec& theta, Vec& grad) {
    const auto [kernel, noise] = unpack(theta, tmpl);  // throws if invalid
    CHECK(noise > 0.0);
    for (const auto& c : std::get<StationaryGSK>(kernel).components()) {
      CHECK(c.sigma2 > 0.0);
      CHECK((c.gamma.array() >= 0.0).all());
      CHECK((c.omega.array() >= 0.0).all());
    }
    return obj.value_and_grad(theta, grad);
  };
  OptimizerConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 60;
  cfg.seed = 5;
  const InitSampler sampler = [&](int, Rng& r) {
    return sample_initial(tmpl, cfg.init, r);
  };
  const FitReport rep = minimize(checked, sampler, cfg);
  CHECK(std::isfinite(rep.best_objective));
}

TEST_CASE("train_gp") {
  SUBCASE("single data point improves on the initial MLL") {
    Dataset data;
    data.X = Mat::Constant(1, 1, 0.4);
    data.y = Vec::Constant(1, 1.2);
    KernelTemplate tmpl;
    tmpl.type = KernelType::Stationary;
    tmpl.components = 1;
    tmpl.dim = 1;
    OptimizerConfig cfg;
    cfg.restarts = 2;
    cfg.max_iterations = 100;
    const FitReport rep = train_gp(data, tmpl, cfg);
    for (const auto& trace : rep.traces)
      CHECK(rep.best_objective <= trace.front());
  }

  SUBCASE("zero targets shrink the total variance") {
    Dataset data;
    data.X.resize(8, 1);
    for (int i = 0; i < 8; ++i) data.X(i, 0) = -2.0 + 0.5 * i;
    data.y = Vec::Zero(8);
    KernelTemplate tmpl;
    tmpl.type = KernelType::Stationary;
    tmpl.components = 2;
    tmpl.dim = 1;
    OptimizerConfig cfg;
    cfg.restarts = 1;
    cfg.max_iterations = 50;
    cfg.seed = 3;
    const FitReport rep = train_gp(data, tmpl, cfg);

    const auto [fitted, fitted_noise] = unpack(rep.best_params, tmpl);
    const double fitted_total =
        std::get<StationaryGSK>(fitted).amplitude_sum() + fitted_noise;
    // Reconstruct restart 0's initialization: noise slot 0.1 var(y) = 0.
    InitRanges ranges;
    ranges.noise_init = 1e-8;
    Rng init_rng(cfg.seed, 0);
    const Vec theta0 = sample_initial(tmpl, ranges, init_rng);
    const auto [init_k, init_noise] = unpack(theta0, tmpl);
    const double init_total =
        std::get<StationaryGSK>(init_k).amplitude_sum() + init_noise;
    CHECK(fitted_total < init_total);
  }

  SUBCASE("recovers the noise scale of a generative model") {
    // Ground truth: single SE-base component, noise 0.09.
    StationaryComponent truth_c;
    truth_c.sigma2 = 1.0;
    truth_c.gamma = Vec::Constant(1, 0.5);
    truth_c.omega = Vec::Constant(1, 0.2);
    const StationaryGSK truth(BaseKernel{BaseKind::SE}, {truth_c});
    const double true_noise = 0.09;

    int hits = 0;
    const int seeds = 3;
    for (int seed = 0; seed < seeds; ++seed) {
      Rng gen(1000 + seed);
      const int n = 80;
      Dataset data;
      data.X.resize(n, 1);
      for (int i = 0; i < n; ++i) data.X(i, 0) = gen.uniform(-4.0, 4.0);
      Mat G = gram(AnyKernel{truth}, data.X);
      G.diagonal().array() += true_noise;
      const Mat L = jittered_cholesky(G);
      Vec z(n);
      for (int i = 0; i < n; ++i) z[i] = gen.normal();
      data.y = L * z;

      KernelTemplate tmpl;
      tmpl.type = KernelType::Stationary;
      tmpl.components = 1;
      tmpl.dim = 1;
      OptimizerConfig cfg;
      cfg.restarts = 3;
      cfg.max_iterations = 200;
      cfg.seed = static_cast<std::uint64_t>(seed);
      const FitReport rep = train_gp(data, tmpl, cfg);
      const auto [fitted, fitted_noise] = unpack(rep.best_params, tmpl);
      (void)fitted;
      if (fitted_noise > 0.5 * true_noise && fitted_noise < 2.0 * true_noise)
        ++hits;
    }
    CHECK(hits == seeds);
  }
}
