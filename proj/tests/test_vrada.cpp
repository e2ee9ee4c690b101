#include <doctest.h>

#include <cmath>

#include "core/dual_averaging.hpp"
#include "core/errors.hpp"
#include "core/trace.hpp"
#include "core/vrada.hpp"
#include "helpers.hpp"

using namespace vrada;

TEST_CASE("dual argmin identity") {
  SUBCASE("unconstrained quadratic: q=2, center=0, G=(2,2)") {
    DualAveragingState state(Vec{0.0, 0.0}, false);
    state.accumulate(1.0, Vec{1.0, 1.0}, Vec{0.0, 0.0}, 0.0);
    state.rescale(2.0);
    CHECK(state.quad_weight() == 2.0);
    CHECK(state.linear() == Vec{2.0, 2.0});
    Vec z(2);
    state.argmin(Regularizer::zero(), z);
    CHECK(z[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(z[1] == doctest::Approx(-1.0).epsilon(1e-15));
  }
  SUBCASE("rescaling never moves the minimizer") {
    CounterRng rng(17);
    DualAveragingState state(test::random_vec(4, rng), false);
    const Regularizer reg = Regularizer::elastic(0.3, 0.2);
    state.accumulate(0.7, test::random_vec(4, rng), test::random_vec(4, rng), 0.0);
    Vec before(4), after(4);
    state.argmin(reg, before);
    state.rescale(11.0);
    state.argmin(reg, after);
    for (int j = 0; j < 4; ++j)
      CHECK(after[j] == doctest::Approx(before[j]).epsilon(1e-14));
  }
  SUBCASE("psi values need const tracking") {
    DualAveragingState state(Vec{0.0}, false);
    CHECK_THROWS_AS(state.value_at(Regularizer::zero(), Vec{0.0}), ConfigError);
  }
}

TEST_CASE("initialization executes the proximal gradient step") {
  SolverOptions opts;
  opts.audit = true;
  SUBCASE("plain quadratic lands on the minimizer") {
    auto obj = test::squared_objective(test::quad1(0.0));
    VradaState st = vrada_initialize(obj, Vec{1.0}, 4, opts);
    CHECK(st.z[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(st.anchor[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(st.schedule.A(1) == 1.0);  // a_1 = 1/L with L = 1
    // after the m-fold rescaling: q = m and B = m * a_1
    CHECK(st.dual.quad_weight() == 4.0);
    CHECK(st.dual.reg_weight() == doctest::Approx(4.0).epsilon(1e-15));
  }
  SUBCASE("a stationary start stays put") {
    auto obj = test::squared_objective(test::quad1(0.0));
    VradaState st = vrada_initialize(obj, Vec{0.0}, 2, opts);
    CHECK(st.anchor[0] == 0.0);
  }
  SUBCASE("ridge instance routes through the prox") {
    auto obj = test::squared_objective(test::quad1(0.0), Regularizer::l2(1.0));
    VradaState st = vrada_initialize(obj, Vec{1.0}, 2, opts);
    // z = prox_{1*l}(1 - 1*grad) = prox(0) = 0 = x*
    CHECK(st.z[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(st.anchor[0] == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("the initial-step inequality is recorded") {
    auto obj = test::squared_objective(test::quad2(), Regularizer::l2(0.1));
    VradaState st = vrada_initialize(obj, Vec{3.0}, 8, opts);
    CHECK(st.init_model_value >= st.init_objective_bound - 1e-12);
  }
}

TEST_CASE("variance-reduced gradient") {
  auto obj = test::squared_objective(test::quad2());
  SUBCASE("hand values on the two-component quadratic") {
    Vec anchor{0.0}, y{1.0}, mu(1), out(1);
    obj.full_value_grad(anchor, mu);
    CHECK(mu[0] == doctest::Approx(-1.0).epsilon(1e-15));
    vr_gradient(obj, 0, y, anchor, mu, out);
    CHECK(out[0] == doctest::Approx(0.0).epsilon(1e-15));
    vr_gradient(obj, 1, y, anchor, mu, out);
    CHECK(out[0] == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("evaluated at the anchor it returns mu for every component") {
    Vec anchor{0.7}, mu(1), out(1);
    obj.full_value_grad(anchor, mu);
    for (int i = 0; i < 2; ++i) {
      vr_gradient(obj, i, anchor, anchor, mu, out);
      CHECK(out[0] == mu[0]);
    }
  }
  SUBCASE("shape mismatches are rejected") {
    Vec anchor{0.0}, mu(1), out(1), bad{1.0, 2.0};
    CHECK_THROWS_AS(vr_gradient(obj, 0, bad, anchor, mu, out), ShapeError);
  }
}

TEST_CASE("enumerated probe: unbiased and within the variance bound") {
  auto ds = test::random_classification(30, 5, 3, 71);
  auto obj = test::make_objective(ds, {LossKind::MultinomialLogistic, 3},
                                  Regularizer::l2(1e-3));
  CounterRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Vec y = test::random_vec(obj.param_dim(), rng);
    Vec anchor = test::random_vec(obj.param_dim(), rng);
    VrProbe p = vr_gradient_probe(obj, y, anchor);
    CHECK(p.unbias_error <= 1e-12);
    CHECK(p.variance_bound >= 0.0);
    CHECK(p.mean_sq_deviation <=
          p.variance_bound + 1e-10 * std::max(1.0, p.variance_bound));
  }
}

namespace {

struct RidgeInstance {
  CompositeObjective obj;
  RidgeSolution sol;
};

RidgeInstance make_ridge(int n, int d, double sigma, std::uint64_t seed) {
  auto ds = std::make_shared<SparseDataset>(synth_ridge_data(n, d, seed));
  RidgeSolution sol = solve_ridge_exact(*ds, sigma);
  auto obj = test::squared_objective(
      ds, sigma > 0 ? Regularizer::l2(sigma) : Regularizer::zero());
  return {std::move(obj), std::move(sol)};
}

}  // namespace

TEST_CASE("deterministic 1-d quadratic meets the gap bound for any m") {
  auto ds = test::quad2();
  RidgeSolution sol = solve_ridge_exact(*ds, 0.0);
  auto obj = test::squared_objective(ds);
  for (int m : {1, 3, 16, 200}) {
    SolverOptions opts;
    opts.m = m;
    opts.epochs = 8;
    opts.deterministic = true;
    opts.audit = true;
    opts.f_star = sol.f_star;
    opts.x_star = sol.x_star;
    SolverTrace trace = run_vrada(obj, opts);
    const double dist0 = squared_norm(sol.x_star);
    for (const TraceRow& row : trace.rows) {
      if (row.epoch < 2) continue;
      CHECK(row.gap <= (dist0 / (2.0 * row.a_s)) * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("deterministic runs meet the gap bound at every epoch") {
  for (double sigma : {0.0, 1e-2}) {
    for (int m : {1, 50}) {
      RidgeInstance inst = make_ridge(60, 8, sigma, 2024);
      SolverOptions opts;
      opts.m = m;
      opts.epochs = 10;
      opts.deterministic = true;
      opts.audit = true;
      opts.f_star = inst.sol.f_star;
      opts.x_star = inst.sol.x_star;
      SolverTrace trace = run_vrada(inst.obj, opts);  // audits throw on violation
      const double dist0 = squared_norm(inst.sol.x_star);
      for (const TraceRow& row : trace.rows) {
        if (row.epoch < 2) continue;
        const double bound = dist0 / (2.0 * row.a_s);
        CHECK(row.gap <= bound * (1.0 + 1e-10));
      }
    }
  }
}

TEST_CASE("stochastic seed-mean gap stays under the expectation bound") {
  RidgeInstance inst = make_ridge(50, 6, 1e-2, 55);
  const double dist0 = squared_norm(inst.sol.x_star);
  const int epochs = 6, seeds = 30;
  std::vector<std::vector<double>> gaps(epochs + 1);
  std::vector<double> bounds(epochs + 1, 0.0);
  for (int seed = 0; seed < seeds; ++seed) {
    SolverOptions opts;
    opts.m = 40;
    opts.epochs = epochs;
    opts.seed = seed;
    opts.audit = true;  // bookkeeping + probe audits in stochastic mode
    opts.f_star = inst.sol.f_star;
    SolverTrace trace = run_vrada(inst.obj, opts);
    for (const TraceRow& row : trace.rows) {
      if (row.epoch < 2) continue;
      gaps[row.epoch].push_back(row.gap);
      bounds[row.epoch] = dist0 / (2.0 * row.a_s);
    }
  }
  for (int s = 2; s <= epochs; ++s) {
    REQUIRE(static_cast<int>(gaps[s].size()) == seeds);
    double mean = 0.0;
    for (double g : gaps[s]) mean += g;
    mean /= seeds;
    double var = 0.0;
    for (double g : gaps[s]) var += (g - mean) * (g - mean);
    const double sem = std::sqrt(var / (seeds - 1.0) / seeds);
    CHECK(mean <= bounds[s] + 3.0 * sem);
  }
}

TEST_CASE("fixed point: a run started at the minimizer never leaves it") {
  RidgeInstance inst = make_ridge(20, 4, 0.1, 7);
  SolverOptions opts;
  opts.m = 16;
  opts.epochs = 6;
  opts.x0 = inst.sol.x_star;
  opts.f_star = inst.sol.f_star;
  SolverTrace trace = run_vrada(inst.obj, opts);
  for (const TraceRow& row : trace.rows)
    CHECK(std::fabs(row.gap) <= 1e-12 * std::max(1.0, inst.sol.f_star));
  CHECK(std::sqrt(squared_distance(trace.final_x, inst.sol.x_star)) <= 1e-10);
}

TEST_CASE("epoch bookkeeping identities hold under audit") {
  // m above the probe thresholds, sigma > 0, stochastic: the audit hooks
  // (B = m A_s, replayed argmin, average identity) all run and must not fire.
  RidgeInstance inst = make_ridge(40, 6, 1e-3, 101);
  SolverOptions opts;
  opts.m = 128;
  opts.epochs = 8;
  opts.seed = 3;
  opts.audit = true;
  CHECK_NOTHROW(run_vrada(inst.obj, opts));
}

TEST_CASE("trace layout and pass accounting") {
  RidgeInstance inst = make_ridge(30, 5, 1e-2, 11);
  SolverOptions opts;
  opts.m = 60;  // passes per epoch = (30 + 120) / 30 = 5
  opts.epochs = 4;
  opts.f_star = inst.sol.f_star;
  SolverTrace trace = run_vrada(inst.obj, opts);
  REQUIRE(trace.rows.size() == 5);  // initial point, init step, epochs 2..4
  CHECK(trace.rows[0].epoch == 0);
  CHECK(trace.rows[0].passes == 0.0);
  CHECK(trace.rows[1].passes == 1.0);
  for (std::size_t i = 2; i < trace.rows.size(); ++i)
    CHECK(trace.rows[i].passes ==
          doctest::Approx(1.0 + 5.0 * (i - 1)).epsilon(1e-12));
  for (std::size_t i = 1; i < trace.rows.size(); ++i) {
    CHECK(trace.rows[i].passes > trace.rows[i - 1].passes);
    CHECK(trace.rows[i].gap >= -1e-12);
  }
  // A_s column mirrors the schedule and the gap target status is reachable
  CHECK(trace.rows[2].a_s > trace.rows[1].a_s);
  CHECK(trace.status == RunStatus::EpochBudget);
}

TEST_CASE("identical config and seed replay bitwise-identical traces") {
  RidgeInstance inst = make_ridge(25, 4, 1e-3, 77);
  SolverOptions opts;
  opts.m = 32;
  opts.epochs = 5;
  opts.seed = 42;
  opts.f_star = inst.sol.f_star;
  SolverTrace a = run_vrada(inst.obj, opts);
  SolverTrace b = run_vrada(inst.obj, opts);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].objective == b.rows[i].objective);
    CHECK(a.rows[i].passes == b.rows[i].passes);
  }
  CHECK(a.final_x == b.final_x);
  CHECK(csv_rows(a).size() == csv_rows(b).size());

  opts.seed = 43;
  SolverTrace c = run_vrada(inst.obj, opts);
  CHECK(c.final_x != a.final_x);
}

TEST_CASE("gap-target and precision-limit termination") {
  RidgeInstance inst = make_ridge(30, 5, 1e-2, 19);
  SolverOptions opts;
  opts.m = 60;
  opts.epochs = 400;
  opts.f_star = inst.sol.f_star;
  SUBCASE("reachable target") {
    opts.gap_target = 1e-6;
    SolverTrace trace = run_vrada(inst.obj, opts);
    CHECK(trace.status == RunStatus::GapTarget);
    CHECK(trace.rows.back().gap <= 1e-6);
  }
  SUBCASE("target below float resolution") {
    // Unreachable by construction: the objective stalls at rounding level
    // long before the gap could cross this.
    opts.gap_target = -1.0;
    opts.deterministic = true;
    SolverTrace trace = run_vrada(inst.obj, opts);
    CHECK(trace.status == RunStatus::PrecisionLimit);
  }
}

TEST_CASE("schedule saturation ends the run with its own status") {
  RidgeInstance inst = make_ridge(10, 3, 1.0, 5);
  SolverOptions opts;
  opts.m = 4096;
  opts.epochs = 100000;
  opts.seed = 1;
  SolverTrace trace = run_vrada(inst.obj, opts);
  CHECK(trace.status == RunStatus::Saturated);
  CHECK(std::isfinite(trace.rows.back().a_s));
}

TEST_CASE("degenerate m = 1 and n = 1 stay supported") {
  auto obj = test::squared_objective(test::quad1(3.0));
  SolverOptions opts;
  opts.m = 1;
  opts.epochs = 30;
  opts.audit = true;
  opts.deterministic = true;
  SolverTrace trace = run_vrada(obj, opts);
  CHECK(trace.rows.back().objective <= 1e-6);
}
