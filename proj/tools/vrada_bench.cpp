// Benchmark runner: parses or synthesizes a dataset, builds the composite
// objective, optionally tunes the Lipschitz parameter over a grid, then runs
// every requested (solver, seed) cell and emits one CSV trace file.
#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vrada/vrada.h"

namespace {

struct Cli {
  std::string dataset;
  std::vector<double> synthetic;  // n,d,sigma
  std::string loss = "binary-logistic";
  double lambda2 = 0.0;
  double lambda1 = 0.0;
  std::vector<std::string> solvers = {"vrada"};
  long long m = 0;
  double L_param = 0.0;
  std::vector<double> L_grid;
  long long epochs = 50;
  std::vector<unsigned long long> seeds = {0};
  bool deterministic = false;
  bool audit = false;
  std::string reference;
  bool compute_reference = false;
  std::string out = "-";
  bool add_bias = false;
  long long dim = 0;
};

struct CellResult {
  std::string comment;  // "# cell ..." line
  std::string rows;
  vrada_status status = VRADA_OK;
  std::string error;
};

[[noreturn]] void die(const std::string& msg, const std::string& echo,
                      int code) {
  std::cerr << "error: " << msg << "\n";
  if (!echo.empty()) std::cerr << "config:\n" << echo;
  std::exit(code == 0 ? 1 : code);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int worker_count(int cells) {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("VRADA_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) cap = v;
  }
  return std::min(cap, cells);
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  CLI::App app{"composite finite-sum solver benchmark"};
  app.set_config("--config", "", "flat key=value file mirroring the flags");
  app.add_option("--dataset", cli.dataset, "LibSVM file (.gz ok)");
  app.add_option("--synthetic", cli.synthetic,
                 "n,d,sigma ridge instance with a closed-form reference")
      ->expected(3)
      ->delimiter(',');
  app.add_option("--loss", cli.loss,
                 "binary-logistic | multinomial-logistic | squared");
  app.add_option("--lambda2", cli.lambda2, "l2 weight (the sigma fed to solvers)");
  app.add_option("--lambda1", cli.lambda1, "l1 weight");
  app.add_option("--solver", cli.solvers,
                 "vrada | svrg | katyusha-sc | katyusha-nsc | mig-sc | mig-nsc")
      ->delimiter(',');
  app.add_option("--m", cli.m, "inner iterations per epoch (default 2n)");
  app.add_option("--L-param", cli.L_param, "Lipschitz parameter");
  app.add_option("--L-grid", cli.L_grid, "tuning grid, comma separated")
      ->delimiter(',');
  app.add_option("--epochs", cli.epochs, "epoch budget per run");
  app.add_option("--seeds", cli.seeds, "comma separated seed list")
      ->delimiter(',');
  app.add_flag("--deterministic", cli.deterministic,
               "full gradients instead of sampled ones");
  app.add_flag("--audit", cli.audit, "enforce convergence guarantees at runtime");
  app.add_option("--reference", cli.reference, "reference file (f*, x*)");
  app.add_flag("--compute-reference", cli.compute_reference,
               "compute the reference if the file is missing");
  app.add_option("--out", cli.out, "output CSV path, '-' for stdout");
  app.add_flag("--add-bias", cli.add_bias,
               "append a constant-1 feature (after normalization)");
  app.add_option("--dim", cli.dim, "dimension override");
  CLI11_PARSE(app, argc, argv);

  const bool synthetic = !cli.synthetic.empty();
  if (synthetic == !cli.dataset.empty())
    die("exactly one of --dataset and --synthetic is required", "", 1);
  if (synthetic && cli.loss != "squared" && !app.count("--loss"))
    cli.loss = "squared";
  if (synthetic && cli.loss != "squared")
    die("--synthetic instances use the squared loss", "", 1);
  if (synthetic && !app.count("--lambda2")) cli.lambda2 = cli.synthetic[2];

  // Dataset.
  vrada_dataset* ds = nullptr;
  vrada_status st;
  if (synthetic) {
    st = vrada_dataset_synth_ridge(static_cast<int64_t>(cli.synthetic[0]),
                                   static_cast<int64_t>(cli.synthetic[1]), 13,
                                   &ds);
  } else {
    st = vrada_dataset_open(cli.dataset.c_str(), &ds);
  }
  if (st) die(vrada_last_error(), "", st);

  if (cli.dim > 0)
    if ((st = vrada_dataset_override_dim(ds, cli.dim))) die(vrada_last_error(), "", st);
  // The experiment protocol normalizes classification rows; squared-loss
  // targets would be skewed by scaling, so those rows stay raw.
  const bool logistic = cli.loss != "squared";
  if (logistic)
    if ((st = vrada_dataset_normalize_rows(ds))) die(vrada_last_error(), "", st);
  if (cli.add_bias)
    if ((st = vrada_dataset_add_bias(ds))) die(vrada_last_error(), "", st);

  vrada_problem* prob = nullptr;
  if ((st = vrada_problem_create(ds, cli.loss.c_str(), cli.lambda2, cli.lambda1,
                                 &prob)))
    die(vrada_last_error(), "", st);
  const int64_t dim = vrada_problem_dim(prob);
  const int64_t n = vrada_dataset_rows(ds);

  // Config echo: every effective setting, reused in the CSV and in errors.
  std::ostringstream echo;
  echo << "# config source=" << (synthetic ? "synthetic" : cli.dataset) << "\n";
  if (synthetic)
    echo << "# config synthetic_n=" << cli.synthetic[0]
         << " synthetic_d=" << cli.synthetic[1]
         << " synthetic_sigma=" << fmt(cli.synthetic[2]) << "\n";
  echo << "# config loss=" << cli.loss << " lambda2=" << fmt(cli.lambda2)
       << " lambda1=" << fmt(cli.lambda1) << "\n";
  echo << "# config n=" << n << " dim=" << dim
       << " normalized=" << vrada_dataset_normalized(ds)
       << " zero_rows=" << vrada_dataset_zero_rows(ds)
       << " add_bias=" << (cli.add_bias ? 1 : 0) << "\n";
  echo << "# config smoothness=" << fmt(vrada_problem_smoothness(prob))
       << " sigma=" << fmt(vrada_problem_strong_convexity(prob))
       << " smoothness_warned=" << vrada_problem_smoothness_warned(prob)
       << "\n";
  if (logistic) {
    echo << "# config label_map=";
    const int64_t c = vrada_dataset_classes(ds);
    for (int64_t k = 0; k < c; ++k) {
      double raw = 0;
      vrada_dataset_class_label(ds, k, &raw);
      echo << (k ? "," : "") << fmt(raw) << ":" << k;
    }
    echo << "\n";
  }
  echo << "# config m=" << (cli.m > 0 ? cli.m : 2 * n)
       << " epochs=" << cli.epochs
       << " deterministic=" << (cli.deterministic ? 1 : 0)
       << " audit=" << (cli.audit ? 1 : 0) << "\n";
  echo << "# config solvers=";
  for (std::size_t i = 0; i < cli.solvers.size(); ++i)
    echo << (i ? "," : "") << cli.solvers[i];
  echo << " seeds=";
  for (std::size_t i = 0; i < cli.seeds.size(); ++i)
    echo << (i ? "," : "") << cli.seeds[i];
  echo << "\n";

  // Reference value for the gap column.
  double f_star = std::nan("");
  std::vector<double> x_star(dim, 0.0);
  bool have_ref = false;
  if (!cli.reference.empty()) {
    int found = 0;
    if ((st = vrada_reference_load(cli.reference.c_str(), dim, &f_star,
                                   x_star.data(), &found)))
      die(vrada_last_error(), echo.str(), st);
    have_ref = found != 0;
  }
  if (!have_ref && cli.compute_reference) {
    int attained = 1;
    if ((st = vrada_reference_compute(prob, &f_star, x_star.data(), &attained)))
      die(vrada_last_error(), echo.str(), st);
    have_ref = true;
    echo << "# config reference_attained=" << attained << "\n";
    if (!cli.reference.empty())
      if ((st = vrada_reference_save(cli.reference.c_str(), f_star,
                                     x_star.data(), dim)))
        die(vrada_last_error(), echo.str(), st);
  }
  if (!have_ref && synthetic && cli.lambda1 == 0.0) {
    // Ridge instances carry their own closed-form oracle.
    int unique = 1;
    if ((st = vrada_ridge_closed_form(ds, cli.lambda2, &f_star, x_star.data(),
                                      &unique)))
      die(vrada_last_error(), echo.str(), st);
    have_ref = true;
    echo << "# config reference=closed-form unique=" << unique << "\n";
  }
  if (have_ref) echo << "# config f_star=" << fmt(f_star) << "\n";

  vrada_options base;
  vrada_options_init(&base);
  base.m = cli.m;
  base.L_param = cli.L_param;
  base.epochs = cli.epochs;
  base.deterministic = cli.deterministic ? 1 : 0;
  base.audit = cli.audit ? 1 : 0;
  if (have_ref) {
    base.f_star = f_star;
    base.x_star = x_star.data();
  }

  // Grid tuning (seed 0, shared budget) picks one L per solver.
  std::vector<double> tuned_L(cli.solvers.size(), cli.L_param);
  if (!cli.L_grid.empty()) {
    for (std::size_t sidx = 0; sidx < cli.solvers.size(); ++sidx) {
      vrada_options opt = base;
      opt.solver = cli.solvers[sidx].c_str();
      std::vector<double> finals(cli.L_grid.size());
      double best = 0.0;
      if ((st = vrada_tune(prob, &opt, cli.L_grid.data(),
                           static_cast<int64_t>(cli.L_grid.size()), &best,
                           finals.data())))
        die(std::string("tuning ") + cli.solvers[sidx] + ": " +
                vrada_last_error(),
            echo.str(), st);
      tuned_L[sidx] = best;
      echo << "# tune solver=" << cli.solvers[sidx] << " best_L=" << fmt(best);
      for (std::size_t g = 0; g < cli.L_grid.size(); ++g)
        echo << " L" << fmt(cli.L_grid[g]) << "="
             << (std::isnan(finals[g]) ? "diverged" : fmt(finals[g]));
      echo << "\n";
    }
  }

  // One cell per (solver, seed), farmed out to the worker pool; output order
  // stays fixed regardless of completion order.
  struct Cell {
    std::string solver;
    unsigned long long seed;
    double L;
  };
  std::vector<Cell> cells;
  for (std::size_t sidx = 0; sidx < cli.solvers.size(); ++sidx)
    for (unsigned long long seed : cli.seeds)
      cells.push_back({cli.solvers[sidx], seed, tuned_L[sidx]});

  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      vrada_options opt = base;
      opt.solver = cell.solver.c_str();
      opt.seed = cell.seed;
      opt.L_param = cell.L;
      vrada_trace* trace = nullptr;
      const vrada_status cst = vrada_solve(prob, &opt, &trace);
      CellResult& res = results[i];
      if (cst) {
        res.status = cst;
        res.error = vrada_last_error();
        continue;
      }
      std::ostringstream comment;
      comment << "# cell solver=" << cell.solver << " seed=" << cell.seed
              << " status=" << vrada_trace_status(trace);
      const int64_t hc = vrada_trace_header_count(trace);
      for (int64_t h = 0; h < hc; ++h) {
        const char *k = nullptr, *v = nullptr;
        vrada_trace_header_at(trace, h, &k, &v);
        comment << " " << k << "=" << v;
      }
      comment << "\n";
      res.comment = comment.str();
      char* rows = nullptr;
      vrada_trace_csv(trace, &rows);
      res.rows = rows;
      vrada_string_free(rows);
      vrada_trace_free(trace);
    }
  };
  const int nworkers = worker_count(static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < nworkers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  for (const CellResult& res : results)
    if (res.status)
      die(res.error, echo.str(), res.status);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (cli.out != "-") {
    file.open(cli.out);
    if (!file) die("cannot open '" + cli.out + "' for writing", echo.str(), 1);
    out = &file;
  }
  *out << echo.str();
  for (const CellResult& res : results) *out << res.comment;
  *out << vrada_trace_csv_header() << "\n";
  for (const CellResult& res : results) *out << res.rows;
  out->flush();

  vrada_problem_free(prob);
  vrada_dataset_free(ds);
  return 0;
}
