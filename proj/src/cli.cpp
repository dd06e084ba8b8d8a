// SPDX-License-Identifier: Apache-2.0

#include "linf/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "linf/errors.hpp"
#include "linf/fixtures.hpp"
#include "linf/manifest.hpp"
#include "linf/oracle.hpp"
#include "linf/report.hpp"

namespace linf
{

namespace
{

struct NormArgs
{
  std::string manifest, report, data_dir;
  std::optional<int> r0, rmax, max_inner;
  std::optional<double> omega_max, eps, gamma, support_tol;
  std::vector<double> interval;
  std::string mode, policy;
};

struct OracleArgs
{
  std::string manifest, csv, data_dir;
  std::vector<double> interval;
  int npoints = 5001;
  double refine_tol = 1.0e-9;
};

struct BenchArgs
{
  std::vector<long> n;
  bool with_oracle = false;
  int oracle_points = 5001;
  std::optional<int> r0;
  std::optional<double> support_tol;
};

std::optional<std::filesystem::path> base_dir(const std::string &s)
{
  if (s.empty())
  {
    return std::nullopt;
  }
  return std::filesystem::path(s);
}

RunConfig norm_config(const NormArgs &a, const ManifestConfig &mc)
{
  RunConfig cfg;
  apply_config(mc, cfg);
  if (a.interval.size() == 2)
  {
    ManifestConfig iv;
    iv.interval = std::make_pair(a.interval[0], a.interval[1]);
    if (!a.omega_max && mc.omega_max)
    {
      iv.omega_max = mc.omega_max;
    }
    apply_config(iv, cfg);
  }
  if (a.r0)
    cfg.r0 = *a.r0;
  if (a.omega_max)
    cfg.omega_max = *a.omega_max;
  if (a.eps)
    cfg.eps = *a.eps;
  if (a.rmax)
    cfg.r_max = *a.rmax;
  if (a.gamma)
    cfg.inner.curvature_bound = *a.gamma;
  if (a.support_tol)
    cfg.inner.support_tol = *a.support_tol;
  if (a.max_inner)
    cfg.inner.max_inner_iters = *a.max_inner;
  if (a.mode == "dominant")
    cfg.expansion_mode = ExpansionMode::DominantOnly;
  else if (a.mode == "full")
    cfg.expansion_mode = ExpansionMode::Full;
  if (a.policy == "lasttwo")
    cfg.subspace_policy = SubspacePolicy::LastTwo;
  else if (a.policy == "keepall")
    cfg.subspace_policy = SubspacePolicy::KeepAll;
  return cfg;
}

int cmd_norm(const NormArgs &a, std::ostream &out)
{
  const ProblemManifest man = read_manifest(a.manifest, base_dir(a.data_dir));
  const StructuredTF tf = load_problem(man);
  const RunConfig cfg = norm_config(a, man.config);
  const SolverResult res = run(tf, cfg);
  const std::string text = serialize(res);
  out << text << '\n';
  if (!a.report.empty())
  {
    std::ofstream f(a.report);
    f << text << '\n';
    if (!f)
    {
      throw Error("cannot write report to " + a.report);
    }
  }
  return res.max_iterations ? 2 : 0;
}

int cmd_oracle(const OracleArgs &a, std::ostream &out)
{
  const ProblemManifest man = read_manifest(a.manifest, base_dir(a.data_dir));
  const StructuredTF tf = load_problem(man);
  double lo = 0.0, hi = 0.0;
  if (a.interval.size() == 2)
  {
    lo = a.interval[0];
    hi = a.interval[1];
  }
  else if (man.config.interval && std::isfinite(man.config.interval->second))
  {
    lo = man.config.interval->first;
    hi = man.config.interval->second;
  }
  else
  {
    throw InvalidConfig("oracle needs a finite --interval");
  }
  const SweepResult sw = grid_norm(tf, lo, hi, a.npoints, a.refine_tol);
  nlohmann::json j{{"norm", sw.sigma_best},
                   {"omega_opt", sw.omega_best},
                   {"refinement_iters", sw.refinement_iters},
                   {"grid_points", sw.grid.size()},
                   {"skipped", sw.skipped}};
  out << j.dump(2) << '\n';
  if (!a.csv.empty())
  {
    sweep_csv(tf, lo, hi, a.npoints, a.csv);
  }
  return 0;
}

int cmd_bench(const BenchArgs &a, std::ostream &out)
{
  using Clock = std::chrono::steady_clock;
  out << "n,norm,omega,seconds,iterations";
  if (a.with_oracle)
  {
    out << ",oracle_norm,oracle_omega,oracle_seconds";
  }
  out << '\n';
  bool capped = false;
  for (long n : a.n)
  {
    const StructuredTF tf = make_delay_fixture(n);
    RunConfig cfg = delay_run_config();
    if (a.r0)
      cfg.r0 = *a.r0;
    if (a.support_tol)
      cfg.inner.support_tol = *a.support_tol;
    const auto t0 = Clock::now();
    const SolverResult res = run(tf, cfg);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    capped = capped || res.max_iterations;
    out << std::setprecision(10) << n << ',' << res.norm << ',' << res.omega_opt << ','
        << secs << ',' << res.iterations;
    if (a.with_oracle)
    {
      const auto t1 = Clock::now();
      const SweepResult sw = grid_norm(tf, cfg.inner.omega_lo,
                                       cfg.inner.omega_hi, a.oracle_points, 1.0e-9);
      const double osecs = std::chrono::duration<double>(Clock::now() - t1).count();
      out << ',' << sw.sigma_best << ',' << sw.omega_best << ',' << osecs;
    }
    out << '\n';
  }
  return capped ? 2 : 0;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Large-scale L-infinity norm computation by subspace projection", "linfnorm"};
  app.require_subcommand(1);

  NormArgs na;
  auto *norm = app.add_subcommand("norm", "compute the norm of a manifest problem");
  norm->add_option("manifest", na.manifest, "problem manifest (JSON)")->required();
  norm->add_option("--r0", na.r0, "number of initial interpolation points");
  norm->add_option("--omega-max", na.omega_max, "initial points span [0, omega_max]");
  norm->add_option("--eps", na.eps, "relative termination tolerance");
  norm->add_option("--rmax", na.rmax, "maximum number of subspace iterations");
  norm->add_option("--mode", na.mode, "expansion mode")
      ->check(CLI::IsMember({"full", "dominant"}));
  norm->add_option("--policy", na.policy, "subspace policy")
      ->check(CLI::IsMember({"keepall", "lasttwo"}));
  norm->add_option("--gamma", na.gamma, "curvature bound for the quadratic support solver");
  norm->add_option("--support-tol", na.support_tol, "quadratic support stopping tolerance");
  norm->add_option("--max-inner", na.max_inner, "inner solver iteration cap");
  norm->add_option("--interval", na.interval, "search interval LO HI")->expected(2);
  norm->add_option("--report", na.report, "also write the JSON report to this file");
  norm->add_option("--data-dir", na.data_dir, "resolve matrix paths against this directory");

  OracleArgs oa;
  auto *oracle = app.add_subcommand("oracle", "dense frequency sweep with local refinement");
  oracle->add_option("manifest", oa.manifest, "problem manifest (JSON)")->required();
  oracle->add_option("--interval", oa.interval, "sweep interval LO HI")->expected(2);
  oracle->add_option("--npoints", oa.npoints, "grid points")->check(CLI::Range(2, 100000000));
  oracle->add_option("--refine-tol", oa.refine_tol, "golden-section bracket width");
  oracle->add_option("--csv", oa.csv, "write omega,sigma rows to this file");
  oracle->add_option("--data-dir", oa.data_dir, "resolve matrix paths against this directory");

  BenchArgs ba;
  auto *bench = app.add_subcommand("bench", "scaling study on a built-in fixture");
  auto *delay = bench->add_subcommand("delay", "time-delay example");
  bench->require_subcommand(1);
  delay->add_option("--n", ba.n, "problem sizes")->required()->expected(1, -1)
      ->check(CLI::Range(2L, 100000000L));
  delay->add_flag("--with-oracle", ba.with_oracle, "also time a grid sweep on [0, 50]");
  delay->add_option("--oracle-points", ba.oracle_points, "grid points for --with-oracle");
  delay->add_option("--r0", ba.r0, "number of initial interpolation points");
  delay->add_option("--support-tol", ba.support_tol, "quadratic support stopping tolerance");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e, out, err);
  }
  catch (const CLI::CallForAllHelp &e)
  {
    return app.exit(e, out, err);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e, err, err);
    err << app.help();
    return 1;
  }

  try
  {
    if (*norm)
      return cmd_norm(na, out);
    if (*oracle)
      return cmd_oracle(oa, out);
    return cmd_bench(ba, out);
  }
  catch (const DimensionMismatch &e)
  {
    err << "error: dimension mismatch in " << e.factor() << ": " << e.what() << '\n';
  }
  catch (const linf::ParseError &e)
  {
    err << "error: " << e.what() << '\n';
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace linf
