// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <unsupported/Eigen/SparseExtra>

#include "linf/cli.hpp"
#include "linf/errors.hpp"
#include "linf/manifest.hpp"
#include "linf/matrix_market.hpp"
#include "linf/report.hpp"
#include "support.hpp"

using namespace linf;
using namespace linf::testing;
namespace fs = std::filesystem;

namespace
{

const fs::path kData = LINF_TEST_DATA_DIR;

fs::path scratch_dir()
{
  const fs::path p = fs::temp_directory_path() / ("linf_test_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

struct CliRun
{
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args)
{
  args.insert(args.begin(), "linfnorm");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Complex sum_entries(const SparseMatrix &A)
{
  Complex s = 0.0;
  for (Index k = 0; k < A.outerSize(); k++)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      s += it.value() * double(1 + it.row() + 7 * it.col());
  return s;
}

// Writes the n = 20 delay fixture as Matrix Market files plus a manifest.
fs::path write_delay_manifest()
{
  const fs::path dir = scratch_dir() / "delay";
  fs::create_directories(dir);
  const StructuredTF ref = make_delay_fixture(20);
  const auto &d = ref.d_factor().terms();
  write_matrix_market(d[0].coeff, dir / "E.mtx");
  write_matrix_market(d[1].coeff, dir / "D0.mtx");
  write_matrix_market(d[2].coeff, dir / "D1.mtx");
  write_matrix_market(ref.b_factor().terms()[0].coeff, dir / "B.mtx");
  write_matrix_market(ref.c_factor().terms()[0].coeff, dir / "C.mtx");
  std::ofstream f(dir / "delay.json");
  f << R"({"dimensions": {"n": 20, "m": 1, "p": 1},
           "B": [{"term": {"k": 0, "tau": 0}, "matrix": "B.mtx"}],
           "C": [{"term": {"k": 0, "tau": 0}, "matrix": "C.mtx"}],
           "D": [{"term": {"k": 1, "tau": 0}, "matrix": "E.mtx"},
                 {"term": {"k": 0, "tau": 0}, "matrix": "D0.mtx"},
                 {"term": {"k": 0, "tau": 1}, "matrix": "D1.mtx"}],
           "config": {"interval": [0, 50], "gamma": -100, "support_tol": 1e-12,
                      "max_inner_iters": 20000}})";
  return dir;
}

}  // namespace

TEST(MatrixMarket, GeneralReal)
{
  const SparseMatrix A = read_matrix_market(kData / "mm" / "general_real.mtx");
  EXPECT_EQ(A.rows(), 3);
  EXPECT_EQ(A.cols(), 4);
  EXPECT_EQ(A.nonZeros(), 5);
  EXPECT_EQ(A.coeff(1, 2), Complex(-22.5));
  EXPECT_EQ(A.coeff(0, 3), Complex(0.125));
}

TEST(MatrixMarket, SymmetryVariants)
{
  const DenseMatrix S = DenseMatrix(read_matrix_market(kData / "mm" / "symmetric_real.mtx"));
  EXPECT_EQ(S, S.transpose());
  EXPECT_EQ(S(0, 1), Complex(-1.0));
  EXPECT_EQ(S(1, 2), Complex(4.5));

  const DenseMatrix K = DenseMatrix(read_matrix_market(kData / "mm" / "skew.mtx"));
  EXPECT_EQ(K, DenseMatrix(-K.transpose()));
  EXPECT_EQ(K(0, 1), Complex(-3.0));

  const DenseMatrix H = DenseMatrix(read_matrix_market(kData / "mm" / "hermitian.mtx"));
  EXPECT_EQ(H, DenseMatrix(H.adjoint()));
  EXPECT_EQ(H(0, 1), Complex(1.0, 3.0));
}

TEST(MatrixMarket, FieldsAndArrays)
{
  const DenseMatrix C = DenseMatrix(read_matrix_market(kData / "mm" / "complex_general.mtx"));
  EXPECT_EQ(C(0, 0), Complex(1.0, 2.0));
  EXPECT_EQ(C(0, 2), Complex(0.0, -1.0));
  const DenseMatrix I = DenseMatrix(read_matrix_market(kData / "mm" / "integer.mtx"));
  EXPECT_EQ(I(0, 1), Complex(-7.0));
  const DenseMatrix P = DenseMatrix(read_matrix_market(kData / "mm" / "pattern.mtx"));
  EXPECT_EQ(P, DenseMatrix(DenseMatrix::Identity(2, 2)));
  DenseMatrix expected(2, 3);
  expected << 1, 2, 3, 4, 0, 6;
  EXPECT_EQ(DenseMatrix(read_matrix_market(kData / "mm" / "array_real.mtx")), expected);
  DenseMatrix sym(2, 2);
  sym << 1, 2, 2, 3;
  EXPECT_EQ(DenseMatrix(read_matrix_market(kData / "mm" / "array_symmetric.mtx")), sym);
}

TEST(MatrixMarket, ParseErrorsCarryFileAndLine)
{
  struct Case
  {
    const char *file;
    std::size_t line;
  };
  for (const Case c : {Case{"bad_entry.mtx", 4}, Case{"bad_index.mtx", 3},
                       Case{"bad_header.mtx", 1}, Case{"short.mtx", 4}})
  {
    try
    {
      read_matrix_market(kData / "mm" / c.file);
      FAIL() << c.file;
    }
    catch (const linf::ParseError &e)
    {
      EXPECT_EQ(e.file().filename(), c.file);
      EXPECT_EQ(e.line(), c.line) << c.file << ": " << e.what();
    }
  }
  EXPECT_THROW(read_matrix_market(kData / "mm" / "missing.mtx"), linf::ParseError);
}

TEST(MatrixMarket, AgreesWithIndependentReader)
{
  // Eigen's reader stores only what the file lists; compare general files directly.
  for (const char *name : {"general_real.mtx", "integer.mtx"})
  {
    Eigen::SparseMatrix<double> ref;
    ASSERT_TRUE(Eigen::loadMarket(ref, (kData / "mm" / name).string()));
    const SparseMatrix A = read_matrix_market(kData / "mm" / name);
    EXPECT_EQ(A.nonZeros(), ref.nonZeros()) << name;
    EXPECT_EQ(sum_entries(A), sum_entries(SparseMatrix(ref.cast<Complex>()))) << name;
  }
  for (const char *name : {"complex_general.mtx"})
  {
    Eigen::SparseMatrix<Complex> ref;
    ASSERT_TRUE(Eigen::loadMarket(ref, (kData / "mm" / name).string()));
    const SparseMatrix A = read_matrix_market(kData / "mm" / name);
    EXPECT_EQ(A.nonZeros(), ref.nonZeros());
    EXPECT_EQ(sum_entries(A), sum_entries(SparseMatrix(ref)));
  }
  // Symmetric storage: the lower triangle agrees.
  Eigen::SparseMatrix<double> ref;
  ASSERT_TRUE(Eigen::loadMarket(ref, (kData / "mm" / "symmetric_real.mtx").string()));
  const SparseMatrix A = read_matrix_market(kData / "mm" / "symmetric_real.mtx");
  const SparseMatrix lower = A.triangularView<Eigen::Lower>();
  EXPECT_EQ(lower.nonZeros(), ref.nonZeros());
  EXPECT_EQ(sum_entries(lower), sum_entries(SparseMatrix(ref.cast<Complex>())));
}

TEST(MatrixMarket, WriteReadRoundTrip)
{
  std::mt19937 rng(50);
  for (bool complex : {false, true})
  {
    const DenseMatrix D = complex ? random_complex(rng, 7, 5) : random_dense(rng, 7, 5);
    const SparseMatrix A = D.sparseView();
    std::stringstream ss;
    write_matrix_market(A, ss);
    const SparseMatrix B = read_matrix_market(ss);
    EXPECT_EQ(DenseMatrix(A), DenseMatrix(B));
    // Independent reader on the written file.
    const fs::path p = scratch_dir() / (complex ? "rt_c.mtx" : "rt_r.mtx");
    write_matrix_market(A, p);
    if (!complex)
    {
      Eigen::SparseMatrix<double> ref;
      ASSERT_TRUE(Eigen::loadMarket(ref, p.string()));
      EXPECT_EQ(DenseMatrix(A), DenseMatrix(ref.cast<Complex>()));
    }
  }
}

TEST(Manifest, ToyProblem)
{
  const StructuredTF tf = load_problem(kData / "toy" / "toy.json");
  EXPECT_EQ(tf.n(), 1);
  EXPECT_NEAR(std::abs(tf.eval_H(2.0)(0, 0) - 1.0 / 3.0), 0.0, 1e-15);
  EXPECT_TRUE(tf.is_real());

  const ProblemManifest man = read_manifest(kData / "toy" / "toy.json");
  RunConfig cfg;
  apply_config(man.config, cfg);
  EXPECT_EQ(cfg.r0, 2);
  EXPECT_EQ(*cfg.omega_max, 1.0);
}

TEST(Manifest, WrongBRowCount)
{
  try
  {
    load_problem(kData / "toy" / "toy_bad_b.json");
    FAIL();
  }
  catch (const DimensionMismatch &e)
  {
    EXPECT_EQ(e.factor(), "B_factor");
  }
}

TEST(Manifest, MalformedJsonReportsLine)
{
  try
  {
    read_manifest(kData / "toy" / "toy_bad_json.json");
    FAIL();
  }
  catch (const linf::ParseError &e)
  {
    EXPECT_GE(e.line(), 3u);
  }
}

TEST(Manifest, MissingMatrixAndKeys)
{
  const fs::path dir = scratch_dir();
  {
    std::ofstream f(dir / "missing.json");
    f << R"({"dimensions": {"n": 1, "m": 1, "p": 1},
             "B": [{"term": {"k": 0}, "matrix": "nope.mtx"}],
             "C": [{"term": {"k": 0}, "matrix": "nope.mtx"}],
             "D": [{"term": {"k": 0}, "matrix": "nope.mtx"}]})";
  }
  EXPECT_THROW(read_manifest(dir / "missing.json"), linf::ParseError);
  {
    std::ofstream f(dir / "nokey.json");
    f << R"({"dimensions": {"n": 1, "m": 1}})";
  }
  EXPECT_THROW(read_manifest(dir / "nokey.json"), linf::ParseError);
  // Base directory override resolves matrices elsewhere.
  fs::copy_file(kData / "toy" / "toy.json", dir / "moved.json", fs::copy_options::overwrite_existing);
  EXPECT_THROW(read_manifest(dir / "moved.json"), linf::ParseError);
  EXPECT_NO_THROW(load_problem(dir / "moved.json", kData / "toy"));
}

TEST(Manifest, DelayThroughFiles)
{
  const fs::path dir = write_delay_manifest();
  const StructuredTF ref = make_delay_fixture(20);
  const StructuredTF tf = load_problem(dir / "delay.json");
  const Complex s(0.0, 3.0);
  EXPECT_LE((tf.eval_H(s) - ref.eval_H(s)).norm(), 1e-14);
  const CliRun r = cli({"norm", (dir / "delay.json").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const SolverResult res = parse_report(r.out);
  EXPECT_NEAR(res.omega_opt, 3.07547, 1e-3);
}

TEST(Report, RoundTrip)
{
  const SolverResult r = run(make_delay_fixture(40), delay_run_config());
  const SolverResult back = parse_report(serialize(r));
  EXPECT_EQ(back, r);

  SolverResult odd;
  odd.norm = std::numeric_limits<double>::infinity();
  odd.history.push_back({});
  odd.history.back().sigma_reduced = std::nan("");
  odd.ratios.push_back({});
  odd.warnings = {"w"};
  const SolverResult odd_back = parse_report(serialize(odd));
  EXPECT_TRUE(std::isinf(odd_back.norm));
  EXPECT_TRUE(std::isnan(odd_back.history[0].sigma_reduced));
  EXPECT_FALSE(odd_back.ratios[0].ratio.has_value());
  EXPECT_TRUE(to_json(odd)["ratios"][0]["ratio"].is_null());
  EXPECT_THROW(parse_report("{"), linf::ParseError);
  EXPECT_THROW(parse_report("{}"), linf::ParseError);
}

TEST(Cli, NormOnToy)
{
  const fs::path report = scratch_dir() / "toy_report.json";
  const CliRun r = cli({"norm", (kData / "toy" / "toy.json").string(), "--report", report.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  for (const char *key : {"norm", "omega_opt", "iterations", "history", "ratios"})
  {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_NEAR(j["norm"].get<double>(), 1.0, 1e-12);
  std::ifstream f(report);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(parse_report(ss.str()), parse_report(r.out));
}

TEST(Cli, Overrides)
{
  const CliRun r = cli({"norm", (kData / "toy" / "toy.json").string(), "--r0", "3", "--omega-max",
                        "4", "--eps", "1e-8", "--rmax", "5", "--mode", "dominant", "--policy",
                        "lasttwo", "--interval", "0", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const SolverResult res = parse_report(r.out);
  EXPECT_EQ(res.initial_points, (std::vector<double>{0.0, 2.0, 4.0}));
}

TEST(Cli, UnknownFlag)
{
  const CliRun r = cli({"norm", (kData / "toy" / "toy.json").string(), "--bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"norm", (kData / "toy" / "toy.json").string(), "--mode", "fast"}).code, 1);
}

TEST(Cli, ErrorsExitOne)
{
  const CliRun r = cli({"norm", (kData / "toy" / "toy_bad_b.json").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("B_factor"), std::string::npos);
  EXPECT_EQ(cli({"norm", (kData / "toy" / "missing.json").string()}).code, 1);
}

TEST(Cli, MaxIterationsExitTwo)
{
  const fs::path dir = write_delay_manifest();
  const CliRun r = cli({"norm", (dir / "delay.json").string(), "--r0", "1", "--rmax", "1"});
  EXPECT_EQ(r.code, 2) << r.err;
  EXPECT_TRUE(parse_report(r.out).max_iterations);
}

TEST(Cli, Oracle)
{
  const fs::path csv = scratch_dir() / "sweep.csv";
  const CliRun r = cli({"oracle", (kData / "toy" / "toy.json").string(), "--interval", "0", "2",
                        "--npoints", "3", "--csv", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["norm"].get<double>(), 1.0, 1e-15);
  std::ifstream f(csv);
  std::string line;
  int rows = 0;
  while (std::getline(f, line))
    rows++;
  EXPECT_EQ(rows, 4);
  EXPECT_EQ(cli({"oracle", (kData / "toy" / "toy.json").string()}).code, 1);
}

TEST(Cli, BenchDelay)
{
  const CliRun r = cli({"bench", "delay", "--n", "100", "300", "1000"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("n,norm,omega,seconds", 0), 0u);
  int rows = 0;
  while (std::getline(in, line))
  {
    std::vector<double> v;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
      v.push_back(std::stod(cell));
    ASSERT_GE(v.size(), 4u);
    EXPECT_LE(rel_err(v[1], 0.23766), 1e-4) << line;
    rows++;
  }
  EXPECT_EQ(rows, 3);
}
