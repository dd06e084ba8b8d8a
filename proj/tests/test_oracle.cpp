// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include <gtest/gtest.h>

#include "linf/errors.hpp"
#include "linf/oracle.hpp"
#include "support.hpp"

using namespace linf;
using namespace linf::testing;

TEST(GridNorm, FirstOrder)
{
  const SweepResult r = grid_norm(first_order(), 0.0, 10.0, 1001);
  EXPECT_NEAR(r.omega_best, 0.0, 1e-9);
  EXPECT_NEAR(r.sigma_best, 1.0, 1e-15);
  EXPECT_EQ(r.grid.size(), 1001u);
}

TEST(GridNorm, TwoPole)
{
  const SweepResult r = grid_norm(two_pole(), 0.0, 10.0, 101);
  EXPECT_NEAR(r.sigma_best, 1.5, 1e-15);
  EXPECT_NEAR(r.omega_best, 0.0, 1e-9);
}

TEST(GridNorm, RefinesInteriorPeak)
{
  // Lightly damped resonance between grid points.
  const SweepResult r = grid_norm(
      [](double w) { return 1.0 / std::abs(Complex(0.01, w - 3.14159)); }, 0.0, 10.0, 11, 1e-10);
  EXPECT_NEAR(r.omega_best, 3.14159, 1e-8);
  EXPECT_NEAR(r.sigma_best, 100.0, 1e-6);
  EXPECT_GT(r.refinement_iters, 0);
  for (const auto &[w, s] : r.grid)
  {
    EXPECT_GE(r.sigma_best, s);
  }
}

TEST(GridNorm, DelayExample)
{
  const SweepResult r = grid_norm(make_delay_fixture(100), 0.0, 50.0, 5001, 1e-9);
  EXPECT_LE(rel_err(r.sigma_best, 0.23766), 1e-4);
  EXPECT_NEAR(r.omega_best, 3.07547, 1e-3);
}

TEST(GridNorm, SkipsSingularShifts)
{
  // H(s) = 1/s is singular at w = 0.
  const StructuredTF tf = make_descriptor(dense1(1.0), dense1(0.0), dense1(1.0), dense1(1.0));
  const SweepResult r = grid_norm(tf, 0.0, 2.0, 3, 1e-6);
  EXPECT_EQ(r.skipped, std::vector<double>{0.0});
  EXPECT_EQ(r.grid.size(), 2u);
  EXPECT_THROW(grid_norm(tf, 0.0, 0.0, 2, 1e-6), AllShiftsSingular);
}

TEST(GridNorm, Preconditions)
{
  EXPECT_THROW(grid_norm(first_order(), 0.0, 1.0, 1), InvalidConfig);
  EXPECT_THROW(grid_norm(first_order(), 1.0, 0.0, 10), InvalidConfig);
  EXPECT_THROW(grid_norm(first_order(), 0.0, 1.0, 10, 0.0), InvalidConfig);
}

TEST(GridNorm, AgreesWithReducedIdentity)
{
  std::mt19937 rng(40);
  const Descriptor d = random_descriptor(rng, 10, 2, 2);
  const SweepResult a = grid_norm(to_tf(d), 0.0, 15.0, 3000);
  const SweepResult b = grid_norm(to_reduced(d), 0.0, 15.0, 3000);
  EXPECT_LE(rel_err(a.sigma_best, b.sigma_best), 1e-10);
}

TEST(SweepCsv, ClosedFormRows)
{
  std::ostringstream out;
  EXPECT_EQ(sweep_csv(first_order(), 0.0, 2.0, 3, out), 3u);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "omega,sigma");
  const double expect[3][2] = {{0.0, 1.0}, {1.0, 0.70710678118654752}, {2.0, 0.44721359549995794}};
  for (const auto &row : expect)
  {
    ASSERT_TRUE(std::getline(in, line));
    const auto comma = line.find(',');
    EXPECT_NEAR(std::stod(line.substr(0, comma)), row[0], 1e-15);
    EXPECT_NEAR(std::stod(line.substr(comma + 1)), row[1], 1e-15);
    EXPECT_NE(line.find('e'), std::string::npos);  // scientific notation
  }
  EXPECT_FALSE(std::getline(in, line));
}

TEST(SweepCsv, EmptyIntervalSingleRow)
{
  std::ostringstream out;
  EXPECT_EQ(sweep_csv(first_order(), 1.0, 1.0, 50, out), 1u);
}

TEST(SweepCsv, RowCountExcludesSingularShifts)
{
  const StructuredTF tf = make_descriptor(dense1(1.0), dense1(0.0), dense1(1.0), dense1(1.0));
  for (int npoints : {2, 3, 11, 101})
  {
    std::ostringstream out;
    const std::size_t rows = sweep_csv(tf, 0.0, 4.0, npoints, out);
    EXPECT_EQ(rows, static_cast<std::size_t>(npoints - 1));
    const std::string s = out.str();
    EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), rows + 1);
  }
}

TEST(SweepCsv, Deterministic)
{
  std::ostringstream a, b;
  sweep_csv(two_pole(), 0.0, 5.0, 40, a);
  sweep_csv(two_pole(), 0.0, 5.0, 40, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(SweepCsv, UnwritablePath)
{
  EXPECT_THROW(sweep_csv(first_order(), 0.0, 1.0, 3, std::string("/nonexistent/dir/out.csv")),
               Error);
}
