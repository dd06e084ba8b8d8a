// SPDX-License-Identifier: Apache-2.0

#include "linf/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "linf/matrix_market.hpp"

namespace linf
{

namespace
{

using nlohmann::json;
namespace fs = std::filesystem;

std::size_t line_of(const std::string &text, std::size_t byte)
{
  const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size()));
  return 1 + static_cast<std::size_t>(std::count(text.begin(), end, '\n'));
}

struct Context
{
  fs::path file;

  [[noreturn]] void fail(const std::string &msg) const { throw ParseError(file, 0, msg); }

  const json &need(const json &j, const char *key, const std::string &where) const
  {
    if (!j.is_object() || !j.contains(key))
    {
      fail(where + ": missing key '" + key + "'");
    }
    return j.at(key);
  }

  double number(const json &j, const std::string &where) const
  {
    if (!j.is_number())
    {
      fail(where + ": expected a number");
    }
    return j.get<double>();
  }

  long long integer(const json &j, const std::string &where) const
  {
    if (!j.is_number_integer())
    {
      fail(where + ": expected an integer");
    }
    return j.get<long long>();
  }
};

std::vector<TermSpec> read_terms(const Context &ctx, const json &root, const char *key,
                                 const fs::path &base)
{
  const json &list = ctx.need(root, key, "manifest");
  if (!list.is_array() || list.empty())
  {
    ctx.fail(std::string(key) + ": expected a non-empty list of terms");
  }
  std::vector<TermSpec> out;
  for (std::size_t i = 0; i < list.size(); i++)
  {
    const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
    const json &e = list[i];
    TermSpec t;
    const json &term = ctx.need(e, "term", where);
    t.term.degree = static_cast<int>(term.contains("k") ? ctx.integer(term["k"], where + ".k") : 0);
    t.term.delay = term.contains("tau") ? ctx.number(term["tau"], where + ".tau") : 0.0;
    const json &m = ctx.need(e, "matrix", where);
    if (!m.is_string())
    {
      ctx.fail(where + ".matrix: expected a file path");
    }
    t.matrix = base / m.get<std::string>();
    if (e.contains("scale"))
    {
      t.scale = ctx.number(e["scale"], where + ".scale");
    }
    out.push_back(std::move(t));
  }
  return out;
}

ManifestConfig read_config(const Context &ctx, const json &c)
{
  ManifestConfig mc;
  if (!c.is_object())
  {
    ctx.fail("config: expected an object");
  }
  for (const auto &[key, v] : c.items())
  {
    const std::string where = "config." + key;
    if (key == "r0")
      mc.r0 = static_cast<int>(ctx.integer(v, where));
    else if (key == "omega_max")
      mc.omega_max = ctx.number(v, where);
    else if (key == "eps")
      mc.eps = ctx.number(v, where);
    else if (key == "r_max")
      mc.r_max = static_cast<int>(ctx.integer(v, where));
    else if (key == "gamma")
      mc.gamma = ctx.number(v, where);
    else if (key == "support_tol")
      mc.support_tol = ctx.number(v, where);
    else if (key == "max_inner_iters")
      mc.max_inner_iters = static_cast<int>(ctx.integer(v, where));
    else if (key == "mode")
    {
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      if (s == "full")
        mc.mode = ExpansionMode::Full;
      else if (s == "dominant")
        mc.mode = ExpansionMode::DominantOnly;
      else
        ctx.fail(where + ": expected \"full\" or \"dominant\"");
    }
    else if (key == "policy")
    {
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      if (s == "keepall")
        mc.policy = SubspacePolicy::KeepAll;
      else if (s == "lasttwo")
        mc.policy = SubspacePolicy::LastTwo;
      else
        ctx.fail(where + ": expected \"keepall\" or \"lasttwo\"");
    }
    else if (key == "interval")
    {
      if (!v.is_array() || v.size() != 2)
      {
        ctx.fail(where + ": expected [lo, hi]");
      }
      // "inf" is accepted for an unbounded upper end.
      auto end = [&](const json &x)
      {
        if (x.is_string() && x.get<std::string>() == "inf")
        {
          return std::numeric_limits<double>::infinity();
        }
        return ctx.number(x, where);
      };
      mc.interval = std::make_pair(end(v[0]), end(v[1]));
    }
    else if (key == "note" || key == "comment")
    {
    }
    else
    {
      ctx.fail(where + ": unknown key");
    }
  }
  return mc;
}

MatrixFactor assemble(const std::vector<TermSpec> &specs, const std::string &name)
{
  std::vector<MatrixFactor::Term> terms;
  for (const auto &s : specs)
  {
    SparseMatrix A = read_matrix_market(s.matrix);
    if (s.scale != 1.0)
    {
      A *= Complex(s.scale);
    }
    terms.push_back({s.term, std::move(A)});
  }
  return MatrixFactor(std::move(terms), name);
}

}  // namespace

ProblemManifest read_manifest(const fs::path &path, std::optional<fs::path> base_dir)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError(path, 0, "cannot open manifest");
  }
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json root;
  try
  {
    root = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw ParseError(path, line_of(text, e.byte), e.what());
  }

  Context ctx{path};
  ProblemManifest man;
  man.base_dir = base_dir ? *base_dir : path.parent_path();
  const json &dims = ctx.need(root, "dimensions", "manifest");
  man.n = ctx.integer(ctx.need(dims, "n", "dimensions"), "dimensions.n");
  man.m = ctx.integer(ctx.need(dims, "m", "dimensions"), "dimensions.m");
  man.p = ctx.integer(ctx.need(dims, "p", "dimensions"), "dimensions.p");
  if (man.n < 1 || man.m < 1 || man.p < 1)
  {
    ctx.fail("dimensions must be positive");
  }
  man.b = read_terms(ctx, root, "B", man.base_dir);
  man.c = read_terms(ctx, root, "C", man.base_dir);
  man.d = read_terms(ctx, root, "D", man.base_dir);
  if (root.contains("config"))
  {
    man.config = read_config(ctx, root["config"]);
  }
  for (const auto *list : {&man.b, &man.c, &man.d})
  {
    for (const auto &t : *list)
    {
      if (!fs::exists(t.matrix))
      {
        throw ParseError(t.matrix, 0, "referenced matrix file does not exist");
      }
    }
  }
  return man;
}

StructuredTF load_problem(const ProblemManifest &man)
{
  MatrixFactor d = assemble(man.d, "D_factor");
  if (d.rows() != man.n || d.cols() != man.n)
  {
    throw DimensionMismatch("D_factor", "expected " + std::to_string(man.n) + " x " +
                                            std::to_string(man.n));
  }
  MatrixFactor b = assemble(man.b, "B_factor");
  if (b.rows() != man.n || b.cols() != man.m)
  {
    throw DimensionMismatch("B_factor", "expected " + std::to_string(man.n) + " x " +
                                            std::to_string(man.m));
  }
  MatrixFactor c = assemble(man.c, "C_factor");
  if (c.rows() != man.p || c.cols() != man.n)
  {
    throw DimensionMismatch("C_factor", "expected " + std::to_string(man.p) + " x " +
                                            std::to_string(man.n));
  }
  return StructuredTF(std::move(c), std::move(d), std::move(b));
}

StructuredTF load_problem(const fs::path &manifest_path, std::optional<fs::path> base_dir)
{
  return load_problem(read_manifest(manifest_path, std::move(base_dir)));
}

void apply_config(const ManifestConfig &mc, RunConfig &cfg)
{
  if (mc.r0)
    cfg.r0 = *mc.r0;
  if (mc.eps)
    cfg.eps = *mc.eps;
  if (mc.r_max)
    cfg.r_max = *mc.r_max;
  if (mc.mode)
    cfg.expansion_mode = *mc.mode;
  if (mc.policy)
    cfg.subspace_policy = *mc.policy;
  if (mc.gamma)
    cfg.inner.curvature_bound = *mc.gamma;
  if (mc.support_tol)
    cfg.inner.support_tol = *mc.support_tol;
  if (mc.max_inner_iters)
    cfg.inner.max_inner_iters = *mc.max_inner_iters;
  if (mc.interval)
  {
    cfg.inner.omega_lo = mc.interval->first;
    cfg.inner.omega_hi = mc.interval->second;
    if (!mc.omega_max && std::isfinite(mc.interval->second))
    {
      cfg.omega_max = mc.interval->second;
    }
  }
  if (mc.omega_max)
    cfg.omega_max = *mc.omega_max;
}

}  // namespace linf
