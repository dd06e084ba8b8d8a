// SPDX-License-Identifier: Apache-2.0

#include "linf/report.hpp"

#include <cmath>
#include <limits>

#include "linf/errors.hpp"

namespace linf
{

namespace
{

using nlohmann::json;

json num(double x)
{
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  return x;
}

double get_num(const json &j)
{
  if (j.is_string())
  {
    const std::string s = j.get<std::string>();
    if (s == "nan")
      return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf")
      return std::numeric_limits<double>::infinity();
    if (s == "-inf")
      return -std::numeric_limits<double>::infinity();
    throw ParseError("<report>", 0, "unexpected string '" + s + "' for a number");
  }
  return j.get<double>();
}

json opt(const std::optional<double> &x)
{
  return x ? num(*x) : json(nullptr);
}

std::optional<double> get_opt(const json &j)
{
  if (j.is_null())
    return std::nullopt;
  return get_num(j);
}

}  // namespace

json to_json(const SolverResult &r)
{
  json j;
  j["norm"] = num(r.norm);
  j["omega_opt"] = num(r.omega_opt);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["max_iterations"] = r.max_iterations;
  j["final_dim"] = r.final_dim;
  j["seconds"] = num(r.seconds);
  j["initial_points"] = json::array();
  for (double w : r.initial_points)
    j["initial_points"].push_back(num(w));
  j["history"] = json::array();
  for (const auto &h : r.history)
  {
    j["history"].push_back({{"omega", num(h.omega)},
                            {"sigma_reduced", num(h.sigma_reduced)},
                            {"sigma_full", num(h.sigma_full)},
                            {"dim", h.dim},
                            {"inner_evaluations", h.inner_evaluations},
                            {"inner_gap", num(h.inner_gap)},
                            {"seconds", num(h.seconds)},
                            {"stagnated", h.stagnated},
                            {"bisection", h.bisection},
                            {"repaired", h.repaired}});
  }
  j["ratios"] = json::array();
  for (const auto &row : r.ratios)
  {
    j["ratios"].push_back({{"iterate", row.iterate},
                           {"omega", num(row.omega)},
                           {"error", num(row.error)},
                           {"ratio", opt(row.ratio)},
                           {"superlinear", opt(row.superlinear)},
                           {"sigma_error", opt(row.sigma_error)}});
  }
  j["warnings"] = r.warnings;
  return j;
}

SolverResult result_from_json(const json &j)
{
  try
  {
    SolverResult r;
    r.norm = get_num(j.at("norm"));
    r.omega_opt = get_num(j.at("omega_opt"));
    r.iterations = j.at("iterations").get<int>();
    r.converged = j.at("converged").get<bool>();
    r.max_iterations = j.at("max_iterations").get<bool>();
    r.final_dim = j.at("final_dim").get<Index>();
    r.seconds = get_num(j.at("seconds"));
    for (const auto &w : j.at("initial_points"))
      r.initial_points.push_back(get_num(w));
    for (const auto &h : j.at("history"))
    {
      IterationRecord rec;
      rec.omega = get_num(h.at("omega"));
      rec.sigma_reduced = get_num(h.at("sigma_reduced"));
      rec.sigma_full = get_num(h.at("sigma_full"));
      rec.dim = h.at("dim").get<Index>();
      rec.inner_evaluations = h.at("inner_evaluations").get<int>();
      rec.inner_gap = get_num(h.at("inner_gap"));
      rec.seconds = get_num(h.at("seconds"));
      rec.stagnated = h.at("stagnated").get<bool>();
      rec.bisection = h.at("bisection").get<bool>();
      rec.repaired = h.at("repaired").get<bool>();
      r.history.push_back(rec);
    }
    for (const auto &x : j.at("ratios"))
    {
      RatioRow row;
      row.iterate = x.at("iterate").get<int>();
      row.omega = get_num(x.at("omega"));
      row.error = get_num(x.at("error"));
      row.ratio = get_opt(x.at("ratio"));
      row.superlinear = get_opt(x.at("superlinear"));
      row.sigma_error = get_opt(x.at("sigma_error"));
      r.ratios.push_back(row);
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  }
  catch (const json::exception &e)
  {
    throw ParseError("<report>", 0, e.what());
  }
}

std::string serialize(const SolverResult &r, int indent)
{
  return to_json(r).dump(indent);
}

SolverResult parse_report(const std::string &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw ParseError("<report>", 0, e.what());
  }
  return result_from_json(j);
}

}  // namespace linf
