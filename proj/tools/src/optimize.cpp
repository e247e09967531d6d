#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "parallel.hpp"

namespace wgscat::cli {

namespace {

struct Objective {
  std::string name;
  bool maximize;
  std::vector<std::string> default_axes;
  double (*evaluate)(const RunConfig&);
};

double sorter(const RunConfig& c) {
  const PulseEnvelope pulse = two_photon_pulse(c);
  return standing_wave_channels(c.params, pulse)[Channel::dd].probability();
}

// Nonlinear norm relative to the pair-absorption terms alone, so that the
// objective rewards cancellation rather than simply detuning the emitters away.
double linearity(const RunConfig& c) {
  const PulseEnvelope pulse = two_photon_pulse(c);
  const ChannelSet set = two_photon_channels(c.geometry, c.params, pulse);
  const PartFilter pair_only = [](const WavefunctionPart& p) { return p.kind == PartKind::pair; };
  double nonlinear = 0.0, pair = 0.0;
  for (const auto& w : set.channels) {
    nonlinear += w.weight() * w.norm_squared(nonlinear_parts());
    pair += w.weight() * w.norm_squared(pair_only);
  }
  if (!(pair > 0.0)) return 0.0;
  return std::sqrt(nonlinear / pair);
}

double leakage(const RunConfig& c) {
  const PulseEnvelope pulse = two_photon_pulse(c);
  return counterpropagating_channels(c.params, pulse)[Channel::aa].probability();
}

Objective objective_named(const std::string& name) {
  if (name == "sorter") return {name, true, {"g2T:0.5:1.5:6", "phi:1.25pi:1.75pi:5", "Delta/g2:0.5:1.5:5"}, sorter};
  if (name == "linearity") return {name, false, {"beta/g2:-2:2:9", "Delta/g2:-2:2:9"}, linearity};
  if (name == "leakage") return {name, false, {"phi:0:2pi:13"}, leakage};
  throw std::invalid_argument("objective must be sorter, linearity or leakage");
}

struct Search {
  const Objective* objective;
  const RunConfig* cfg;
  std::vector<std::size_t> free;  // indices of axes with a range
  std::vector<double> fixed;      // full point, free entries overwritten
  std::size_t evaluations = 0;
  std::size_t failures = 0;

  std::vector<double> point(const gsl_vector* x) const {
    std::vector<double> p = fixed;
    for (std::size_t i = 0; i < free.size(); ++i) {
      const auto& axis = cfg->sweeps[free[i]];
      p[free[i]] = std::clamp(gsl_vector_get(x, i), axis.lo, axis.hi);
    }
    return p;
  }

  // Value to minimize.
  double cost(const std::vector<double>& p) {
    ++evaluations;
    try {
      const double v = objective->evaluate(at_point(*cfg, p));
      return objective->maximize ? -v : v;
    } catch (const PreconditionError&) {
      ++failures;
      return std::numeric_limits<double>::max() / 4;
    }
  }
};

double gsl_cost(const gsl_vector* x, void* data) {
  auto* s = static_cast<Search*>(data);
  const std::vector<double> p = s->point(x);
  // Outside the box the clamped value is penalised by the distance to it.
  double outside = 0.0;
  for (std::size_t i = 0; i < s->free.size(); ++i) outside += std::abs(gsl_vector_get(x, i) - p[s->free[i]]);
  return s->cost(p) + outside;
}

}  // namespace

CommandResult cmd_optimize(const RunConfig& input) {
  const Objective objective = objective_named(input.objective);
  RunConfig cfg = input;
  if (cfg.sweeps.empty())
    for (const auto& a : objective.default_axes) cfg.sweeps.push_back(parse_sweep(a));

  CommandResult r;
  // Coarse scan.
  const auto points = sweep_points(cfg.sweeps);
  Search search{&objective, &cfg, {}, {}, 0, 0};
  const auto costs = parallel_map(points.size(), [&](std::size_t k) {
    Search local{&objective, &cfg, {}, {}, 0, 0};
    return local.cost(points[k]);
  });
  search.evaluations = points.size();
  std::size_t best = 0;
  for (std::size_t k = 1; k < costs.size(); ++k)
    if (costs[k] < costs[best]) best = k;

  for (std::size_t i = 0; i < cfg.sweeps.size(); ++i)
    if (cfg.sweeps[i].n > 1) search.free.push_back(i);
  search.fixed = points[best];

  std::vector<double> optimum = points[best];
  double value = costs[best];
  bool converged = true;
  r.table.columns = {"iteration", "evaluations", "objective"};
  for (const auto& c : sweep_columns(cfg)) r.table.columns.push_back(c);
  auto trace = [&](double iteration, double cost, const std::vector<double>& p) {
    std::vector<double> row{iteration, static_cast<double>(search.evaluations), objective.maximize ? -cost : cost};
    row.insert(row.end(), p.begin(), p.end());
    r.table.rows.push_back(std::move(row));
  };
  trace(0, value, optimum);

  if (!search.free.empty()) {
    const std::size_t dim = search.free.size();
    gsl_set_error_handler_off();
    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> minimizer(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim), &gsl_multimin_fminimizer_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(dim), &gsl_vector_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(dim), &gsl_vector_free);
    double scale = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const auto& a = cfg.sweeps[search.free[i]];
      const double spacing = (a.hi - a.lo) / static_cast<double>(a.n - 1);
      gsl_vector_set(x.get(), i, optimum[search.free[i]]);
      gsl_vector_set(step.get(), i, 0.5 * spacing);
      scale = std::max(scale, spacing);
    }
    gsl_multimin_function fn{&gsl_cost, dim, &search};
    gsl_multimin_fminimizer_set(minimizer.get(), &fn, x.get(), step.get());
    converged = false;
    for (std::size_t it = 1; search.evaluations < cfg.max_evaluations + points.size(); ++it) {
      if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
      const double size = gsl_multimin_fminimizer_size(minimizer.get());
      trace(static_cast<double>(it), minimizer->fval, search.point(minimizer->x));
      if (gsl_multimin_test_size(size, 1e-4 * scale) == GSL_SUCCESS) {
        converged = true;
        break;
      }
    }
    if (minimizer->fval <= value) {
      value = minimizer->fval;
      optimum = search.point(minimizer->x);
    }
    if (!converged) {
      std::ostringstream os;
      os << "simplex refinement did not converge within " << cfg.max_evaluations
         << " evaluations; reporting the best point found";
      r.warnings.push_back(os.str());
    }
  }
  if (search.failures > 0)
    r.warnings.push_back(std::to_string(search.failures) + " evaluations violated numerical preconditions and were skipped");

  nlohmann::json opt = nlohmann::json::object();
  for (std::size_t i = 0; i < cfg.sweeps.size(); ++i) opt[cfg.sweeps[i].param] = optimum[i];
  nlohmann::json coarse = nlohmann::json::object();
  for (std::size_t i = 0; i < cfg.sweeps.size(); ++i) coarse[cfg.sweeps[i].param] = points[best][i];
  r.report = {{"objective", objective.name},
              {"direction", objective.maximize ? "maximize" : "minimize"},
              {"optimum", opt},
              {"value", objective.maximize ? -value : value},
              {"coarse_best", coarse},
              {"coarse_value", objective.maximize ? -costs[best] : costs[best]},
              {"converged", converged},
              {"evaluations", search.evaluations}};
  return r;
}

}  // namespace wgscat::cli
