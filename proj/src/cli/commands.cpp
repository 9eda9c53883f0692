#include "cli/commands.hpp"

#include <cmath>
#include <future>
#include <variant>

#include "cli/output.hpp"
#include "triwalk/asymptotics_phi.hpp"
#include "triwalk/asymptotics_rho.hpp"
#include "triwalk/walk.hpp"

namespace triwalk::cli {

namespace {

using nlohmann::json;
using Asymptotics = std::variant<RhoAsymptotics<double>, PhiAsymptotics<double>>;

Asymptotics make_asymptotics(const RunConfig& config) {
  const CoinSpec<double> spec = config.spec();
  const CoinState<double> state = config.state();
  if (config.family == CoinFamily::Rho) return RhoAsymptotics<double>(spec, state);
  return PhiAsymptotics<double>(spec, state);
}

double peak(const RhoAsymptotics<double>& ctx) { return ctx.rho(); }
double peak(const PhiAsymptotics<double>& ctx) { return ctx.eta(); }

PositionDistribution<double> simulate(const RunConfig& config, int steps) {
  const CoinSpec<double> spec = config.spec();
  return distribution(evolve(initial_state(config.state(), spec), build_coin(spec), steps));
}

// w(m/t)/t + p_inf(m); the density part is zero on and beyond the peak velocity.
double prediction(const Asymptotics& asym, int m, int t) {
  return std::visit(
      [&](const auto& ctx) {
        const double v = double(m) / double(t);
        const double continuous = std::abs(v) < peak(ctx) ? density(ctx, v) / double(t) : 0.0;
        return continuous + localization(ctx, m);
      },
      asym);
}

int grid_points(const RunConfig& config) {
  const int n = config.grid_points.value_or(kDefaultGridPoints);
  if (n < kMinGridPoints) {
    throw ValidationError("config field 'grid_points': must be at least " + std::to_string(kMinGridPoints) +
                          ", got " + std::to_string(n));
  }
  return n;
}

void require_positive_steps(int t, const char* field) {
  if (t < 1) throw ValidationError(std::string("config field '") + field + "': must be >= 1 for this command");
}

}  // namespace

double peak_velocity_of(const RunConfig& config) {
  return config.family == CoinFamily::Rho ? config.parameter : peak_velocity(config.parameter);
}

std::string cmd_simulate(const RunConfig& config) {
  const auto dist = simulate(config, config.steps);
  std::string out = "m,probability\n";
  for (int m = -dist.steps(); m <= dist.steps(); ++m) {
    out += std::to_string(m) + "," + format_real(dist.at(m)) + "\n";
  }
  return out;
}

std::string cmd_density(const RunConfig& config) {
  const Asymptotics asym = make_asymptotics(config);
  std::string out;
  if (config.rescale) {
    const int t = *config.rescale;
    require_positive_steps(t, "rescale");
    out = "m,prediction\n";
    for (int m = -t; m <= t; ++m) out += std::to_string(m) + "," + format_real(prediction(asym, m, t)) + "\n";
    return out;
  }
  const int n = grid_points(config);
  const double vp = peak_velocity_of(config);
  out = "v,w\n";
  for (int i = 0; i < n; ++i) {
    // Integer numerator keeps the centre node exactly at 0 for odd n.
    const double v = vp * double(2 * (i + 1) - (n + 1)) / double(n + 1);
    const double w = std::visit([&](const auto& ctx) { return density(ctx, v); }, asym);
    out += format_real(v) + "," + format_real(w) + "\n";
  }
  return out;
}

std::string cmd_localization(const RunConfig& config) {
  const Asymptotics asym = make_asymptotics(config);
  const int m_max = config.m_max.value_or(kDefaultMMax);
  std::string out = "m,p_inf\n";
  for (int m = -m_max; m <= m_max; ++m) {
    const double p = std::visit([&](const auto& ctx) { return localization(ctx, m); }, asym);
    out += std::to_string(m) + "," + format_real(p) + "\n";
  }
  const double total = std::visit([](const auto& ctx) { return localization_total(ctx); }, asym);
  out += "# total=" + format_real(total) + "\n";
  return out;
}

json cmd_moments(const RunConfig& config) {
  const Asymptotics asym = make_asymptotics(config);
  const std::vector<int> orders = config.orders.value_or(std::vector<int>{1, 2});
  require_positive_steps(config.steps, "steps");
  const auto dist = simulate(config, config.steps);

  json report;
  report["family"] = to_string(config.family);
  report["parameter"] = config.parameter;
  report["steps"] = config.steps;
  json rows = json::array();
  for (int n : orders) {
    const double asymptotic = std::visit([&](const auto& ctx) { return moment(ctx, n); }, asym);
    const double empirical = empirical_moment(dist, n);
    rows.push_back({{"order", n}, {"asymptotic", asymptotic}, {"empirical", empirical},
                    {"gap", std::abs(asymptotic - empirical)}});
  }
  report["moments"] = rows;
  return report;
}

json cmd_compare(const RunConfig& config) {
  const Asymptotics asym = make_asymptotics(config);
  const int t = config.steps;
  require_positive_steps(t, "steps");

  auto simulation = std::async(std::launch::async, [&] { return simulate(config, t); });
  auto quadrature = std::async(std::launch::async, [&] {
    return std::visit([](const auto& ctx) { return continuous_weight_quadrature(ctx); }, asym);
  });

  const double closed = std::visit([](const auto& ctx) { return continuous_weight(ctx); }, asym);
  const double trapped = std::visit([](const auto& ctx) { return localization_total(ctx); }, asym);
  const auto quad = quadrature.get();
  const auto dist = simulation.get();

  const double vp = peak_velocity_of(config);
  double sup_gap = 0;
  int sites = 0;
  for (int m = -t; m <= t; ++m) {
    if (std::abs(m) <= kCompareCoreRadius || std::abs(m) > kCompareInteriorFraction * vp * t) continue;
    sup_gap = std::max(sup_gap, std::abs(dist.at(m) - prediction(asym, m, t)));
    ++sites;
  }
  const double origin_limit = std::visit([](const auto& ctx) { return localization(ctx, 0); }, asym);

  json report;
  report["family"] = to_string(config.family);
  report["parameter"] = config.parameter;
  report["steps"] = t;
  report["continuous_weight"] = {{"closed_form", closed},
                                 {"quadrature", quad.value},
                                 {"quadrature_error_estimate", quad.error_estimate}};
  report["localization_total"] = trapped;
  report["normalization_deviation"] = std::abs(closed + trapped - 1.0);
  report["normalization_deviation_quadrature"] = std::abs(quad.value + trapped - 1.0);
  report["interior"] = {{"sup_gap", sup_gap},
                        {"sites", sites},
                        {"excluded_radius", kCompareCoreRadius},
                        {"velocity_fraction", kCompareInteriorFraction}};
  report["origin"] = {{"simulated", dist.at(0)}, {"localization", origin_limit},
                      {"gap", std::abs(dist.at(0) - origin_limit)}};
  report["simulated_total"] = dist.total();
  return report;
}

}  // namespace triwalk::cli
