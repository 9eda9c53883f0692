#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/output.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 1;

}  // namespace

int main(int argc, char** argv) {
  using namespace triwalk::cli;

  CLI::App app{"Three-state quantum walk: simulation, limit densities and localization"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<int> grid;
  std::optional<int> rescale;
  std::optional<std::string> orders;
  std::optional<int> m_max;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "RunConfig JSON file")->required();
    sub->add_option("--out", out_path, "output file (stdout when absent)");
    return sub;
  };
  auto* simulate = add_common(app.add_subcommand("simulate", "position distribution after the configured steps"));
  auto* density = add_common(app.add_subcommand("density", "group-velocity density on an open grid"));
  density->add_option("--grid", grid, "number of grid points (>= 3)");
  density->add_option("--rescale", rescale, "emit w(m/t)/t + p_inf(m) for this t instead");
  auto* localization = add_common(app.add_subcommand("localization", "trapped probability profile"));
  localization->add_option("--m-max", m_max, "largest |m| to tabulate")->check(CLI::NonNegativeNumber);
  auto* moments = add_common(app.add_subcommand("moments", "asymptotic and empirical moments"));
  moments->add_option("--orders", orders, "comma-separated moment orders, e.g. 1,2,3");
  auto* compare = add_common(app.add_subcommand("compare", "simulation against the limit prediction"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    RunConfig config = load_config(config_path, &std::cerr);
    if (grid) config.grid_points = *grid;
    if (rescale) config.rescale = *rescale;
    if (m_max) config.m_max = *m_max;
    if (orders) config.orders = parse_orders(*orders);
    if (out_path) config.output = *out_path;
    std::optional<std::filesystem::path> target;
    if (config.output) target = *config.output;

    std::string content;
    if (simulate->parsed()) {
      content = cmd_simulate(config);
    } else if (density->parsed()) {
      content = cmd_density(config);
    } else if (localization->parsed()) {
      content = cmd_localization(config);
    } else if (moments->parsed()) {
      content = cmd_moments(config).dump(2) + "\n";
    } else if (compare->parsed()) {
      content = cmd_compare(config).dump(2) + "\n";
    }
    write_output(content, target);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
