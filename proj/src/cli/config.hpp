#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "triwalk/coin.hpp"
#include "triwalk/errors.hpp"

namespace triwalk::cli {

/// Bad input: malformed JSON, unknown or mistyped fields, out-of-range
/// values. Maps to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kRenormalizeTolerance = 1e-6;

struct RunConfig {
  CoinFamily family = CoinFamily::Rho;
  double parameter = 0;
  Basis initial_basis = Basis::Eigen;
  Vector3c<double> initial_amplitudes = Vector3c<double>::Zero();
  int steps = 0;

  std::optional<int> grid_points;
  std::optional<std::vector<int>> orders;
  std::optional<int> m_max;
  std::optional<int> rescale;
  std::optional<std::string> output;

  CoinSpec<double> spec() const { return CoinSpec<double>(family, parameter); }
  CoinState<double> state() const { return CoinState<double>(initial_amplitudes, initial_basis); }
};

/// Parses and validates a RunConfig document. A squared norm off by more
/// than kNormTolerance but at most kRenormalizeTolerance is repaired, with a
/// note written to `warnings` when it is non-null.
RunConfig parse_config(const std::string& text, std::ostream* warnings = nullptr);

RunConfig load_config(const std::filesystem::path& path, std::ostream* warnings = nullptr);

/// "1,2,3" -> {1, 2, 3}.
std::vector<int> parse_orders(const std::string& text);

}  // namespace triwalk::cli
