#pragma once

#include <string>
#include <vector>

#include "cli/config.hpp"
#include "json.hpp"

namespace triwalk::cli {

inline constexpr int kDefaultGridPoints = 201;
inline constexpr int kDefaultMMax = 20;
inline constexpr int kMinGridPoints = 3;
/// Sites closest to the origin left out of the interior comparison in cmd_compare.
inline constexpr int kCompareCoreRadius = 5;
inline constexpr double kCompareInteriorFraction = 0.9;

/// CSV `m,probability` for m in [-t, t].
std::string cmd_simulate(const RunConfig& config);

/// CSV `v,w` on the open uniform grid of (-v_peak, v_peak). With `rescale`
/// set, CSV `m,prediction` holding w(m/t)/t + p_inf(m) for m in [-t, t].
std::string cmd_density(const RunConfig& config);

/// CSV `m,p_inf` for |m| <= m_max with a `# total=` footer.
std::string cmd_localization(const RunConfig& config);

nlohmann::json cmd_moments(const RunConfig& config);

nlohmann::json cmd_compare(const RunConfig& config);

/// Peak velocity of the configured family: rho, or eta(phi).
double peak_velocity_of(const RunConfig& config);

}  // namespace triwalk::cli
