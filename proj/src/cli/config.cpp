#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace triwalk::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ValidationError("config field '" + field + "': " + what);
}

std::string describe_position(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

const json& require(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) fail(field, "missing");
  return *it;
}

double as_real(const json& value, const std::string& field) {
  if (!value.is_number()) fail(field, "expected a number, got " + std::string(value.type_name()));
  return value.get<double>();
}

int as_int(const json& value, const std::string& field) {
  if (!value.is_number_integer()) fail(field, "expected an integer, got " + std::string(value.type_name()));
  const auto raw = value.get<long long>();
  if (raw < 0 || raw > std::numeric_limits<int>::max()) fail(field, "integer out of range: " + std::to_string(raw));
  return static_cast<int>(raw);
}

std::string as_string(const json& value, const std::string& field) {
  if (!value.is_string()) fail(field, "expected a string, got " + std::string(value.type_name()));
  return value.get<std::string>();
}

Vector3c<double> as_amplitudes(const json& value) {
  const std::string field = "initial_amplitudes";
  if (!value.is_array() || value.size() != 3) fail(field, "expected 3 pairs [re, im]");
  Vector3c<double> out;
  for (int i = 0; i < 3; ++i) {
    const json& pair = value[i];
    const std::string where = field + "[" + std::to_string(i) + "]";
    if (!pair.is_array() || pair.size() != 2) fail(where, "expected a pair [re, im]");
    out(i) = {as_real(pair[0], where + "[0]"), as_real(pair[1], where + "[1]")};
    if (!std::isfinite(out(i).real()) || !std::isfinite(out(i).imag())) fail(where, "not finite");
  }
  return out;
}

}  // namespace

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> orders;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(item, &used);
    } catch (const std::exception&) {
      fail("orders", "cannot parse '" + item + "'");
    }
    if (used != item.size()) fail("orders", "cannot parse '" + item + "'");
    if (n < 1) fail("orders", "orders must be >= 1");
    orders.push_back(n);
  }
  if (orders.empty()) fail("orders", "empty list");
  return orders;
}

RunConfig parse_config(const std::string& text, std::ostream* warnings) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("config is not valid JSON at " + describe_position(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");

  static const std::vector<std::string> known = {"family",     "parameter", "initial_basis", "initial_amplitudes",
                                                 "steps",      "grid_points", "orders",      "m_max",
                                                 "rescale",    "output"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) fail(key, "unknown field");
  }

  RunConfig config;
  const std::string family = as_string(require(doc, "family"), "family");
  if (family == "rho") {
    config.family = CoinFamily::Rho;
  } else if (family == "phi") {
    config.family = CoinFamily::Phi;
  } else {
    fail("family", "expected \"rho\" or \"phi\", got \"" + family + "\"");
  }

  config.parameter = as_real(require(doc, "parameter"), "parameter");
  try {
    static_cast<void>(config.spec());
  } catch (const ParameterOutOfRange& e) {
    fail("parameter", e.what());
  }

  const std::string basis = as_string(require(doc, "initial_basis"), "initial_basis");
  if (basis == "standard") {
    config.initial_basis = Basis::Standard;
  } else if (basis == "eigen") {
    config.initial_basis = Basis::Eigen;
  } else {
    fail("initial_basis", "expected \"standard\" or \"eigen\", got \"" + basis + "\"");
  }

  config.initial_amplitudes = as_amplitudes(require(doc, "initial_amplitudes"));
  const double norm2 = config.initial_amplitudes.squaredNorm();
  const double defect = std::abs(norm2 - 1.0);
  if (defect > kRenormalizeTolerance) {
    std::ostringstream msg;
    msg << "NormalizationError: squared norm " << norm2 << " differs from 1 by more than " << kRenormalizeTolerance;
    fail("initial_amplitudes", msg.str());
  }
  if (defect > kNormTolerance) {
    config.initial_amplitudes /= std::sqrt(norm2);
    if (warnings) *warnings << "warning: initial_amplitudes had squared norm " << norm2 << "; renormalized\n";
  }

  config.steps = as_int(require(doc, "steps"), "steps");

  if (auto it = doc.find("grid_points"); it != doc.end()) config.grid_points = as_int(*it, "grid_points");
  if (auto it = doc.find("m_max"); it != doc.end()) config.m_max = as_int(*it, "m_max");
  if (auto it = doc.find("rescale"); it != doc.end()) config.rescale = as_int(*it, "rescale");
  if (auto it = doc.find("output"); it != doc.end()) config.output = as_string(*it, "output");
  if (auto it = doc.find("orders"); it != doc.end()) {
    if (!it->is_array() || it->empty()) fail("orders", "expected a non-empty array of integers");
    std::vector<int> orders;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const int n = as_int((*it)[i], "orders[" + std::to_string(i) + "]");
      if (n < 1) fail("orders[" + std::to_string(i) + "]", "orders must be >= 1");
      orders.push_back(n);
    }
    config.orders = std::move(orders);
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path, std::ostream* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), warnings);
}

}  // namespace triwalk::cli
