#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rptip/basin.hpp"
#include "rptip/forcing.hpp"
#include "rptip/integrate.hpp"
#include "rptip/models.hpp"

namespace rptip {

/// Malformed or inconsistent run configuration. The CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Named parameter records: vdp_a093, vdp_a0938, gly_birhythmic.
std::optional<ModelParams> model_preset(const std::string& name);

/// Sectioned key/value configuration. Keys are addressed as `section.key`;
/// anything outside the schema is rejected.
class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig from_file(const std::string& path);
  static RunConfig from_string(const std::string& text);

  /// Applies `section.key=value`.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key) const;
  double num(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> list(const std::string& key) const;

  /// Explicitly set keys in sorted order.
  const std::map<std::string, std::string>& values() const { return values_; }

  ModelKind model() const;
  ModelParams params() const;
  ParameterPath path() const;
  BaseSide side() const;
  IntegratorConfig integrator() const;
  bool has_shift() const;
  /// Shift with t_c resolved; `base_period` is used when t_c is "4T"-style or absent.
  InputShift shift(double base_period) const;
  std::vector<State> initial_list() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Known keys, in schema order.
const std::vector<std::string>& config_keys();

}  // namespace rptip
