#pragma once

#include <map>
#include <string>
#include <vector>

namespace speclab {

/// Line-oriented nested key-value configuration:
///   model.variant = sturm_liouville
///   t_grid = 0.1 0.5 1.0
/// '#' starts a comment; keys are dotted paths.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int_or(const std::string& key, long long fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  /// Canonical sorted key=value rendering, used for digests and rerun identity.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace speclab
