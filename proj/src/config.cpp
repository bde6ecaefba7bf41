#include "speclab/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace speclab {

namespace {
std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("Config: line " + std::to_string(lineno) + " has no '='");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("Config: empty key at line " + std::to_string(lineno));
    }
    cfg.kv_[key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("Config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw std::invalid_argument("Config: missing key '" + key + "'");
  return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const { return std::stod(get(key)); }

double Config::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const { return std::stoll(get(key)); }

long long Config::get_int_or(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::istringstream is(get(key));
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  if (out.empty()) throw std::invalid_argument("Config: key '" + key + "' holds no numbers");
  return out;
}

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

std::string Config::canonical() const {
  std::ostringstream os;
  for (const auto& [k, v] : kv_) os << k << "=" << v << "\n";
  return os.str();
}

}  // namespace speclab
