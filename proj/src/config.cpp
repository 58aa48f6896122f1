#include "stalloc/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace stalloc {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Config Config::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream all;
  all << in.rdbuf();
  return fromString(all.str(), path);
}

Config Config::fromString(const std::string& text, const std::string& sourceName) {
  Config cfg;
  cfg.source_ = sourceName;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(sourceName + ":" + std::to_string(lineNo) +
                        ": expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(sourceName + ":" + std::to_string(lineNo) + ": empty key");
    auto [it, fresh] = cfg.entries_.emplace(key, Entry{value, lineNo});
    if (!fresh)
      throw ConfigError(sourceName + ":" + std::to_string(lineNo) + ": duplicate key '" +
                        key + "' (first set on line " + std::to_string(it->second.line) + ")");
  }
  return cfg;
}

void Config::setOverride(const std::string& key, const std::string& value) {
  entries_[key] = Entry{value, 0};
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

const Config::Entry* Config::find(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string Config::location(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) return key;
  if (e->line == 0) return "<flag>: " + key;
  return source_ + ":" + std::to_string(e->line) + ": " + key;
}

std::string Config::getString(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

std::string Config::requireString(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) throw ConfigError(source_ + ": missing required key '" + key + "'");
  return e->value;
}

double Config::getDouble(const std::string& key, double fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(e->value.c_str(), &end);
  if (errno != 0 || end == e->value.c_str() || *end != '\0')
    throw ConfigError(location(key) + ": expected a number, got '" + e->value + "'");
  return v;
}

long Config::getLong(const std::string& key, long fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(e->value.c_str(), &end, 10);
  if (errno != 0 || end == e->value.c_str() || *end != '\0')
    throw ConfigError(location(key) + ": expected an integer, got '" + e->value + "'");
  return v;
}

std::uint64_t Config::getSeed(const std::string& key, std::uint64_t fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(e->value.c_str(), &end, 10);
  if (errno != 0 || end == e->value.c_str() || *end != '\0')
    throw ConfigError(location(key) + ": expected an unsigned integer, got '" + e->value + "'");
  return static_cast<std::uint64_t>(v);
}

bool Config::getBool(const std::string& key, bool fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  const std::string& v = e->value;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(location(key) + ": expected true/false, got '" + v + "'");
}

std::vector<double> Config::getDoubleList(const std::string& key,
                                          const std::vector<double>& fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::string buf = e->value;
  for (char& c : buf)
    if (c == ',') c = ' ';
  std::istringstream in(buf);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof())
    throw ConfigError(location(key) + ": expected a list of numbers, got '" + e->value + "'");
  if (out.empty())
    throw ConfigError(location(key) + ": expected a nonempty list of numbers");
  return out;
}

void Config::requireOnly(const std::vector<std::string>& allowed) const {
  for (const auto& [key, entry] : entries_) {
    bool ok = false;
    for (const std::string& a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok) {
      std::string at = entry.line == 0 ? "<flag>"
                                       : source_ + ":" + std::to_string(entry.line);
      throw ConfigError(at + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace stalloc
