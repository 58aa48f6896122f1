#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace stalloc {

// Problem with the user's configuration (bad file, bad value, unknown key).
// The message carries source:line so the offender can be found directly.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Flat key=value configuration. '#' starts a comment, blank lines are
// ignored, values keep interior spaces ("sides = 20 20"). Duplicate keys are
// rejected. Typed access validates lazily with source:line in every message;
// command-line overrides replace file entries and report as "<flag>".
class Config {
 public:
  Config() = default;

  static Config fromFile(const std::string& path);
  static Config fromString(const std::string& text, const std::string& sourceName);

  void setOverride(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;

  std::string getString(const std::string& key, const std::string& fallback) const;
  double getDouble(const std::string& key, double fallback) const;
  long getLong(const std::string& key, long fallback) const;
  std::uint64_t getSeed(const std::string& key, std::uint64_t fallback) const;
  bool getBool(const std::string& key, bool fallback) const;
  std::vector<double> getDoubleList(const std::string& key,
                                    const std::vector<double>& fallback) const;

  std::string requireString(const std::string& key) const;

  // Rejects any present key outside `allowed`, naming key and source line.
  void requireOnly(const std::vector<std::string>& allowed) const;

  // "source:line: key" for a present key (or "<flag>: key" for an override);
  // callers use it to address range errors to where the value was set.
  std::string location(const std::string& key) const;

  const std::string& sourceName() const { return source_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;  // 0 = command-line override
  };

  const Entry* find(const std::string& key) const;

  std::map<std::string, Entry> entries_;
  std::string source_ = "<none>";
};

}  // namespace stalloc
