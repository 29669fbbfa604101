#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace litstyle::cli {

// Flat `key = value` settings. Every key has a documented default (see
// kDefaults in config.cpp); unknown keys are rejected so typos surface early.
class RunConfig {
 public:
  RunConfig();

  // Reads a config file; relative paths inside it resolve against its
  // directory.
  void load_file(const std::filesystem::path& path);
  // Single override, e.g. from `--set key=value` or a dedicated flag.
  void set(std::string_view key, std::string value);
  void set_from_assignment(std::string_view assignment);

  std::string get(std::string_view key) const;
  bool has_value(std::string_view key) const { return !get(key).empty(); }
  long long get_int(std::string_view key) const;
  std::size_t get_size(std::string_view key) const;
  double get_double(std::string_view key) const;
  std::optional<double> get_optional_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::uint64_t seed() const;
  // Path value resolved against the directory of the file that set it (or
  // the working directory for command-line overrides).
  std::filesystem::path get_path(std::string_view key) const;
  std::vector<std::string> get_list(std::string_view key, char separator = ',') const;
  // Resolves a path that appears inside the value of `key` (e.g. one item of
  // a list) the same way get_path would.
  std::filesystem::path resolve_in(std::string_view key, const std::string& raw) const;

  // Hash of the listed keys' effective values; stages record it so cached
  // outputs can be checked against the current configuration.
  std::string hash(const std::vector<std::string>& keys) const;

  static const std::vector<std::pair<std::string, std::string>>& defaults();

 private:
  struct Entry {
    std::string value;
    std::filesystem::path base;
  };
  std::map<std::string, Entry, std::less<>> values_;
};

}  // namespace litstyle::cli
