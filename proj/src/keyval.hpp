#ifndef SPINSIM_SRC_KEYVAL_HPP
#define SPINSIM_SRC_KEYVAL_HPP

// Flat "key = value" text used by species presets and scenario files.
// '#' starts a comment, blank lines are skipped, duplicate keys are errors.
// Kept internal to the library; the public surface is load_config /
// load_species_preset.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "spinsim/errors.hpp"

namespace spinsim::keyval {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Document {
  std::string origin; // path or "<text>", for error messages
  std::vector<Entry> entries;
  std::map<std::string, std::size_t> index;

  bool has(const std::string& key) const { return index.count(key) != 0; }

  const Entry* find(const std::string& key) const {
    auto it = index.find(key);
    return it == index.end() ? nullptr : &entries[it->second];
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const Entry* e = find(key);
    if (e)
      throw ConfigError(origin + ":" + std::to_string(e->line) + ": field '" + key +
                        "' " + what);
    throw ConfigError(origin + ": field '" + key + "' " + what);
  }
};

Document parse(const std::string& text, const std::string& origin);
Document parse_file(const std::string& path);

// Typed accessors. Missing required key or malformed value throws
// ConfigError citing origin, line and field.
std::string get_string(const Document& doc, const std::string& key);
std::string get_string_or(const Document& doc, const std::string& key,
                          const std::string& fallback);
double get_double(const Document& doc, const std::string& key);
double get_double_or(const Document& doc, const std::string& key, double fallback);
long long get_int(const Document& doc, const std::string& key);
long long get_int_or(const Document& doc, const std::string& key, long long fallback);
unsigned long long get_uint(const Document& doc, const std::string& key);
unsigned long long get_uint_or(const Document& doc, const std::string& key,
                               unsigned long long fallback);

// Comma-separated doubles/ints, fixed expected count.
std::vector<double> get_doubles(const Document& doc, const std::string& key, int count);
std::vector<long long> get_ints(const Document& doc, const std::string& key, int count);

double parse_double(const Document& doc, const Entry& e);

} // namespace spinsim::keyval

#endif
