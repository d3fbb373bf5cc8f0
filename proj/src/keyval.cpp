#include "keyval.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace spinsim::keyval {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

[[noreturn]] void fail_line(const std::string& origin, int line, const std::string& what) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

} // namespace

Document parse(const std::string& text, const std::string& origin) {
  Document doc;
  doc.origin = origin;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail_line(origin, lineno, "expected 'key = value'");
    Entry e;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = lineno;
    if (!valid_key(e.key))
      fail_line(origin, lineno, "invalid key '" + e.key + "' (lowercase, digits, _)");
    if (e.value.empty()) fail_line(origin, lineno, "field '" + e.key + "' has no value");
    if (doc.index.count(e.key))
      fail_line(origin, lineno, "duplicate field '" + e.key + "'");
    doc.index[e.key] = doc.entries.size();
    doc.entries.push_back(std::move(e));
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

std::string get_string(const Document& doc, const std::string& key) {
  const Entry* e = doc.find(key);
  if (!e) throw ConfigError(doc.origin + ": missing required field '" + key + "'");
  return e->value;
}

std::string get_string_or(const Document& doc, const std::string& key,
                          const std::string& fallback) {
  const Entry* e = doc.find(key);
  return e ? e->value : fallback;
}

double parse_double(const Document& doc, const Entry& e) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(e.value.c_str(), &end);
  if (end == e.value.c_str() || *end != '\0' || errno == ERANGE)
    fail_line(doc.origin, e.line, "field '" + e.key + "' is not a number: '" + e.value + "'");
  return v;
}

double get_double(const Document& doc, const std::string& key) {
  const Entry* e = doc.find(key);
  if (!e) throw ConfigError(doc.origin + ": missing required field '" + key + "'");
  return parse_double(doc, *e);
}

double get_double_or(const Document& doc, const std::string& key, double fallback) {
  const Entry* e = doc.find(key);
  return e ? parse_double(doc, *e) : fallback;
}

namespace {

long long parse_ll(const Document& doc, const Entry& e) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(e.value.c_str(), &end, 10);
  if (end == e.value.c_str() || *end != '\0' || errno == ERANGE)
    fail_line(doc.origin, e.line,
              "field '" + e.key + "' is not an integer: '" + e.value + "'");
  return v;
}

unsigned long long parse_ull(const Document& doc, const Entry& e) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(e.value.c_str(), &end, 10);
  if (end == e.value.c_str() || *end != '\0' || errno == ERANGE ||
      e.value.front() == '-')
    fail_line(doc.origin, e.line,
              "field '" + e.key + "' is not a non-negative integer: '" + e.value + "'");
  return v;
}

std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = v.find(',', start);
    parts.push_back(trim(v.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

} // namespace

long long get_int(const Document& doc, const std::string& key) {
  const Entry* e = doc.find(key);
  if (!e) throw ConfigError(doc.origin + ": missing required field '" + key + "'");
  return parse_ll(doc, *e);
}

long long get_int_or(const Document& doc, const std::string& key, long long fallback) {
  const Entry* e = doc.find(key);
  return e ? parse_ll(doc, *e) : fallback;
}

unsigned long long get_uint(const Document& doc, const std::string& key) {
  const Entry* e = doc.find(key);
  if (!e) throw ConfigError(doc.origin + ": missing required field '" + key + "'");
  return parse_ull(doc, *e);
}

unsigned long long get_uint_or(const Document& doc, const std::string& key,
                               unsigned long long fallback) {
  const Entry* e = doc.find(key);
  return e ? parse_ull(doc, *e) : fallback;
}

std::vector<double> get_doubles(const Document& doc, const std::string& key, int count) {
  const Entry* e = doc.find(key);
  if (!e) throw ConfigError(doc.origin + ": missing required field '" + key + "'");
  const auto parts = split_commas(e->value);
  if (static_cast<int>(parts.size()) != count)
    fail_line(doc.origin, e->line,
              "field '" + key + "' needs " + std::to_string(count) +
                  " comma-separated values, got " + std::to_string(parts.size()));
  std::vector<double> out;
  for (const auto& p : parts) {
    Entry tmp{key, p, e->line};
    out.push_back(parse_double(doc, tmp));
  }
  return out;
}

std::vector<long long> get_ints(const Document& doc, const std::string& key, int count) {
  const Entry* e = doc.find(key);
  if (!e) throw ConfigError(doc.origin + ": missing required field '" + key + "'");
  const auto parts = split_commas(e->value);
  if (static_cast<int>(parts.size()) != count)
    fail_line(doc.origin, e->line,
              "field '" + key + "' needs " + std::to_string(count) +
                  " comma-separated values, got " + std::to_string(parts.size()));
  std::vector<long long> out;
  for (const auto& p : parts) {
    Entry tmp{key, p, e->line};
    out.push_back(parse_ll(doc, tmp));
  }
  return out;
}

} // namespace spinsim::keyval
