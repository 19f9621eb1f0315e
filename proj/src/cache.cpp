#include "latvoa/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace latvoa {

namespace fs = std::filesystem;

static fs::path key_path(const std::string& dir, const std::string& key) {
  return fs::path(dir) / (key + ".entry");
}

std::optional<std::string> cache_get(const std::string& dir, const std::string& key) {
  if (dir.empty()) return std::nullopt;
  std::ifstream in(key_path(dir, key), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void cache_put(const std::string& dir, const std::string& key, const std::string& payload) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  fs::path final = key_path(dir, key);
  fs::path tmp = final;
  tmp += ".tmp" + std::to_string(static_cast<unsigned long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << payload;
  }
  fs::rename(tmp, final, ec);
  if (ec) fs::remove(tmp, ec);
}

void cache_warn_corrupt(const std::string& dir, const std::string& key) {
  std::cerr << "warning: corrupt cache entry " << key_path(dir, key).string()
            << ", recomputing\n";
}

std::string format_dim_map(const std::map<std::string, int64_t>& dims) {
  std::ostringstream os;
  Fnv64 h;
  for (const auto& [k, v] : dims) {
    os << k << " = " << v << "\n";
    h.feed(k);
    h.feed(v);
  }
  os << "#checksum " << h.hex() << "\n";
  return os.str();
}

std::optional<std::map<std::string, int64_t>> parse_dim_map(const std::string& payload) {
  std::map<std::string, int64_t> dims;
  std::istringstream in(payload);
  std::string line;
  std::string checksum;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("#checksum ", 0) == 0) {
      checksum = line.substr(10);
      continue;
    }
    auto eq = line.rfind(" = ");
    if (eq == std::string::npos) return std::nullopt;
    try {
      dims[line.substr(0, eq)] = std::stoll(line.substr(eq + 3));
    } catch (...) {
      return std::nullopt;
    }
  }
  Fnv64 h;
  for (const auto& [k, v] : dims) {
    h.feed(k);
    h.feed(v);
  }
  if (checksum != h.hex()) return std::nullopt;
  return dims;
}

}  // namespace latvoa
