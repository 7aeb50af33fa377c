#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "snaptrace/jsparse/parser.hpp"

namespace testsupport {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::pair<std::string, std::string>> load_corpus(const std::string& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".js") continue;
    out.emplace_back(entry.path().filename().string(), read_file(entry.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline snaptrace::js::Node parse_or_throw(std::string_view src) {
  auto outcome = snaptrace::js::parse(src);
  if (!snaptrace::js::parsed_ok(outcome)) {
    const auto& e = snaptrace::js::error_of(outcome);
    throw std::runtime_error("parse failed: " + e.message + " at " + std::to_string(e.line) + ":" +
                             std::to_string(e.col));
  }
  return snaptrace::js::tree_of(outcome);
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0;; ++i) {
      path_ = base / ("snaptrace-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++) + "-" +
                      std::to_string(i));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::filesystem::path path_;
};

}  // namespace testsupport
