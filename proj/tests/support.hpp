#pragma once

// Shared test helpers: bundled data paths, random space generator, temp dirs.

#include <bit>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hypabc/rng.hpp"
#include "hypabc/space.hpp"

namespace test {

inline std::filesystem::path data_path(const std::string& rel) {
  return std::filesystem::path(HYPABC_DATA_DIR) / rel;
}

inline nlohmann::json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("hypabc-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Random valid space with 1-6 dimensions of mixed kinds.
inline hypabc::SearchSpace random_space(hypabc::Rng& gen) {
  std::vector<hypabc::ParamSpec> params;
  const std::size_t d = 1 + gen.index(6);
  for (std::size_t j = 0; j < d; ++j) {
    hypabc::ParamSpec p;
    p.name = "p" + std::to_string(j);
    switch (gen.index(3)) {
      case 0: {
        p.kind = hypabc::ParamKind::integer;
        p.lower = static_cast<double>(static_cast<long>(gen.index(200))) - 100.0;
        p.upper = p.lower + 1.0 + static_cast<double>(gen.index(500));
        break;
      }
      case 1: {
        p.kind = hypabc::ParamKind::continuous;
        p.lower = gen.uniform(-50, 50);
        p.upper = p.lower + gen.uniform(0.01, 100);
        p.lower_exclusive = gen.index(4) == 0;
        break;
      }
      default: {
        p.kind = hypabc::ParamKind::categorical;
        const std::size_t n = 1 + gen.index(6);
        for (std::size_t c = 0; c < n; ++c) p.choices.push_back("c" + std::to_string(c));
      }
    }
    params.push_back(std::move(p));
  }
  return hypabc::SearchSpace(std::move(params));
}

}  // namespace test
