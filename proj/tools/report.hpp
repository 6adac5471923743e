#pragma once

#include <nlohmann/json.hpp>
#include <ostream>
#include <string>

namespace dirdef::cli {

using nlohmann::json;

enum Exit { Pass = 0, Fail = 1, InputError = 2 };

struct RunConfig {
  std::string command;
  std::string input;
  std::size_t order = 3;
  int degree_cap = 2;
  double tol = 1e-9;
  std::string format = "json";  // json | table
  std::uint64_t seed = 1;
};

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::string& path);

// envelope around a command result; identical inputs give identical bytes
json envelope(const RunConfig& cfg, const std::string& input_hash, json result, Exit code);
void render(std::ostream& os, const json& report, const std::string& format);

}  // namespace dirdef::cli
