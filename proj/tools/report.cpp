#include "report.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "dirdef/error.hpp"

namespace dirdef::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Parse, path + ": cannot open");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json envelope(const RunConfig& cfg, const std::string& input_hash, json result, Exit code) {
  static const char* names[] = {"pass", "fail", "input_error"};
  return json{{"command", cfg.command},
              {"engine", "dirdef"},
              {"engine_version", DIRDEF_VERSION},
              {"schema_version", 1},
              {"input_sha256", input_hash},
              {"options",
               {{"order", cfg.order}, {"degree_cap", cfg.degree_cap}, {"tol", cfg.tol}, {"seed", cfg.seed}}},
              {"result", std::move(result)},
              {"verdict", names[code]},
              {"exit_code", int(code)}};
}

namespace {

bool scalar_list(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& x : j)
    if (x.is_structured() && !(x.is_array() && x.size() <= 8 && scalar_list(x))) return false;
  return true;
}

void flatten(std::ostream& os, const json& j, const std::string& path) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) flatten(os, v, path.empty() ? k : path + "." + k);
  } else if (j.is_array() && !j.empty() && !scalar_list(j)) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(os, j[i], path + "[" + std::to_string(i) + "]");
  } else {
    os << std::left << std::setw(40) << path << ' ' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace

void render(std::ostream& os, const json& report, const std::string& format) {
  if (format == "table")
    flatten(os, report, "");
  else
    os << report.dump(2) << '\n';
}

}  // namespace dirdef::cli
