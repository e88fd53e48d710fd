#include "hopfcyc/cli.hpp"

#include <json.hpp>
#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hopfcyc {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::Internal, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  std::ostringstream o;
  o << in.rdbuf();
  return o.str();
}

std::string resolve_cache_dir(const RunConfig& cfg) {
  if (cfg.cache_dir) return *cfg.cache_dir;
  if (const char* e = std::getenv("HOPFCYC_CACHE"); e && *e) return e;
  if (const char* h = std::getenv("HOME"); h && *h) return std::string(h) + "/.cache/hopfcyc";
  return ".hopfcyc-cache";
}

std::string ReportCache::key(const RunConfig& cfg, const std::string& input_hash) {
  json k{{"version", cfg.version},   {"command", cfg.command},       {"input", input_hash},
         {"D", cfg.max_degree},      {"n", cfg.w_cap},               {"m", cfg.m},
         {"mode", cfg.mode},         {"complex", cfg.complex},       {"signed_rel", cfg.signed_rel}};
  return sha256_hex(k.dump());
}

std::string ReportCache::path(const std::string& key) const { return dir_ + "/" + key + ".json"; }

std::optional<std::string> ReportCache::get(const std::string& key, std::string* warning) const {
  std::string p = path(key);
  if (!fs::exists(p)) return std::nullopt;
  std::string why;
  try {
    json e = json::parse(read_file(p));
    std::string payload = e.at("payload");
    if (e.at("key") != key) why = "key mismatch";
    else if (e.at("payload_sha256") != sha256_hex(payload)) why = "checksum mismatch";
    else return payload;
  } catch (const std::exception& ex) {
    why = ex.what();
  }
  std::error_code ec;
  fs::remove(p, ec);
  if (warning) *warning = "corrupt cache entry " + p + " evicted (" + why + ")";
  return std::nullopt;
}

void ReportCache::put(const std::string& key, const std::string& payload) const {
  fs::create_directories(dir_);
  json e{{"key", key}, {"payload_sha256", sha256_hex(payload)}, {"payload", payload}};
  std::string tmp = path(key) + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Internal, "cannot write cache entry " + tmp);
    out << e.dump();
    if (!out.flush()) throw Error(ErrorCode::Internal, "cannot write cache entry " + tmp);
  }
  fs::rename(tmp, path(key));
}

std::vector<std::string> ReportCache::list() const {
  std::vector<std::string> out;
  if (!fs::exists(dir_)) return out;
  for (const auto& de : fs::directory_iterator(dir_)) {
    std::string n = de.path().filename().string();
    if (n.size() == 69 && n.ends_with(".json")) out.push_back(n.substr(0, 64));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t ReportCache::clear() const {
  std::size_t n = 0;
  if (!fs::exists(dir_)) return 0;
  for (const auto& de : fs::directory_iterator(dir_)) {
    std::string f = de.path().filename().string();
    if (f.ends_with(".json") || f.find(".json.tmp.") != std::string::npos) {
      fs::remove(de.path());
      ++n;
    }
  }
  return n;
}

}  // namespace hopfcyc
