#pragma once

#include "hopfcyc/exactla.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hopfcyc {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr int kReportSchema = 1;

enum class OutputFormat { Text, Csv, Json };

struct RunConfig {
  std::string command;  // validate | cohomology | weil | pair | cache
  std::string input;
  std::size_t max_degree = 6;
  std::size_t w_cap = 1;
  std::size_t m = 0;  // cotrace size for pair
  std::string mode = "cyclic";
  std::string complex = "coalgebra";  // cohomology: coalgebra | algebra
  bool signed_rel = true;
  OutputFormat format = OutputFormat::Text;
  std::optional<std::string> cache_dir;  // --cache-dir
  bool use_cache = true;
  std::string cache_action = "list";  // cache: list | clear
  std::string version = kToolVersion;
  bool timing = false;
};

struct CheckEntry {
  std::string name;
  bool pass = true;
  std::string witness;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct VectorEntry {
  std::string name;
  std::size_t dim = 0;
  SVec v;
};

struct Report {
  std::string command, input_hash, version = kToolVersion;
  std::map<std::string, std::string> config;
  std::vector<CheckEntry> checks;
  std::vector<Table> tables;
  std::map<std::string, std::string> scalars;
  std::vector<VectorEntry> vectors;
  std::vector<std::string> notes;
  int exit_code = 0;
  double seconds = 0;  // text output only

  void check(const std::string& name, bool pass, const std::string& witness = "");
  bool all_pass() const;
};

std::string render_json(const Report& r);
std::string render_csv(const Report& r);
std::string render_text(const Report& r, bool timing);
std::string render(const Report& r, OutputFormat f, bool timing = false);
OutputFormat parse_format(const std::string& s);
// inverse of render_json; PARSE_ERROR on malformed or foreign input
Report report_from_json(const std::string& text);

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::string& path);  // PARSE_ERROR when unreadable

// content-addressed report cache, one file per key, atomic writes
class ReportCache {
 public:
  explicit ReportCache(std::string dir) : dir_(std::move(dir)) {}
  const std::string& dir() const { return dir_; }
  static std::string key(const RunConfig& cfg, const std::string& input_hash);
  // nullopt on miss; a corrupt entry is removed and reported through warning
  std::optional<std::string> get(const std::string& key, std::string* warning = nullptr) const;
  void put(const std::string& key, const std::string& payload) const;
  std::vector<std::string> list() const;  // sorted keys
  std::size_t clear() const;
  std::string path(const std::string& key) const;

 private:
  std::string dir_;
};
// --cache-dir, else HOPFCYC_CACHE, else $HOME/.cache/hopfcyc
std::string resolve_cache_dir(const RunConfig& cfg);

int exit_code_for(ErrorCode c);

// the command reports, without caching
Report cmd_validate(const RunConfig& cfg);
Report cmd_cohomology(const RunConfig& cfg);
Report cmd_weil(const RunConfig& cfg);
Report cmd_pair(const RunConfig& cfg);
Report cmd_cache(const RunConfig& cfg);

// full run: cache lookup, command, rendering; returns the exit code
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace hopfcyc
