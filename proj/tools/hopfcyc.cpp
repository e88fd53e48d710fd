#include "hopfcyc/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace hopfcyc;
  RunConfig cfg;
  std::string format = "text", signed_rel = "true", cache_dir;
  bool no_cache = false;

  CLI::App app{"hopfcyc: exact Hopf-cyclic cohomology, Weil algebras and pairings"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.add_option("command", cfg.command, "validate | cohomology | weil | pair | cache")
      ->required()
      ->check(CLI::IsMember({"validate", "cohomology", "weil", "pair", "cache"}));
  app.add_option("input", cfg.input, "structure file (JSON); for cache: list | clear");
  app.add_option("--max-degree,-D", cfg.max_degree, "degree cap D")->capture_default_str();
  app.add_option("--w-cap,-n", cfg.w_cap, "tower / trace order cap n")->capture_default_str();
  app.add_option("--cotrace-size,-m", cfg.m, "cotrace size m for pair")->capture_default_str();
  app.add_option("--mode", cfg.mode, "hochschild | cyclic | periodic")
      ->check(CLI::IsMember({"hochschild", "cyclic", "periodic"}))
      ->capture_default_str();
  app.add_option("--complex", cfg.complex, "coalgebra | algebra")
      ->check(CLI::IsMember({"coalgebra", "algebra"}))
      ->capture_default_str();
  app.add_option("--format", format, "text | csv | json")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--cache-dir", cache_dir, "cache directory (overrides HOPFCYC_CACHE)");
  app.add_option("--signed-rel", signed_rel, "Koszul sign in the twisted cyclic operator")
      ->check(CLI::IsMember({"true", "false"}));
  app.add_flag("--no-cache", no_cache, "neither read nor write the cache");
  app.add_flag("--timing", cfg.timing, "print wall time (text format only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.format = parse_format(format);
  cfg.signed_rel = signed_rel == "true";
  cfg.use_cache = !no_cache;
  if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
  if (cfg.command == "cache") {
    cfg.cache_action = cfg.input.empty() ? "list" : cfg.input;
  } else if (cfg.input.empty()) {
    std::cerr << "error: " << cfg.command << " needs an input file\n";
    return 2;
  }
  return run(cfg, std::cout, std::cerr);
}
