#include "hopfcyc/cli.hpp"
#include "hopfcyc/structures.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hopfcyc;
namespace fs = std::filesystem;

namespace {

struct TmpDir {
  fs::path p;
  TmpDir() {
    static int n = 0;
    p = fs::temp_directory_path() / ("hopfcyc_test_cli_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    fs::remove_all(p);
    fs::create_directories(p);
  }
  ~TmpDir() {
    std::error_code ec;
    fs::remove_all(p, ec);
  }
  std::string str() const { return p.string(); }
};

struct Out {
  int code;
  std::string out, err;
};

Out go(RunConfig cfg) {
  std::ostringstream o, e;
  int c = run(cfg, o, e);
  return {c, o.str(), e.str()};
}

RunConfig cfg_for(const std::string& cmd, const std::string& fixture, const TmpDir& cache) {
  RunConfig c;
  c.command = cmd;
  c.input = fixture.empty() ? "" : fixture_path(fixture);
  c.cache_dir = cache.str();
  c.format = OutputFormat::Json;
  return c;
}

nlohmann::json js(const Out& o) { return nlohmann::json::parse(o.out); }

std::vector<std::string> column(const nlohmann::json& j, const std::string& table, std::size_t col) {
  std::vector<std::string> v;
  for (const auto& t : j["tables"])
    if (t["name"] == table)
      for (const auto& r : t["rows"]) v.push_back(r[col]);
  return v;
}

std::string write_tmp(const TmpDir& d, const std::string& name, const std::string& text) {
  std::string p = d.str() + "/" + name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("cohomology: point coalgebra tables") {
  TmpDir d;
  auto c = cfg_for("cohomology", "trivial", d);
  c.max_degree = 4;
  auto r = go(c);
  CHECK(r.code == 0);
  CHECK(column(js(r), "cyclic", 1) == std::vector<std::string>{"1", "0", "1", "0", "1"});
  c.mode = "hochschild";
  r = go(c);
  CHECK(column(js(r), "hochschild", 1) == std::vector<std::string>{"1", "0", "0", "0", "0"});
  c.mode = "cyclic";
  c.max_degree = 0;
  r = go(c);
  CHECK(column(js(r), "cyclic", 1).size() == 1);
  c.max_degree = 5;
  c.mode = "periodic";
  r = go(c);
  CHECK(r.code == 0);
  CHECK(column(js(r), "periodic", 3) == std::vector<std::string>{"1", "0"});
}

TEST_CASE("cohomology: non-stable coefficients answer only hochschild") {
  TmpDir d;
  std::string text = read_file(fixture_path("kz2_twisted"));
  auto j = nlohmann::json::parse(text);
  j["select"]["sayd"] = "g_sign";
  auto c = cfg_for("cohomology", "", d);
  c.input = write_tmp(d, "sign.json", j.dump());
  c.max_degree = 3;
  auto r = go(c);
  CHECK(r.code == 1);
  bool saw = false;
  auto jr = js(r);
  for (const auto& ch : jr["checks"])
    if (ch["name"] == "tau^{n+1} = id") {
      saw = true;
      CHECK(ch["status"] == "fail");
      CHECK(!ch["witness"].get<std::string>().empty());
    }
  CHECK(saw);
  c.mode = "hochschild";
  c.use_cache = false;
  CHECK(go(c).code == 1);
}

TEST_CASE("validate: verdicts and exit codes") {
  TmpDir d;
  CHECK(go(cfg_for("validate", "trivial", d)).code == 0);
  CHECK(go(cfg_for("validate", "sweedler", d)).code == 0);
  auto r = go(cfg_for("validate", "kz2_twisted", d));
  CHECK(r.code == 0);
  bool noted = false;
  auto j = js(r);
  for (const auto& n : j["notes"]) noted = noted || n.get<std::string>().find("stable: false") != std::string::npos;
  CHECK(noted);
  r = go(cfg_for("validate", "coalgebras", d));
  CHECK(r.code == 1);
  bool witnessed = false;
  j = js(r);
  for (const auto& ch : j["checks"])
    if (ch["status"] == "fail") witnessed = witnessed || !ch["witness"].get<std::string>().empty();
  CHECK(witnessed);

  auto c = cfg_for("validate", "", d);
  c.input = write_tmp(d, "bad.json", "{ not json");
  r = go(c);
  CHECK(r.code == 2);
  CHECK(r.err.find("PARSE_ERROR") != std::string::npos);
  c.input = d.str() + "/missing.json";
  CHECK(go(c).code == 2);
}

TEST_CASE("weil: point instance verdicts") {
  TmpDir d;
  auto c = cfg_for("weil", "trivial", d);
  c.max_degree = 6;
  c.w_cap = 1;
  auto r = go(c);
  CHECK(r.code == 0);
  auto j = js(r);
  for (const auto& v : column(j, "tower", 5)) CHECK(v == "equal");
  for (const auto& v : column(j, "ideal", 5)) CHECK(v == "equal");
  for (const auto& v : column(j, "reduced acyclicity", 1)) CHECK(v == "0");
  for (const auto& v : column(j, "cs identities", 3)) CHECK(v == "yes");
  CHECK(column(j, "tower", 0).size() == 10);
  c.max_degree = 2;
  CHECK(go(c).code == 2);
}

TEST_CASE("pair: factors, cups, cotraces") {
  TmpDir d;
  auto c = cfg_for("pair", "trivial", d);
  c.max_degree = 5;
  auto r = go(c);
  CHECK(r.code == 0);
  auto j = js(r);
  CHECK(j["scalars"]["factor m=0 n=1"] == "1/2");
  CHECK(j["scalars"]["factor m=0 n=0"] == "1");
  for (const auto& v : column(j, "even cups", 4)) CHECK(v == "yes");
  for (const auto& v : column(j, "odd cups", 4)) CHECK(v == "yes");
  CHECK(!column(j, "even cups", 0).empty());
  bool cochain = false;
  for (const auto& v : j["vectors"]) cochain = cochain || v["name"].get<std::string>().rfind("cup ", 0) == 0;
  CHECK(cochain);
  c.format = OutputFormat::Text;
  CHECK(go(c).out.find("1/2") != std::string::npos);

  auto k = cfg_for("pair", "kz2_twisted", d);
  k.max_degree = 6;
  k.m = 1;
  r = go(k);
  CHECK(r.code == 0);
  j = js(r);
  auto closed = column(j, "cotrace cups", 3);
  auto ks = column(j, "cotrace cups", 1);
  REQUIRE(!closed.empty());
  CHECK(std::find(ks.begin(), ks.end(), "1") != ks.end());
  for (const auto& v : closed) CHECK(v == "yes");
  k.m = 2;
  r = go(k);
  CHECK(r.code == 0);
  bool none = false;
  j = js(r);
  for (const auto& n : j["notes"]) none = none || n == "no cotraces of size 2";
  CHECK(none);
}

TEST_CASE("cache: hit, determinism, eviction, version, clear") {
  TmpDir d;
  auto c = cfg_for("weil", "trivial", d);
  c.max_degree = 5;
  auto a = go(c);
  CHECK(a.err.find("cache hit") == std::string::npos);
  auto b = go(c);
  CHECK(b.err.find("cache hit") != std::string::npos);
  CHECK(a.out == b.out);
  c.use_cache = false;
  CHECK(go(c).out == a.out);
  c.use_cache = true;
  c.format = OutputFormat::Csv;
  auto csv1 = go(c), csv2 = go(c);
  CHECK(csv1.out == csv2.out);
  CHECK(csv1.out.rfind("section,name,key,value\n", 0) == 0);

  ReportCache rc(d.str());
  auto keys = rc.list();
  REQUIRE(keys.size() == 1);
  std::ofstream(rc.path(keys[0])) << "{\"key\":\"" << keys[0] << "\",\"payload_sha256\":\"00\",\"payload\":\"x\"}";
  c.format = OutputFormat::Json;
  auto e = go(c);
  CHECK(e.err.find("evicted") != std::string::npos);
  CHECK(e.out == a.out);
  CHECK(go(c).err.find("cache hit") != std::string::npos);

  c.version = "9.9.9";
  auto v = go(c);
  CHECK(v.err.find("cache hit") == std::string::npos);
  CHECK(rc.list().size() == 2);

  auto l = cfg_for("cache", "", d);
  l.cache_action = "clear";
  CHECK(go(l).code == 0);
  CHECK(rc.list().empty());
  l.cache_action = "list";
  auto lj = js(go(l));
  CHECK(lj["scalars"]["entries"] == "0");
  l.cache_action = "purge";
  CHECK(go(l).code == 2);
}

TEST_CASE("cache dir precedence") {
  RunConfig c;
  c.cache_dir = "/x";
  CHECK(resolve_cache_dir(c) == "/x");
  c.cache_dir.reset();
  ::setenv("HOPFCYC_CACHE", "/from-env", 1);
  CHECK(resolve_cache_dir(c) == "/from-env");
  ::unsetenv("HOPFCYC_CACHE");
  ::setenv("HOME", "/home/u", 1);
  CHECK(resolve_cache_dir(c) == "/home/u/.cache/hopfcyc");
}

TEST_CASE("report json round trip") {
  Report r;
  r.command = "pair";
  r.input_hash = "ab";
  r.config = {{"D", "4"}};
  r.check("one", true);
  r.check("two", false, "e[3]");
  r.tables.push_back({"t", {"a", "b"}, {{"1", "2"}}});
  r.scalars["s"] = "-2/3";
  r.vectors.push_back({"v", 4, {{1, Scalar(-1, 2)}, {3, Scalar(5)}}});
  r.notes.push_back("n");
  r.exit_code = 1;
  std::string j = render_json(r);
  CHECK(render_json(report_from_json(j)) == j);
  CHECK_THROWS_AS(report_from_json("{}"), Error);
  CHECK(render_text(r, false).find("time:") == std::string::npos);
  CHECK(render_text(r, true).find("time:") != std::string::npos);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(ErrorCode::ParseError) == 2);
  CHECK(exit_code_for(ErrorCode::InputShape) == 2);
  CHECK(exit_code_for(ErrorCode::DegreeOutOfRange) == 2);
  CHECK(exit_code_for(ErrorCode::Inconsistent) == 3);
  CHECK(exit_code_for(ErrorCode::Internal) == 3);
  CHECK(exit_code_for(ErrorCode::IdentityFailure) == 1);
  CHECK(exit_code_for(ErrorCode::Unstabilized) == 1);
}
