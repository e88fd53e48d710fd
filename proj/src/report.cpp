#include "hopfcyc/cli.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace hopfcyc {

using json = nlohmann::json;

void Report::check(const std::string& name, bool pass, const std::string& witness) {
  checks.push_back({name, pass, witness});
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "text") return OutputFormat::Text;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw Error(ErrorCode::ParseError, "unknown format '" + s + "' (text, csv, json)");
}

namespace {

json vec_json(const SVec& v) {
  json a = json::array();
  for (const auto& [i, c] : v) a.push_back(json::array({i, scalar_str(c)}));
  return a;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char ch : s) {
    if (ch == '"') r += '"';
    r += ch;
  }
  return r + "\"";
}

std::string vec_str(const SVec& v) {
  std::string s;
  for (const auto& [i, c] : v) {
    if (!s.empty()) s += " ";
    s += std::to_string(i) + ":" + scalar_str(c);
  }
  return s.empty() ? "0" : s;
}

}  // namespace

std::string render_json(const Report& r) {
  json j;
  j["schema"] = "hopfcyc-report";
  j["schema_version"] = kReportSchema;
  j["tool_version"] = r.version;
  j["command"] = r.command;
  j["input_sha256"] = r.input_hash;
  j["config"] = r.config;
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e{{"name", c.name}, {"status", c.pass ? "pass" : "fail"}};
    if (!c.witness.empty()) e["witness"] = c.witness;
    checks.push_back(e);
  }
  j["checks"] = checks;
  json tables = json::array();
  for (const auto& t : r.tables) tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}});
  j["tables"] = tables;
  j["scalars"] = r.scalars;
  json vecs = json::array();
  for (const auto& v : r.vectors) vecs.push_back({{"name", v.name}, {"dim", v.dim}, {"entries", vec_json(v.v)}});
  j["vectors"] = vecs;
  j["notes"] = r.notes;
  j["exit_code"] = r.exit_code;
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
  try {
    if (j.at("schema") != "hopfcyc-report" || j.at("schema_version") != kReportSchema)
      throw Error(ErrorCode::ParseError, "report: foreign schema");
    Report r;
    r.version = j.at("tool_version");
    r.command = j.at("command");
    r.input_hash = j.at("input_sha256");
    r.config = j.at("config").get<std::map<std::string, std::string>>();
    for (const auto& c : j.at("checks"))
      r.checks.push_back({c.at("name"), c.at("status") == "pass", c.value("witness", std::string())});
    for (const auto& t : j.at("tables"))
      r.tables.push_back({t.at("name"), t.at("columns").get<std::vector<std::string>>(),
                          t.at("rows").get<std::vector<std::vector<std::string>>>()});
    r.scalars = j.at("scalars").get<std::map<std::string, std::string>>();
    for (const auto& v : j.at("vectors")) {
      VectorEntry e{v.at("name"), v.at("dim"), {}};
      for (const auto& p : v.at("entries")) e.v.emplace_back(p.at(0).get<std::size_t>(), parse_scalar(p.at(1)));
      r.vectors.push_back(std::move(e));
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    r.exit_code = j.at("exit_code");
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
}

std::string render_csv(const Report& r) {
  std::ostringstream o;
  o << "section,name,key,value\n";
  auto row = [&](const std::string& a, const std::string& b, const std::string& c, const std::string& d) {
    o << csv_cell(a) << ',' << csv_cell(b) << ',' << csv_cell(c) << ',' << csv_cell(d) << '\n';
  };
  row("meta", "tool_version", "", r.version);
  row("meta", "command", "", r.command);
  row("meta", "input_sha256", "", r.input_hash);
  row("meta", "exit_code", "", std::to_string(r.exit_code));
  for (const auto& [k, v] : r.config) row("config", k, "", v);
  for (const auto& c : r.checks) row("check", c.name, c.pass ? "pass" : "fail", c.witness);
  for (const auto& t : r.tables)
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      for (std::size_t j = 0; j < t.columns.size() && j < t.rows[i].size(); ++j)
        row("table", t.name, std::to_string(i) + "/" + t.columns[j], t.rows[i][j]);
  for (const auto& [k, v] : r.scalars) row("scalar", k, "", v);
  for (const auto& v : r.vectors) row("vector", v.name, std::to_string(v.dim), vec_str(v.v));
  for (const auto& n : r.notes) row("note", "", "", n);
  return o.str();
}

std::string render_text(const Report& r, bool timing) {
  std::ostringstream o;
  o << "hopfcyc " << r.version << "  " << r.command << "\n";
  o << "input sha256 " << r.input_hash << "\n";
  if (!r.config.empty()) {
    o << "config:";
    for (const auto& [k, v] : r.config) o << " " << k << "=" << v;
    o << "\n";
  }
  for (const auto& t : r.tables) {
    o << "\n[" << t.name << "]\n";
    std::vector<std::size_t> w(t.columns.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
      w[j] = t.columns[j].size();
      for (const auto& row : t.rows)
        if (j < row.size()) w[j] = std::max(w[j], row[j].size());
    }
    for (std::size_t j = 0; j < w.size(); ++j) o << (j ? "  " : "") << std::setw(static_cast<int>(w[j])) << t.columns[j];
    o << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t j = 0; j < w.size() && j < row.size(); ++j)
        o << (j ? "  " : "") << std::setw(static_cast<int>(w[j])) << row[j];
      o << "\n";
    }
  }
  if (!r.scalars.empty()) {
    o << "\n[scalars]\n";
    for (const auto& [k, v] : r.scalars) o << "  " << k << " = " << v << "\n";
  }
  if (!r.vectors.empty()) {
    o << "\n[vectors]\n";
    for (const auto& v : r.vectors) o << "  " << v.name << " (dim " << v.dim << "): " << vec_str(v.v) << "\n";
  }
  if (!r.checks.empty()) {
    o << "\n[checks]\n";
    for (const auto& c : r.checks) {
      o << "  " << (c.pass ? "PASS " : "FAIL ") << c.name;
      if (!c.witness.empty()) o << "  -- " << c.witness;
      o << "\n";
    }
  }
  for (const auto& n : r.notes) o << "note: " << n << "\n";
  if (timing) o << "time: " << std::fixed << std::setprecision(3) << r.seconds << " s\n";
  o << "exit " << r.exit_code << "\n";
  return o.str();
}

std::string render(const Report& r, OutputFormat f, bool timing) {
  switch (f) {
    case OutputFormat::Json:
      return render_json(r);
    case OutputFormat::Csv:
      return render_csv(r);
    default:
      return render_text(r, timing);
  }
}

}  // namespace hopfcyc
