#include "schubcalc/report.hpp"

#include <sstream>

#include "schubcalc/errors.hpp"

namespace report {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json opt(const std::optional<std::string>& s) { return s ? ordered_json(*s) : ordered_json(nullptr); }

std::optional<std::string> read_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

}  // namespace

ordered_json to_json(const Report& r) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["command"] = r.command;
  j["type"] = r.type;
  j["levi"] = r.levi;
  ordered_json s = ordered_json::object();
  for (auto& [k, v] : r.summary) s[k] = v;
  j["summary"] = s;
  j["coverage"] = r.coverage;
  ordered_json es = ordered_json::array();
  for (auto& e : r.entries) {
    ordered_json x;
    x["triple"] = e.triple;
    x["cup_coeff"] = opt(e.cup_coeff);
    x["bk_coeff"] = opt(e.bk_coeff);
    x["p_ratio"] = opt(e.p_ratio);
    x["status"] = e.status;
    es.push_back(std::move(x));
  }
  j["entries"] = std::move(es);
  return j;
}

Report from_json(const json& j) {
  Report r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kSchemaVersion)
      throw schubcalc::UsageError("unsupported schema_version " + std::to_string(r.schema_version));
    r.command = j.at("command").get<std::string>();
    r.type = j.at("type").get<std::string>();
    r.levi = j.at("levi").get<std::vector<int>>();
    for (auto& [k, v] : j.at("summary").items()) r.summary[k] = v.get<std::string>();
    r.coverage = j.at("coverage").get<std::string>();
    for (auto& x : j.at("entries")) {
      Entry e;
      e.triple = x.at("triple").get<std::vector<std::string>>();
      e.cup_coeff = read_opt(x, "cup_coeff");
      e.bk_coeff = read_opt(x, "bk_coeff");
      e.p_ratio = read_opt(x, "p_ratio");
      e.status = x.at("status").get<std::string>();
      r.entries.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    throw schubcalc::UsageError(std::string("malformed report: ") + ex.what());
  }
  return r;
}

std::string to_csv(const Report& r) {
  std::ostringstream os;
  os << "triple,cup_coeff,bk_coeff,p_ratio,status\n";
  for (auto& e : r.entries)
    os << join(e.triple, " ") << ',' << e.cup_coeff.value_or("") << ',' << e.bk_coeff.value_or("") << ','
       << e.p_ratio.value_or("") << ',' << e.status << '\n';
  return os.str();
}

std::string to_text(const Report& r) {
  std::ostringstream os;
  os << r.command << "  " << r.type;
  if (!r.levi.empty()) {
    os << "  levi {";
    for (std::size_t i = 0; i < r.levi.size(); ++i) os << (i ? "," : "") << r.levi[i];
    os << "}";
  }
  os << '\n';
  for (auto& [k, v] : r.summary) os << "  " << k << ": " << v << '\n';
  if (!r.coverage.empty()) os << "  coverage: " << r.coverage << '\n';
  for (auto& e : r.entries) {
    os << "  " << join(e.triple, " | ");
    if (e.cup_coeff) os << "  cup=" << *e.cup_coeff;
    if (e.bk_coeff) os << "  bk=" << *e.bk_coeff;
    if (e.p_ratio) os << "  p=" << *e.p_ratio;
    if (!e.status.empty()) os << "  " << e.status;
    os << '\n';
  }
  return os.str();
}

}  // namespace report
