#include "matconvex/report.hpp"

#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace matconvex {

namespace cs = check_status;

bool CheckRecord::failed() const { return status == cs::kViolated || status == cs::kFail; }

CheckRecord record_from_verdict(std::string name, const Verdict& v, const Tolerances& tol) {
  CheckRecord r;
  r.name = std::move(name);
  r.status = to_string(v.status);
  r.margin = v.worst_margin;
  r.details = {{"trials", v.trials},
               {"certify_tolerance", tol.certify},
               {"violate_tolerance", tol.violate}};
  if (v.status == Status::violated) r.witness = v.witness;
  if (v.witness) r.details["worst_stream_id"] = v.witness->stream_id;
  return r;
}

CheckRecord record_from_slack(std::string name, double slack, json details) {
  CheckRecord r;
  r.name = std::move(name);
  r.status = slack >= 0.0 ? cs::kPass : cs::kFail;
  r.margin = slack;
  r.details = std::move(details);
  return r;
}

std::string Report::overall() const {
  bool violated = false, fail = false, inconclusive = false, all_certified = !checks.empty();
  for (const auto& c : checks) {
    violated |= c.status == cs::kViolated;
    fail |= c.status == cs::kFail;
    inconclusive |= c.status == cs::kInconclusive;
    all_certified &= c.status == cs::kCertified;
  }
  if (violated) return cs::kViolated;
  if (fail) return cs::kFail;
  if (inconclusive) return cs::kInconclusive;
  return all_certified ? cs::kCertified : cs::kPass;
}

int Report::exit_code() const {
  for (const auto& c : checks) {
    if (c.failed()) return 1;
  }
  return 0;
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void reject_unknown(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
  if (!doc.is_object()) throw ParseError("expected an object", where);
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw ParseError("unknown field '" + key + "'", where + "." + key);
  }
}

const json& required(const json& doc, const std::string& key, const std::string& where) {
  if (!doc.contains(key)) throw ParseError("missing field '" + key + "'", where + "." + key);
  return doc.at(key);
}

}  // namespace

TestKind test_kind_from_string(const std::string& s) {
  for (auto k : {TestKind::definition, TestKind::jensen, TestKind::second_derivative,
                 TestKind::monotonicity, TestKind::joint_local, TestKind::joint_midpoint}) {
    if (to_string(k) == s) return k;
  }
  throw ParseError("unknown witness kind '" + s + "'", "witness.kind");
}

json witness_to_json(const Witness& w) {
  json doc = {{"kind", to_string(w.kind)}, {"seed", w.seed}, {"stream_id", w.stream_id}};
  auto matrices = [](const std::vector<HermitianMatrix>& v) {
    json a = json::array();
    for (const auto& m : v) a.push_back(matrix_to_json(m));
    return a;
  };
  if (!w.points.empty()) doc["points"] = matrices(w.points);
  if (!w.directions.empty()) doc["directions"] = matrices(w.directions);
  if (w.lambda) doc["lambda"] = *w.lambda;
  if (!w.weights.empty()) doc["weights"] = w.weights;
  if (!w.sites.empty()) doc["sites"] = w.sites;
  if (w.step) doc["step"] = *w.step;
  return doc;
}

Witness witness_from_json(const json& doc) {
  const std::string where = "witness";
  reject_unknown(doc, {"kind", "seed", "stream_id", "points", "directions", "lambda", "weights",
                       "sites", "step"},
                 where);
  Witness w;
  try {
    w.kind = test_kind_from_string(required(doc, "kind", where).get<std::string>());
    w.seed = required(doc, "seed", where).get<std::uint64_t>();
    w.stream_id = required(doc, "stream_id", where).get<std::uint64_t>();
    auto matrices = [&](const char* key) {
      std::vector<HermitianMatrix> out;
      if (!doc.contains(key)) return out;
      const json& a = doc.at(key);
      if (!a.is_array()) throw ParseError(std::string("'") + key + "' must be an array", where + "." + key);
      for (std::size_t i = 0; i < a.size(); ++i) {
        out.push_back(hermitian_from_json(a[i], where + "." + key + "[" + std::to_string(i) + "]"));
      }
      return out;
    };
    w.points = matrices("points");
    w.directions = matrices("directions");
    if (doc.contains("lambda")) w.lambda = doc.at("lambda").get<double>();
    if (doc.contains("weights")) w.weights = doc.at("weights").get<std::vector<double>>();
    if (doc.contains("sites")) w.sites = doc.at("sites").get<std::vector<double>>();
    if (doc.contains("step")) w.step = doc.at("step").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed witness: ") + e.what(), where);
  }
  return w;
}

json Report::to_json(bool include_timing) const {
  json list = json::array();
  for (const auto& c : checks) {
    json r = {{"name", c.name},
              {"status", c.status},
              {"margin", number_or_null(c.margin)},
              {"details", c.details}};
    if (c.witness) r["witness"] = witness_to_json(*c.witness);
    if (include_timing && c.seconds) r["seconds"] = *c.seconds;
    list.push_back(std::move(r));
  }
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"config", config},
          {"checks", list},
          {"status", overall()}};
}

Report Report::from_json(const json& doc) {
  reject_unknown(doc, {"schema_version", "command", "config", "checks", "status"}, "report");
  Report r;
  try {
    const int version = required(doc, "schema_version", "report").get<int>();
    if (version != kSchemaVersion) {
      throw ParseError("unsupported schema_version " + std::to_string(version), "report.schema_version");
    }
    r.command = required(doc, "command", "report").get<std::string>();
    r.config = required(doc, "config", "report");
    const json& list = required(doc, "checks", "report");
    if (!list.is_array()) throw ParseError("'checks' must be an array", "report.checks");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "report.checks[" + std::to_string(i) + "]";
      const json& c = list[i];
      reject_unknown(c, {"name", "status", "margin", "details", "witness", "seconds"}, where);
      CheckRecord rec;
      rec.name = required(c, "name", where).get<std::string>();
      rec.status = required(c, "status", where).get<std::string>();
      if (rec.status != cs::kCertified && rec.status != cs::kViolated && rec.status != cs::kInconclusive &&
          rec.status != cs::kPass && rec.status != cs::kFail) {
        throw ParseError("unknown check status '" + rec.status + "'", where + ".status");
      }
      const json& m = required(c, "margin", where);
      rec.margin = m.is_null() ? std::nan("") : m.get<double>();
      if (c.contains("details")) rec.details = c.at("details");
      if (c.contains("witness")) rec.witness = witness_from_json(c.at("witness"));
      if (c.contains("seconds")) rec.seconds = c.at("seconds").get<double>();
      r.checks.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what(), "report");
  }
  return r;
}

std::string Report::to_text(bool include_timing) const {
  std::ostringstream os;
  os << command << "  (schema " << kSchemaVersion << ")\n";
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  for (const auto& c : checks) {
    os << "  " << std::left << std::setw(static_cast<int>(width)) << c.name << "  " << std::setw(12)
       << c.status << " margin " << std::setprecision(6) << std::scientific << c.margin;
    if (include_timing && c.seconds) os << "  " << std::fixed << std::setprecision(3) << *c.seconds << " s";
    os << std::defaultfloat << '\n';
    if (c.details.contains("bits")) {
      for (const auto& [k, v] : c.details.at("bits").items()) os << "      " << k << " = " << v << " bits\n";
    }
  }
  os << "overall: " << overall() << '\n';
  return os.str();
}

}  // namespace matconvex
