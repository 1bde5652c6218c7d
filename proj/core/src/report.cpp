#include "torrent/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace torrent {
namespace {

using Json = nlohmann::ordered_json;

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ' ';
    out += n;
  }
  return out;
}

std::string fixed4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

const char* verdict_name(Verdict v) { return v == Verdict::holds ? "holds" : "violated"; }

std::string render_json(const Report& r) {
  Json j;
  j["model"] = Json{{"states", r.states}, {"initial", r.initial}, {"kind", r.kind}};
  j["property"] = r.property;
  j["verdict"] = verdict_name(r.verdict);
  j["max_prob"] = r.max_prob;
  if (r.scheduler) {
    Json sched = Json::object();
    for (const auto& [state, action] : *r.scheduler) sched[state] = action;
    j["scheduler"] = std::move(sched);
  }
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses)
    witnesses.push_back(Json{{"rail", w.rail},
                             {"mass", w.mass},
                             {"representant", w.representant},
                             {"representant_prob", w.representant_prob}});
  j["witnesses"] = std::move(witnesses);
  j["total_mass"] = r.total_mass;
  if (r.scc_table) {
    Json table = Json::array();
    for (const auto& scc : *r.scc_table) {
      Json reach = Json::array();
      for (const auto& e : scc.reach)
        reach.push_back(Json{{"input", e.input}, {"output", e.output}, {"probability", e.probability}});
      table.push_back(Json{{"members", scc.members},
                           {"inputs", scc.inputs},
                           {"outputs", scc.outputs},
                           {"reach", std::move(reach)}});
    }
    j["scc_table"] = std::move(table);
  }
  if (r.verification) {
    const auto& v = *r.verification;
    Json checks = Json::array();
    for (const auto& c : v.checks)
      checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["verification"] = Json{{"rng", v.rng},
                             {"seed", v.seed},
                             {"samples", v.samples},
                             {"passed", v.passed()},
                             {"checks", std::move(checks)}};
  }
  Json timings = Json::object();
  for (const auto& [stage, seconds] : r.timings) timings[stage] = seconds;
  j["timings"] = std::move(timings);
  return j.dump(2) + "\n";
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "model: " << r.states << " states, initial " << r.initial << ", " << r.kind << "\n";
  os << "property: " << r.property << "\n";
  os << "verdict: " << verdict_name(r.verdict) << "\n";
  os << "max probability: " << fixed4(r.max_prob) << "\n";
  if (r.scheduler) {
    os << "scheduler:";
    for (const auto& [state, action] : *r.scheduler) os << " " << state << "=" << action;
    os << "\n";
  }
  for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
    const auto& w = r.witnesses[i];
    os << "witness " << i + 1 << ": " << join(w.representant) << " (mass " << fixed4(w.mass)
       << ", representant p " << fixed4(w.representant_prob) << ")\n";
  }
  os << "total mass: " << fixed4(r.total_mass) << "\n";
  if (r.scc_table)
    for (const auto& scc : *r.scc_table) {
      os << "scc {" << join(scc.members) << "} inputs {" << join(scc.inputs) << "} outputs {"
         << join(scc.outputs) << "}\n";
      for (const auto& e : scc.reach)
        os << "  reach(" << e.input << "," << e.output << ") = " << e.probability << "\n";
    }
  if (r.verification) {
    os << "verification (" << r.verification->rng << ", seed " << r.verification->seed << "): "
       << (r.verification->passed() ? "passed" : "FAILED") << "\n";
    for (const auto& c : r.verification->checks)
      os << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << ": " << c.detail << "\n";
  }
  for (const auto& [stage, seconds] : r.timings) os << "time " << stage << ": " << seconds << " s\n";
  return os.str();
}

}  // namespace

std::string render_report(const Report& report, ReportFormat format) {
  return format == ReportFormat::json ? render_json(report) : render_text(report);
}

}  // namespace torrent
