#include "torrent/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "torrent/errors.hpp"
#include "torrent/numerics.hpp"
#include "torrent/oracle.hpp"
#include "torrent/props.hpp"
#include "torrent/scheduling.hpp"
#include "torrent/search.hpp"
#include "torrent/transform.hpp"

namespace torrent {
namespace {

constexpr double kReachAgreement = 1e-7;
constexpr std::size_t kEnumerationLength = 400;
constexpr std::size_t kHoldsSampleRails = 8;

std::vector<std::string> names_of(const Model& m, std::span<const StateId> path) {
  return m.names_of(path);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

class StageClock {
 public:
  explicit StageClock(Report& report, bool enabled) : report_(report), enabled_(enabled) {}

  void lap(std::string stage) {
    const auto now = std::chrono::steady_clock::now();
    if (enabled_)
      report_.timings.emplace_back(std::move(stage),
                                   std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

 private:
  Report& report_;
  bool enabled_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

Verification verify(const Model& model, const Model& mc, const AcyclicReduction& red,
                    const StateSet& targets, const Report& report,
                    std::span<const Rail> rails, const CheckOptions& options) {
  Verification v;
  v.rng = oracle::kSamplerAlgorithm;
  v.seed = options.seed;
  v.samples = options.verify_samples;

  {
    VerificationCheck c{"max_prob", false, ""};
    try {
      const double expected = model.is_markov_chain()
                                  ? oracle::chain_reach(model, targets)[model.initial()]
                                  : oracle::brute_force_max_reach(model, targets);
      c.passed = std::abs(expected - report.max_prob) <= kReachAgreement;
      c.detail = "oracle " + fmt(expected) + ", pipeline " + fmt(report.max_prob);
    } catch (const Error& e) {
      c.passed = true;
      c.detail = std::string("skipped: ") + e.what();
    }
    v.checks.push_back(std::move(c));
  }
  {
    const Model& chain = red.chain();
    const StateSet chain_targets = [&] {
      StateSet s(chain.num_states());
      for (StateId t : targets.members())
        if (red.kept().contains(t)) s.insert(red.chain_state(t));
      return s;
    }();
    const double reduced = max_reach(chain, chain_targets)[chain.initial()];
    VerificationCheck c{"reduction", std::abs(reduced - report.max_prob) <= kReachAgreement,
                        "reduced chain " + fmt(reduced) + ", source " + fmt(report.max_prob)};
    v.checks.push_back(std::move(c));
  }

  const auto enumerated = oracle::truncated_generator_masses(mc, targets, kEnumerationLength);
  for (const auto& rail : rails) {
    const double mass = rail_mass(red, rail);
    const auto it = enumerated.mass.find(rail);
    const double found = it == enumerated.mass.end() ? 0.0 : it->second;
    const bool ok = found <= mass + 1e-12 && mass - found <= enumerated.tail_bound + 1e-12;
    std::string label;
    for (StateId s : rail) label += (label.empty() ? "" : " ") + mc.name(s);
    v.checks.push_back({"generator_mass [" + label + "]", ok,
                        "rail " + fmt(mass) + ", enumerated " + fmt(found) + ", tail " +
                            fmt(enumerated.tail_bound)});
  }

  if (options.verify_samples > 0 && !rails.empty()) {
    const auto run = oracle::monte_carlo_classify(red.origin(), red, rails, options.verify_samples,
                                                  options.seed);
    const double n = static_cast<double>(run.count);
    for (const auto& rail : rails) {
      const double mass = rail_mass(red, rail);
      const auto it = run.classified.find(rail);
      const double freq = it == run.classified.end() ? 0.0 : static_cast<double>(it->second) / n;
      const double sigma = std::sqrt(mass * (1.0 - mass) / n);
      std::string label;
      for (StateId s : rail) label += (label.empty() ? "" : " ") + mc.name(s);
      v.checks.push_back({"sampled_frequency [" + label + "]",
                          std::abs(freq - mass) <= 4.0 * sigma + 1e-12,
                          "frequency " + fmt(freq) + ", mass " + fmt(mass) + ", sigma " +
                              fmt(sigma)});
    }
  }
  return v;
}

}  // namespace

bool Verification::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

CheckResult check_model(const Model& model, std::string_view property,
                        const CheckOptions& options) {
  CheckResult result;
  std::string stage = "property";
  try {
    Report report;
    StageClock clock(report, options.timings);
    const PropertySpec spec = parse_property(property);
    report.states = model.num_states();
    report.initial = model.name(model.initial());
    report.kind = model.is_markov_chain() ? "mc" : "mdp";
    report.property = spec.to_string();

    stage = "pre-processing";
    const StateSet targets = sat_states(model, spec.target);
    report.max_prob = max_reach(model, targets)[model.initial()];
    std::optional<Model> induced;
    if (!model.is_markov_chain()) {
      const Scheduler sched = extract_max_scheduler(model, targets);
      std::vector<std::pair<std::string, std::size_t>> table;
      for (StateId s = 0; s < model.num_states(); ++s) table.emplace_back(model.name(s), sched[s]);
      report.scheduler = std::move(table);
      induced = induced_mc(model, sched);
    }
    const Model& mc = induced ? *induced : model;
    Model mc_psi = make_absorbing(mc, targets);
    clock.lap("pre-processing");

    stage = "scc analysis";
    const AcyclicReduction red = acyclic_reduce(mc_psi);
    if (options.dump_scc) {
      std::vector<SccDump> dump;
      for (const auto& scc : red.scc_table()) {
        if (!scc.nontrivial) continue;
        SccDump d;
        d.members = names_of(mc, scc.members);
        d.inputs = names_of(mc, scc.inputs);
        d.outputs = names_of(mc, scc.outputs);
        for (const auto& [io, p] : scc.reach) d.reach.push_back({mc.name(io.first), mc.name(io.second), p});
        dump.push_back(std::move(d));
      }
      report.scc_table = std::move(dump);
    }
    clock.lap("scc analysis");

    stage = "searching";
    SearchOptions search;
    search.max_witnesses = options.max_witnesses;
    const TorrentCounterexample cx = most_indicative(red, spec, targets, search);
    report.verdict = cx.verdict;
    report.total_mass = cx.total_mass;
    for (const auto& w : cx.witnesses)
      report.witnesses.push_back(
          {names_of(mc, w.rail), w.mass, names_of(mc, w.representant), w.representant_prob});
    clock.lap("searching");

    if (options.verify) {
      stage = "verification";
      std::vector<Rail> rails;
      for (const auto& w : cx.witnesses) rails.push_back(w.rail);
      if (rails.empty()) {
        RankedRailStream stream(red, targets);
        while (rails.size() < kHoldsSampleRails)
          if (auto r = stream.next())
            rails.push_back(std::move(r->rail));
          else
            break;
      }
      report.verification = verify(model, mc, red, targets, report, rails, options);
      clock.lap("verification");
    }

    if (report.verification && !report.verification->passed())
      result.exit_code = kExitVerificationFailed;
    else
      result.exit_code = report.verdict == Verdict::violated ? kExitViolated : kExitHolds;
    result.report = std::move(report);
  } catch (const std::exception& e) {
    result.exit_code = kExitInputError;
    result.stage = stage;
    result.error = e.what();
  }
  return result;
}

CheckResult run_check(const std::filesystem::path& model_path, std::string_view property,
                      const CheckOptions& options) {
  std::optional<Model> model;
  try {
    model = load_model(model_path, options.row_tolerance);
  } catch (const std::exception& e) {
    CheckResult result;
    result.stage = "parse";
    result.error = e.what();
    return result;
  }
  return check_model(*model, property, options);
}

}  // namespace torrent
