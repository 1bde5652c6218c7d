#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torrent/search.hpp"

namespace torrent {

struct ReportWitness {
  std::vector<std::string> rail;
  double mass = 0.0;
  std::vector<std::string> representant;
  double representant_prob = 0.0;
};

struct ReachEntry {
  std::string input;
  std::string output;
  double probability = 0.0;
};

struct SccDump {
  std::vector<std::string> members;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<ReachEntry> reach;
};

struct VerificationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Verification {
  std::string rng;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<VerificationCheck> checks;

  bool passed() const;
};

struct Report {
  std::size_t states = 0;
  std::string initial;
  std::string kind;  // "mc" or "mdp"
  std::string property;
  Verdict verdict = Verdict::holds;
  double max_prob = 0.0;
  /// state -> action index, MDP inputs only.
  std::optional<std::vector<std::pair<std::string, std::size_t>>> scheduler;
  std::vector<ReportWitness> witnesses;
  double total_mass = 0.0;
  /// Nontrivial components only.
  std::optional<std::vector<SccDump>> scc_table;
  std::optional<Verification> verification;
  /// Stage name -> seconds. Left empty unless timing was requested.
  std::vector<std::pair<std::string, double>> timings;
};

enum class ReportFormat { text, json };

/// JSON keys follow a fixed order and numbers use shortest round-trip form,
/// so equal reports render to equal bytes.
std::string render_report(const Report& report, ReportFormat format);

}  // namespace torrent
