#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "torrent/model.hpp"
#include "torrent/props.hpp"
#include "torrent/rails.hpp"
#include "torrent/transform.hpp"

// Brute-force and statistical baselines. Solves, components and absorbing
// copies are computed here from scratch; a reduced chain is only read, to
// list its rails and to classify sampled runs.
namespace torrent::oracle {

struct EnumeratedPath {
  FinitePath path;
  double probability = 0.0;
};

struct FreachEnumeration {
  /// Sorted by decreasing probability, then lexicographically.
  std::vector<EnumeratedPath> paths;
  /// Mass of the length-`max_len` prefixes that have not hit the target but
  /// still can: an upper bound on every longer path's contribution.
  double tail_bound = 0.0;
};

/// All paths from the initial state that hit `targets` exactly once, at
/// their last state, with at most `max_len` states.
FreachEnumeration enumerate_freach(const Model& mc, const StateSet& targets, std::size_t max_len);

/// Exact reachability probabilities of a Markov chain (dense full-pivot LU).
std::vector<double> chain_reach(const Model& mc, const StateSet& targets);

/// Maximum over all deterministic memoryless schedulers of the probability
/// of reaching `targets` from the initial state.
double brute_force_max_reach(const Model& m, const StateSet& targets,
                             std::size_t max_schedulers = 100'000);

/// Component id per state from the mutual-reachability closure.
std::vector<std::size_t> closure_components(const Model& mc);

struct GeneratorMasses {
  /// Rail -> total probability of its generators with at most max_len states.
  std::map<Rail, double> mass;
  /// Probability of the prefixes still undecided after max_len states.
  double tail_bound = 0.0;
};

/// Sums cylinder probabilities of generators, grouped by the rail they
/// collapse to. Targets and states unable to reach them are treated as
/// absorbing, as in the preprocessed chain.
GeneratorMasses truncated_generator_masses(const Model& mc, const StateSet& targets,
                                           std::size_t max_len);

struct RailMass {
  Rail rail;
  double mass = 0.0;
};

/// Every target-reaching path of the reduced chain by depth-first search,
/// masses multiplied left to right.
std::vector<RailMass> exhaustive_rails(const AcyclicReduction& red, const StateSet& targets);

struct SubsetChoice {
  bool exists = false;
  std::size_t count = 0;
  double mass = 0.0;
};

/// Smallest subset whose mass violates `spec`, heaviest among the smallest.
/// Masses are summed in decreasing order.
SubsetChoice brute_force_counterexample(std::span<const double> masses, const PropertySpec& spec);

inline constexpr const char* kSamplerAlgorithm = "mt19937_64";

struct SampleRun {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::map<Rail, std::size_t> classified;
  std::size_t unclassified = 0;
};

/// Simulates `count` runs of `mc_psi` from its initial state until an
/// absorbing state (or `max_steps` steps) and classifies each run by the
/// rail it generates. Throws Error if a run generates two rails.
SampleRun monte_carlo_classify(const Model& mc_psi, const AcyclicReduction& red,
                               std::span<const Rail> rails, std::size_t count, std::uint64_t seed,
                               std::size_t max_steps = 100'000);

}  // namespace torrent::oracle
