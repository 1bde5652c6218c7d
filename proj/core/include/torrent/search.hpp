#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "torrent/props.hpp"
#include "torrent/rails.hpp"
#include "torrent/transform.hpp"

namespace torrent {

struct RankedRail {
  Rail rail;
  double mass = 0.0;
  double weight = 0.0;  // sum of -log jump probabilities
};

/// Lazy enumeration of the rails that reach a target for the first time at
/// their last state, most probable first. Weights within 1e-12 of each other
/// count as equal and are ordered lexicographically by state sequence.
///
/// Recursive enumeration specialised to the reduced DAG: every node keeps the
/// paths to it found so far plus a candidate heap, and the (k+1)-th best path
/// to a node is pulled only when its k-th best has been consumed. The stream
/// borrows the reduction, which must outlive it.
class RankedRailStream {
 public:
  RankedRailStream(const AcyclicReduction& red, const StateSet& targets);

  std::optional<RankedRail> next();
  std::size_t emitted() const noexcept { return emitted_; }

 private:
  struct Entry {
    double weight = 0.0;
    FinitePath sequence;
    std::size_t pred = 0;
    std::size_t pred_rank = 0;
  };
  struct Node {
    bool initialized = false;
    std::vector<Entry> found;
    std::size_t expanded = 0;       // found entries whose runner-up was queued
    std::vector<Entry> candidates;  // heap, best on top
  };

  bool ensure(std::size_t node, std::size_t rank);
  void push_extension(std::size_t node, std::size_t pred, std::size_t rank);

  const AcyclicReduction* red_;
  std::size_t source_;
  std::size_t sink_;
  std::vector<std::vector<std::pair<std::size_t, double>>> preds_;  // (pred, -log p)
  std::vector<Node> nodes_;
  std::size_t emitted_ = 0;
};

RankedRailStream ranked_rails(const AcyclicReduction& red, const StateSet& targets);

enum class Verdict { holds, violated };

struct TorrentCounterexample {
  /// Empty when the property holds.
  std::vector<Witness> witnesses;
  /// Sum of the witness masses; when the property holds, the mass of every
  /// rail, i.e. the probability of reaching the target.
  double total_mass = 0.0;
  Verdict verdict = Verdict::holds;
};

struct SearchOptions {
  std::size_t max_witnesses = 1'000'000;
};

/// Accumulates ranked rails until the bound is violated. The result has the
/// fewest witnesses possible and, among those, the largest mass.
TorrentCounterexample most_indicative(const AcyclicReduction& red, const PropertySpec& spec,
                                      const StateSet& targets, const SearchOptions& options = {});

/// The single most probable torrent. Throws SearchError if no rail exists.
Witness strongest_torrent_evidence(const AcyclicReduction& red, const StateSet& targets);

}  // namespace torrent
