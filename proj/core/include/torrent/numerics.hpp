#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "torrent/model.hpp"

namespace torrent {

/// Row-major dense matrix for the small systems solved here.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// LU factorization with partial pivoting; factor once, solve for many
/// right-hand sides. Throws SingularMatrixError naming the failing column.
class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix a);

  std::size_t size() const noexcept { return lu_.rows(); }
  std::vector<double> solve(std::span<const double> b) const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> permutation_;
};

std::vector<double> solve_linear(const DenseMatrix& a, std::span<const double> b);

struct ReachOptions {
  /// Stop when the sup-norm change between sweeps drops below this.
  double tolerance = 1e-10;
  std::size_t max_iterations = 1'000'000;
  /// Markov chains: solve the linear system directly instead of iterating.
  bool direct_mc_solve = true;
  /// MDPs: after value iteration, evaluate the greedy scheduler exactly and
  /// improve it until no action gains more than 1e-12.
  bool refine_mdp = true;
};

/// Maximal probability of eventually reaching `target`, per state, in [0, 1].
std::vector<double> max_reach(const Model& m, const StateSet& target, const ReachOptions& options = {});

/// States from which no path reaches `target` (backward graph search, no arithmetic).
StateSet prob0_states(const Model& m, const StateSet& target);

/// Exact reachability probabilities of the Markov chain obtained by fixing
/// `choice[s]` at every state.
std::vector<double> evaluate_choice(const Model& m, const StateSet& target,
                                    std::span<const std::size_t> choice);

/// Per-state action index attaining the maximum of sum_t pi(t) * values[t]
/// within `slack`. Among the attaining actions, states are resolved in
/// layers outward from the target, each picking the lowest index that
/// moves one layer closer, so that no positive-valued state is stuck in a
/// loop. Targets, zero-valued and unresolved states keep the lowest
/// attaining index.
std::vector<std::size_t> optimal_choices(const Model& m, const StateSet& target,
                                         std::span<const double> values, double slack = 1e-9);

}  // namespace torrent
