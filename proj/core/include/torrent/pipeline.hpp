#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "torrent/model.hpp"
#include "torrent/report.hpp"

namespace torrent {

struct CheckOptions {
  double row_tolerance = kDefaultRowTolerance;
  bool dump_scc = false;
  bool verify = false;
  std::uint64_t seed = 42;
  std::size_t max_witnesses = 1'000'000;
  std::size_t verify_samples = 100'000;
  bool timings = false;
};

inline constexpr int kExitHolds = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitVerificationFailed = 3;

struct CheckResult {
  int exit_code = kExitInputError;
  std::optional<Report> report;
  /// Set when exit_code is kExitInputError.
  std::string stage;
  std::string error;
};

/// parse -> (MDP: scheduler, induced chain) -> absorbing chain -> reduction
/// -> search -> representants. Errors are caught and attributed to a stage.
CheckResult run_check(const std::filesystem::path& model_path, std::string_view property,
                      const CheckOptions& options = {});
CheckResult check_model(const Model& model, std::string_view property,
                        const CheckOptions& options = {});

}  // namespace torrent
