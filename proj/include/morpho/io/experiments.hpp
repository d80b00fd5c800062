#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "morpho/io/config.hpp"
#include "morpho/io/formats.hpp"

namespace morpho::experiments {

std::string_view tool_version();

/// Configuration as recorded in manifests: everything except `workers` and
/// `out`, which never change results.
nlohmann::json config_snapshot(const ExperimentConfig& config);

/// Each command writes into <out>/<command>/ and finishes with a manifest.
void sweep(const ExperimentConfig& config);
void train(const ExperimentConfig& config);
void coopt(const ExperimentConfig& config);
void dtw(const ExperimentConfig& config);
void stats(const ExperimentConfig& config);
void hillclimb(const ExperimentConfig& config);
void report(const ExperimentConfig& config);

/// `count` design indices at evenly spaced positions of the table sorted by
/// (M_L, index); all designs when count >= rows. Returned in ascending index
/// order.
std::vector<std::size_t> stratified_sample(std::span<const MetricsTableRow> rows, std::size_t count);

/// Seeds shared by every combinator so hill-climber runs are paired.
std::uint64_t hillclimb_seed(std::uint64_t master, int repetition);
std::uint64_t coopt_seed(std::uint64_t master, CooptMode mode, int repetition);

}  // namespace morpho::experiments
