#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "morpho/landscape.hpp"
#include "morpho/optimizers.hpp"

namespace morpho {

/// "OVLP", version 0x01, K (1 byte), n (2 bytes little-endian), n^2 cells
/// row-major.
std::vector<std::uint8_t> encode_overlap(const OverlapMatrix& o);
/// Throws std::runtime_error on a malformed buffer.
OverlapMatrix decode_overlap(std::span<const std::uint8_t> bytes);

/// "SMAT", version 0x01, K (1 byte), n (2 bytes little-endian), then K
/// matrices of n^2 cells in environment order.
std::vector<std::uint8_t> encode_success(std::span<const SuccessMatrix> matrices);
std::vector<SuccessMatrix> decode_success(std::span<const std::uint8_t> bytes);

/// Zero-padded six-digit design index.
std::string design_file_stem(std::size_t index);

/// Nine significant digits, the precision of every CSV table.
std::string format_real(double x);

std::string metrics_csv_header(std::size_t k);
std::string metrics_csv_row(const SweepRow& row);

struct MetricsTableRow {
    std::size_t index = 0;
    BodyDesign design;
    std::vector<std::int64_t> counts;
    double m_l = 0.0;
    double m_ci = 0.0;
};

/// Reads a metrics table written by the sweep. Throws with a line number on
/// malformed input.
std::vector<MetricsTableRow> read_metrics_csv(const std::filesystem::path& path);

std::string training_csv(std::span<const TrainRow> rows);

struct TrainingSummaryRecord {
    std::size_t design_index = 0;
    std::string method;
    int runs = 0;
    double mean_evals = 0.0;
    double censor_rate = 0.0;
    double m_l = 0.0;
    double m_ci = 0.0;
};

std::string training_summary_csv(std::span<const TrainingSummaryRecord> rows);
std::vector<TrainingSummaryRecord> read_training_summary_csv(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace morpho
