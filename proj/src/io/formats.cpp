#include "morpho/io/formats.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace morpho {

namespace {

constexpr std::uint8_t kVersion = 0x01;

void put_header(std::vector<std::uint8_t>& out, const char* magic, int k, int n) {
    out.insert(out.end(), magic, magic + 4);
    out.push_back(kVersion);
    out.push_back(static_cast<std::uint8_t>(k));
    out.push_back(static_cast<std::uint8_t>(n & 0xff));
    out.push_back(static_cast<std::uint8_t>((n >> 8) & 0xff));
}

struct Header {
    int k;
    int n;
};

Header get_header(std::span<const std::uint8_t> bytes, const char* magic) {
    if (bytes.size() < 8 || !std::equal(magic, magic + 4, bytes.begin())) {
        throw std::runtime_error(std::string("not a ") + magic + " file");
    }
    if (bytes[4] != kVersion) throw std::runtime_error(fmt::format("unsupported {} version {}", magic, bytes[4]));
    return {bytes[5], bytes[6] | (bytes[7] << 8)};
}

void check_u8_range(int k, int n) {
    if (k < 1 || k > 255) throw std::invalid_argument("environment count must fit in one byte");
    if (n < 1 || n > 65535) throw std::invalid_argument("grid size must fit in two bytes");
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

template <class T>
T parse_cell(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
    T value{};
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw std::runtime_error(fmt::format("{}:{}: cannot parse '{}'", path.string(), line, cell));
    }
    return value;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

std::vector<std::uint8_t> encode_overlap(const OverlapMatrix& o) {
    o.validate();
    check_u8_range(o.k, o.n);
    std::vector<std::uint8_t> out;
    out.reserve(8 + o.cells.size());
    put_header(out, "OVLP", o.k, o.n);
    out.insert(out.end(), o.cells.begin(), o.cells.end());
    return out;
}

OverlapMatrix decode_overlap(std::span<const std::uint8_t> bytes) {
    const auto h = get_header(bytes, "OVLP");
    const std::size_t cells = static_cast<std::size_t>(h.n) * h.n;
    if (bytes.size() != 8 + cells) throw std::runtime_error("OVLP file has the wrong length");
    OverlapMatrix o{h.n, h.k, {bytes.begin() + 8, bytes.end()}};
    try {
        o.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("OVLP file: ") + e.what());
    }
    return o;
}

std::vector<std::uint8_t> encode_success(std::span<const SuccessMatrix> matrices) {
    if (matrices.empty()) throw std::invalid_argument("no success matrices to encode");
    const int n = matrices.front().n;
    check_u8_range(static_cast<int>(matrices.size()), n);
    std::vector<std::uint8_t> out;
    put_header(out, "SMAT", static_cast<int>(matrices.size()), n);
    for (const auto& m : matrices) {
        if (m.n != n) throw std::invalid_argument("success matrices differ in size");
        out.insert(out.end(), m.cells.begin(), m.cells.end());
    }
    return out;
}

std::vector<SuccessMatrix> decode_success(std::span<const std::uint8_t> bytes) {
    const auto h = get_header(bytes, "SMAT");
    const std::size_t cells = static_cast<std::size_t>(h.n) * h.n;
    if (bytes.size() != 8 + cells * h.k) throw std::runtime_error("SMAT file has the wrong length");
    std::vector<SuccessMatrix> out;
    for (int k = 0; k < h.k; ++k) {
        const auto begin = bytes.begin() + 8 + static_cast<std::ptrdiff_t>(cells * k);
        SuccessMatrix m{h.n, {begin, begin + static_cast<std::ptrdiff_t>(cells)}};
        for (auto c : m.cells) {
            if (c > 1) throw std::runtime_error("SMAT cell outside {0, 1}");
        }
        out.push_back(std::move(m));
    }
    return out;
}

std::string design_file_stem(std::size_t index) { return fmt::format("{:06d}", index); }

std::string format_real(double x) { return fmt::format("{:.9g}", x); }

std::string metrics_csv_header(std::size_t k) {
    std::string h = "design_index,l1x,l1y,l2x,l2y";
    for (std::size_t i = 1; i <= k; ++i) h += fmt::format(",g{}", i);
    return h + ",m_l,m_ci\n";
}

std::string metrics_csv_row(const SweepRow& row) {
    const auto& d = row.design;
    std::string s = fmt::format("{},{},{},{},{}", row.index, format_real(d.l1.x), format_real(d.l1.y),
                                format_real(d.l2.x), format_real(d.l2.y));
    for (auto g : row.metrics.counts) s += fmt::format(",{}", g);
    return s + fmt::format(",{},{}\n", format_real(row.metrics.m_l), format_real(row.metrics.m_ci));
}

std::vector<MetricsTableRow> read_metrics_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw std::runtime_error(path.string() + " is empty");
    const auto header = split(lines[0]);
    if (header.size() < 8 || header[0] != "design_index" || header[header.size() - 2] != "m_l" ||
        header.back() != "m_ci") {
        throw std::runtime_error(path.string() + ":1: not a metrics table");
    }
    const std::size_t k = header.size() - 7;
    std::vector<MetricsTableRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto cells = split(lines[i]);
        if (cells.size() != header.size()) {
            throw std::runtime_error(fmt::format("{}:{}: expected {} columns, found {}", path.string(), i + 1,
                                                 header.size(), cells.size()));
        }
        MetricsTableRow r;
        r.index = parse_cell<std::size_t>(cells[0], path, i + 1);
        r.design = {{parse_cell<double>(cells[1], path, i + 1), parse_cell<double>(cells[2], path, i + 1)},
                    {parse_cell<double>(cells[3], path, i + 1), parse_cell<double>(cells[4], path, i + 1)}};
        for (std::size_t g = 0; g < k; ++g) r.counts.push_back(parse_cell<std::int64_t>(cells[5 + g], path, i + 1));
        r.m_l = parse_cell<double>(cells[5 + k], path, i + 1);
        r.m_ci = parse_cell<double>(cells[6 + k], path, i + 1);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string training_csv(std::span<const TrainRow> rows) {
    std::string s = "design_index,method,seed,evals_to_full_success,final_loss,envs_solved\n";
    for (const auto& r : rows) {
        s += fmt::format("{},{},{},{},{},{}\n", r.design_index, to_string(r.method), r.seed,
                         r.evals_to_full_success ? *r.evals_to_full_success : -1, format_real(r.final_loss),
                         r.envs_solved);
    }
    return s;
}

std::string training_summary_csv(std::span<const TrainingSummaryRecord> rows) {
    std::string s = "design_index,method,runs,mean_evals,censor_rate,m_l,m_ci\n";
    for (const auto& r : rows) {
        s += fmt::format("{},{},{},{},{},{},{}\n", r.design_index, r.method, r.runs, format_real(r.mean_evals),
                         format_real(r.censor_rate), format_real(r.m_l), format_real(r.m_ci));
    }
    return s;
}

std::vector<TrainingSummaryRecord> read_training_summary_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != "design_index,method,runs,mean_evals,censor_rate,m_l,m_ci") {
        throw std::runtime_error(path.string() + ":1: not a training summary table");
    }
    std::vector<TrainingSummaryRecord> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto c = split(lines[i]);
        if (c.size() != 7) throw std::runtime_error(fmt::format("{}:{}: expected 7 columns", path.string(), i + 1));
        rows.push_back({parse_cell<std::size_t>(c[0], path, i + 1), c[1], parse_cell<int>(c[2], path, i + 1),
                        parse_cell<double>(c[3], path, i + 1), parse_cell<double>(c[4], path, i + 1),
                        parse_cell<double>(c[5], path, i + 1), parse_cell<double>(c[6], path, i + 1)});
    }
    return rows;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace morpho
