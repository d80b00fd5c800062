#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace morpho {

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

struct ManifestFile {
    std::string path;  // relative to the output directory, '/' separated
    std::string sha256;
    std::uint64_t bytes = 0;
};

/// Single writer for one command's output directory. The manifest is written
/// as "incomplete" when the directory is opened and rewritten as "complete"
/// by finish(); an interrupted run leaves the incomplete marker behind.
class OutputDir {
public:
    /// `header` holds the command, configuration snapshot and parameters.
    OutputDir(std::filesystem::path root, nlohmann::json header);

    void write(const std::string& relative, std::string_view text);
    void write(const std::string& relative, std::span<const std::uint8_t> bytes);

    /// Files written so far, in write order.
    const std::vector<ManifestFile>& files() const { return files_; }
    const std::filesystem::path& root() const { return root_; }

    void finish();

    static constexpr const char* kManifestName = "manifest.json";

private:
    void write_manifest(std::string_view status);

    std::filesystem::path root_;
    nlohmann::json header_;
    std::vector<ManifestFile> files_;
};

/// Recomputes every listed checksum; returns the paths that do not match.
std::vector<std::string> verify_manifest(const std::filesystem::path& root);

}  // namespace morpho
