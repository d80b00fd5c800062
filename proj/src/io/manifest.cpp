#include "morpho/io/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "morpho/io/formats.hpp"

namespace morpho {

namespace {

void write_all(const std::filesystem::path& path, const void* data, std::size_t size) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    out.close();
    if (!out) throw std::runtime_error("failed to write " + path.string());
}

}  // namespace

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::string sha256_hex(std::string_view text) {
    return sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

OutputDir::OutputDir(std::filesystem::path root, nlohmann::json header)
    : root_(std::move(root)), header_(std::move(header)) {
    std::filesystem::create_directories(root_);
    write_manifest("incomplete");
}

void OutputDir::write(const std::string& relative, std::string_view text) {
    write(relative, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void OutputDir::write(const std::string& relative, std::span<const std::uint8_t> bytes) {
    if (relative == kManifestName) throw std::invalid_argument("the manifest name is reserved");
    write_all(root_ / relative, bytes.data(), bytes.size());
    files_.push_back({relative, sha256_hex(bytes), bytes.size()});
}

void OutputDir::finish() { write_manifest("complete"); }

void OutputDir::write_manifest(std::string_view status) {
    nlohmann::json m = header_;
    m["status"] = status;
    auto& files = m["files"] = nlohmann::json::array();
    for (const auto& f : files_) files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    const std::string text = m.dump(2) + "\n";
    write_all(root_ / kManifestName, text.data(), text.size());
}

std::vector<std::string> verify_manifest(const std::filesystem::path& root) {
    std::ifstream in(root / OutputDir::kManifestName);
    if (!in) throw std::runtime_error("no manifest in " + root.string());
    const auto m = nlohmann::json::parse(in);
    std::vector<std::string> bad;
    for (const auto& f : m.at("files")) {
        const auto path = f.at("path").get<std::string>();
        const auto p = root / path;
        if (!std::filesystem::exists(p) || sha256_hex(read_file_bytes(p)) != f.at("sha256").get<std::string>()) {
            bad.push_back(path);
        }
    }
    return bad;
}

}  // namespace morpho
