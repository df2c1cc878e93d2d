#include "cholera/io/output.hpp"

#include "cholera/numerics/errors.hpp"

#include <openssl/evp.h>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <fstream>

namespace cholera::io {

namespace fs = std::filesystem;

std::string format_number(double x) { return fmt::format("{}", x); }

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw NumericalError("sha256 digest failed");
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

CsvBuilder::CsvBuilder(std::initializer_list<std::string_view> header) {
    out_ = fmt::format("{}\n", fmt::join(header, ","));
}

CsvBuilder::CsvBuilder(const std::vector<std::string>& header) {
    out_ = fmt::format("{}\n", fmt::join(header, ","));
}

void CsvBuilder::row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

void CsvBuilder::row(const std::vector<double>& values) { row(values, {}); }

void CsvBuilder::row(const std::vector<double>& values, const std::vector<std::string>& text) {
    bool first = true;
    for (double v : values) {
        if (!first) out_ += ',';
        out_ += format_number(v);
        first = false;
    }
    for (const auto& s : text) {
        if (!first) out_ += ',';
        out_ += s;
        first = false;
    }
    out_ += '\n';
}

OutputDir::OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_))
        throw ValidationError("out", "cannot create output directory " + dir_.string());
    const fs::path probe = dir_ / ".write-probe";
    {
        std::ofstream f(probe);
        if (!f) throw ValidationError("out", "output directory is not writable: " + dir_.string());
    }
    fs::remove(probe, ec);

    const fs::path manifest = dir_ / "manifest.json";
    if (fs::exists(manifest)) {
        std::ifstream in(manifest);
        const json old = json::parse(in, nullptr, false);
        if (old.is_object() && old.contains("files") && old["files"].is_object()) entries_ = old["files"];
    }
}

void OutputDir::write_text(const std::string& name, std::string_view content) {
    const fs::path target = dir_ / name;
    std::ofstream f(target, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("out", "cannot write " + target.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw ValidationError("out", "write failed for " + target.string());
    entries_[name] = {{"bytes", content.size()}, {"sha256", sha256_hex(content)}};
    if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
}

void OutputDir::write_json(const std::string& name, const json& value) {
    write_text(name, value.dump(2) + "\n");
}

json OutputDir::write_manifest() {
    const json manifest{{"files", entries_}};
    const std::string text = manifest.dump(2) + "\n";
    std::ofstream f(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("out", "cannot write manifest.json");
    f << text;
    return manifest;
}

}  // namespace cholera::io
