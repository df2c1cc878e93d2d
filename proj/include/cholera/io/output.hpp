#pragma once

#include <json.hpp>

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace cholera::io {

using json = nlohmann::json;

/// Shortest decimal form that parses back to the same double.
std::string format_number(double x);

std::string sha256_hex(std::string_view data);

/// Accumulates CSV text: one header, then rows of numbers.
class CsvBuilder {
public:
    explicit CsvBuilder(std::initializer_list<std::string_view> header);
    explicit CsvBuilder(const std::vector<std::string>& header);
    void row(std::initializer_list<double> values);
    void row(const std::vector<double>& values);
    /// Row with trailing text cells (e.g. a stability tag).
    void row(const std::vector<double>& values, const std::vector<std::string>& text);
    const std::string& str() const { return out_; }

private:
    std::string out_;
};

/// An output directory that records everything written to it. The manifest
/// (manifest.json) lists each file with its size and SHA-256; entries from
/// earlier runs in the same directory are kept unless overwritten.
class OutputDir {
public:
    /// Creates the directory if needed; throws ValidationError("out", ...)
    /// when it cannot be created or written.
    explicit OutputDir(std::filesystem::path dir);

    const std::filesystem::path& path() const { return dir_; }

    void write_text(const std::string& name, std::string_view content);
    void write_json(const std::string& name, const json& value);

    const std::vector<std::string>& files() const { return files_; }

    /// Writes manifest.json and returns its content.
    json write_manifest();

private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
    json entries_ = json::object();
};

}  // namespace cholera::io
