#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fjet::io {

/// %.17g: round-trips every finite double.
std::string fmt17(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a header column; throws ConfigError if absent.
    std::size_t column(const std::string& name) const;
};

/// Numeric CSV with a single header line.
CsvTable read_csv(const std::filesystem::path& path);

std::vector<std::string> split(const std::string& text, char sep);
std::string trim(const std::string& text);

/// "1,0" -> {1, 0}; throws ConfigError naming `what` on malformed input.
std::vector<double> parse_doubles(const std::string& text, const std::string& what);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fjet::io
