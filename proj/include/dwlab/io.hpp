#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dwlab/field.hpp"

namespace dwlab {

/// Container format for persisted fields: one line of JSON
/// {"n", "L", "N", "t", "s", "kind", "fields", "scalars"} terminated by '\n',
/// followed by one row-major little-endian float64 block per listed field.
struct SnapshotHeader {
    int n = 1;
    double L = 0.0;
    int N = 0;
    double t = 0.0;
    double s = 0.0;
    std::string kind;
    std::vector<std::string> fields;
    nlohmann::json scalars = nlohmann::json::object();

    Grid grid() const { return Grid(n, L, N); }
};

void write_snapshot(const std::string& path, const SnapshotHeader& header,
                    const std::vector<const Field*>& fields);
std::pair<SnapshotHeader, std::vector<Field>> read_snapshot(const std::string& path);

/// Write text to path via a temporary file and rename, so a killed process
/// never leaves a truncated artifact.
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

/// Shortest round-trip decimal form of a double (%.17g).
std::string format_double(double v);

/// Minimal CSV table with deterministic formatting.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}
    void add_row(const std::vector<double>& values);
    void add_row_mixed(const std::vector<std::string>& values);
    std::string str() const;
    void write(const std::string& path) const { atomic_write_text(path, str()); }

private:
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

/// Parse a CSV produced by CsvWriter; returns column-name -> values.
std::vector<std::pair<std::string, std::vector<double>>> read_csv(const std::string& path);
std::vector<double> csv_column(
    const std::vector<std::pair<std::string, std::vector<double>>>& table,
    const std::string& name);

} // namespace dwlab
