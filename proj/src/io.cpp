#include "dwlab/io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dwlab {

using nlohmann::json;

void write_snapshot(const std::string& path, const SnapshotHeader& header,
                    const std::vector<const Field*>& fields) {
    if (header.fields.size() != fields.size())
        throw InternalError("write_snapshot: field list and data mismatch");
    json j;
    j["n"] = header.n;
    j["L"] = header.L;
    j["N"] = header.N;
    j["t"] = header.t;
    j["s"] = header.s;
    j["kind"] = header.kind;
    j["fields"] = header.fields;
    j["scalars"] = header.scalars;
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw InternalError("write_snapshot: cannot open " + tmp);
        out << j.dump() << '\n';
        for (const Field* f : fields) {
            if (f->size() != header.grid().size())
                throw InternalError("write_snapshot: field size mismatch");
            out.write(reinterpret_cast<const char*>(f->samples().data()),
                      std::streamsize(f->size() * sizeof(double)));
        }
        if (!out) throw InternalError("write_snapshot: short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::pair<SnapshotHeader, std::vector<Field>> read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InternalError("read_snapshot: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw InternalError("read_snapshot: missing header in " + path);
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw InternalError("read_snapshot: bad header in " + path + ": " + e.what());
    }
    SnapshotHeader h;
    h.n = j.at("n").get<int>();
    h.L = j.at("L").get<double>();
    h.N = j.at("N").get<int>();
    h.t = j.at("t").get<double>();
    h.s = j.at("s").get<double>();
    h.kind = j.value("kind", "");
    h.fields = j.value("fields", std::vector<std::string>{});
    h.scalars = j.value("scalars", json::object());
    const Grid g = h.grid();
    std::vector<Field> data;
    for (std::size_t k = 0; k < h.fields.size(); ++k) {
        std::vector<double> buf(g.size());
        in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(g.size() * sizeof(double)));
        if (std::size_t(in.gcount()) != g.size() * sizeof(double))
            throw InternalError("read_snapshot: truncated data in " + path);
        data.emplace_back(g, std::move(buf));
    }
    return {std::move(h), std::move(data)};
}

void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw InternalError("atomic_write_text: cannot open " + tmp);
        out << content;
        if (!out) throw InternalError("atomic_write_text: short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InternalError("read_text: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvWriter::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size()) throw InternalError("csv: row width mismatch");
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        row += format_double(values[i]);
    }
    rows_.push_back(std::move(row));
}

void CsvWriter::add_row_mixed(const std::vector<std::string>& values) {
    if (values.size() != columns_.size()) throw InternalError("csv: row width mismatch");
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        row += values[i];
    }
    rows_.push_back(std::move(row));
}

std::string CsvWriter::str() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += columns_[i];
    }
    out += '\n';
    for (const std::string& r : rows_) {
        out += r;
        out += '\n';
    }
    return out;
}

std::vector<std::pair<std::string, std::vector<double>>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InternalError("read_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw InternalError("read_csv: empty file " + path);
    std::vector<std::pair<std::string, std::vector<double>>> table;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.emplace_back(cell, std::vector<double>{});
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col >= table.size()) throw InternalError("read_csv: ragged row in " + path);
            table[col++].second.push_back(std::strtod(cell.c_str(), nullptr));
        }
    }
    return table;
}

std::vector<double> csv_column(
    const std::vector<std::pair<std::string, std::vector<double>>>& table,
    const std::string& name) {
    for (const auto& [col, vals] : table)
        if (col == name) return vals;
    throw InternalError("read_csv: missing column " + name);
}

} // namespace dwlab
