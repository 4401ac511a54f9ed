#include "kvdmd/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kvdmd {

namespace {

static_assert(std::endian::native == std::endian::little, "KVC1 I/O assumes a little-endian host");

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    return out;
}

double parse_number(const std::string& s, const std::string& path, size_t line) {
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw std::runtime_error(path + ":" + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

void dump(const nlohmann::json& j, std::string& out, int indent, int depth) {
    const std::string pad = indent > 0 ? "\n" + std::string(static_cast<size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close = indent > 0 ? "\n" + std::string(static_cast<size_t>(indent * depth), ' ') : "";
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) { out += "{}"; return; }
            out += "{";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",";
                first = false;
                out += pad + nlohmann::json(it.key()).dump() + (indent > 0 ? ": " : ":");
                dump(it.value(), out, indent, depth + 1);
            }
            out += close + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) { out += "[]"; return; }
            out += "[";
            for (size_t k = 0; k < j.size(); ++k) {
                if (k) out += ",";
                out += pad;
                dump(j[k], out, indent, depth + 1);
            }
            out += close + "]";
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_double(v) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

CMatrix read_csv(const std::string& path) {
    std::istringstream in(slurp(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    bool complex_data = false;
    size_t lineno = 0;
    size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = split_line(line);
        if (lineno == 1 && !cells.empty() && cells[0].rfind("re_", 0) == 0) {
            if (cells.size() % 2 != 0) throw std::runtime_error(path + ": complex header needs re/im pairs");
            complex_data = true;
            width = cells.size();
            continue;
        }
        if (width == 0) width = cells.size();
        if (cells.size() != width)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(width) +
                                     " fields, got " + std::to_string(cells.size()));
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_number(c, path, lineno));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");
    const Index n = static_cast<Index>(rows.size());
    const Index cols = static_cast<Index>(complex_data ? width / 2 : width);
    CMatrix X(n, cols);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < cols; ++j) {
            const auto& r = rows[static_cast<size_t>(i)];
            X(i, j) = complex_data ? cplx(r[static_cast<size_t>(2 * j)], r[static_cast<size_t>(2 * j + 1)])
                                   : cplx(r[static_cast<size_t>(j)], 0.0);
        }
    require_finite(X, path.c_str());
    return X;
}

CMatrix read_kvc1(const std::string& path) {
    const std::string bytes = slurp(path);
    if (bytes.size() < 20 || bytes.compare(0, 4, "KVC1") != 0) throw std::runtime_error(path + ": not a KVC1 file");
    std::uint64_t n = 0, m = 0;
    std::memcpy(&n, bytes.data() + 4, 8);
    std::memcpy(&m, bytes.data() + 12, 8);
    if (n == 0 || m == 0 || n > (1ULL << 32) || m > (1ULL << 32))
        throw std::runtime_error(path + ": implausible dimensions");
    const std::uint64_t need = 20 + 16 * n * m;
    if (bytes.size() != need)
        throw std::runtime_error(path + ": size " + std::to_string(bytes.size()) + " does not match header (" +
                                 std::to_string(need) + ")");
    CMatrix X(static_cast<Index>(n), static_cast<Index>(m));
    const char* p = bytes.data() + 20;
    for (Index j = 0; j < X.cols(); ++j)
        for (Index i = 0; i < X.rows(); ++i) {
            double re, im;
            std::memcpy(&re, p, 8);
            std::memcpy(&im, p + 8, 8);
            p += 16;
            X(i, j) = cplx(re, im);
        }
    require_finite(X, path.c_str());
    return X;
}

CMatrix read_snapshots(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() == 4 && std::memcmp(magic, "KVC1", 4) == 0) return read_kvc1(path);
    return read_csv(path);
}

std::string csv_matrix(const CMatrix& M) {
    std::string out;
    for (Index j = 0; j < M.cols(); ++j) {
        if (j) out += ",";
        out += "re_" + std::to_string(j) + ",im_" + std::to_string(j);
    }
    out += "\n";
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            if (j) out += ",";
            out += format_double(M(i, j).real()) + "," + format_double(M(i, j).imag());
        }
        out += "\n";
    }
    return out;
}

std::string kvc1_bytes(const CMatrix& M) {
    std::string out = "KVC1";
    const std::uint64_t n = static_cast<std::uint64_t>(M.rows()), m = static_cast<std::uint64_t>(M.cols());
    out.append(reinterpret_cast<const char*>(&n), 8);
    out.append(reinterpret_cast<const char*>(&m), 8);
    for (Index j = 0; j < M.cols(); ++j)
        for (Index i = 0; i < M.rows(); ++i) {
            const double re = M(i, j).real(), im = M(i, j).imag();
            out.append(reinterpret_cast<const char*>(&re), 8);
            out.append(reinterpret_cast<const char*>(&im), 8);
        }
    return out;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot rename onto '" + path + "'");
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (size_t k = 0; k < cells.size(); ++k) {
            if (k) out += ",";
            out += cells[k];
        }
        out += "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

std::string dump_json(const nlohmann::json& j, int indent) {
    std::string out;
    dump(j, out, indent, 0);
    out += "\n";
    return out;
}

}  // namespace kvdmd
