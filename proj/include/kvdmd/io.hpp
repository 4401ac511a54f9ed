#pragma once
// Snapshot files and report output.
//
// CSV: one snapshot per column. A header row re_0,im_0,re_1,im_1,... marks
// complex data stored as (re, im) column pairs; without a header every column
// is a real snapshot.
// KVC1: magic "KVC1", two little-endian uint64 dims (n, m+1), then n*(m+1)
// little-endian float64 (re, im) pairs in column-major order.

#include "kvdmd/linalg.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace kvdmd {

CMatrix read_csv(const std::string& path);
CMatrix read_kvc1(const std::string& path);
// KVC1 if the file starts with the magic bytes, CSV otherwise.
CMatrix read_snapshots(const std::string& path);

std::string csv_matrix(const CMatrix& M);  // with the complex header
std::string kvc1_bytes(const CMatrix& M);

// Writes to path.tmp and renames over path.
void atomic_write(const std::string& path, const std::string& content);

// %.17g; non-finite values become nan, inf, -inf.
std::string format_double(double v);

// CSV table from a header and string rows.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

// JSON text with every floating point number printed to 17 significant
// digits. Non-finite numbers are written as null.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace kvdmd
