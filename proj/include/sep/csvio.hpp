#pragma once

#include <string>
#include <vector>

namespace sep {

// Shortest round-trip decimal rendering of a double (via repeated-precision
// snprintf), so equal inputs always produce byte-identical output.
std::string format_double(double v);

// Minimal CSV assembly: values are joined with commas, rows with '\n'.
// Fields here never contain commas or quotes, so no escaping is performed.
std::string csv_row(const std::vector<std::string>& fields);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace sep
