#pragma once

#include <string>
#include <vector>

#include "gsk/gp.hpp"
#include "gsk/types.hpp"

namespace gsk {

// Shortest decimal string that round-trips the double (locale independent).
std::string format_double(double v);

// Training CSV: header x1,...,xd,y then one row per observation.
// Errors carry the offending line number.
Dataset read_dataset_csv(const std::string& path);

// Inputs CSV: header x1,...,xd. A header-only file yields a 0 x d matrix.
Mat read_inputs_csv(const std::string& path);

// Writes header + rows with round-trip precision, '\n' line endings, UTF-8.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace gsk
