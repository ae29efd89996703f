#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hmlab {

// Fixed-width scientific formatting so report files are byte-stable.
std::string format_real(double value);

std::string csv_line(const std::vector<std::string>& fields);

}  // namespace hmlab
