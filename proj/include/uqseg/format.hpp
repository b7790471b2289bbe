#pragma once

#include <string>

namespace uqseg {

// Renders a real with 9 significant digits, '.' decimal separator, no
// locale influence, trailing zeros trimmed (0.69314718056 -> "0.693147181",
// 1.0 -> "1"). Used for every real emitted into CSV or report output.
std::string format_real(double v);

}  // namespace uqseg
