#pragma once

#include <string>

namespace cashcast {

/// Shortest decimal text that reads back to the same double.
std::string fmt_num(double v);

}  // namespace cashcast
