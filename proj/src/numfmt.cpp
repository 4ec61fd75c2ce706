#include "cashcast/numfmt.hpp"

#include <charconv>

namespace cashcast {

std::string fmt_num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace cashcast
