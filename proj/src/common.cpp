#include "texflow/common.hpp"

#include <cstdio>

namespace texflow {

std::string fp17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace texflow
