#include "texflow/point.hpp"

#include <cmath>

namespace texflow {

bool Point::finite() const {
    if (is_vector()) return vec().allFinite();
    const auto& s = sym();
    return std::isfinite(s.height) && !s.word.empty();
}

int common_central_block(const SymbolicPoint& a, const SymbolicPoint& b, int cap) {
    // Grow the central window one coordinate at a time. Block of length m
    // covers {-floor(m/2), ..., ceil(m/2)-1}; step m adds coordinate
    // (m-1)/2 when m is odd and -m/2 when m is even.
    for (int m = 1; m <= cap; ++m) {
        const long long pos = (m % 2 == 1) ? (m - 1) / 2 : -static_cast<long long>(m) / 2;
        if (a.at(pos) != b.at(pos)) return m - 1;
    }
    return cap;
}

double symbolic_distance(const SymbolicPoint& a, const SymbolicPoint& b) {
    const int cap = a.block_length() + b.block_length();
    const int k = common_central_block(a, b, cap);
    if (k >= cap) return 0.0;  // equal bi-infinite sequences (Fine-Wilf window)
    return std::ldexp(1.0, -k);
}

double suspension_distance(const SymbolicPoint& a, const SymbolicPoint& b) {
    return std::max(symbolic_distance(a, b), std::abs(a.height - b.height));
}

}  // namespace texflow
