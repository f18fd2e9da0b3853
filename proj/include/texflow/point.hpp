#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <variant>
#include <vector>

#include "texflow/common.hpp"

namespace texflow {

/// Point of a suspension space over a subshift: a periodic bi-infinite
/// word given by a repeating block plus a phase offset, and a fiber
/// height in [0, roof). Coordinate i of the sequence is
/// word[(i + phase) mod L].
struct SymbolicPoint {
    std::vector<std::uint8_t> word;
    int phase = 0;
    double height = 0.0;

    int block_length() const { return static_cast<int>(word.size()); }

    std::uint8_t at(long long i) const {
        const long long L = static_cast<long long>(word.size());
        long long k = (i + phase) % L;
        if (k < 0) k += L;
        return word[static_cast<std::size_t>(k)];
    }
};

using VecPoint = Eigen::VectorXd;

/// A point of any fixture space: a finite real vector or a symbolic
/// cylinder representative.
struct Point {
    std::variant<VecPoint, SymbolicPoint> value;

    Point() : value(VecPoint()) {}
    Point(VecPoint v) : value(std::move(v)) {}
    Point(SymbolicPoint s) : value(std::move(s)) {}

    bool is_vector() const { return std::holds_alternative<VecPoint>(value); }
    bool is_symbolic() const { return std::holds_alternative<SymbolicPoint>(value); }

    const VecPoint& vec() const {
        if (!is_vector()) throw InvalidArgument("Point: expected vector coordinates");
        return std::get<VecPoint>(value);
    }
    const SymbolicPoint& sym() const {
        if (!is_symbolic()) throw InvalidArgument("Point: expected symbolic coordinates");
        return std::get<SymbolicPoint>(value);
    }

    static Point of(std::initializer_list<double> xs) {
        VecPoint v(static_cast<Eigen::Index>(xs.size()));
        Eigen::Index i = 0;
        for (double x : xs) v[i++] = x;
        return Point(std::move(v));
    }

    /// True if all coordinates are finite (vector) / height finite (symbolic).
    bool finite() const;
};

/// Length of the longest common central block of two periodic sequences.
/// A block of length m occupies coordinates {-floor(m/2), ..., ceil(m/2)-1}.
/// Returns `cap` if the sequences agree on the whole scanned window, which
/// for cap >= La+Lb means they are equal as bi-infinite sequences.
int common_central_block(const SymbolicPoint& a, const SymbolicPoint& b, int cap);

/// 2^-k symbolic metric, k the longest common central block length.
/// Equal sequences have distance 0.
double symbolic_distance(const SymbolicPoint& a, const SymbolicPoint& b);

/// Bowen-Walters-style surrogate: max(symbolic distance, |height difference|).
double suspension_distance(const SymbolicPoint& a, const SymbolicPoint& b);

}  // namespace texflow
