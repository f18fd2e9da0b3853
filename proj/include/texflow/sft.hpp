#pragma once

#include <Eigen/Dense>

#include "texflow/common.hpp"

namespace texflow {

/// Subshift of finite type with a constant roof, the base of the
/// suspension-flow fixtures. adjacency(i, j) == 1 allows symbol j after i.
struct SFT {
    int alphabet = 2;
    Eigen::MatrixXi adjacency;
    double roof = 1.0;

    void validate() const {
        if (alphabet < 1 || adjacency.rows() != alphabet || adjacency.cols() != alphabet)
            throw InvalidArgument("SFT: adjacency must be alphabet x alphabet");
        if (!(roof > 0)) throw InvalidArgument("SFT: roof must be positive");
        if (adjacency.sum() == 0) throw InvalidArgument("SFT: no allowed transition");
    }

    static SFT full_shift(int m, double roof_seconds = 1.0) {
        SFT s;
        s.alphabet = m;
        s.adjacency = Eigen::MatrixXi::Ones(m, m);
        s.roof = roof_seconds;
        return s;
    }

    static SFT golden_mean(double roof_seconds = 1.0) {
        SFT s;
        s.alphabet = 2;
        s.adjacency.resize(2, 2);
        s.adjacency << 1, 1, 1, 0;
        s.roof = roof_seconds;
        return s;
    }
};

}  // namespace texflow
