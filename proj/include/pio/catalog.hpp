#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "pio/hilbert.hpp"

namespace pio {

// A named set of observable eigenbases sharing one dimension, with its
// unbiasedness score (1 = mutually unbiased, 0 = a fully shared basis).
struct BasisFamily {
    std::string name;
    std::vector<ObservableBasis> bases;
    double unbiasedness = 1.0;
};

// How far a family is from being mutually unbiased:
//
//   1 - sum_{j<j'} sum_{k,l} (|<phi^j_k, phi^j'_l>|^2 - 1/d)^2 / (P * (d-1))
//
// where P is the number of basis pairs. The per-pair inner sum ranges over a
// doubly stochastic matrix M: sum (M - 1/d)^2 = sum M^2 - 1, maximized at
// d - 1 when M is a permutation (the bases share every vector), zero exactly
// for an unbiased pair. Hence the score sits in [0,1], MUB families score 1,
// and families sharing a full basis score 0.
inline double unbiasedness(const BasisFamily& family) {
    const auto& bs = family.bases;
    if (bs.size() < 2)
        throw std::invalid_argument("unbiasedness needs at least two bases");
    const int d = bs[0].dim();
    double dev = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < bs.size(); ++i)
        for (std::size_t j = i + 1; j < bs.size(); ++j) {
            require_same_dim(bs[i].dim(), bs[j].dim(), "unbiasedness");
            ++pairs;
            CMat cross = bs[i].matrix().adjoint() * bs[j].matrix();
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double t = std::norm(cross(k, l)) - 1.0 / d;
                    dev += t * t;
                }
        }
    double score = 1.0 - dev / (static_cast<double>(pairs) * (d - 1));
    return std::min(1.0, std::max(0.0, score));
}

// The three qubit measurement bases in their standard printed form:
//   B_x = {(1,0), (0,1)}
//   B_y = {(1,1)/sqrt2, (1,-1)/sqrt2}
//   B_z = {(1,i)/sqrt2, (i,1)/sqrt2}
// These vectors are reproduced verbatim, labels included. Note the labels
// follow the source convention even though (1,0),(0,1) diagonalize the z
// spin component; spin_observable_bases(1) provides the eigenbases computed
// honestly from the matrices when the distinction matters.
inline BasisFamily pauli_bases() {
    const double s = 1.0 / std::sqrt(2.0);
    CMat bx(2, 2), by(2, 2), bz(2, 2);
    bx << cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(1, 0);
    by << cplx(s, 0), cplx(s, 0), cplx(s, 0), cplx(-s, 0);
    bz << cplx(s, 0), cplx(0, s), cplx(0, s), cplx(s, 0);
    BasisFamily fam{"pauli",
                    {ObservableBasis(bx, "B_x"), ObservableBasis(by, "B_y"),
                     ObservableBasis(bz, "B_z")},
                    1.0};
    fam.unbiasedness = unbiasedness(fam);
    return fam;
}

// Angular momentum component matrices for spin j = two_j / 2 in the z
// eigenbasis ordered by ascending magnetic number m = -j..j, built from the
// ladder operators (hbar = 1). Returned in the order {x, y, z}.
inline std::array<CMat, 3> spin_matrices(int two_j) {
    if (two_j < 1 || two_j > 2)
        throw std::invalid_argument("spin matrices available for two_j in {1, 2}");
    const int d = two_j + 1;
    const double j = two_j / 2.0;
    CMat raise = CMat::Zero(d, d);
    for (int k = 0; k + 1 < d; ++k) {
        double m = -j + k;
        raise(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
    }
    CMat lower = raise.adjoint();
    CMat sx = 0.5 * (raise + lower);
    CMat sy = cplx(0.0, -0.5) * (raise - lower);
    CMat sz = CMat::Zero(d, d);
    for (int k = 0; k < d; ++k) sz(k, k) = -j + k;
    return {sx, sy, sz};
}

// Eigenvector bases of the spin component matrices, one basis per component
// in the order {x, y, z}. Columns are sorted by ascending eigenvalue and
// ray-canonicalized so the construction is deterministic.
inline BasisFamily spin_observable_bases(int two_j) {
    auto mats = spin_matrices(two_j);
    const int d = two_j + 1;
    const char* labels[] = {"S_x", "S_y", "S_z"};
    BasisFamily fam;
    fam.name = (two_j == 1) ? "spin-1/2" : "spin-1";
    for (int a = 0; a < 3; ++a) {
        Eigen::SelfAdjointEigenSolver<CMat> es(mats[a]);
        CMat v = es.eigenvectors(); // ascending eigenvalue order
        for (int k = 0; k < d; ++k)
            v.col(k) = detail::canonical_phase(v.col(k));
        fam.bases.emplace_back(std::move(v), labels[a]);
    }
    fam.unbiasedness = unbiasedness(fam);
    return fam;
}

// Discrete Fourier basis, the standard complementary partner of the
// computational basis in any dimension: F_k[n] = e^{2 pi i n k / d} / sqrt d.
inline ObservableBasis fourier_basis(int dim) {
    if (dim < 2) throw std::invalid_argument("fourier_basis requires dim >= 2");
    const double s = 1.0 / std::sqrt(static_cast<double>(dim));
    CMat f(dim, dim);
    for (int k = 0; k < dim; ++k)
        for (int n = 0; n < dim; ++n) {
            double ang = 2.0 * std::numbers::pi * static_cast<double>(n) *
                         static_cast<double>(k) / static_cast<double>(dim);
            f(n, k) = s * cplx(std::cos(ang), std::sin(ang));
        }
    return ObservableBasis(std::move(f), "F_" + std::to_string(dim));
}

// Strict lower bound on the number of rank-one projectors any
// informationally complete measurement needs in dimension d, from the
// three-case formula in alpha = popcount(d - 1).
inline int povm_lower_bound(int dim) {
    if (dim <= 1) throw std::invalid_argument("povm_lower_bound requires dim > 1");
    const int alpha = std::popcount(static_cast<unsigned>(dim - 1));
    if (dim % 2 == 1 && alpha % 4 == 2) return 4 * dim - 2 * alpha - 3;
    if (dim % 2 == 1 && alpha % 4 == 3) return 4 * dim - 2 * alpha - 2;
    return 4 * dim - 2 * alpha - 4;
}

} // namespace pio
