#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <string>

#include "pio/catalog.hpp"
#include "pio/metrics.hpp"

using namespace pio;

namespace {

// Independent oracle for the projector-count lower bound, written before the
// library implementation and kept deliberately different in style: the
// popcount walks a base-2 digit string instead of using bit tricks, and the
// case dispatch is table-driven.
int oracle_ones_in_binary(int n) {
    std::string digits;
    while (n > 0) {
        digits.push_back(static_cast<char>('0' + (n % 2)));
        n /= 2;
    }
    int ones = 0;
    for (char c : digits)
        if (c == '1') ++ones;
    return ones;
}

int oracle_projector_bound(int d) {
    const int alpha = oracle_ones_in_binary(d - 1);
    const bool odd = (d % 2 == 1);
    struct Case {
        bool applies;
        int value;
    };
    // Later rows override earlier ones; the base row always applies.
    const Case cases[] = {
        {true, 4 * d - 2 * alpha - 4},
        {odd && alpha % 4 == 2, 4 * d - 2 * alpha - 3},
        {odd && alpha % 4 == 3, 4 * d - 2 * alpha - 2},
    };
    int out = 0;
    for (const Case& c : cases)
        if (c.applies) out = c.value;
    return out;
}

// Hand-evaluated values, frozen before either implementation existed.
const std::map<int, int> kFrozenBounds = {
    {2, 2},   {3, 6},   {4, 8},   {5, 14},  {6, 16},  {7, 21},
    {8, 22},  {9, 30},  {10, 32}, {11, 37}, {13, 45}, {15, 52},
    {16, 52}, {64, 240},
};

} // namespace

TEST_CASE("projector-count bound oracle matches its frozen hand values", "[catalog]") {
    for (const auto& [d, expected] : kFrozenBounds) {
        INFO("d = " << d);
        CHECK(oracle_projector_bound(d) == expected);
    }
}

TEST_CASE("povm_lower_bound agrees with the independent oracle for d in 2..64",
          "[catalog]") {
    for (int d = 2; d <= 64; ++d) {
        INFO("d = " << d);
        CHECK(povm_lower_bound(d) == oracle_projector_bound(d));
    }
}

TEST_CASE("povm_lower_bound reproduces the frozen hand values", "[catalog]") {
    for (const auto& [d, expected] : kFrozenBounds) {
        INFO("d = " << d);
        CHECK(povm_lower_bound(d) == expected);
    }
}

TEST_CASE("povm_lower_bound rejects dimensions below 2", "[catalog]") {
    CHECK_THROWS_AS(povm_lower_bound(1), std::invalid_argument);
    CHECK_THROWS_AS(povm_lower_bound(0), std::invalid_argument);
    CHECK_THROWS_AS(povm_lower_bound(-3), std::invalid_argument);
}

TEST_CASE("qubit catalog bases carry the standard printed vectors", "[catalog]") {
    BasisFamily fam = pauli_bases();
    REQUIRE(fam.bases.size() == 3);
    CHECK(fam.name == "pauli");

    const ObservableBasis& bx = fam.bases[0];
    const ObservableBasis& by = fam.bases[1];
    const ObservableBasis& bz = fam.bases[2];
    const double s = 1.0 / std::sqrt(2.0);

    CHECK(bx.vector(0)[0] == cplx(1, 0));
    CHECK(bx.vector(0)[1] == cplx(0, 0));
    CHECK(bx.vector(1)[0] == cplx(0, 0));
    CHECK(bx.vector(1)[1] == cplx(1, 0));

    CHECK(by.vector(0)[0] == cplx(s, 0));
    CHECK(by.vector(0)[1] == cplx(s, 0));
    CHECK(by.vector(1)[0] == cplx(s, 0));
    CHECK(by.vector(1)[1] == cplx(-s, 0));

    CHECK(bz.vector(0)[0] == cplx(s, 0));
    CHECK(bz.vector(0)[1] == cplx(0, s));
    CHECK(bz.vector(1)[0] == cplx(0, s));
    CHECK(bz.vector(1)[1] == cplx(s, 0));

    CHECK(bx.label() == "B_x");
    CHECK(by.label() == "B_y");
    CHECK(bz.label() == "B_z");
}

TEST_CASE("qubit catalog bases are pairwise mutually unbiased", "[catalog]") {
    BasisFamily fam = pauli_bases();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    cplx ov = fam.bases[i].vector(k).dot(fam.bases[j].vector(l));
                    CHECK(std::abs(std::norm(ov) - 0.5) < 1e-12);
                }
        }
    CHECK(fam.unbiasedness == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("spin matrices are consistent with their emitted eigenbases", "[catalog]") {
    for (int two_j : {1, 2}) {
        const int d = two_j + 1;
        auto mats = spin_matrices(two_j);
        BasisFamily fam = spin_observable_bases(two_j);
        REQUIRE(fam.bases.size() == 3);
        for (int a = 0; a < 3; ++a) {
            const CMat& s = mats[a];
            const ObservableBasis& basis = fam.bases[a];
            // Hermiticity, and each emitted column is an eigenvector whose
            // eigenvalue is the Rayleigh quotient.
            CHECK((s - s.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
            for (int k = 0; k < d; ++k) {
                CVec v = basis.vector(k);
                cplx lam = v.dot(s * v);
                CHECK(std::abs(lam.imag()) < 1e-12);
                CHECK((s * v - lam * v).norm() < 1e-10);
            }
        }
    }
}

TEST_CASE("spin eigenvalues are the expected ladder values", "[catalog]") {
    // two_j = 2: eigenvalues of every component are {-1, 0, 1} (in units
    // where hbar = 1), emitted in ascending order.
    auto mats = spin_matrices(2);
    BasisFamily fam = spin_observable_bases(2);
    for (int a = 0; a < 3; ++a) {
        for (int k = 0; k < 3; ++k) {
            CVec v = fam.bases[a].vector(k);
            double lam = v.dot(mats[a] * v).real();
            CHECK(lam == Catch::Approx(static_cast<double>(k - 1)).margin(1e-10));
        }
    }
    // two_j = 1: eigenvalues are {-1/2, +1/2}.
    auto half = spin_matrices(1);
    BasisFamily famh = spin_observable_bases(1);
    for (int a = 0; a < 3; ++a)
        for (int k = 0; k < 2; ++k) {
            CVec v = famh.bases[a].vector(k);
            double lam = v.dot(half[a] * v).real();
            CHECK(lam == Catch::Approx(k == 0 ? -0.5 : 0.5).margin(1e-10));
        }
}

TEST_CASE("spin-1/2 eigenbases are pairwise unbiased", "[catalog]") {
    BasisFamily fam = spin_observable_bases(1);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    cplx ov = fam.bases[i].vector(k).dot(fam.bases[j].vector(l));
                    CHECK(std::abs(std::norm(ov) - 0.5) < 1e-10);
                }
}

TEST_CASE("spin-1 z eigenbasis is the standard basis", "[catalog]") {
    BasisFamily fam = spin_observable_bases(2);
    const ObservableBasis& sz = fam.bases[2];
    CHECK((sz.matrix() - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spin_observable_bases rejects unsupported spins", "[catalog]") {
    CHECK_THROWS_AS(spin_observable_bases(0), std::invalid_argument);
    CHECK_THROWS_AS(spin_observable_bases(3), std::invalid_argument);
}

TEST_CASE("fourier basis columns are the normalized roots of unity", "[catalog]") {
    for (int d = 2; d <= 12; ++d) {
        ObservableBasis f = fourier_basis(d);
        const double s = 1.0 / std::sqrt(static_cast<double>(d));
        for (int k = 0; k < d; ++k)
            for (int n = 0; n < d; ++n) {
                double ang = 2.0 * std::numbers::pi * n * k / d;
                CHECK(std::abs(f.vector(k)[n] - s * cplx(std::cos(ang), std::sin(ang))) <
                      1e-12);
            }
    }
}

TEST_CASE("fourier basis is unbiased to the standard basis", "[catalog]") {
    for (int d = 2; d <= 12; ++d) {
        ObservableBasis f = fourier_basis(d);
        for (int k = 0; k < d; ++k)
            for (int n = 0; n < d; ++n)
                CHECK(std::abs(std::norm(f.vector(k)[n]) - 1.0 / d) < 1e-12);
    }
}

TEST_CASE("fourier d=2 matches the second qubit catalog basis up to column phases",
          "[catalog]") {
    ObservableBasis f = fourier_basis(2);
    BasisFamily fam = pauli_bases();
    const ObservableBasis& by = fam.bases[1];
    for (int k = 0; k < 2; ++k) {
        cplx ov = f.vector(k).dot(by.vector(k));
        CHECK(std::abs(std::abs(ov) - 1.0) < 1e-12);
    }
}

TEST_CASE("unbiasedness scores a MUB family at 1 and a repeated basis below 1",
          "[catalog]") {
    BasisFamily fam = pauli_bases();
    CHECK(unbiasedness(fam) == Catch::Approx(1.0).margin(1e-12));

    BasisFamily repeated{"repeated", {fam.bases[0], fam.bases[0]}, 0.0};
    CHECK(unbiasedness(repeated) < 1.0);

    // Sharing a full basis is the worst case of the normalizer: the score
    // hits exactly 0.
    CHECK(unbiasedness(repeated) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("unbiasedness of random families stays in [0,1]", "[catalog]") {
    RandomStream rng(20260822, 7);
    for (int rep = 0; rep < 20; ++rep) {
        BasisFamily fam{"random-pair",
                        {random_basis(4, rng), random_basis(4, rng)},
                        0.0};
        double u = unbiasedness(fam);
        CHECK(u >= 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("unbiasedness requires at least two bases", "[catalog]") {
    BasisFamily one{"single", {pauli_bases().bases[0]}, 1.0};
    CHECK_THROWS_AS(unbiasedness(one), std::invalid_argument);
}

TEST_CASE("every catalog basis passes strict orthonormality", "[catalog]") {
    auto check_family = [](const BasisFamily& fam) {
        for (const auto& b : fam.bases) {
            CMat gram = b.matrix().adjoint() * b.matrix();
            CHECK((gram - CMat::Identity(b.dim(), b.dim())).cwiseAbs().maxCoeff() <
                  1e-12);
        }
    };
    check_family(pauli_bases());
    check_family(spin_observable_bases(1));
    check_family(spin_observable_bases(2));
    for (int d = 2; d <= 12; ++d) {
        ObservableBasis f = fourier_basis(d);
        CMat gram = f.matrix().adjoint() * f.matrix();
        CHECK((gram - CMat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    }
}
