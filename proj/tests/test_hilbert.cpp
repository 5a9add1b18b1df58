#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "pio/hilbert.hpp"

using namespace pio;

namespace {

PureState basis_state(int dim, int k) {
    CVec v = CVec::Zero(dim);
    v[k] = 1.0;
    return PureState(std::move(v));
}

} // namespace

TEST_CASE("inner product identities on basis states", "[hilbert]") {
    PureState e0 = basis_state(2, 0);
    PureState e1 = basis_state(2, 1);
    CHECK(std::abs(inner(e0, e0) - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(inner(e0, e1)) < 1e-15);
}

TEST_CASE("inner product of a basis state with a balanced state", "[hilbert]") {
    PureState e0 = basis_state(2, 0);
    const double s = 1.0 / std::sqrt(2.0);
    CVec v(2);
    v << cplx(s, 0), cplx(s, 0);
    PureState plus(std::move(v));
    // Frozen by hand: 1/sqrt(2).
    CHECK(std::abs(inner(e0, plus) - cplx(0.7071067811865476, 0)) < 1e-12);
}

TEST_CASE("inner product is conjugate-linear in its first argument", "[hilbert]") {
    RandomStream rng(11, 0);
    PureState a = random_state(3, rng);
    PureState b = random_state(3, rng);
    CHECK(std::abs(inner(a, b) - std::conj(inner(b, a))) < 1e-14);
    CHECK(std::abs(inner(a, b)) <= 1.0 + 1e-12);
}

TEST_CASE("inner product rejects mismatched dimensions", "[hilbert]") {
    RandomStream rng(11, 1);
    PureState a = random_state(2, rng);
    PureState b = random_state(3, rng);
    CHECK_THROWS_AS(inner(a, b), dim_mismatch);
}

TEST_CASE("born probabilities of an eigenvector are a delta", "[hilbert]") {
    ObservableBasis standard(CMat::Identity(2, 2), "standard");
    ProbDist p = born_probabilities(standard, basis_state(2, 0));
    CHECK(p[0] == Catch::Approx(1.0).margin(1e-15));
    CHECK(p[1] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("born probabilities of an unbiased vector are uniform", "[hilbert]") {
    const double s = 1.0 / std::sqrt(2.0);
    CMat by(2, 2);
    by << cplx(s, 0), cplx(s, 0), cplx(s, 0), cplx(-s, 0);
    ObservableBasis basis(by, "balanced");
    ProbDist p = born_probabilities(basis, basis_state(2, 0));
    CHECK(p[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(p[1] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("born probabilities sum to one on random draws", "[hilbert]") {
    RandomStream rng(12, 0);
    for (int rep = 0; rep < 50; ++rep) {
        ObservableBasis b = random_basis(4, rng);
        PureState s = random_state(4, rng);
        ProbDist p = born_probabilities(b, s);
        double total = 0.0;
        for (int k = 0; k < 4; ++k) {
            total += p[k];
            CHECK(p[k] >= 0.0);
        }
        CHECK(total == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("born probabilities ignore the global phase of the state", "[hilbert]") {
    RandomStream rng(13, 0);
    for (int rep = 0; rep < 20; ++rep) {
        ObservableBasis b = random_basis(3, rng);
        CVec raw(3);
        for (int k = 0; k < 3; ++k) raw[k] = rng.normal_complex();
        raw.normalize();
        double alpha = rng.uniform(0.0, 6.28);
        CVec rotated = raw * cplx(std::cos(alpha), std::sin(alpha));
        ProbDist p = born_probabilities(b, PureState(raw));
        ProbDist q = born_probabilities(b, PureState(rotated));
        for (int k = 0; k < 3; ++k)
            CHECK(p[k] == Catch::Approx(q[k]).margin(1e-12));
    }
}

TEST_CASE("ray canonicalization removes a global phase", "[hilbert]") {
    CVec v(2);
    v << cplx(0, 1), cplx(0, 0);
    PureState s(std::move(v));
    CHECK(s[0] == cplx(1, 0));
    CHECK(s[1] == cplx(0, 0));

    CVec w(2);
    w << cplx(0, 0), cplx(-1, 0);
    PureState t(std::move(w));
    CHECK(t[0] == cplx(0, 0));
    CHECK(t[1] == cplx(1, 0));
}

TEST_CASE("ray canonicalization is exactly idempotent", "[hilbert]") {
    RandomStream rng(14, 0);
    for (int rep = 0; rep < 50; ++rep) {
        PureState s = random_state(4, rng);
        PureState again(s.amplitudes());
        for (int k = 0; k < 4; ++k) {
            CHECK(again[k].real() == s[k].real());
            CHECK(again[k].imag() == s[k].imag());
        }
        PureState via_op = canonicalize_ray(s);
        for (int k = 0; k < 4; ++k) CHECK(via_op[k] == s[k]);
    }
}

TEST_CASE("canonicalization rejects the zero vector", "[hilbert]") {
    CHECK_THROWS_AS(PureState::normalized(CVec::Zero(3)), std::invalid_argument);
}

TEST_CASE("state constructor enforces norm and dimension", "[hilbert]") {
    CVec big(2);
    big << cplx(1, 0), cplx(1, 0);
    CHECK_THROWS_AS(PureState(big), std::invalid_argument);
    CVec one(1);
    one << cplx(1, 0);
    CHECK_THROWS_AS(PureState(one), std::invalid_argument);
}

TEST_CASE("every produced state has unit norm", "[hilbert]") {
    RandomStream rng(15, 0);
    for (int d : {2, 3, 5, 8}) {
        for (int rep = 0; rep < 25; ++rep) {
            PureState s = random_state(d, rng);
            CHECK(std::abs(s.amplitudes().norm() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("random states are reproducible from the seed triple", "[hilbert]") {
    RandomStream a(42, 3, 1), b(42, 3, 1), c(42, 4, 1);
    PureState s1 = random_state(5, a);
    PureState s2 = random_state(5, b);
    PureState s3 = random_state(5, c);
    bool same = true, different = false;
    for (int k = 0; k < 5; ++k) {
        same = same && s1[k] == s2[k];
        different = different || s1[k] != s3[k];
    }
    CHECK(same);
    CHECK(different);
}

TEST_CASE("random state moments match the uniform-ray ensemble", "[hilbert]") {
    // For rays drawn uniformly, E|<e0, psi>|^2 = 1/d.
    RandomStream rng(16, 0);
    const int n = 10000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        PureState s = random_state(2, rng);
        acc += std::norm(s[0]);
    }
    CHECK(acc / n == Catch::Approx(0.5).margin(0.02));
}

TEST_CASE("random bases are orthonormal and reproducible", "[hilbert]") {
    RandomStream a(17, 0), b(17, 0);
    for (int d : {2, 3, 6}) {
        ObservableBasis u = random_basis(d, a);
        ObservableBasis v = random_basis(d, b);
        CHECK((u.matrix() - v.matrix()).cwiseAbs().maxCoeff() == 0.0);
        CMat gram = u.matrix().adjoint() * u.matrix();
        CHECK((gram - CMat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("random basis moments match the uniform ensemble", "[hilbert]") {
    // First column of a uniformly random basis is a uniformly random ray.
    RandomStream rng(18, 0);
    const int n = 1000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        ObservableBasis b = random_basis(2, rng);
        acc += std::norm(b.vector(0)[0]);
    }
    CHECK(acc / n == Catch::Approx(0.5).margin(0.05));
}

TEST_CASE("random sampling rejects dimension below 2", "[hilbert]") {
    RandomStream rng(19, 0);
    CHECK_THROWS_AS(random_state(1, rng), std::invalid_argument);
    CHECK_THROWS_AS(random_basis(1, rng), std::invalid_argument);
}

TEST_CASE("basis expansion reproduces the state", "[hilbert]") {
    RandomStream rng(20, 0);
    for (int d : {2, 4, 7}) {
        for (int rep = 0; rep < 20; ++rep) {
            ObservableBasis b = random_basis(d, rng);
            PureState s = random_state(d, rng);
            CVec coeff = b.matrix().adjoint() * s.amplitudes();
            CVec rebuilt = b.matrix() * coeff;
            CHECK((rebuilt - s.amplitudes()).norm() < 1e-10);
        }
    }
}

TEST_CASE("probability vectors validate range and total", "[hilbert]") {
    Eigen::VectorXd neg(2);
    neg << -0.2, 1.2;
    CHECK_THROWS_AS(ProbDist(neg), std::invalid_argument);
    Eigen::VectorXd off(2);
    off << 0.6, 0.6;
    CHECK_THROWS_AS(ProbDist(off), std::invalid_argument);
    Eigen::VectorXd tiny(2);
    tiny << 1.0 + 1e-12, -1e-12;
    ProbDist clamped(tiny); // round-off-level violations are absorbed
    CHECK(clamped[0] <= 1.0);
    CHECK(clamped[1] >= 0.0);
}

TEST_CASE("bases validate orthonormality", "[hilbert]") {
    CMat skew(2, 2);
    skew << cplx(1, 0), cplx(0.5, 0), cplx(0, 0), cplx(1, 0);
    CHECK_THROWS_AS(ObservableBasis(skew), std::invalid_argument);
}

TEST_CASE("born and impose reject mismatched dimensions", "[hilbert]") {
    ObservableBasis standard(CMat::Identity(3, 3));
    RandomStream rng(21, 0);
    PureState s = random_state(2, rng);
    CHECK_THROWS_AS(born_probabilities(standard, s), dim_mismatch);
}
