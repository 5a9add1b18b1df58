#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include "pio/rng.hpp"
#include "pio/tolerances.hpp"

namespace pio {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Thrown when operands live in spaces of different dimension. Kept as a
// distinct type so the CLI can map it to its own exit code.
struct dim_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

// Multiplies v by the global phase that makes its first component of
// modulus above the zero threshold real and nonnegative. Exact no-op when
// the vector is already in that form, so the operation is idempotent at the
// bit level.
inline CVec canonical_phase(CVec v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        double m = std::abs(v[k]);
        if (m > tol::zero_amplitude) {
            if (v[k].imag() == 0.0 && v[k].real() >= 0.0) return v;
            cplx phase = std::conj(v[k]) / m;
            v *= phase;
            v[k] = cplx(m, 0.0); // force the pivot exactly real
            return v;
        }
    }
    throw std::invalid_argument("cannot fix ray phase of an all-zero vector");
}

} // namespace detail

// Unit vector in C^d representing a physical pure state. Instances are kept
// in canonical ray form: the first component of modulus above the zero
// threshold is real and nonnegative, so equal rays compare equal as vectors
// (up to round-off) regardless of how they were produced.
class PureState {
  public:
    // Requires a vector already normalized to tolerance. The amplitudes are
    // phase-canonicalized but not rescaled: rescaling would perturb the bits
    // of vectors that are already in canonical form, breaking the byte-exact
    // serialization round-trip. Vectors of unknown norm go through
    // normalized() instead.
    explicit PureState(CVec amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.size() < 2)
            throw std::invalid_argument("state dimension must be at least 2");
        double n = amps_.norm();
        if (std::abs(n - 1.0) > tol::norm)
            throw std::invalid_argument("state vector is not unit norm (|norm-1| = " +
                                        std::to_string(std::abs(n - 1.0)) + ")");
        amps_ = detail::canonical_phase(std::move(amps_));
    }

    // Normalizes an arbitrary nonzero vector first. Entry point for
    // freshly synthesized vectors (random draws, imposition output).
    static PureState normalized(CVec v) {
        double n = v.norm();
        if (!(n > 0.0))
            throw std::invalid_argument("cannot normalize a zero vector");
        v /= n;
        return PureState(std::move(v));
    }

    int dim() const { return static_cast<int>(amps_.size()); }
    const CVec& amplitudes() const { return amps_; }
    cplx operator[](int k) const { return amps_[k]; }

  private:
    CVec amps_;
};

// Probability distribution over d measurement outcomes.
class ProbDist {
  public:
    explicit ProbDist(Eigen::VectorXd probs) : p_(std::move(probs)) {
        if (p_.size() < 1) throw std::invalid_argument("empty probability vector");
        double sum = 0.0;
        for (Eigen::Index k = 0; k < p_.size(); ++k) {
            if (p_[k] < -tol::prob_sum || p_[k] > 1.0 + tol::prob_sum)
                throw std::invalid_argument("probability entry out of [0,1]");
            p_[k] = std::min(std::max(p_[k], 0.0), 1.0);
            sum += p_[k];
        }
        if (std::abs(sum - 1.0) > tol::prob_sum)
            throw std::invalid_argument("probabilities sum to " + std::to_string(sum) +
                                        ", not 1");
    }

    int size() const { return static_cast<int>(p_.size()); }
    double operator[](int k) const { return p_[k]; }
    const Eigen::VectorXd& vec() const { return p_; }

  private:
    Eigen::VectorXd p_;
};

// Orthonormal basis of C^d standing in for a Von Neumann observable; only
// the eigenvectors matter for reconstruction, never the eigenvalues.
class ObservableBasis {
  public:
    explicit ObservableBasis(CMat vectors, std::string label = "")
        : m_(std::move(vectors)), label_(std::move(label)) {
        if (m_.rows() < 2 || m_.rows() != m_.cols())
            throw std::invalid_argument("basis must be square with dimension >= 2");
        CMat gram = m_.adjoint() * m_;
        double dev = (gram - CMat::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff();
        if (dev > tol::orthonormality)
            throw std::invalid_argument("basis is not orthonormal (max Gram deviation " +
                                        std::to_string(dev) + ")");
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMat& matrix() const { return m_; }
    CVec vector(int k) const { return m_.col(k); }
    const std::string& label() const { return label_; }

  private:
    CMat m_;
    std::string label_;
};

inline void require_same_dim(int a, int b, const char* what) {
    if (a != b)
        throw dim_mismatch(std::string(what) + ": dimensions " + std::to_string(a) +
                           " and " + std::to_string(b) + " differ");
}

// Hilbert inner product, conjugate-linear in the first argument.
inline cplx inner(const PureState& a, const PureState& b) {
    require_same_dim(a.dim(), b.dim(), "inner");
    return a.amplitudes().dot(b.amplitudes());
}

// Outcome distribution of measuring `state` in `basis`: p_k = |<phi_k, state>|^2.
inline ProbDist born_probabilities(const ObservableBasis& basis, const PureState& state) {
    require_same_dim(basis.dim(), state.dim(), "born_probabilities");
    Eigen::VectorXd p = (basis.matrix().adjoint() * state.amplitudes()).cwiseAbs2();
    return ProbDist(std::move(p));
}

// Returns the canonical ray representative e^{i a} * state.
inline PureState canonicalize_ray(const PureState& state) {
    // PureState maintains canonical form as an invariant already; this is
    // the explicit entry point for vectors coming from outside.
    return state;
}

inline PureState canonicalize_ray(CVec v) {
    return PureState::normalized(std::move(v));
}

// Haar-uniform random ray: 2d independent standard normals as real and
// imaginary parts, then normalize. Draw order is component-major
// (re_0, im_0, re_1, im_1, ...), fixed as part of the determinism contract.
inline PureState random_state(int dim, RandomStream& rng) {
    if (dim < 2) throw std::invalid_argument("random_state requires dim >= 2");
    CVec v(dim);
    for (int k = 0; k < dim; ++k) v[k] = rng.normal_complex();
    return PureState::normalized(std::move(v));
}

// Haar-distributed random orthonormal basis: QR of a complex Ginibre matrix
// with the phase convention that makes the diagonal of R real positive
// (otherwise the QR factorization, not the Haar measure, would pick the
// column phases). Entries are drawn column by column.
inline ObservableBasis random_basis(int dim, RandomStream& rng) {
    if (dim < 2) throw std::invalid_argument("random_basis requires dim >= 2");
    CMat g(dim, dim);
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r) g(r, c) = rng.normal_complex();
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < dim; ++c) {
        cplx d = r(c, c);
        double m = std::abs(d);
        q.col(c) *= (m > 0.0) ? d / m : cplx(1.0, 0.0);
    }
    return ObservableBasis(std::move(q), "random");
}

} // namespace pio
