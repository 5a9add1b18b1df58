#pragma once

// Central numeric tolerances shared by the library, the solver defaults and
// the test suite. Keeping them in one place guarantees that a test checking
// an invariant uses exactly the bound the constructors enforce.
namespace pio::tol {

// Unit-norm requirement on state vectors.
inline constexpr double norm = 1e-12;

// Gram-matrix-vs-identity requirement on orthonormal bases.
inline constexpr double orthonormality = 1e-10;

// Probability vectors: entry range slack and deviation of the sum from 1.
inline constexpr double prob_sum = 1e-10;

// Modulus below which an amplitude counts as zero. Used both by ray
// canonicalization (first nonzero component) and by the imposition rule
// that substitutes unit phase for an undefined one.
inline constexpr double zero_amplitude = 1e-9;

// Agreement required between synthesized targets and a retained generator.
inline constexpr double born_match = 1e-10;

} // namespace pio::tol
