// moments.hpp
//
// Moment algebra shared by the whole library: normalized trace moments of
// Hermitian matrices, Newton-Girard conversion from power sums to elementary
// symmetric polynomials, and channel capacity evaluated directly from a
// moment description of the spectrum (the eigenvalues themselves are never
// computed on the estimation path).

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace freemimo {

// Ordered list of normalized trace moments (m_1 ... m_P) of a positive
// measure or Hermitian matrix. Estimated vectors may violate measure
// constraints (e.g. negative entries); only finiteness is ever asserted.
struct MomentVector {
    std::vector<double> values;  // values[j-1] holds m_j

    MomentVector() = default;
    explicit MomentVector(std::vector<double> v) : values(std::move(v)) {}
    static MomentVector zeros(std::size_t order) { return MomentVector(std::vector<double>(order, 0.0)); }

    std::size_t order() const { return values.size(); }

    // 1-based accessors matching the m_j notation.
    double m(std::size_t j) const { return values.at(j - 1); }
    double& m(std::size_t j) { return values.at(j - 1); }

    bool all_finite() const;
};

// Elementary symmetric polynomial values (Pi_1 ... Pi_r) of the r nonzero
// eigenvalues of a rank-r spectrum, in eigenvalue powers of H H^H / m.
struct SpectrumEstimate {
    std::vector<double> elementary;  // elementary[k-1] holds Pi_k
    int rank() const { return static_cast<int>(elementary.size()); }
};

// Capacity value plus a diagnostic for the log-argument floor.
struct CapacityValue {
    double bits_per_antenna = 0.0;
    bool clamped = false;  // set when the polynomial argument fell below the floor
};

// Floor for the capacity log argument; estimated spectra can push the
// argument negative, and the floor keeps Monte Carlo averages finite.
inline constexpr double kCapacityArgFloor = 1e-12;

// values[j-1] = (1/n) Tr(M^j), computed by repeated matrix products.
// Throws std::invalid_argument for a non-square or non-Hermitian (tolerance
// 1e-10) input or order < 1.
MomentVector trace_moments(const Eigen::MatrixXcd& M, int order);

// Newton-Girard: power sums S_1..S_r -> elementary symmetric Pi_1..Pi_r,
// r in {1,2,3,4}:
//   Pi_1 = S_1
//   Pi_2 = (S_1^2 - S_2) / 2
//   Pi_3 = (S_1^3 - 3 S_1 S_2 + 2 S_3) / 6
//   Pi_4 = (S_1^4 - 6 S_1^2 S_2 + 3 S_2^2 + 8 S_1 S_3 - 6 S_4) / 24
// Throws std::invalid_argument for r outside {1..4}.
SpectrumEstimate power_sums_to_elementary(const std::vector<double>& power_sums);

// log2 det(I + A) for Hermitian positive semidefinite A, via Cholesky of
// I + A. The definitional capacity path (and the reference the moment path
// is tested against). Throws std::invalid_argument for a non-square input.
double log2_det_identity_plus(const Eigen::MatrixXcd& A);

// C = (1/n) log2(max(1 + sum_k Pi_k / sigma2^k, floor)), in bits/s/Hz per
// receive antenna. The value may be negative when the (estimated) argument
// lands in (floor, 1); callers that must report a nonnegative capacity clamp
// at their level. Throws std::invalid_argument for sigma2 <= 0 or n < 1.
CapacityValue capacity_from_spectrum(const SpectrumEstimate& spectrum, double sigma2, int n);

// Low-SNR series: (1/ln 2) * sum_{k=1}^{K} (-1)^{k+1} m_k rho^k / k.
// Diagnostic only; the series radius is not checked. Throws
// std::invalid_argument when K exceeds the available order or K < 1.
double capacity_taylor(const MomentVector& moments, double rho, int terms);

}  // namespace freemimo
