// moments.cpp
//
// Trace moments, Newton-Girard conversion, and moment-based capacity.

#include "freemimo/moments.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace freemimo {

bool MomentVector::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

MomentVector trace_moments(const Eigen::MatrixXcd& M, int order) {
    if (order < 1) throw std::invalid_argument("trace_moments: order must be >= 1");
    if (M.rows() != M.cols()) throw std::invalid_argument("trace_moments: matrix must be square");
    if (M.rows() == 0) throw std::invalid_argument("trace_moments: matrix must be nonempty");
    if ((M - M.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("trace_moments: matrix must be Hermitian");

    const double n = static_cast<double>(M.rows());
    MomentVector out = MomentVector::zeros(static_cast<std::size_t>(order));
    Eigen::MatrixXcd power = M;
    for (int j = 1; j <= order; ++j) {
        out.m(static_cast<std::size_t>(j)) = power.trace().real() / n;
        if (j < order) power = power * M;
    }
    return out;
}

SpectrumEstimate power_sums_to_elementary(const std::vector<double>& power_sums) {
    const std::size_t r = power_sums.size();
    if (r < 1 || r > 4)
        throw std::invalid_argument("power_sums_to_elementary: rank must be in {1, 2, 3, 4}");

    const double s1 = power_sums[0];
    SpectrumEstimate spectrum;
    spectrum.elementary.resize(r);
    spectrum.elementary[0] = s1;
    if (r >= 2) {
        const double s2 = power_sums[1];
        spectrum.elementary[1] = (s1 * s1 - s2) / 2.0;
        if (r >= 3) {
            const double s3 = power_sums[2];
            spectrum.elementary[2] = (s1 * s1 * s1 - 3.0 * s1 * s2 + 2.0 * s3) / 6.0;
            if (r >= 4) {
                const double s4 = power_sums[3];
                spectrum.elementary[3] = (s1 * s1 * s1 * s1 - 6.0 * s1 * s1 * s2 + 3.0 * s2 * s2 +
                                          8.0 * s1 * s3 - 6.0 * s4) /
                                         24.0;
            }
        }
    }
    return spectrum;
}

double log2_det_identity_plus(const Eigen::MatrixXcd& A) {
    if (A.rows() != A.cols())
        throw std::invalid_argument("log2_det_identity_plus: matrix must be square");
    const Eigen::MatrixXcd shifted =
        Eigen::MatrixXcd::Identity(A.rows(), A.cols()) + (A + A.adjoint()) / 2.0;
    const Eigen::LLT<Eigen::MatrixXcd> llt(shifted);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < shifted.rows(); ++i)
        log_det += 2.0 * std::log(std::real(llt.matrixL()(i, i)));
    return log_det / std::log(2.0);
}

CapacityValue capacity_from_spectrum(const SpectrumEstimate& spectrum, double sigma2, int n) {
    if (sigma2 <= 0.0) throw std::invalid_argument("capacity_from_spectrum: sigma2 must be > 0");
    if (n < 1) throw std::invalid_argument("capacity_from_spectrum: n must be >= 1");

    double arg = 1.0;
    double inv_pow = 1.0;
    for (double pi_k : spectrum.elementary) {
        inv_pow /= sigma2;
        arg += pi_k * inv_pow;
    }

    CapacityValue result;
    if (arg < kCapacityArgFloor) {
        arg = kCapacityArgFloor;
        result.clamped = true;
    }
    result.bits_per_antenna = std::log2(arg) / static_cast<double>(n);
    return result;
}

double capacity_taylor(const MomentVector& moments, double rho, int terms) {
    if (terms < 1) throw std::invalid_argument("capacity_taylor: terms must be >= 1");
    if (static_cast<std::size_t>(terms) > moments.order())
        throw std::invalid_argument("capacity_taylor: terms exceeds available moment order");

    double sum = 0.0;
    double rho_pow = 1.0;
    for (int k = 1; k <= terms; ++k) {
        rho_pow *= rho;
        const double term = moments.m(static_cast<std::size_t>(k)) * rho_pow / static_cast<double>(k);
        sum += (k % 2 == 1) ? term : -term;
    }
    return sum / std::log(2.0);
}

}  // namespace freemimo
