// mp_transforms.hpp
//
// The Marchenko-Pastur family mu_c (density, atom, moments, free cumulants
// 1, c, c^2, ...) and the four moment-space transforms used by the
// estimators: multiplicative free convolution with mu_c, its deconvolution,
// and the additive convolution/deconvolution with a point mass. Orders up to
// 4 follow the closed forms; orders 5..8 go through non-crossing partition
// enumeration with the mu_c cumulant sequence.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "freemimo/moments.hpp"

namespace freemimo {

inline constexpr int kMaxTransformOrder = 8;

// Marchenko-Pastur law with ratio c: continuous part supported on
// [(1-sqrt(c))^2, (1+sqrt(c))^2] plus an atom of mass (1 - 1/c)^+ at zero.
struct MPLaw {
    double c;
    double lower_edge;
    double upper_edge;
    double atom_at_zero;
    explicit MPLaw(double ratio);
};

// Density of the continuous part of mu_c at x:
// sqrt((x-a)^+ (b-x)^+) / (2 pi c x) for x > 0, else 0.
// Throws std::invalid_argument for c <= 0.
double mp_density(double c, double x);

// First `order` moments of mu_c (order <= 8). The first four equal
// (1, c+1, c^2+3c+1, c^3+6c^2+6c+1); all orders are computed by summing
// c^(order - #blocks) over non-crossing partitions. c = 0 degenerates to the
// point mass at 1 (all moments 1). Throws std::invalid_argument for order
// outside [1, 8] or c < 0.
MomentVector mp_moments(double c, int order);

// Moments of eta x| mu_c (multiplicative free convolution) from the moments
// of eta. Orders 1..4 use the closed forms
//   M1 = m1
//   M2 = m2 + c m1^2
//   M3 = m3 + 3c m1 m2 + c^2 m1^3
//   M4 = m4 + 4c m1 m3 + 2c m2^2 + 6c^2 m1^2 m2 + c^3 m1^4
// (the common factor c of the raw identities cancelled, so c = 0 is the
// identity); orders 5..8 use the combinatorial path.
MomentVector mult_conv_mp(const MomentVector& m, double c);

// Inverse of mult_conv_mp at the moment level. Orders 1..4:
//   m1 = M1
//   m2 = M2 - c M1^2
//   m3 = M3 - 3c M1 M2 + 2c^2 M1^3
//   m4 = M4 - 4c M1 M3 - 2c M2^2 + 10c^2 M1^2 M2 - 5c^3 M1^4
// Polynomial formulas; no division occurs at these orders.
MomentVector mult_deconv_mp(const MomentVector& M, double c);

// Moments of the t-shifted measure (additive convolution with a point mass
// at t; negative t deconvolves): out_k = sum_{j=0}^{k} C(k,j) m_j t^(k-j)
// with m_0 = 1. Exact at any order.
MomentVector add_conv_dirac(const MomentVector& m, double t);

// --- non-crossing partition machinery (shared with tests) ---------------

// One block-size profile of non-crossing partitions of {1..p}: all
// partitions sharing the same multiset of block sizes, with multiplicity.
struct NcSizeProfile {
    std::vector<int> block_sizes;  // descending, sums to p
    std::int64_t count;            // number of non-crossing partitions with these sizes
};

// Cached profiles for 1 <= p <= 8.
const std::vector<NcSizeProfile>& nc_size_profiles(int p);

// Number of non-crossing partitions of {1..p} (the Catalan numbers).
std::int64_t nc_partition_count(int p);

// Generic-scalar transform cores, exposed so tests can run them in exact
// rational arithmetic. moments[j-1] = m_j. T needs +,-,*,= and construction
// from int.
template <typename T>
std::vector<T> mult_conv_nc(const std::vector<T>& moments, const T& c) {
    const int order = static_cast<int>(moments.size());
    if (order < 1 || order > kMaxTransformOrder)
        throw std::invalid_argument("mult_conv_nc: order must be in [1, 8]");
    std::vector<T> out(moments.size(), T(0));
    for (int p = 1; p <= order; ++p) {
        T acc(0);
        for (const NcSizeProfile& profile : nc_size_profiles(p)) {
            T term(static_cast<int>(profile.count));
            // c^(#blocks - 1) * product of m_{block size}
            for (std::size_t b = 1; b < profile.block_sizes.size(); ++b) term = term * c;
            for (int size : profile.block_sizes) term = term * moments[static_cast<std::size_t>(size - 1)];
            acc = acc + term;
        }
        out[static_cast<std::size_t>(p - 1)] = acc;
    }
    return out;
}

// Triangular inverse of mult_conv_nc: the only profile touching m_p is the
// single-block partition, with unit coefficient, so forward substitution
// solves order by order.
template <typename T>
std::vector<T> mult_deconv_nc(const std::vector<T>& convolved, const T& c) {
    const int order = static_cast<int>(convolved.size());
    if (order < 1 || order > kMaxTransformOrder)
        throw std::invalid_argument("mult_deconv_nc: order must be in [1, 8]");
    std::vector<T> m(convolved.size(), T(0));
    for (int p = 1; p <= order; ++p) {
        T lower(0);
        for (const NcSizeProfile& profile : nc_size_profiles(p)) {
            if (profile.block_sizes.size() == 1) continue;  // the m_p term itself
            T term(static_cast<int>(profile.count));
            for (std::size_t b = 1; b < profile.block_sizes.size(); ++b) term = term * c;
            for (int size : profile.block_sizes) term = term * m[static_cast<std::size_t>(size - 1)];
            lower = lower + term;
        }
        m[static_cast<std::size_t>(p - 1)] = convolved[static_cast<std::size_t>(p - 1)] - lower;
    }
    return m;
}

}  // namespace freemimo
