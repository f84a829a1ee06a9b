// mp_transforms.cpp
//
// Marchenko-Pastur law and the moment-space transforms, plus the
// non-crossing partition enumeration behind the generic-order paths. The
// partition census is tiny (Bell(8) = 4140 candidates at the largest order),
// so it is enumerated once per process and cached as block-size profiles.

#include "freemimo/mp_transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>

namespace freemimo {

namespace {

// A partition crosses iff some i < j < k < l has i, k in one block and
// j, l in a different one.
bool is_noncrossing(const std::vector<int>& block_id) {
    const int p = static_cast<int>(block_id.size());
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            for (int k = j + 1; k < p; ++k)
                for (int l = k + 1; l < p; ++l)
                    if (block_id[i] == block_id[k] && block_id[j] == block_id[l] &&
                        block_id[i] != block_id[j])
                        return false;
    return true;
}

// Walks every set partition of {1..p} as a restricted growth string and
// tallies the non-crossing ones by sorted block-size profile.
std::vector<NcSizeProfile> enumerate_profiles(int p) {
    std::map<std::vector<int>, std::int64_t> counts;
    std::vector<int> block_id(static_cast<std::size_t>(p), 0);

    const std::function<void(int, int)> recurse = [&](int pos, int max_id) {
        if (pos == p) {
            if (!is_noncrossing(block_id)) return;
            std::vector<int> sizes(static_cast<std::size_t>(max_id) + 1, 0);
            for (int id : block_id) ++sizes[static_cast<std::size_t>(id)];
            std::sort(sizes.begin(), sizes.end(), std::greater<int>());
            ++counts[sizes];
            return;
        }
        for (int id = 0; id <= max_id + 1; ++id) {
            block_id[static_cast<std::size_t>(pos)] = id;
            recurse(pos + 1, std::max(max_id, id));
        }
    };
    recurse(1, 0);  // element 1 is always in block 0

    std::vector<NcSizeProfile> profiles;
    profiles.reserve(counts.size());
    for (const auto& [sizes, count] : counts) profiles.push_back({sizes, count});
    return profiles;
}

const std::array<std::vector<NcSizeProfile>, kMaxTransformOrder>& profile_cache() {
    static const auto cache = [] {
        std::array<std::vector<NcSizeProfile>, kMaxTransformOrder> all;
        for (int p = 1; p <= kMaxTransformOrder; ++p)
            all[static_cast<std::size_t>(p - 1)] = enumerate_profiles(p);
        return all;
    }();
    return cache;
}

}  // namespace

const std::vector<NcSizeProfile>& nc_size_profiles(int p) {
    if (p < 1 || p > kMaxTransformOrder)
        throw std::invalid_argument("nc_size_profiles: p must be in [1, 8]");
    return profile_cache()[static_cast<std::size_t>(p - 1)];
}

std::int64_t nc_partition_count(int p) {
    std::int64_t total = 0;
    for (const NcSizeProfile& profile : nc_size_profiles(p)) total += profile.count;
    return total;
}

MPLaw::MPLaw(double ratio) : c(ratio) {
    if (!(ratio > 0.0)) throw std::invalid_argument("MPLaw: ratio must be > 0");
    const double root = std::sqrt(ratio);
    lower_edge = (1.0 - root) * (1.0 - root);
    upper_edge = (1.0 + root) * (1.0 + root);
    atom_at_zero = ratio > 1.0 ? 1.0 - 1.0 / ratio : 0.0;
}

double mp_density(double c, double x) {
    if (!(c > 0.0)) throw std::invalid_argument("mp_density: c must be > 0");
    if (x <= 0.0) return 0.0;
    const MPLaw law(c);
    const double above = x - law.lower_edge;
    const double below = law.upper_edge - x;
    if (above <= 0.0 || below <= 0.0) return 0.0;
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    return std::sqrt(above * below) / (kTwoPi * c * x);
}

MomentVector mp_moments(double c, int order) {
    if (order < 1 || order > kMaxTransformOrder)
        throw std::invalid_argument("mp_moments: order must be in [1, 8]");
    if (c < 0.0) throw std::invalid_argument("mp_moments: c must be >= 0");

    // Free cumulants of mu_c are 1, c, c^2, ..., so the p-th moment is
    // sum over non-crossing partitions of c^(p - #blocks).
    MomentVector out = MomentVector::zeros(static_cast<std::size_t>(order));
    for (int p = 1; p <= order; ++p) {
        double acc = 0.0;
        for (const NcSizeProfile& profile : nc_size_profiles(p)) {
            double term = static_cast<double>(profile.count);
            const int exponent = p - static_cast<int>(profile.block_sizes.size());
            for (int e = 0; e < exponent; ++e) term *= c;
            acc += term;
        }
        out.m(static_cast<std::size_t>(p)) = acc;
    }
    return out;
}

MomentVector mult_conv_mp(const MomentVector& m, double c) {
    const std::size_t order = m.order();
    if (order < 1 || order > static_cast<std::size_t>(kMaxTransformOrder))
        throw std::invalid_argument("mult_conv_mp: order must be in [1, 8]");
    if (order > 4) return MomentVector(mult_conv_nc<double>(m.values, c));

    MomentVector out = MomentVector::zeros(order);
    const double m1 = m.m(1);
    out.m(1) = m1;
    if (order >= 2) {
        const double m2 = m.m(2);
        out.m(2) = m2 + c * m1 * m1;
        if (order >= 3) {
            const double m3 = m.m(3);
            out.m(3) = m3 + 3.0 * c * m1 * m2 + c * c * m1 * m1 * m1;
            if (order >= 4) {
                const double m4 = m.m(4);
                out.m(4) = m4 + 4.0 * c * m1 * m3 + 2.0 * c * m2 * m2 +
                           6.0 * c * c * m1 * m1 * m2 + c * c * c * m1 * m1 * m1 * m1;
            }
        }
    }
    return out;
}

MomentVector mult_deconv_mp(const MomentVector& M, double c) {
    const std::size_t order = M.order();
    if (order < 1 || order > static_cast<std::size_t>(kMaxTransformOrder))
        throw std::invalid_argument("mult_deconv_mp: order must be in [1, 8]");
    if (order > 4) return MomentVector(mult_deconv_nc<double>(M.values, c));

    MomentVector out = MomentVector::zeros(order);
    const double M1 = M.m(1);
    out.m(1) = M1;
    if (order >= 2) {
        const double M2 = M.m(2);
        out.m(2) = M2 - c * M1 * M1;
        if (order >= 3) {
            const double M3 = M.m(3);
            out.m(3) = M3 - 3.0 * c * M1 * M2 + 2.0 * c * c * M1 * M1 * M1;
            if (order >= 4) {
                const double M4 = M.m(4);
                out.m(4) = M4 - 4.0 * c * M1 * M3 - 2.0 * c * M2 * M2 +
                           10.0 * c * c * M1 * M1 * M2 - 5.0 * c * c * c * M1 * M1 * M1 * M1;
            }
        }
    }
    return out;
}

MomentVector add_conv_dirac(const MomentVector& m, double t) {
    const std::size_t order = m.order();
    if (order < 1) throw std::invalid_argument("add_conv_dirac: order must be >= 1");

    std::vector<double> t_pow(order + 1, 1.0);
    for (std::size_t i = 1; i <= order; ++i) t_pow[i] = t_pow[i - 1] * t;

    MomentVector out = MomentVector::zeros(order);
    std::vector<double> binom{1.0};  // row k of Pascal's triangle, built incrementally
    for (std::size_t k = 1; k <= order; ++k) {
        binom.push_back(1.0);
        for (std::size_t j = k - 1; j >= 1; --j) binom[j] += binom[j - 1];
        double acc = 0.0;
        for (std::size_t j = 0; j <= k; ++j) {
            const double mj = (j == 0) ? 1.0 : m.m(j);
            acc += binom[j] * mj * t_pow[k - j];
        }
        out.m(k) = acc;
    }
    return out;
}

}  // namespace freemimo
