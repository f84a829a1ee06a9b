// wishart_oracle.cpp
//
// Exact expected Wishart trace moments via permutation enumeration, and the
// closed-form noisy-Gram moment map with its triangular inverse.

#include "freemimo/wishart_oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace freemimo {

namespace {

// Plain union-find over {0..count-1}.
class DisjointSets {
  public:
    explicit DisjointSets(int count) : parent_(static_cast<std::size_t>(count)) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] =
                parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent_[static_cast<std::size_t>(find(a))] = find(b); }

  private:
    std::vector<int> parent_;
};

}  // namespace

PairedPermutation equivalence_classes(const std::vector<int>& pi) {
    const int p = static_cast<int>(pi.size());
    if (p < 1) throw std::invalid_argument("equivalence_classes: empty permutation");
    std::vector<bool> seen(static_cast<std::size_t>(p), false);
    for (int v : pi) {
        if (v < 1 || v > p || seen[static_cast<std::size_t>(v - 1)])
            throw std::invalid_argument("equivalence_classes: not a permutation of {1..p}");
        seen[static_cast<std::size_t>(v - 1)] = true;
    }

    PairedPermutation result;
    result.p = p;
    result.pi = pi;

    std::vector<int> inverse(static_cast<std::size_t>(p), 0);
    for (int j = 1; j <= p; ++j) inverse[static_cast<std::size_t>(pi[static_cast<std::size_t>(j - 1)] - 1)] = j;

    // pi_hat(2j-1) = 2 pi^{-1}(j), pi_hat(2j) = 2 pi(j) - 1.
    result.pi_hat.resize(static_cast<std::size_t>(2 * p), 0);
    for (int j = 1; j <= p; ++j) {
        result.pi_hat[static_cast<std::size_t>(2 * j - 2)] = 2 * inverse[static_cast<std::size_t>(j - 1)];
        result.pi_hat[static_cast<std::size_t>(2 * j - 1)] = 2 * pi[static_cast<std::size_t>(j - 1)] - 1;
    }

    // Classes generated by j ~ pi_hat(j) + 1, with 2p + 1 wrapping to 1.
    DisjointSets sets(2 * p);
    for (int j = 1; j <= 2 * p; ++j) {
        int neighbor = result.pi_hat[static_cast<std::size_t>(j - 1)] + 1;
        if (neighbor == 2 * p + 1) neighbor = 1;
        sets.unite(j - 1, neighbor - 1);
    }

    std::vector<std::vector<int>> by_root(static_cast<std::size_t>(2 * p));
    for (int j = 1; j <= 2 * p; ++j) by_root[static_cast<std::size_t>(sets.find(j - 1))].push_back(j);
    for (auto& cls : by_root) {
        if (cls.empty()) continue;
        result.classes.push_back(std::move(cls));  // already ascending; roots scanned in order
    }
    std::sort(result.classes.begin(), result.classes.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a.front() < b.front(); });

    for (const auto& cls : result.classes) {
        if (cls.front() % 2 == 0)
            ++result.k_classes;
        else
            ++result.l_classes;
    }
    return result;
}

Rational expected_wishart_moment(int n, int N, int p) {
    if (n < 1 || N < 1) throw std::invalid_argument("expected_wishart_moment: n, N must be >= 1");
    if (p < 1 || p > 8) throw std::invalid_argument("expected_wishart_moment: p must be in [1, 8]");

    using boost::multiprecision::cpp_int;
    std::vector<int> pi(static_cast<std::size_t>(p));
    std::iota(pi.begin(), pi.end(), 1);

    cpp_int total = 0;
    do {
        const PairedPermutation paired = equivalence_classes(pi);
        total += boost::multiprecision::pow(cpp_int(N), static_cast<unsigned>(paired.k_classes)) *
                 boost::multiprecision::pow(cpp_int(n), static_cast<unsigned>(paired.l_classes));
    } while (std::next_permutation(pi.begin(), pi.end()));

    const cpp_int denom = cpp_int(n) * boost::multiprecision::pow(cpp_int(N), static_cast<unsigned>(p));
    return Rational(total, denom);
}

MomentVector mixed_moment_map(const MomentVector& m, double sigma2, double c, double corr) {
    const std::size_t order = m.order();
    if (order < 1 || order > 4)
        throw std::invalid_argument("mixed_moment_map: order must be in [1, 4]");

    const double s2 = sigma2;
    const double k3 = c * c + 3.0 * c + 1.0 + corr;
    const double k4 = c * c * c + 6.0 * c * c + 6.0 * c + 1.0 + 5.0 * (1.0 + c) * corr;

    MomentVector out = MomentVector::zeros(order);
    const double m1 = m.m(1);
    out.m(1) = m1 + s2;
    if (order >= 2) {
        const double m2 = m.m(2);
        out.m(2) = m2 + 2.0 * s2 * (1.0 + c) * m1 + s2 * s2 * (1.0 + c);
        if (order >= 3) {
            const double m3 = m.m(3);
            out.m(3) = m3 + 3.0 * s2 * (1.0 + c) * m2 + 3.0 * s2 * c * m1 * m1 +
                       3.0 * s2 * s2 * k3 * m1 + s2 * s2 * s2 * k3;
            if (order >= 4) {
                const double m4 = m.m(4);
                out.m(4) = m4 + 4.0 * s2 * (1.0 + c) * m3 + 8.0 * s2 * c * m2 * m1 +
                           s2 * s2 * (6.0 * c * c + 16.0 * c + 6.0 + 16.0 * corr) * m2 +
                           14.0 * s2 * s2 * c * (1.0 + c) * m1 * m1 + 4.0 * s2 * s2 * s2 * k4 * m1 +
                           s2 * s2 * s2 * s2 * k4;
            }
        }
    }
    return out;
}

MomentVector mixed_moment_unmap(const MomentVector& observed, double sigma2, double c, double corr) {
    const std::size_t order = observed.order();
    if (order < 1 || order > 4)
        throw std::invalid_argument("mixed_moment_unmap: order must be in [1, 4]");

    const double s2 = sigma2;
    const double k3 = c * c + 3.0 * c + 1.0 + corr;
    const double k4 = c * c * c + 6.0 * c * c + 6.0 * c + 1.0 + 5.0 * (1.0 + c) * corr;

    MomentVector m = MomentVector::zeros(order);
    const double m1 = observed.m(1) - s2;
    m.m(1) = m1;
    if (order >= 2) {
        const double m2 = observed.m(2) - 2.0 * s2 * (1.0 + c) * m1 - s2 * s2 * (1.0 + c);
        m.m(2) = m2;
        if (order >= 3) {
            const double m3 = observed.m(3) - 3.0 * s2 * (1.0 + c) * m2 - 3.0 * s2 * c * m1 * m1 -
                              3.0 * s2 * s2 * k3 * m1 - s2 * s2 * s2 * k3;
            m.m(3) = m3;
            if (order >= 4) {
                m.m(4) = observed.m(4) - 4.0 * s2 * (1.0 + c) * m3 - 8.0 * s2 * c * m2 * m1 -
                         s2 * s2 * (6.0 * c * c + 16.0 * c + 6.0 + 16.0 * corr) * m2 -
                         14.0 * s2 * s2 * c * (1.0 + c) * m1 * m1 - 4.0 * s2 * s2 * s2 * k4 * m1 -
                         s2 * s2 * s2 * s2 * k4;
            }
        }
    }
    return m;
}

MomentVector mixed_moment_expectation(const MomentVector& m, double c, int N, double sigma2) {
    if (m.order() < 4)
        throw std::invalid_argument("mixed_moment_expectation: need moments up to order 4");
    if (N < 1) throw std::invalid_argument("mixed_moment_expectation: N must be >= 1");
    const double corr = 1.0 / (static_cast<double>(N) * static_cast<double>(N));
    MomentVector first4(std::vector<double>(m.values.begin(), m.values.begin() + 4));
    return mixed_moment_map(first4, sigma2, c, corr);
}

}  // namespace freemimo
