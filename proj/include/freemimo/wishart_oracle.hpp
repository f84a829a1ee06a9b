// wishart_oracle.hpp
//
// Exact combinatorial ground truth for the estimators: expected trace
// moments of complex Wishart matrices via permutation enumeration in exact
// rational arithmetic, and the closed-form expected trace moments of a
// deterministic-signal-plus-Gaussian-noise Gram matrix
// W = (1/N)(R + sigma X)(R + sigma X)^H, including the finite-size 1/N^2
// correction terms.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "freemimo/moments.hpp"

namespace freemimo {

using Rational = boost::multiprecision::cpp_rational;

// A permutation pi of {1..p} together with the induced permutation pi_hat of
// {1..2p} and the partition of {1..2p} generated by j ~ pi_hat(j)+1
// (mod 2p, representative 2p rather than 0). Every class is entirely even or
// entirely odd; k_classes and l_classes count them respectively.
struct PairedPermutation {
    int p = 0;
    std::vector<int> pi;                     // pi[j-1] = pi(j), values 1..p
    std::vector<int> pi_hat;                 // pi_hat[j-1] = pi_hat(j), values 1..2p
    std::vector<std::vector<int>> classes;   // sorted classes, ordered by smallest element
    int k_classes = 0;                       // classes of even numbers
    int l_classes = 0;                       // classes of odd numbers
};

// Builds pi_hat via pi_hat(2j-1) = 2 pi^{-1}(j), pi_hat(2j) = 2 pi(j) - 1 and
// the generated equivalence classes. Throws std::invalid_argument when pi is
// not a permutation of {1..p}.
PairedPermutation equivalence_classes(const std::vector<int>& pi);

// E[tr_n((X X^H / N)^p)] for X an n x N matrix of i.i.d. standard complex
// Gaussians, as an exact rational:
//   (1 / (n N^p)) * sum over pi in S_p of N^k(pi_hat) * n^l(pi_hat).
// Throws std::invalid_argument for n, N < 1 or p outside [1, 8].
Rational expected_wishart_moment(int n, int N, int p);

// Shared closed-form map between the trace moments of (1/N) R R^H and the
// expected trace moments of W = (1/N)(R + sigma X)(R + sigma X)^H, with the
// finite-size correction passed explicitly (corr = 1/N^2 gives the exact
// expectations; corr = 0 gives the large-matrix limit used by the stacked
// estimator's defining system). Orders 1..4:
//   E1 = m1 + s2
//   E2 = m2 + 2 s2 (1+c) m1 + s2^2 (1+c)
//   E3 = m3 + 3 s2 (1+c) m2 + 3 s2 c m1^2 + 3 s2^2 K3 m1 + s2^3 K3
//   E4 = m4 + 4 s2 (1+c) m3 + 8 s2 c m2 m1 + s2^2 (6c^2+16c+6+16 corr) m2
//        + 14 s2^2 c (1+c) m1^2 + 4 s2^3 K4 m1 + s2^4 K4
// with s2 = sigma^2, K3 = c^2+3c+1+corr, K4 = c^3+6c^2+6c+1+5(1+c) corr.
// Input order may be 1..4; the output has the same order.
MomentVector mixed_moment_map(const MomentVector& m, double sigma2, double c, double corr);

// Triangular inverse of mixed_moment_map: each equation is linear in its
// newest unknown, so forward substitution recovers m from the observed
// moments. (Nonlinear only in already-solved lower moments.)
MomentVector mixed_moment_unmap(const MomentVector& observed, double sigma2, double c, double corr);

// Exact expected trace moments E[tr_n(W^j)], j = 1..4, for deterministic R
// with trace moments m of (1/N) R R^H; c = n/N. Equals
// mixed_moment_map(m, sigma2, c, 1/N^2). Throws std::invalid_argument when m
// has order < 4 or N < 1.
MomentVector mixed_moment_expectation(const MomentVector& m, double c, int N, double sigma2);

}  // namespace freemimo
