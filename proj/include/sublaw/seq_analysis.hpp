#pragma once

// Deterministic sequence constructions used by the convergence proofs:
// a subsequence {n_k} with M a_{n_k} <= a_{n_{k+1}} <= M^3 a_{n_k + 1}, and
// the epsilon sequence b_n = sqrt(t_n) - sqrt(t_{n+1}) built from tail sums.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sublaw/errors.hpp"

namespace sublaw {

struct Subsequence {
    std::vector<std::size_t> indices; // 1-based into the source prefix
    std::size_t source_length = 0;
    double M = 2.0;
};

namespace detail {

// Max segment tree over chain lengths, filled right to left; supports
// locating the leftmost position attaining a target value in a range.
class MaxTree {
  public:
    explicit MaxTree(std::size_t n) : n_(n), tree_(4 * n, 0) {}

    void set(std::size_t i, int value) { set_impl(1, 0, n_ - 1, i, value); }

    int max_in(std::size_t lo, std::size_t hi) const { return max_impl(1, 0, n_ - 1, lo, hi); }

    // leftmost i in [lo, hi] with value >= target; n_ when none
    std::size_t find_first(std::size_t lo, std::size_t hi, int target) const {
        return find_impl(1, 0, n_ - 1, lo, hi, target);
    }

  private:
    void set_impl(std::size_t node, std::size_t l, std::size_t r, std::size_t i, int value) {
        if (l == r) {
            tree_[node] = value;
            return;
        }
        const std::size_t mid = (l + r) / 2;
        if (i <= mid) set_impl(2 * node, l, mid, i, value);
        else set_impl(2 * node + 1, mid + 1, r, i, value);
        tree_[node] = std::max(tree_[2 * node], tree_[2 * node + 1]);
    }

    int max_impl(std::size_t node, std::size_t l, std::size_t r, std::size_t lo,
                 std::size_t hi) const {
        if (hi < l || r < lo) return 0;
        if (lo <= l && r <= hi) return tree_[node];
        const std::size_t mid = (l + r) / 2;
        return std::max(max_impl(2 * node, l, mid, lo, hi),
                        max_impl(2 * node + 1, mid + 1, r, lo, hi));
    }

    std::size_t find_impl(std::size_t node, std::size_t l, std::size_t r, std::size_t lo,
                          std::size_t hi, int target) const {
        if (hi < l || r < lo || tree_[node] < target) return n_;
        if (l == r) return l;
        const std::size_t mid = (l + r) / 2;
        const std::size_t left = find_impl(2 * node, l, mid, lo, hi, target);
        if (left != n_) return left;
        return find_impl(2 * node + 1, mid + 1, r, lo, hi, target);
    }

    std::size_t n_;
    std::vector<int> tree_;
};

} // namespace detail

/// Finds a subsequence of indices satisfying M a_{n_k} <= a_{n_{k+1}} and
/// a_{n_{k+1}} <= M^3 a_{n_k + 1}, both verified exactly before returning.
/// The search maximizes the number of terms the prefix supports (longest
/// chain over the feasible candidate ranges, smallest start and smallest
/// next index as tie-breakers), which subsumes greedy threshold search with
/// backtracking. Existence is only guaranteed for infinite a growing to
/// infinity, so running out of prefix is expected; finding no valid pair at
/// all raises NotFoundOnPrefix.
inline Subsequence wittmann_subsequence(const std::vector<double>& a, double M) {
    if (M <= 1.0) throw std::invalid_argument("wittmann_subsequence: M must exceed 1");
    const std::size_t n = a.size();
    if (n < 2) throw NotFoundOnPrefix("prefix too short for any pair");
    for (std::size_t i = 1; i < n; ++i)
        if (a[i] < a[i - 1])
            throw std::invalid_argument("wittmann_subsequence: a must be nondecreasing");
    if (n > 100000)
        throw std::invalid_argument("wittmann_subsequence: prefix capped at 1e5 entries");

    const double M3 = M * M * M;
    // chain[i] = longest valid chain starting at 0-based index i
    std::vector<int> chain(n, 1);
    std::vector<std::size_t> next(n, n); // n = no successor
    detail::MaxTree tree(n);

    for (std::size_t ii = n; ii-- > 0;) {
        // feasible successors: a[j] >= M*a[ii] and (ii+1 < n) a[j] <= M^3*a[ii+1]
        if (ii + 1 < n) {
            const auto lo_it = std::lower_bound(a.begin() + static_cast<std::ptrdiff_t>(ii) + 1,
                                                a.end(), M * a[ii]);
            if (lo_it != a.end() && *lo_it <= M3 * a[ii + 1]) {
                const std::size_t lo = static_cast<std::size_t>(lo_it - a.begin());
                const auto hi_it = std::upper_bound(lo_it, a.end(), M3 * a[ii + 1]);
                const std::size_t hi = static_cast<std::size_t>(hi_it - a.begin()) - 1;
                const int best = tree.max_in(lo, hi);
                if (best > 0) {
                    chain[ii] = 1 + best;
                    next[ii] = tree.find_first(lo, hi, best);
                }
            }
        }
        tree.set(ii, chain[ii]);
    }

    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (chain[i] > chain[start]) start = i;
    if (chain[start] < 2) throw NotFoundOnPrefix("no index pair satisfies the double inequality");

    Subsequence result;
    result.source_length = n;
    result.M = M;
    for (std::size_t i = start; i != n; i = next[i]) {
        result.indices.push_back(i + 1);
        if (next[i] == n) break;
    }

    // exact post-verification: the found witness is the correctness proof
    for (std::size_t k = 0; k + 1 < result.indices.size(); ++k) {
        const std::size_t nk = result.indices[k] - 1, nk1 = result.indices[k + 1] - 1;
        if (!(M * a[nk] <= a[nk1]) || !(a[nk1] <= M3 * a[nk + 1]))
            throw std::logic_error("wittmann_subsequence: post-verification failed");
    }
    return result;
}

/// b_n = sqrt(t_n) - sqrt(t_{n+1}) with t_n the tail sum of a from n on.
/// The ratio a_n/b_n equals sqrt(t_n) + sqrt(t_{n+1}) identically, which is
/// how it is computed (no 0/0); once a tail hits zero, b and the ratio are 0.
struct EpsilonSequence {
    std::vector<double> b;
    std::vector<double> ratios; // a_n / b_n, nonincreasing, -> 0 with the tail
    std::vector<double> tails;  // t_1 .. t_{N+1}
    double total = 0.0;         // sum of b over the full sequence = sqrt(t_1)
};

inline EpsilonSequence epsilon_sequence(const std::vector<double>& a, double tail_beyond = 0.0) {
    if (tail_beyond < 0.0) throw std::invalid_argument("epsilon_sequence: negative tail");
    for (double v : a)
        if (v < 0.0) throw std::invalid_argument("epsilon_sequence: negative term");

    const std::size_t n = a.size();
    EpsilonSequence e;
    e.tails.assign(n + 1, 0.0);
    e.tails[n] = tail_beyond;
    for (std::size_t i = n; i-- > 0;) e.tails[i] = e.tails[i + 1] + a[i];

    e.b.reserve(n);
    e.ratios.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rt = std::sqrt(e.tails[i]);
        const double rt_next = std::sqrt(e.tails[i + 1]);
        e.b.push_back(e.tails[i] == 0.0 ? 0.0 : rt - rt_next);
        e.ratios.push_back(e.tails[i] == 0.0 ? 0.0 : rt + rt_next);
    }
    e.total = std::sqrt(e.tails[0]);
    return e;
}

} // namespace sublaw
