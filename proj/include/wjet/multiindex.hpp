#pragma once

#include "common.hpp"
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

namespace wjet::jets {

// Multi-index: exponent tuple in N_0^n.
struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exps) : e(std::move(exps)) {}
    MultiIndex(std::initializer_list<int> exps) : e(exps) {}

    int size() const { return static_cast<int>(e.size()); }
    int order() const { return std::accumulate(e.begin(), e.end(), 0); }
    int operator[](int i) const { return e[i]; }

    bool operator==(const MultiIndex& o) const { return e == o.e; }
};

// Enumeration order: total degree ascending, and inside a degree the first
// variable's exponent decreases first, so for n=2 degree 1 lists (1,0), (0,1).
// This fixes every coefficient layout and file format in the library.
inline bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
    int oa = a.order(), ob = b.order();
    if (oa != ob) return oa < ob;
    for (int i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

inline double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

inline double factorial(const MultiIndex& a) {
    double f = 1.0;
    for (int i = 0; i < a.size(); ++i) f *= factorial(a[i]);
    return f;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Product of per-coordinate binomials C(a_i, b_i); zero unless b <= a.
inline double binomial(const MultiIndex& a, const MultiIndex& b) {
    double r = 1.0;
    for (int i = 0; i < a.size(); ++i) r *= binomial(a[i], b[i]);
    return r;
}

inline std::int64_t jet_dim(int m, int n) {
    // D = C(m+n-1, n): number of multi-indices with |alpha| <= m-1.
    std::int64_t r = 1;
    for (int i = 1; i <= n; ++i) r = r * (m - 1 + i) / i;  // exact: product of consecutive ints / i!
    return r;
}

namespace detail {
inline void enumerate_degree(int n, int pos, int remaining, std::vector<int>& cur,
                             std::vector<MultiIndex>& out) {
    if (pos == n - 1) {
        cur[pos] = remaining;
        out.emplace_back(cur);
        return;
    }
    for (int k = remaining; k >= 0; --k) {
        cur[pos] = k;
        enumerate_degree(n, pos + 1, remaining - k, cur, out);
    }
}
} // namespace detail

// All multi-indices with |alpha| <= m-1 in graded-lex order.
inline std::vector<MultiIndex> multiindex_set(int m, int n, int cap = default_dim_cap) {
    require(m >= 1 && n >= 1, errc::invalid_input, "multiindex_set: need m >= 1, n >= 1");
    std::int64_t d = jet_dim(m, n);
    require(d <= cap, errc::cap_exceeded,
            "multiindex_set: D = " + std::to_string(d) + " exceeds cap " + std::to_string(cap));
    std::vector<MultiIndex> out;
    out.reserve(static_cast<std::size_t>(d));
    std::vector<int> cur(n, 0);
    for (int deg = 0; deg <= m - 1; ++deg) detail::enumerate_degree(n, 0, deg, cur, out);
    return out;
}

// Immutable descriptor of the jet space P = {polynomials of degree <= m-1 on R^n}
// with its graded-lex coefficient layout and the index arithmetic every
// operation needs (ranks, factorials, and the product table alpha+beta).
class JetSpace {
public:
    JetSpace(int m, int n, int cap = default_dim_cap)
        : m_(m), n_(n), basis_(multiindex_set(m, n, cap)) {
        D_ = static_cast<int>(basis_.size());
        fact_.resize(D_);
        order_.resize(D_);
        for (int i = 0; i < D_; ++i) {
            fact_[i] = factorial(basis_[i]);
            order_[i] = basis_[i].order();
            rank_map_[basis_[i].e] = i;
        }
        sum_rank_.assign(static_cast<std::size_t>(D_) * D_, -1);
        std::vector<int> s(n_);
        for (int i = 0; i < D_; ++i)
            for (int j = i; j < D_; ++j) {
                if (order_[i] + order_[j] > m_ - 1) continue;
                for (int t = 0; t < n_; ++t) s[t] = basis_[i][t] + basis_[j][t];
                int r = rank_of(s);
                sum_rank_[static_cast<std::size_t>(i) * D_ + j] = r;
                sum_rank_[static_cast<std::size_t>(j) * D_ + i] = r;
            }
    }

    int m() const { return m_; }
    int n() const { return n_; }
    int dim() const { return D_; }
    const std::vector<MultiIndex>& basis() const { return basis_; }
    const MultiIndex& index(int i) const { return basis_[i]; }
    double fact(int i) const { return fact_[i]; }
    int order(int i) const { return order_[i]; }

    int rank_of(const std::vector<int>& exps) const {
        auto it = rank_map_.find(exps);
        return it == rank_map_.end() ? -1 : it->second;
    }
    int rank_of(const MultiIndex& a) const { return rank_of(a.e); }

    // Rank of alpha_i + alpha_j, or -1 when the sum leaves the degree bound.
    int sum_rank(int i, int j) const { return sum_rank_[static_cast<std::size_t>(i) * D_ + j]; }

private:
    int m_, n_, D_;
    std::vector<MultiIndex> basis_;
    std::vector<double> fact_;
    std::vector<int> order_;
    std::map<std::vector<int>, int> rank_map_;
    std::vector<int> sum_rank_;
};

// Shared per-(m,n) descriptors; building the product table is O(D^2) so the
// result is cached. Thread-safe, returns a stable reference.
inline const JetSpace& jetspace(int m, int n) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<JetSpace>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(m, n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<JetSpace>(m, n)).first;
    return *it->second;
}

} // namespace wjet::jets
