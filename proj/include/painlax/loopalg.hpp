#pragma once

// Sparse Laurent-matrix realization of sl_N[z, z^-1]: partition-graded
// Chevalley generators, the grading operator z d/dz, and the Heisenberg
// elements Lambda_1, Lambda_2 built by nested ad-brackets.

#include <map>
#include <utility>
#include <vector>

#include "painlax/laurent.hpp"

namespace painlax {

enum class PartitionKind {
    NplusNplus,        // (n+1,n+1): sl_{2n+2}, grading (1,0,...,1,0)
    TwoNminusOne_One,  // (2n-1,1):  sl_{2n},   grading (1,...,1,0)
    TwoN_One,          // (2n,1):    sl_{2n+1}, grading (1,...,1,0)
    N_N_One,           // (n,n,1):   sl_{2n+1}, grading (0,1,0,...,1,0)
};

inline const char* partition_name(PartitionKind k) {
    switch (k) {
        case PartitionKind::NplusNplus: return "n+1,n+1";
        case PartitionKind::TwoNminusOne_One: return "2n-1,1";
        case PartitionKind::TwoN_One: return "2n,1";
        case PartitionKind::N_N_One: return "n,n,1";
    }
    return "?";
}

// The two tail partitions are ill-defined at n=1: their Lambda_k stop
// commuting when the principal part has size <= 2 (index wrap-around).
struct PartitionSpec {
    PartitionKind kind;
    int n;

    PartitionSpec(PartitionKind k, int order) : kind(k), n(order) {
        if (n < 1) throw UnsupportedRank("partition order must be >= 1");
        if ((kind == PartitionKind::TwoNminusOne_One || kind == PartitionKind::TwoN_One) && n < 2)
            throw UnsupportedRank(std::string("partition (") + partition_name(kind) +
                                  ") requires n >= 2");
    }

    int size() const {
        switch (kind) {
            case PartitionKind::NplusNplus: return 2 * n + 2;
            case PartitionKind::TwoNminusOne_One: return 2 * n;
            case PartitionKind::TwoN_One: return 2 * n + 1;
            case PartitionKind::N_N_One: return 2 * n + 1;
        }
        return 0;
    }

    // grading vector s_0..s_{N-1}
    std::vector<int> grading() const {
        int N = size();
        std::vector<int> s(N, 1);
        switch (kind) {
            case PartitionKind::NplusNplus:
                for (int i = 0; i < N; ++i) s[i] = (i % 2 == 0) ? 1 : 0;
                break;
            case PartitionKind::TwoNminusOne_One:
            case PartitionKind::TwoN_One:
                s[N - 1] = 0;
                break;
            case PartitionKind::N_N_One:
                s[0] = 0;
                for (int i = 1; i < N; ++i) s[i] = (i % 2 == 1) ? 1 : 0;
                break;
        }
        return s;
    }

    // grades d_1, d_2 of Lambda_1, Lambda_2 under z d/dz
    int lambda_grade(int k) const {
        if (k != 1 && k != 2) throw UnsupportedIndex("only Lambda_1, Lambda_2 are realized");
        switch (kind) {
            case PartitionKind::NplusNplus:
            case PartitionKind::N_N_One: return 1;
            case PartitionKind::TwoNminusOne_One:
            case PartitionKind::TwoN_One: return k;
        }
        return 0;
    }
};

// Affine Cartan matrix of type A^(1)_m (cyclic; unambiguous for m >= 2).
inline std::vector<std::vector<int>> cartan_matrix(int m) {
    if (m < 2) throw UnsupportedRank("affine Cartan of type A requires rank >= 2");
    std::vector<std::vector<int>> a(m + 1, std::vector<int>(m + 1, 0));
    for (int i = 0; i <= m; ++i) {
        a[i][i] = 2;
        a[i][(i + 1) % (m + 1)] = -1;
        a[i][(i + m) % (m + 1)] = -1;
    }
    return a;
}

template <class S>
class LaurentMatrix {
  public:
    using entry_map = std::map<std::pair<int, int>, LaurentPoly<S>>;

    LaurentMatrix() : n_(0) {}
    explicit LaurentMatrix(int n) : n_(n) {}

    int size() const { return n_; }
    const entry_map& entries() const { return entries_; }

    // rows/cols are 1-based
    void add(int row, int col, int zexp, const S& c) {
        check_index(row, col);
        auto key = std::make_pair(row, col);
        auto it = entries_.find(key);
        if (it == entries_.end()) it = entries_.emplace(key, LaurentPoly<S>{}).first;
        it->second.add(zexp, c);
        if (it->second.is_zero()) entries_.erase(it);
    }
    void add_poly(int row, int col, const LaurentPoly<S>& p) {
        check_index(row, col);
        if (p.is_zero()) return;
        auto key = std::make_pair(row, col);
        auto it = entries_.find(key);
        if (it == entries_.end()) it = entries_.emplace(key, LaurentPoly<S>{}).first;
        it->second += p;
        if (it->second.is_zero()) entries_.erase(it);
    }

    LaurentPoly<S> at(int row, int col) const {
        check_index(row, col);
        auto it = entries_.find({row, col});
        return it == entries_.end() ? LaurentPoly<S>{} : it->second;
    }

    bool is_zero() const { return entries_.empty(); }

    friend LaurentMatrix operator+(const LaurentMatrix& x, const LaurentMatrix& y) {
        require_same_size(x, y);
        LaurentMatrix out = x;
        for (const auto& [k, p] : y.entries_) out.add_poly(k.first, k.second, p);
        return out;
    }
    friend LaurentMatrix operator-(const LaurentMatrix& x, const LaurentMatrix& y) {
        require_same_size(x, y);
        LaurentMatrix out = x;
        for (const auto& [k, p] : y.entries_) out.add_poly(k.first, k.second, -p);
        return out;
    }
    friend LaurentMatrix operator*(const LaurentMatrix& x, const LaurentMatrix& y) {
        require_same_size(x, y);
        LaurentMatrix out(x.n_);
        for (const auto& [kx, px] : x.entries_)
            for (const auto& [ky, py] : y.entries_)
                if (kx.second == ky.first) out.add_poly(kx.first, ky.second, px * py);
        return out;
    }
    friend LaurentMatrix operator*(const S& s, const LaurentMatrix& y) {
        LaurentMatrix out(y.n_);
        for (const auto& [k, p] : y.entries_) out.add_poly(k.first, k.second, s * p);
        return out;
    }
    LaurentMatrix operator-() const {
        LaurentMatrix out(n_);
        for (const auto& [k, p] : entries_) out.add_poly(k.first, k.second, -p);
        return out;
    }

    friend bool operator==(const LaurentMatrix& x, const LaurentMatrix& y) {
        return x.n_ == y.n_ && (x - y).is_zero();
    }

    LaurentPoly<S> trace() const {
        LaurentPoly<S> out;
        for (const auto& [k, p] : entries_)
            if (k.first == k.second) out += p;
        return out;
    }

    // z d/dz applied entrywise (the grading operator's action)
    LaurentMatrix z_ddz() const {
        LaurentMatrix out(n_);
        for (const auto& [k, p] : entries_) out.add_poly(k.first, k.second, p.z_ddz());
        return out;
    }

    double max_entry_mag() const {
        double m = 0;
        for (const auto& [k, p] : entries_) m = std::max(m, p.max_coeff_mag());
        return m;
    }

    // max |entry(z)| over given spectral samples (float-mode residual norm)
    double max_eval_mag(const std::vector<S>& zsamples) const {
        double m = 0;
        for (const auto& z : zsamples)
            for (const auto& [k, p] : entries_) m = std::max(m, scalar_mag(p.eval(z)));
        return m;
    }

    std::vector<std::vector<LaurentPoly<S>>> dense() const {
        std::vector<std::vector<LaurentPoly<S>>> d(n_, std::vector<LaurentPoly<S>>(n_));
        for (const auto& [k, p] : entries_) d[k.first - 1][k.second - 1] = p;
        return d;
    }
    static LaurentMatrix from_dense(const std::vector<std::vector<LaurentPoly<S>>>& d) {
        LaurentMatrix out(static_cast<int>(d.size()));
        for (int i = 0; i < out.n_; ++i)
            for (int j = 0; j < out.n_; ++j) out.add_poly(i + 1, j + 1, d[i][j]);
        return out;
    }

  private:
    void check_index(int row, int col) const {
        if (row < 1 || row > n_ || col < 1 || col > n_)
            throw DimensionError("matrix index out of range");
    }
    static void require_same_size(const LaurentMatrix& x, const LaurentMatrix& y) {
        if (x.n_ != y.n_) throw DimensionError("matrix size mismatch");
    }

    int n_;
    entry_map entries_;
};

template <class S>
inline LaurentMatrix<S> bracket(const LaurentMatrix<S>& a, const LaurentMatrix<S>& b) {
    return a * b - b * a;
}

// E_{i,j} with 1-based indices folded mod N into 1..N
template <class S>
inline LaurentMatrix<S> unit_matrix(int N, int i, int j, int zexp = 0) {
    auto fold = [N](int k) { return (k - 1) % N + (((k - 1) % N) < 0 ? N : 0) + 1; };
    LaurentMatrix<S> out(N);
    out.add(fold(i), fold(j), zexp, from_int<S>(1));
    return out;
}

// Chevalley generators of the partition-graded realization
template <class S>
struct Generators {
    std::vector<LaurentMatrix<S>> e, f, h;
};

template <class S>
inline Generators<S> generators(const PartitionSpec& spec) {
    int N = spec.size();
    auto s = spec.grading();
    Generators<S> g;
    for (int i = 0; i < N; ++i) {
        int row = (i == 0) ? N : i;
        int col = (i == 0) ? 1 : i + 1;
        g.e.push_back(unit_matrix<S>(N, row, col, s[i]));
        g.f.push_back(unit_matrix<S>(N, col, row, -s[i]));
        LaurentMatrix<S> hh(N);
        hh.add(row, row, 0, from_int<S>(1));
        hh.add(col, col, 0, from_int<S>(-1));
        g.h.push_back(hh);
    }
    return g;
}

// e_{i,j} = ad e_i ad e_{i+1} ... ad e_{i+j-1} (e_{i+j}), indices mod N
template <class S>
inline LaurentMatrix<S> nested_e(const Generators<S>& g, int i, int j) {
    int N = static_cast<int>(g.e.size());
    auto idx = [N](int k) { return ((k % N) + N) % N; };
    LaurentMatrix<S> acc = g.e[idx(i + j)];
    for (int k = i + j - 1; k >= i; --k) acc = bracket(g.e[idx(k)], acc);
    return acc;
}

// Lambda_k (k = 1, 2) per the partition's Heisenberg subalgebra
template <class S>
inline LaurentMatrix<S> heisenberg_lambda(const PartitionSpec& spec, int k) {
    if (k != 1 && k != 2) throw UnsupportedIndex("only Lambda_1 and Lambda_2 are realized");
    auto g = generators<S>(spec);
    int n = spec.n;
    LaurentMatrix<S> out(spec.size());
    switch (spec.kind) {
        case PartitionKind::NplusNplus:
            // Lambda_{2k-1} = sum e_{2i+1,2k-1}; Lambda_{2k} = sum e_{2i+2,2k-1}; here 2k-1 = 1
            for (int i = 0; i <= n; ++i) out = out + nested_e(g, 2 * i + (k == 1 ? 1 : 2), 1);
            break;
        case PartitionKind::TwoNminusOne_One:
            // Lambda_k = sum_{i=1}^{2n-1-k} e_{i,k-1} + sum_{i=2n-k}^{2n-1} e_{i,k}
            for (int i = 1; i <= 2 * n - 1 - k; ++i) out = out + nested_e(g, i, k - 1);
            for (int i = 2 * n - k; i <= 2 * n - 1; ++i) out = out + nested_e(g, i, k);
            break;
        case PartitionKind::TwoN_One:
            // Lambda_k = sum_{i=1}^{2n-k} e_{i,k-1} + sum_{i=2n-k+1}^{2n} e_{i,k}
            for (int i = 1; i <= 2 * n - k; ++i) out = out + nested_e(g, i, k - 1);
            for (int i = 2 * n - k + 1; i <= 2 * n; ++i) out = out + nested_e(g, i, k);
            break;
        case PartitionKind::N_N_One:
            // Lambda_1 = sum_{i=1}^{n-1} e_{2i-1,1} + e_{2n-1,2};
            // Lambda_2 = sum_{i=1}^{n-1} e_{2i,1}   + e_{2n,2}
            for (int i = 1; i <= n - 1; ++i) out = out + nested_e(g, 2 * i - (k == 1 ? 1 : 0), 1);
            out = out + nested_e(g, 2 * n - (k == 1 ? 1 : 0), 2);
            break;
    }
    return out;
}

}  // namespace painlax
