#pragma once

// Independent reference implementations used only by the tests.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "roughvar/tensor.hpp"

namespace oracle {

using Word = std::vector<int>;
using WordTensor = std::map<Word, double>;  // coefficient per word, empty word = scalar

inline void enumerate_words(int d, int k, Word& prefix, const std::function<void(const Word&)>& visit) {
    if (static_cast<int>(prefix.size()) == k) {
        visit(prefix);
        return;
    }
    for (int i = 0; i < d; ++i) {
        prefix.push_back(i);
        enumerate_words(d, k, prefix, visit);
        prefix.pop_back();
    }
}

inline WordTensor to_words(const roughvar::TensorElement& g) {
    WordTensor w;
    for (int k = 0; k <= g.level(); ++k) {
        Word prefix;
        enumerate_words(g.dimension(), k, prefix, [&](const Word& word) {
            double c = 1.0;
            if (!word.empty()) {
                std::size_t flat = 0;
                for (int digit : word) flat = flat * static_cast<std::size_t>(g.dimension()) + static_cast<std::size_t>(digit);
                c = g.coefficients(k)[flat];
            }
            w[word] = c;
        });
    }
    return w;
}

/// Concatenation product truncated at level n: (a b)(w) = sum over splits w = uv of a(u) b(v).
inline WordTensor product(const WordTensor& a, const WordTensor& b, int n) {
    WordTensor out;
    for (const auto& [u, au] : a)
        for (const auto& [v, bv] : b) {
            if (static_cast<int>(u.size() + v.size()) > n) continue;
            Word w = u;
            w.insert(w.end(), v.begin(), v.end());
            out[w] += au * bv;
        }
    return out;
}

/// Signature of a piecewise-linear path: the coefficient of a word over
/// [t_0, t_m] is updated segment by segment with the straight-line formula
/// S(w) <- sum_j S(w_1..w_j) * prod_{l>j} dx_{w_l} / (k - j)!.
inline WordTensor signature(const std::vector<std::vector<double>>& pts, int n) {
    const int d = static_cast<int>(pts.front().size());
    WordTensor s;
    for (int k = 0; k <= n; ++k) {
        Word prefix;
        enumerate_words(d, k, prefix, [&](const Word& w) { s[w] = w.empty() ? 1.0 : 0.0; });
    }
    for (std::size_t seg = 1; seg < pts.size(); ++seg) {
        std::vector<double> dx(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) dx[static_cast<std::size_t>(i)] = pts[seg][static_cast<std::size_t>(i)] - pts[seg - 1][static_cast<std::size_t>(i)];
        WordTensor next;
        for (const auto& [w, unused] : s) {
            (void)unused;
            const int k = static_cast<int>(w.size());
            double total = 0.0;
            for (int j = 0; j <= k; ++j) {
                Word head(w.begin(), w.begin() + j);
                double tail = 1.0;
                for (int l = j; l < k; ++l) tail *= dx[static_cast<std::size_t>(w[static_cast<std::size_t>(l)])];
                tail /= std::tgamma(static_cast<double>(k - j) + 1.0);
                total += s.at(head) * tail;
            }
            next[w] = total;
        }
        s = std::move(next);
    }
    return s;
}

/// Signed area between a planar piecewise-linear path and its chord (components i, j):
/// 1/2 sum_k (X_k - X_0) x dX_k.
inline double shoelace_area(const std::vector<std::vector<double>>& pts, std::size_t first, std::size_t last, int i,
                            int j) {
    const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
    double a = 0.0;
    for (std::size_t k = first; k < last; ++k) {
        const double xi = pts[k][ui] - pts[first][ui], xj = pts[k][uj] - pts[first][uj];
        const double dxi = pts[k + 1][ui] - pts[k][ui], dxj = pts[k + 1][uj] - pts[k][uj];
        a += 0.5 * (xi * dxj - xj * dxi);
    }
    return a;
}

/// Largest eigenvalue of a symmetric PSD matrix (row-major n x n) by power
/// iteration, returned as the Rayleigh quotient of the final iterate.
inline double power_iteration(const std::vector<double>& m, std::size_t n, int iterations = 20000) {
    std::vector<double> v(n), w(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = 1.0 + 0.01 * static_cast<double>(r);
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t r = 0; r < n; ++r) {
            y[r] = 0.0;
            for (std::size_t c = 0; c < n; ++c) y[r] += m[r * n + c] * x[c];
        }
    };
    for (int it = 0; it < iterations; ++it) {
        apply(v, w);
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (std::size_t r = 0; r < n; ++r) v[r] = w[r] / norm;
    }
    apply(v, w);
    double num = 0.0, den = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        num += v[r] * w[r];
        den += v[r] * v[r];
    }
    return num / den;
}

inline roughvar::TensorElement random_element(int d, int n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    std::vector<std::vector<double>> levels;
    std::size_t size = 1;
    for (int k = 1; k <= n; ++k) {
        size *= static_cast<std::size_t>(d);
        std::vector<double> lvl(size);
        for (double& c : lvl) c = normal(rng);
        levels.push_back(std::move(lvl));
    }
    return roughvar::TensorElement::from_levels(d, levels);
}

inline std::vector<std::vector<double>> random_walk(std::size_t n, int d, std::mt19937_64& rng, double step = 1.0) {
    std::normal_distribution<double> normal(0.0, step);
    std::vector<std::vector<double>> pts(n, std::vector<double>(static_cast<std::size_t>(d), 0.0));
    for (std::size_t k = 1; k < n; ++k)
        for (int i = 0; i < d; ++i) pts[k][static_cast<std::size_t>(i)] = pts[k - 1][static_cast<std::size_t>(i)] + normal(rng);
    return pts;
}

inline std::vector<double> uniform_times(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
    return t;
}

}  // namespace oracle
