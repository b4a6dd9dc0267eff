#pragma once

// Independent reference implementations used only by the tests.
// Vectors are sums of mode words acting on the lowest-weight vector and are
// brought to PBW order by bubble-sorting adjacent out-of-order pairs.

#include "virasoro/scalar.hpp"
#include "virasoro/verma.hpp"

#include <map>
#include <vector>

namespace oracle {

using vir::Scalar;
using Word = std::vector<int>;  // modes m1..ml, acting as L(m1)...L(ml)|h>

inline std::map<vir::Monomial, Scalar> normal_order(const std::map<Word, Scalar>& in, const Scalar& c,
                                                    const Scalar& h) {
    std::map<vir::Monomial, Scalar> out;
    std::vector<std::pair<Word, Scalar>> work(in.begin(), in.end());
    while (!work.empty()) {
        auto [w, k] = work.back();
        work.pop_back();
        if (k == 0) continue;
        if (!w.empty() && w.back() >= 0) {
            if (w.back() == 0) {
                w.pop_back();
                work.push_back({w, k * h});
            }
            continue;
        }
        size_t pos = w.size();
        for (size_t i = 0; i + 1 < w.size(); ++i)
            if (w[i] > w[i + 1]) {
                pos = i;
                break;
            }
        if (pos == w.size()) {
            vir::Monomial m;
            for (int x : w) m.push_back(-x);
            out[m] += k;
            continue;
        }
        int a = w[pos], b = w[pos + 1];
        Word sw = w;
        std::swap(sw[pos], sw[pos + 1]);
        work.push_back({sw, k});
        Word merged(w.begin(), w.begin() + pos);
        merged.push_back(a + b);
        merged.insert(merged.end(), w.begin() + pos + 2, w.end());
        work.push_back({merged, k * (a - b)});
        if (a + b == 0) {
            Word dropped(w.begin(), w.begin() + pos);
            dropped.insert(dropped.end(), w.begin() + pos + 2, w.end());
            Scalar t(a * a * a - a, 12);
            t.canonicalize();
            work.push_back({dropped, k * c * t});
        }
    }
    std::map<vir::Monomial, Scalar> clean;
    for (auto& [m, k] : out)
        if (k != 0) clean[m] = k;
    return clean;
}

inline Word word_of(const vir::Monomial& m) {
    Word w;
    for (int n : m) w.push_back(-n);
    return w;
}

// L(m1)...L(ml) applied to a PBW vector
inline vir::Vector act(const Word& modes, const vir::Vector& v, const Scalar& c, const Scalar& h) {
    std::map<Word, Scalar> in;
    for (const auto& [m, k] : v) {
        Word w = modes;
        Word t = word_of(m);
        w.insert(w.end(), t.begin(), t.end());
        in[w] += k;
    }
    vir::Vector r;
    for (auto& [m, k] : normal_order(in, c, h)) vir::add_term(r, m, k);
    return r;
}

inline long partitions_euler(int n) {
    std::vector<long> p(n + 1, 0);
    p[0] = 1;
    for (int i = 1; i <= n; ++i) {
        long s = 0;
        for (int k = 1;; ++k) {
            int g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
            if (g1 > i) break;
            long sign = (k % 2) ? 1 : -1;
            s += sign * p[i - g1];
            if (g2 <= i) s += sign * p[i - g2];
        }
        p[i] = s;
    }
    return p[n];
}

}  // namespace oracle
