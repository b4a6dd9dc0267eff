#include "virasoro/verma.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace vir {

int level_of(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

int l1_power(const Monomial& m) {
    int q = 0;
    for (auto it = m.rbegin(); it != m.rend() && *it == 1; ++it) ++q;
    return q;
}

bool MonoLess::operator()(const Monomial& x, const Monomial& y) const {
    int lx = level_of(x), ly = level_of(y);
    if (lx != ly) return lx < ly;
    return std::lexicographical_compare(y.begin(), y.end(), x.begin(), x.end());
}

void add_term(Vector& acc, const Monomial& m, const Scalar& k) {
    if (sgn(k) == 0) return;
    auto it = acc.find(m);
    if (it == acc.end()) {
        acc.emplace(m, k);
        return;
    }
    it->second += k;
    if (sgn(it->second) == 0) acc.erase(it);
}

void axpy(Vector& acc, const Scalar& k, const Vector& v) {
    if (sgn(k) == 0) return;
    for (const auto& [m, x] : v) add_term(acc, m, k * x);
}

Vector operator+(const Vector& x, const Vector& y) {
    Vector r = x;
    axpy(r, 1, y);
    return r;
}

Vector operator-(const Vector& x, const Vector& y) {
    Vector r = x;
    axpy(r, -1, y);
    return r;
}

Vector operator*(const Scalar& k, const Vector& v) {
    Vector r;
    axpy(r, k, v);
    return r;
}

Vector mono(const Monomial& m, const Scalar& k) {
    Vector v;
    add_term(v, m, k);
    return v;
}

Vector vacuum_vec() { return mono({}); }

bool is_homogeneous(const Vector& v) {
    if (v.empty()) return true;
    int l = level_of(v.begin()->first);
    for (const auto& t : v)
        if (level_of(t.first) != l) return false;
    return true;
}

int level_of(const Vector& v) {
    if (v.empty()) return -1;
    if (!is_homogeneous(v)) throw std::invalid_argument("level of an inhomogeneous vector");
    return level_of(v.begin()->first);
}

Bracket bracket(int m, int n, const Scalar& c) {
    Bracket b{m - n, 0};
    if (m + n == 0) {
        Scalar k(Integer(m) * m * m - m, 12);
        k.canonicalize();
        b.central = k * c;
    }
    return b;
}

namespace {

void partitions(int n, int maxpart, int minpart, Monomial& cur, std::vector<Monomial>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(n, maxpart); p >= minpart; --p) {
        cur.push_back(p);
        partitions(n - p, p, minpart, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Monomial> basis(int level) {
    if (level < 0) return {};
    std::vector<Monomial> out;
    Monomial cur;
    partitions(level, level, 1, cur, out);
    return out;
}

std::vector<Monomial> prefix_basis(int level) {
    if (level < 0) return {};
    std::vector<Monomial> out;
    Monomial cur;
    partitions(level, level, 2, cur, out);
    return out;
}

std::int64_t partition_count(int n) {
    if (n < 0) return 0;
    std::vector<std::int64_t> p(n + 1, 0);
    p[0] = 1;
    for (int k = 1; k <= n; ++k)
        for (int i = k; i <= n; ++i) p[i] += p[i - k];
    return p[n];
}

Monomial join(const Monomial& prefix, int q) {
    Monomial m = prefix;
    m.insert(m.end(), q, 1);
    return m;
}

std::vector<SFEntry> standard_form(const Vector& v) {
    std::vector<SFEntry> out;
    for (const auto& [m, k] : v) {
        int q = l1_power(m);
        out.push_back({Monomial(m.begin(), m.end() - q), q, k});
    }
    return out;
}

Vector from_standard_form(const std::vector<SFEntry>& sf) {
    Vector v;
    for (const auto& e : sf) add_term(v, join(e.prefix, e.q), e.coeff);
    return v;
}

int index(const Vector& v) {
    int r = -1;
    for (const auto& t : v) r = std::max(r, l1_power(t.first));
    return r;
}

bool is_vacuum_rep(const Vector& v) {
    for (const auto& t : v)
        if (l1_power(t.first) > 0) return false;
    return true;
}

Vector vacuum_reduce(const Vector& v) {
    Vector r;
    for (const auto& t : v)
        if (l1_power(t.first) == 0) r.emplace(t.first, t.second);
    return r;
}

Verma::Verma(Params p) : p_(std::move(p)) {}

const Vector& Verma::L_mono(int m, const Monomial& x) const {
    auto key = std::make_pair(m, x);
    {
        std::shared_lock lk(mu_);
        auto it = lmemo_.find(key);
        if (it != lmemo_.end()) return *it->second;
    }
    auto val = std::make_unique<Vector>(compute_L(m, x));
    std::unique_lock lk(mu_);
    auto [it, fresh] = lmemo_.try_emplace(key, std::move(val));
    return *it->second;
}

Vector Verma::compute_L(int m, const Monomial& x) const {
    if (x.empty()) {
        if (m > 0) return {};
        if (m == 0) return mono({}, p_.h);
        return mono({-m});
    }
    if (m == 0) return mono(x, p_.h + level_of(x));
    int n1 = x.front();
    if (m < 0 && -m >= n1) {
        Monomial y;
        y.reserve(x.size() + 1);
        y.push_back(-m);
        y.insert(y.end(), x.begin(), x.end());
        return mono(y);
    }
    // L(m) L(-n1) X = L(-n1) L(m) X + [L(m), L(-n1)] X
    Monomial rest(x.begin() + 1, x.end());
    Vector r;
    for (const auto& [y, k] : L_mono(m, rest)) axpy(r, k, L_mono(-n1, y));
    Bracket b = bracket(m, -n1, p_.c);
    if (b.coeff != 0) axpy(r, b.coeff, L_mono(m - n1, rest));
    if (sgn(b.central) != 0) add_term(r, rest, b.central);
    return r;
}

Vector Verma::L(int m, const Vector& v) const {
    Vector r;
    for (const auto& [x, k] : v) axpy(r, k, L_mono(m, x));
    return r;
}

Vector Verma::word(const std::vector<int>& w, const Vector& v) const {
    Vector r = v;
    for (auto it = w.rbegin(); it != w.rend(); ++it) r = L(*it, r);
    return r;
}

const Vector& Verma::y_mono(const Monomial& vac, int k, const Monomial& w) const {
    auto key = std::make_tuple(vac, k, w);
    {
        std::shared_lock lk(mu_);
        auto it = ymemo_.find(key);
        if (it != ymemo_.end()) return *it->second;
    }
    auto val = std::make_unique<Vector>(compute_y(vac, k, w));
    std::unique_lock lk(mu_);
    auto [it, fresh] = ymemo_.try_emplace(key, std::move(val));
    return *it->second;
}

Vector Verma::compute_y(const Monomial& vac, int k, const Monomial& w) const {
    if (vac.empty()) return k == -1 ? mono(w) : Vector{};
    int lw = level_of(w);
    int wtv = level_of(vac);
    if (lw + wtv - k - 1 < 0) return {};
    // vac = omega_(j) b with omega_(i) = L(i-1)
    int n = vac.front();
    Monomial b(vac.begin() + 1, vac.end());
    int wtb = wtv - n;
    int j = 1 - n;
    Vector r;
    int imax1 = lw + wtb - 1 - k;
    for (int i = 0; i <= imax1; ++i) {
        Integer co = binom(j, i);
        if (i % 2) co = -co;
        const Vector& bw = y_mono(b, k + i, w);
        if (bw.empty()) continue;
        axpy(r, Scalar(co), L(j - i - 1, bw));
    }
    int sj = (j % 2 == 0) ? 1 : -1;
    for (int i = 0; i <= lw + 1; ++i) {
        Integer co = binom(j, i);
        if (i % 2) co = -co;
        co *= -sj;
        for (const auto& [x, kx] : L_mono(i - 1, w)) {
            const Vector& t = y_mono(b, j + k - i, x);
            axpy(r, Scalar(co) * kx, t);
        }
    }
    return r;
}

Vector Verma::y_mode(const Vector& vac, int k, const Vector& w) const {
    if (!is_vacuum_rep(vac)) throw std::invalid_argument("y_mode: vector has an L(-1) tail; not a vacuum-module representative");
    Vector r;
    for (const auto& [v, kv] : vac)
        for (const auto& [x, kx] : w) axpy(r, kv * kx, y_mono(v, k, x));
    return r;
}

Scalar Verma::pair_mono(const Monomial& x, const Monomial& y) const {
    if (level_of(x) != level_of(y)) return 0;
    if (x.empty()) return 1;
    auto key = std::make_pair(x, y);
    {
        std::shared_lock lk(mu_);
        auto it = pmemo_.find(key);
        if (it != pmemo_.end()) return it->second;
    }
    Monomial rest(x.begin() + 1, x.end());
    Scalar r = 0;
    for (const auto& [z, k] : L_mono(x.front(), y)) r += k * pair_mono(rest, z);
    std::unique_lock lk(mu_);
    pmemo_.emplace(key, r);
    return r;
}

Scalar Verma::pair(const Vector& x, const Vector& y) const {
    Scalar r = 0;
    for (const auto& [a, ka] : x)
        for (const auto& [b, kb] : y)
            if (level_of(a) == level_of(b)) r += ka * kb * pair_mono(a, b);
    return r;
}

}  // namespace vir
