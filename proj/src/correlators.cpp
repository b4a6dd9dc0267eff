#include "virasoro/correlators.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

namespace vir {

void add_to(Laurent& acc, const Exps& e, const Scalar& k) {
    if (sgn(k) == 0) return;
    auto [it, fresh] = acc.try_emplace(e, k);
    if (fresh) return;
    it->second += k;
    if (sgn(it->second) == 0) acc.erase(it);
}

void add_to(VLaurent& acc, const Exps& e, const Vector& v, const Scalar& k) {
    if (sgn(k) == 0 || v.empty()) return;
    auto& slot = acc[e];
    axpy(slot, k, v);
    if (slot.empty()) acc.erase(e);
}

namespace {

Exps plus(const Exps& a, const Exps& b) {
    Exps r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Exps shifted(Exps e, int var, int by) {
    e[var] += by;
    return e;
}

std::pair<int, int> ordered(int i, int j) { return i < j ? std::make_pair(i, j) : std::make_pair(j, i); }

}  // namespace

Laurent mul(const Laurent& x, const Laurent& y) {
    Laurent r;
    for (const auto& [a, ka] : x)
        for (const auto& [b, kb] : y) add_to(r, plus(a, b), ka * kb);
    return r;
}

Laurent pow_diff(int n, int i, int j, int p) {
    Laurent r;
    for (int k = 0; k <= p; ++k) {
        Exps e(n, 0);
        e[i] = p - k;
        e[j] = k;
        Integer b = binom(p, k);
        if (k % 2) b = -b;
        add_to(r, e, Scalar(b));
    }
    return r;
}

std::vector<int> RationalCorrelator::origin_orders() const {
    std::vector<int> o(nvars, 0);
    for (const auto& [e, k] : num)
        for (int i = 0; i < nvars; ++i) o[i] = std::max(o[i], -e[i]);
    return o;
}

namespace {

bool divisible(const Laurent& N, int i, int j) {
    Laurent s;
    for (const auto& [e, k] : N) {
        Exps f = e;
        f[j] += f[i];
        f[i] = 0;
        add_to(s, f, k);
    }
    return s.empty();
}

// N / (x_i - x_j), assuming exact
Laurent divide(const Laurent& N, int i, int j) {
    std::map<int, Laurent> by;  // exponent of x_i -> rest
    for (const auto& [e, k] : N) {
        Exps f = e;
        f[i] = 0;
        add_to(by[e[i]], f, k);
    }
    int kmin = by.begin()->first, kmax = by.rbegin()->first;
    Laurent Q, B;
    // A_k = B_{k-1} - x_j B_k, solved from the top
    for (int k = kmax; k > kmin; --k) {
        Laurent next = by.count(k) ? by[k] : Laurent{};
        for (const auto& [e, c] : B) add_to(next, shifted(e, j, 1), c);
        B = next;
        for (const auto& [e, c] : B) add_to(Q, shifted(e, i, k - 1), c);
    }
    return Q;
}

}  // namespace

void RationalCorrelator::canonicalize() {
    if (num.empty()) {
        pair_orders.clear();
        return;
    }
    for (auto& [ij, p] : pair_orders)
        while (p > 0 && divisible(num, ij.first, ij.second)) {
            num = divide(num, ij.first, ij.second);
            --p;
        }
    for (auto it = pair_orders.begin(); it != pair_orders.end();)
        it = it->second == 0 ? pair_orders.erase(it) : std::next(it);
}

Laurent cleared_numerator(const RationalCorrelator& r, const PairOrders& target) {
    Laurent N = r.num;
    for (const auto& [ij, p] : target) {
        auto it = r.pair_orders.find(ij);
        int have = it == r.pair_orders.end() ? 0 : it->second;
        if (have > p) throw std::invalid_argument("cleared_numerator: target order too small");
        if (p > have) N = mul(N, pow_diff(r.nvars, ij.first, ij.second, p - have));
    }
    for (const auto& [ij, p] : r.pair_orders)
        if (!target.count(ij) && p > 0) throw std::invalid_argument("cleared_numerator: missing pair");
    return N;
}

namespace {

PairOrders max_orders(const RationalCorrelator& a, const RationalCorrelator& b) {
    PairOrders P = a.pair_orders;
    for (const auto& [ij, p] : b.pair_orders) P[ij] = std::max(P[ij], p);
    return P;
}

}  // namespace

RationalCorrelator operator+(const RationalCorrelator& a, const RationalCorrelator& b) {
    if (a.nvars != b.nvars) throw std::invalid_argument("adding correlators in different variables");
    RationalCorrelator r;
    r.nvars = a.nvars;
    r.pair_orders = max_orders(a, b);
    r.num = cleared_numerator(a, r.pair_orders);
    for (const auto& [e, k] : cleared_numerator(b, r.pair_orders)) add_to(r.num, e, k);
    r.canonicalize();
    return r;
}

RationalCorrelator operator*(const Scalar& k, const RationalCorrelator& a) {
    RationalCorrelator r = a;
    r.num.clear();
    for (const auto& [e, c] : a.num) add_to(r.num, e, k * c);
    r.canonicalize();
    return r;
}

bool operator==(const RationalCorrelator& a, const RationalCorrelator& b) {
    if (a.nvars != b.nvars) return false;
    auto P = max_orders(a, b);
    return cleared_numerator(a, P) == cleared_numerator(b, P);
}

RationalCorrelator times_diff(const RationalCorrelator& r, int i, int j, int k) {
    RationalCorrelator out = r;
    auto key = ordered(i, j);
    // x_i - x_j = -(x_j - x_i)
    Scalar sign = (i > j && k % 2) ? -1 : 1;
    if (k >= 0) {
        out.num = mul(out.num, pow_diff(r.nvars, key.first, key.second, k));
    } else {
        out.pair_orders[key] += -k;
    }
    out = sign * out;
    return out;
}

namespace {

struct PairFactor {
    int hi, lo, p;
};

// coefficient of x^e in prod (x_hi - x_lo)^{-p} expanded in x_lo / x_hi
Scalar product_coefficient(const std::vector<PairFactor>& F, const Region& region, const Exps& e) {
    int n = static_cast<int>(region.size());
    std::vector<int> pos(n);
    for (int t = 0; t < n; ++t) pos[region[t]] = t;
    std::vector<int> k(F.size(), -1);
    Scalar total = 0;
    // distribute over pairs whose lower variable is region[t]
    std::function<void(int, Scalar)> step = [&](int t, Scalar acc) {
        if (t < 0) {
            total += acc;
            return;
        }
        int v = region[t];
        long S = e[v];
        std::vector<int> mine;
        for (size_t f = 0; f < F.size(); ++f) {
            if (F[f].hi == v) S += F[f].p + k[f];
            if (F[f].lo == v) mine.push_back(static_cast<int>(f));
        }
        if (mine.empty()) {
            if (S == 0) step(t - 1, acc);
            return;
        }
        if (S < 0) return;
        std::function<void(size_t, long, Scalar)> split = [&](size_t idx, long left, Scalar a) {
            int f = mine[idx];
            if (idx + 1 == mine.size()) {
                k[f] = static_cast<int>(left);
                step(t - 1, a * Scalar(binom(F[f].p + left - 1, left)));
                k[f] = -1;
                return;
            }
            for (long x = 0; x <= left; ++x) {
                k[f] = static_cast<int>(x);
                split(idx + 1, left - x, a * Scalar(binom(F[f].p + x - 1, x)));
            }
            k[f] = -1;
        };
        split(0, S, acc);
    };
    step(n - 1, Scalar(1));
    return total;
}

std::vector<PairFactor> factors_for(const RationalCorrelator& r, const Region& region, Scalar& sign) {
    int n = r.nvars;
    std::vector<int> pos(n);
    for (int t = 0; t < n; ++t) pos[region[t]] = t;
    std::vector<PairFactor> F;
    sign = 1;
    for (const auto& [ij, p] : r.pair_orders) {
        if (p == 0) continue;
        auto [i, j] = ij;
        if (pos[i] < pos[j]) {
            F.push_back({i, j, p});
        } else {
            F.push_back({j, i, p});
            if (p % 2) sign = -sign;
        }
    }
    return F;
}

void check_region(const Region& region, int n) {
    std::vector<int> s = region;
    std::sort(s.begin(), s.end());
    for (int i = 0; i < n; ++i)
        if (static_cast<int>(s.size()) != n || s[i] != i) throw std::invalid_argument("region is not a permutation");
}

}  // namespace

Scalar expand_coefficient(const RationalCorrelator& r, const Region& region, const Exps& e) {
    check_region(region, r.nvars);
    Scalar sign;
    auto F = factors_for(r, region, sign);
    Scalar total = 0;
    for (const auto& [a, k] : r.num) {
        Exps rest(e.size());
        for (size_t i = 0; i < e.size(); ++i) rest[i] = e[i] - a[i];
        total += k * product_coefficient(F, region, rest);
    }
    return sign * total;
}

CoefficientTable expand_rational(const RationalCorrelator& r, const Region& region, const std::vector<Exps>& window) {
    CoefficientTable t;
    for (const auto& e : window) {
        Scalar x = expand_coefficient(r, region, e);
        if (sgn(x) != 0) t[e] = x;
    }
    return t;
}

std::vector<Exps> homogeneous_window(int nvars, int total, int lo, int cap) {
    std::vector<Exps> out;
    if (nvars == 0) return out;
    Exps e(nvars, lo);
    if (nvars == 1) {
        out.push_back({total});
        return out;
    }
    while (true) {
        int s = 0;
        for (int i = 1; i < nvars; ++i) s += e[i];
        e[0] = total - s;
        out.push_back(e);
        int i = 1;
        while (i < nvars && e[i] == lo + cap) e[i++] = lo;
        if (i == nvars) break;
        ++e[i];
    }
    return out;
}

RationalCorrelator shifted_geometric_sum(int mprime, int lower) {
    if (lower != mprime + 2 && lower != 0 && lower != -1)
        throw std::invalid_argument("shifted_geometric_sum: lower must be m'+2, 0 or -1");
    // y1^{-L-1} y2^L [2 y2 + (2L - m') (y1 - y2)] / (y1 - y2)^2
    RationalCorrelator r;
    r.nvars = 2;
    int L = lower;
    Scalar a = 2 * L - mprime;
    add_to(r.num, {-L - 1, L + 1}, 2 - a);
    add_to(r.num, {-L, L}, a);
    r.pair_orders[{0, 1}] = 2;
    r.canonicalize();
    return r;
}

RationalCorrelator central_sum(const Scalar& c) {
    RationalCorrelator r;
    r.nvars = 2;
    add_to(r.num, {0, 0}, c / 2);
    r.pair_orders[{0, 1}] = 4;
    r.canonicalize();
    return r;
}

Scalar coordinate_pairing(const Vector& wdual, const Vector& v) {
    Scalar s = 0;
    const Vector& small = wdual.size() < v.size() ? wdual : v;
    const Vector& big = wdual.size() < v.size() ? v : wdual;
    for (const auto& [m, k] : small) {
        auto it = big.find(m);
        if (it != big.end()) s += k * it->second;
    }
    return s;
}

CorrelatorEngine::CorrelatorEngine(std::shared_ptr<const Verma> M) : M_(std::move(M)) {}

std::vector<CorrelatorEngine::Item> CorrelatorEngine::expand_insertions(const std::vector<Vector>& ins,
                                                                       int offset) const {
    std::vector<Item> items{{Scalar(1), {}}};
    for (size_t i = 0; i < ins.size(); ++i) {
        int var = offset + static_cast<int>(i);
        std::vector<Item> next;
        for (const auto& [m, k] : ins[i]) {
            if (m.empty()) {
                for (const auto& it : items) next.push_back({it.k * k, it.ops});
                continue;
            }
            if (m.size() != 1)
                throw std::invalid_argument("insertions must be combinations of 1 and L(-n)1");
            int n = m[0];
            if (n == 1) continue;  // L(-1)1 vanishes in the vacuum module
            Scalar f = k / Scalar(falling(n - 2, n - 2));
            for (const auto& it : items) {
                auto ops = it.ops;
                ops.push_back({OpKind::Full, var, n - 2});
                next.push_back({it.k * f, ops});
            }
        }
        items = std::move(next);
    }
    return items;
}

VLaurent CorrelatorEngine::apply_minus(const Op& op, const VLaurent& U) const {
    VLaurent out;
    for (const auto& [e, v] : U)
        for (const auto& [mono_, k] : v) {
            int lev = level_of(mono_);
            for (int m = -1; m <= lev; ++m) {
                Integer f = falling(-m - 2, op.d);
                if (f == 0) continue;
                const Vector& img = M_->L_mono(m, mono_);
                if (img.empty()) continue;
                add_to(out, shifted(e, op.var, -m - 2 - op.d), img, k * Scalar(f));
            }
        }
    return out;
}

VLaurent CorrelatorEngine::apply_plus(const Op& op, const VLaurent& U, int level_cap) const {
    VLaurent out;
    for (const auto& [e, v] : U)
        for (const auto& [mono_, k] : v) {
            int lev = level_of(mono_);
            for (int m = -2; lev - m <= level_cap; --m) {
                Integer f = falling(-m - 2, op.d);
                if (f == 0) continue;
                add_to(out, shifted(e, op.var, -m - 2 - op.d), M_->L_mono(m, mono_), k * Scalar(f));
            }
        }
    return out;
}

namespace {

struct CTerm {
    Scalar coef;
    int padd;
    std::optional<Op> op;
};

// [d^da Y-(x_a), d^db Y+(x_b)] expanded for |x_a| > |x_b|
std::vector<CTerm> commutator(const Op& a, const Op& b, const Scalar& c) {
    std::vector<CTerm> out;
    int da = a.d, db = b.d;
    struct Base {
        Scalar k;
        int p;
        bool plus_side;
        int e;
    };
    const Base bases[] = {{2, 2, true, 0}, {1, 1, true, 1}, {2, 2, false, 0}, {-1, 1, false, 1}};
    for (const auto& B : bases) {
        if (B.plus_side) {
            for (int u = 0; u <= db; ++u) {
                Integer f = binom(db, u) * falling(-B.p, da + u);
                if (u % 2) f = -f;
                if (f == 0) continue;
                out.push_back({B.k * Scalar(f), B.p + da + u, Op{OpKind::Plus, b.var, B.e + db - u}});
            }
        } else {
            for (int t = 0; t <= da; ++t) {
                Integer f = binom(da, t) * falling(-B.p, t + db);
                if (db % 2) f = -f;
                if (f == 0) continue;
                out.push_back({B.k * Scalar(f), B.p + t + db, Op{OpKind::Minus, a.var, B.e + da - t}});
            }
        }
    }
    Integer f = falling(-4, da + db);
    if (db % 2) f = -f;
    Scalar cc = c / 2 * Scalar(f);
    if (sgn(cc) != 0) out.push_back({cc, 4 + da + db, std::nullopt});
    return out;
}

VLaurent scaled(const VLaurent& U, const Scalar& k) {
    VLaurent r;
    for (const auto& [e, v] : U) add_to(r, e, v, k);
    return r;
}

void merge_into(VLaurent& acc, const VLaurent& U) {
    for (const auto& [e, v] : U) add_to(acc, e, v);
}

}  // namespace

std::vector<ProductTerm> CorrelatorEngine::order_ops(std::vector<Op> ops, VLaurent U, PairOrders P, int) const {
    using Key = std::pair<PairOrders, std::vector<Op>>;
    std::map<Key, VLaurent> pending, done;
    merge_into(pending[{P, ops}], U);
    while (!pending.empty()) {
        auto node = pending.extract(pending.begin());
        const auto& [poles, list] = node.key();
        const VLaurent& V = node.mapped();
        if (V.empty()) continue;
        int p = -1;
        for (int i = static_cast<int>(list.size()) - 1; i >= 0; --i)
            if (list[i].kind != OpKind::Plus) {
                p = i;
                break;
            }
        if (p < 0) {
            merge_into(done[{poles, list}], V);
            continue;
        }
        if (list[p].kind == OpKind::Full) {
            for (OpKind k : {OpKind::Plus, OpKind::Minus}) {
                auto l2 = list;
                l2[p].kind = k;
                merge_into(pending[{poles, l2}], V);
            }
            continue;
        }
        if (p + 1 == static_cast<int>(list.size())) {
            auto l2 = list;
            Op op = l2.back();
            l2.pop_back();
            merge_into(pending[{poles, l2}], apply_minus(op, V));
            continue;
        }
        const Op a = list[p], b = list[p + 1];
        if (a.var >= b.var) throw std::logic_error("normal ordering: region invariant violated");
        auto swapped = list;
        std::swap(swapped[p], swapped[p + 1]);
        merge_into(pending[{poles, swapped}], V);
        for (const auto& t : commutator(a, b, M_->params().c)) {
            auto l2 = list;
            l2.erase(l2.begin() + p, l2.begin() + p + 2);
            if (t.op) l2.insert(l2.begin() + p, *t.op);
            auto P2 = poles;
            P2[{a.var, b.var}] += t.padd;
            merge_into(pending[{P2, l2}], scaled(V, t.coef));
        }
    }
    std::vector<ProductTerm> out;
    for (auto& [key, V] : done)
        if (!V.empty()) out.push_back({key.first, key.second, std::move(V)});
    return out;
}

namespace {

VLaurent project_all(const VLaurent& U, const Projector& pi) {
    VLaurent r;
    for (const auto& [e, v] : U) add_to(r, e, pi(v));
    return r;
}

}  // namespace

ProjectedProduct CorrelatorEngine::normal_order(const std::vector<Vector>& insertions, const Vector& w,
                                                const Projector& pi) const {
    int n = static_cast<int>(insertions.size());
    ProjectedProduct out;
    out.nvars = n;
    for (const auto& item : expand_insertions(insertions, 0)) {
        VLaurent U;
        add_to(U, Exps(n, 0), w, item.k);
        for (auto& t : order_ops(item.ops, U, {}, n)) {
            if (pi) t.laurent = project_all(t.laurent, pi);
            if (!t.laurent.empty()) out.terms.push_back(std::move(t));
        }
    }
    return out;
}

VLaurent CorrelatorEngine::evaluate(const ProductTerm& t, int, int level_cap) const {
    VLaurent U;
    for (const auto& [e, v] : t.laurent) {
        Vector kept;
        for (const auto& [m, k] : v)
            if (level_of(m) <= level_cap) kept.emplace(m, k);
        add_to(U, e, kept);
    }
    for (auto it = t.plus_ops.rbegin(); it != t.plus_ops.rend(); ++it) U = apply_plus(*it, U, level_cap);
    return U;
}

RationalCorrelator CorrelatorEngine::matrix_coefficient(const Vector& wdual, const std::vector<Vector>& insertions,
                                                        std::optional<int> pi_position, const Vector& w,
                                                        const Projector& pi) const {
    int n = static_cast<int>(insertions.size());
    RationalCorrelator result;
    result.nvars = n;
    if (wdual.empty()) return result;
    int cap = 0;
    for (const auto& [m, k] : wdual) cap = std::max(cap, level_of(m));
    if (pi_position && (*pi_position < 0 || *pi_position > n))
        throw std::invalid_argument("pi position out of range");
    if (pi_position && !pi) throw std::invalid_argument("pi position given without a projection");
    int k = pi_position ? *pi_position : 0;

    std::vector<Vector> left(insertions.begin(), insertions.begin() + k);
    std::vector<Vector> right(insertions.begin() + k, insertions.end());
    std::vector<ProductTerm> stage;
    if (pi_position) {
        for (const auto& item : expand_insertions(right, k)) {
            VLaurent U;
            add_to(U, Exps(n, 0), w, item.k);
            for (auto& t : order_ops(item.ops, U, {}, n)) {
                t.laurent = project_all(t.laurent, pi);
                if (!t.laurent.empty()) stage.push_back(std::move(t));
            }
        }
    } else {
        VLaurent U;
        add_to(U, Exps(n, 0), w);
        stage.push_back({{}, {}, U});
        left = insertions;
    }

    std::map<PairOrders, Laurent> parts;
    for (const auto& item : expand_insertions(left, 0)) {
        for (const auto& t : stage) {
            std::vector<Op> ops = item.ops;
            for (const auto& op : t.plus_ops) ops.push_back(op);
            for (const auto& term : order_ops(ops, scaled(t.laurent, item.k), t.poles, n)) {
                Laurent& acc = parts[term.poles];
                for (const auto& [e, v] : evaluate(term, n, cap)) add_to(acc, e, coordinate_pairing(wdual, v));
            }
        }
    }
    for (auto& [P, L] : parts) {
        if (L.empty()) continue;
        RationalCorrelator piece;
        piece.nvars = n;
        piece.num = L;
        for (const auto& [ij, p] : P)
            if (p > 0) piece.pair_orders[ij] = p;
        result = result + piece;
    }
    result.canonicalize();
    return result;
}

CoefficientTable truncated_series(const Verma& M, const Vector& wdual, const std::vector<Vector>& insertions,
                                  std::optional<int> pi_position, const Vector& w, const Projector& pi,
                                  const std::vector<Exps>& window) {
    int n = static_cast<int>(insertions.size());
    if (pi_position && (*pi_position < 0 || *pi_position > n))
        throw std::invalid_argument("pi position out of range");
    std::vector<Vector> vac;
    for (const auto& v : insertions) vac.push_back(vacuum_reduce(v));
    CoefficientTable t;
    for (const auto& e : window) {
        Vector x = w;
        if (pi_position && *pi_position == n) x = pi(x);
        for (int i = n - 1; i >= 0 && !x.empty(); --i) {
            x = M.y_mode(vac[i], -e[i] - 1, x);
            if (pi_position && *pi_position == i) x = pi(x);
        }
        Scalar s = coordinate_pairing(wdual, x);
        if (sgn(s) != 0) t[e] = s;
    }
    return t;
}

VLaurent projected_omega_action(const ProjectionSplit& split, const Vector& w1) {
    if (!split.decompose(w1).w2.empty()) throw std::invalid_argument("projected_omega_action: input not in W1");
    CorrelatorEngine E(split.module_ptr());
    auto pp = E.normal_order({mono({2})}, w1, [&](const Vector& v) { return split.project(v); });
    VLaurent out;
    for (const auto& t : pp.terms) {
        if (!t.plus_ops.empty() || !t.poles.empty())
            throw std::logic_error("projected_omega_action: regular part survived the projection");
        merge_into(out, t.laurent);
    }
    return out;
}

ProjectedProduct projected_omega_product(const ProjectionSplit& split, int l, const Vector& w1, int cap) {
    if (l < 1 || l > cap) throw std::invalid_argument("projected_omega_product: operator count outside [1, cap]");
    if (!split.decompose(w1).w2.empty()) throw std::invalid_argument("projected_omega_product: input not in W1");
    CorrelatorEngine E(split.module_ptr());
    std::vector<Vector> ins(l, mono({2}));
    return E.normal_order(ins, w1, [&](const Vector& v) { return split.project(v); });
}

namespace {

// compositions of d into the given number of parts
void compositions(int d, int parts, std::vector<int>& cur, const std::function<void()>& f) {
    if (parts == 0) {
        if (d == 0) f();
        return;
    }
    if (parts == 1) {
        cur.push_back(d);
        f();
        cur.pop_back();
        return;
    }
    for (int x = 0; x <= d; ++x) {
        cur.push_back(x);
        compositions(d - x, parts - 1, cur, f);
        cur.pop_back();
    }
}

}  // namespace

WeightDegreeReport check_n_weight_degree(const RationalCorrelator& r, int N, const std::vector<int>& weights,
                                         int phi_weight, int phi_var) {
    int bound = N - phi_weight;
    for (int w : weights) bound -= w;
    if (r.num.empty()) return {true, bound, bound};
    int n = r.nvars;
    int centre = -1;
    for (int i = n - 1; i >= 0; --i)
        if (i != phi_var) {
            centre = i;
            break;
        }
    if (centre < 0) throw std::invalid_argument("check_n_weight_degree: nothing to recenter at");
    std::vector<int> others;
    for (int i = 0; i < n; ++i)
        if (i != centre) others.push_back(i);
    int pole_total = 0;
    for (const auto& [ij, p] : r.pair_orders) pole_total += p;
    // lowest total u-degree of N(t + u), x_centre = t
    int ord = -1;
    for (int d = 0; d <= 64 && ord < 0; ++d) {
        std::map<std::pair<int, std::vector<int>>, Scalar> comp;
        std::vector<int> beta;
        compositions(d, static_cast<int>(others.size()), beta, [&] {
            for (const auto& [e, k] : r.num) {
                Scalar c = k;
                int texp = 0;
                for (size_t a = 0; a < others.size(); ++a) {
                    int i = others[a];
                    c *= Scalar(binom(e[i], beta[a]));
                    if (sgn(c) == 0) break;
                    texp += e[i] - beta[a];
                }
                if (sgn(c) == 0) continue;
                texp += e[centre];
                comp[{texp, beta}] += c;
            }
        });
        for (const auto& [key, c] : comp)
            if (sgn(c) != 0) {
                ord = d;
                break;
            }
    }
    if (ord < 0) throw std::runtime_error("check_n_weight_degree: no nonzero component found up to degree 64");
    int md = ord - pole_total;
    return {md >= bound, md, bound};
}

}  // namespace vir
