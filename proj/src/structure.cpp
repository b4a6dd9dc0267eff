#include "virasoro/structure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace vir {

namespace {

std::mutex g_index_mu;
std::map<int, std::map<Monomial, int>> g_index;

const std::map<Monomial, int>& index_map(int level) {
    std::lock_guard lk(g_index_mu);
    auto it = g_index.find(level);
    if (it != g_index.end()) return it->second;
    std::map<Monomial, int> m;
    auto b = basis(level);
    for (size_t i = 0; i < b.size(); ++i) m[b[i]] = static_cast<int>(i);
    return g_index.emplace(level, std::move(m)).first->second;
}

Vector apply_pbw(const Verma& M, const Monomial& prefix, int t, Vector v) {
    for (int i = 0; i < t; ++i) v = M.L(-1, v);
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) v = M.L(-*it, v);
    return v;
}

}  // namespace

int basis_position(const Monomial& m) { return index_map(level_of(m)).at(m); }

std::vector<Scalar> coords(const Vector& v, int level) {
    const auto& idx = index_map(level);
    std::vector<Scalar> x(idx.size());
    for (const auto& [m, k] : v) {
        auto it = idx.find(m);
        if (it == idx.end()) throw std::invalid_argument("coords: vector not homogeneous of the given level");
        x[it->second] = k;
    }
    return x;
}

Vector from_coords(const std::vector<Scalar>& x, int level) {
    auto b = basis(level);
    Vector v;
    for (size_t i = 0; i < x.size(); ++i) add_term(v, b[i], x[i]);
    return v;
}

Matrix mode_matrix(const Verma& M, int m, int level) {
    auto cols = basis(level);
    int out = level - m;
    Matrix A(out < 0 ? 0 : static_cast<int>(partition_count(out)), static_cast<int>(cols.size()));
    if (out < 0) return A;
    for (size_t j = 0; j < cols.size(); ++j) {
        for (const auto& [y, k] : M.L_mono(m, cols[j])) A(basis_position(y), static_cast<int>(j)) = k;
    }
    return A;
}

std::vector<Scalar> Subspace::reduce(std::vector<Scalar> v) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
        int p = piv_[r];
        if (sgn(v[p]) == 0) continue;
        Scalar f = v[p];
        for (int j = 0; j < n_; ++j)
            if (sgn(rows_[r][j]) != 0) v[j] -= f * rows_[r][j];
    }
    return v;
}

bool Subspace::contains(const std::vector<Scalar>& v) const {
    auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](const Scalar& x) { return sgn(x) == 0; });
}

bool Subspace::add(std::vector<Scalar> v) {
    if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("Subspace::add dimension mismatch");
    v = reduce(std::move(v));
    int p = -1;
    for (int j = 0; j < n_; ++j)
        if (sgn(v[j]) != 0) {
            p = j;
            break;
        }
    if (p < 0) return false;
    Scalar inv = 1 / v[p];
    for (auto& x : v) x *= inv;
    for (auto& row : rows_) {
        if (sgn(row[p]) == 0) continue;
        Scalar f = row[p];
        for (int j = 0; j < n_; ++j)
            if (sgn(v[j]) != 0) row[j] -= f * v[j];
    }
    auto pos = std::lower_bound(piv_.begin(), piv_.end(), p) - piv_.begin();
    piv_.insert(piv_.begin() + pos, p);
    rows_.insert(rows_.begin() + pos, std::move(v));
    return true;
}

GramMatrix gram_matrix(const Verma& M, int level) {
    GramMatrix g{level, basis(level), Matrix()};
    int n = static_cast<int>(g.basis.size());
    g.entries = Matrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Scalar x = M.pair_mono(g.basis[i], g.basis[j]);
            g.entries(i, j) = x;
            g.entries(j, i) = x;
        }
    return g;
}

Scalar kac_determinant(const Verma& M, int level) { return determinant(gram_matrix(M, level).entries); }

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t reduce_mod(const Scalar& x, std::uint64_t p) {
    Integer P(static_cast<unsigned long>(p));
    Integer n = x.get_num() % P;
    if (n < 0) n += P;
    Integer d = x.get_den() % P;
    if (d == 0) throw std::invalid_argument("prime divides a denominator");
    std::uint64_t nn = n.get_ui(), dd = d.get_ui();
    return mulmod(nn, powmod(dd, p - 2, p), p);
}

}  // namespace

std::uint64_t kac_determinant_mod(const Verma& M, int level, std::uint64_t p) {
    auto b = basis(level);
    int n = static_cast<int>(b.size());
    std::vector<std::uint64_t> a(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            auto x = reduce_mod(M.pair_mono(b[i], b[j]), p);
            a[static_cast<size_t>(i) * n + j] = x;
            a[static_cast<size_t>(j) * n + i] = x;
        }
    std::uint64_t det = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (a[static_cast<size_t>(i) * n + c]) {
                piv = i;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a[static_cast<size_t>(piv) * n + j], a[static_cast<size_t>(c) * n + j]);
            det = (p - det) % p;
        }
        std::uint64_t d = a[static_cast<size_t>(c) * n + c];
        det = mulmod(det, d, p);
        std::uint64_t inv = powmod(d, p - 2, p);
        for (int i = c + 1; i < n; ++i) {
            std::uint64_t f = a[static_cast<size_t>(i) * n + c];
            if (!f) continue;
            f = mulmod(f, inv, p);
            for (int j = c; j < n; ++j) {
                std::uint64_t t = mulmod(f, a[static_cast<size_t>(c) * n + j], p);
                std::uint64_t& x = a[static_cast<size_t>(i) * n + j];
                x = (x + p - t) % p;
            }
        }
    }
    return det;
}

std::vector<SingularVector> find_singular(const Verma& M, int level) {
    if (level < 1) throw std::invalid_argument("find_singular: level must be >= 1");
    Matrix A = vstack(mode_matrix(M, 1, level), mode_matrix(M, 2, level));
    std::vector<SingularVector> out;
    Monomial top(level, 1);
    for (auto& k : kernel(A)) {
        Vector v = from_coords(k, level);
        auto it = v.find(top);
        if (it == v.end())
            throw std::runtime_error("singular vector without an L(-1)^N term at level " + std::to_string(level));
        Scalar f = 1 / it->second;
        out.push_back({level, f * v});
    }
    return out;
}

FFLineData ff_line(const Params& p) {
    const Scalar& c = p.c;
    FFLineData f;
    f.disc = (c - 1) * (c - 25);
    f.nu = QuadScalar((c - 13) / 12, Scalar(1, 12), f.disc);
    QuadScalar one(Scalar(1));
    QuadScalar nu1 = f.nu + one;
    QuadScalar b2 = nu1 * nu1 - QuadScalar(4 * p.h) * f.nu;
    if (b2.b == 0) b2.d = f.disc;
    auto b = quad_sqrt(b2);
    if (b) {
        // fix the sign so the leading nonzero part is positive
        if (b->a < 0 || (b->a == 0 && b->b < 0)) *b = QuadScalar(-b->a, -b->b, b->d);
        if (b->b == 0) b->d = f.disc;
    }
    f.beta = b;
    return f;
}

std::string to_string(BlockCase b) {
    switch (b) {
        case BlockCase::A: return "A";
        case BlockCase::B: return "B";
        case BlockCase::C: return "C";
        case BlockCase::D: return "D";
        default: return "Undetermined";
    }
}

namespace {

bool is_integer(const Scalar& x) { return x.get_den() == 1; }

// integer points of r + nu s + beta = 0 with nu, beta rational and |rs| <= cap
std::vector<std::pair<long, long>> rational_points(const Scalar& nu, const Scalar& beta, int cap) {
    std::set<long> svals;
    for (long s = -cap; s <= cap; ++s) svals.insert(s);
    Scalar sstar = -beta / nu;
    if (is_integer(sstar)) svals.insert(sstar.get_num().get_si());
    std::vector<std::pair<long, long>> pts;
    for (long s : svals) {
        Scalar r = -beta - nu * s;
        if (!is_integer(r)) continue;
        long rl = r.get_num().get_si();
        if (std::abs(rl * s) <= cap) pts.push_back({rl, s});
    }
    return pts;
}

bool has_rational_points(const Scalar& nu, const Scalar& beta) {
    // r = -beta - nu s is an integer for some s iff it is for some s in [0, den(nu))
    long d = nu.get_den().get_si();
    for (long s = 0; s < d; ++s)
        if (is_integer(-beta - nu * s)) return true;
    return false;
}

std::vector<std::pair<long, long>> positive_sorted(const std::vector<std::pair<long, long>>& pts) {
    std::vector<std::pair<long, long>> pos;
    for (auto pt : pts)
        if (pt.first * pt.second > 0) pos.push_back(pt);
    std::stable_sort(pos.begin(), pos.end(),
                     [](auto x, auto y) { return x.first * x.second < y.first * y.second; });
    return pos;
}

}  // namespace

BlockReport classify_block(const Params& p, int level_cap) {
    if (level_cap < 1) throw std::invalid_argument("classify_block: level_cap must be >= 1");
    BlockReport rep;
    rep.level_cap = level_cap;
    FFLineData f = ff_line(p);
    if (!f.beta) {
        // beta outside Q(sqrt d) cannot equal -r - nu s
        rep.kase = BlockCase::A;
        return rep;
    }
    const QuadScalar& nu = f.nu;
    const QuadScalar& beta = *f.beta;
    if (!nu.is_rational()) {
        // rational and irrational parts: r + nu.a s + beta.a = 0, nu.b s + beta.b = 0
        Scalar s = -beta.b / nu.b;
        Scalar r = -beta.a - nu.a * s;
        if (!is_integer(s) || !is_integer(r)) {
            rep.kase = BlockCase::A;
            return rep;
        }
        long rl = r.get_num().get_si(), sl = s.get_num().get_si();
        if (std::abs(rl * sl) <= level_cap) rep.integer_points.push_back({rl, sl});
        rep.kase = rl * sl == 0 ? BlockCase::A : BlockCase::B;
        rep.members.push_back(p.h);
        if (rl * sl != 0) rep.members.push_back(p.h + Scalar(rl * sl));
        return rep;
    }
    if (!beta.is_rational()) {
        rep.kase = BlockCase::A;
        return rep;
    }
    Scalar n = nu.a, b = beta.a;
    if (!has_rational_points(n, b)) {
        rep.kase = BlockCase::A;
        return rep;
    }
    rep.integer_points = rational_points(n, b, level_cap);
    Scalar sstar = -b / n;
    if (is_integer(sstar)) rep.axis_point = std::make_pair(0L, sstar.get_num().get_si());
    else if (is_integer(b)) rep.axis_point = std::make_pair(-b.get_num().get_si(), 0L);
    rep.kase = rep.axis_point ? BlockCase::C : BlockCase::D;
    std::set<Scalar> rs;
    for (auto [r, s] : rep.integer_points) rs.insert(Scalar(r * s));
    for (const auto& x : rs) rep.members.push_back(p.h + x);
    if (rep.kase == BlockCase::D) {
        auto pos = positive_sorted(rep.integer_points);
        if (!pos.empty()) {
            auto [r1, s1] = pos.front();
            Scalar bt = Scalar(r1) - n * s1;
            auto aux = positive_sorted(rational_points(n, bt, level_cap));
            long base = r1 * s1;
            // odd i: (r_i s_i, r_{i+1} s_{i+1}); even i: r_1 s_1 plus (r'_{i-1} s'_{i-1}, r'_i s'_i)
            auto main_h = [&](size_t i) -> std::optional<Scalar> {
                if (i < 1 || i > pos.size()) return std::nullopt;
                return p.h + Scalar(pos[i - 1].first * pos[i - 1].second);
            };
            auto aux_h = [&](size_t i) -> std::optional<Scalar> {
                if (i < 1 || i > aux.size()) return std::nullopt;
                return p.h + Scalar(base + aux[i - 1].first * aux[i - 1].second);
            };
            for (size_t i = 1;; ++i) {
                auto hi = i % 2 ? main_h(i) : aux_h(i - 1);
                auto hp = i % 2 ? main_h(i + 1) : aux_h(i);
                if (!hi || !hp) break;
                rep.h_list.push_back(*hi);
                rep.h_prime_list.push_back(*hp);
            }
            std::set<Scalar> all(rep.members.begin(), rep.members.end());
            all.insert(rep.h_list.begin(), rep.h_list.end());
            all.insert(rep.h_prime_list.begin(), rep.h_prime_list.end());
            rep.members.assign(all.begin(), all.end());
        }
    }
    return rep;
}

ProjectionSplit::ProjectionSplit(std::shared_ptr<const Verma> M, SingularVector s) : M_(std::move(M)), s_(std::move(s)) {
    Monomial top(s_.level, 1);
    auto it = s_.s.find(top);
    if (it == s_.s.end()) throw std::invalid_argument("ProjectionSplit: singular vector lacks an L(-1)^N term");
    if (it->second != 1) s_.s = (1 / it->second) * s_.s;
}

const Vector& ProjectionSplit::w2_vector(const Monomial& m) const {
    {
        std::lock_guard lk(mu_);
        auto it = cache_.find(m);
        if (it != cache_.end()) return *it->second;
    }
    int q = l1_power(m);
    if (q < N()) throw std::invalid_argument("w2_vector: monomial has L(-1) power below N");
    Vector v;
    if (q == static_cast<int>(m.size())) {
        v = q == N() ? s_.s : M_->L(-1, w2_vector(Monomial(q - 1, 1)));
    } else {
        v = M_->L(-m.front(), w2_vector(Monomial(m.begin() + 1, m.end())));
    }
    std::lock_guard lk(mu_);
    auto [it, fresh] = cache_.try_emplace(m, std::make_unique<Vector>(std::move(v)));
    return *it->second;
}

std::vector<Monomial> ProjectionSplit::w1_basis(int level) const {
    std::vector<Monomial> out;
    for (auto& m : basis(level))
        if (l1_power(m) < N()) out.push_back(m);
    return out;
}

std::vector<Monomial> ProjectionSplit::w2_basis(int level) const {
    std::vector<Monomial> out;
    for (auto& m : basis(level))
        if (l1_power(m) >= N()) out.push_back(m);
    return out;
}

ProjectionSplit::Decomposition ProjectionSplit::decompose(const Vector& v) const {
    Decomposition d;
    Vector work = v;
    int qmax = index(work);
    for (int q = qmax; q >= N(); --q) {
        std::vector<std::pair<Monomial, Scalar>> at;
        for (const auto& [m, k] : work)
            if (l1_power(m) == q) at.push_back({m, k});
        for (const auto& [m, k] : at) {
            add_term(d.w2, m, k);
            axpy(work, -k, w2_vector(m));
        }
    }
    d.w1 = std::move(work);
    return d;
}

Vector ProjectionSplit::from_w2_coords(const Vector& a) const {
    Vector r;
    for (const auto& [m, k] : a) axpy(r, k, w2_vector(m));
    return r;
}

Vector ProjectionSplit::project(const Vector& v) const { return from_w2_coords(decompose(v).w2); }

ProjectionSplit projection_split(std::shared_ptr<const Verma> M, int search_cap) {
    BlockReport rep = classify_block(M->params(), std::max(search_cap, 1));
    if (rep.kase == BlockCase::D)
        throw std::invalid_argument("projection_split: block D modules have two singular generators");
    for (int l = 1; l <= search_cap; ++l) {
        auto sv = find_singular(*M, l);
        if (!sv.empty()) return ProjectionSplit(M, sv.front());
    }
    throw std::invalid_argument("projection_split: no singular vector up to level " + std::to_string(search_cap));
}

GradedSubspace span_levels(const std::vector<Vector>& vecs, int cap) {
    GradedSubspace T;
    T.cap = cap;
    for (int l = 0; l <= cap; ++l) T.level.emplace_back(static_cast<int>(partition_count(l)));
    for (const auto& v : vecs) {
        std::map<int, Vector> parts;
        for (const auto& [m, k] : v) parts[level_of(m)].emplace(m, k);
        for (auto& [l, part] : parts)
            if (l <= cap) T.level[l].add(coords(part, l));
    }
    return T;
}

GradedSubspace submodule_generated(const Verma& M, const std::vector<Vector>& gens, int cap) {
    GradedSubspace T;
    T.cap = cap;
    for (int l = 0; l <= cap; ++l) T.level.emplace_back(static_cast<int>(partition_count(l)));
    std::vector<Vector> queue;
    for (const auto& g : gens) {
        std::map<int, Vector> parts;
        for (const auto& [m, k] : g) parts[level_of(m)].emplace(m, k);
        for (auto& [l, part] : parts) queue.push_back(part);
    }
    while (!queue.empty()) {
        Vector x = queue.back();
        queue.pop_back();
        if (x.empty()) continue;
        int l = level_of(x);
        if (l > cap) continue;
        if (!T.level[l].add(coords(x, l))) continue;
        for (int m : {1, 2}) {
            Vector y = M.L(m, x);
            if (!y.empty()) queue.push_back(y);
        }
    }
    for (int l = 1; l <= cap; ++l)
        for (int m : {1, 2}) {
            if (l - m < 0) continue;
            auto rows = T.level[l - m].rows();
            for (const auto& r : rows) T.level[l].add(coords(M.L(-m, from_coords(r, l - m)), l));
        }
    return T;
}

bool is_submodule(const Verma& M, const GradedSubspace& T) {
    for (int l = 0; l <= T.cap; ++l)
        for (const auto& r : T.level[l].rows()) {
            Vector x = from_coords(r, l);
            for (int m : {1, 2, -1, -2}) {
                int t = l - m;
                if (t < 0 || t > T.cap) continue;
                Vector y = M.L(m, x);
                if (!T.level[t].contains(coords(y, t))) return false;
            }
        }
    return true;
}

InducedSplit restrict_split(const ProjectionSplit& sp, const GradedSubspace& T) {
    const Verma& M = sp.module();
    if (!is_submodule(M, T)) throw std::invalid_argument("restrict_split: T is not a submodule");
    InducedSplit out;
    out.cap = T.cap;
    for (int l = 0; l <= T.cap; ++l) {
        for (const auto& m : sp.w2_basis(l))
            if (!T.level[l].contains(coords(sp.w2_vector(m), l)))
                throw std::invalid_argument("restrict_split: T does not contain W2");
        // T1 = vectors of T(l) supported on W1 monomials
        auto b = basis(l);
        const auto& rows = T.level[l].rows();
        std::vector<int> bad;
        for (size_t j = 0; j < b.size(); ++j)
            if (l1_power(b[j]) >= sp.N()) bad.push_back(static_cast<int>(j));
        Matrix A(static_cast<int>(bad.size()), static_cast<int>(rows.size()));
        for (size_t i = 0; i < bad.size(); ++i)
            for (size_t k = 0; k < rows.size(); ++k) A(static_cast<int>(i), static_cast<int>(k)) = rows[k][bad[i]];
        int t1 = static_cast<int>(rows.size()) - (A.rows ? rank(A) : 0);
        out.dim_T1.push_back(t1);
        out.dim_T2.push_back(static_cast<int>(sp.w2_basis(l).size()));
        out.dim_T.push_back(T.level[l].dim());
    }
    const ProjectionSplit* s = &sp;
    out.project = [s](const Vector& v) { return s->project(v); };
    out.normalize = [](const Vector& v) { return v; };
    out.in_image = [s](const Vector& v) { return s->project(v) == v; };
    return out;
}

InducedSplit quotient_split(const ProjectionSplit& sp, const GradedSubspace& T) {
    const Verma& M = sp.module();
    if (!is_submodule(M, T)) throw std::invalid_argument("quotient_split: T is not a submodule");
    auto Tp = std::make_shared<GradedSubspace>(T);
    InducedSplit out;
    out.cap = T.cap;
    for (int l = 0; l <= T.cap; ++l) {
        for (const auto& r : T.level[l].rows()) {
            Vector x = from_coords(r, l);
            if (sp.project(x) != x) throw std::invalid_argument("quotient_split: T is not contained in W2");
        }
        Subspace q1 = T.level[l], q2 = T.level[l];
        int base = T.level[l].dim();
        for (const auto& m : sp.w1_basis(l)) q1.add(coords(mono(m), l));
        for (const auto& m : sp.w2_basis(l)) q2.add(coords(sp.w2_vector(m), l));
        out.dim_T1.push_back(q1.dim() - base);
        out.dim_T2.push_back(q2.dim() - base);
        out.dim_T.push_back(static_cast<int>(partition_count(l)) - base);
    }
    auto normalize = [Tp](const Vector& v) {
        std::map<int, Vector> parts;
        for (const auto& [m, k] : v) parts[level_of(m)].emplace(m, k);
        Vector r;
        for (auto& [l, part] : parts) {
            if (l > Tp->cap) throw std::invalid_argument("quotient_split: level beyond cap");
            axpy(r, 1, from_coords(Tp->level[l].reduce(coords(part, l)), l));
        }
        return r;
    };
    const ProjectionSplit* s = &sp;
    out.normalize = normalize;
    out.project = [s, normalize](const Vector& v) { return normalize(s->project(normalize(v))); };
    out.in_image = [s, normalize](const Vector& v) { return normalize(s->project(v)) == normalize(v); };
    return out;
}

DirectSum::DirectSum(std::vector<std::shared_ptr<const Verma>> comps) : comps_(std::move(comps)) {
    if (comps_.empty()) throw std::invalid_argument("DirectSum: no components");
    hmin_ = comps_[0]->params().h;
    for (auto& c : comps_) {
        if (c->params().c != comps_[0]->params().c) throw std::invalid_argument("DirectSum: central charges differ");
        hmin_ = std::min(hmin_, c->params().h);
    }
    for (auto& c : comps_) {
        Scalar off = c->params().h - hmin_;
        if (off.get_den() != 1) throw std::invalid_argument("DirectSum: lowest weights must differ by integers");
        offset_.push_back(static_cast<int>(off.get_num().get_si()));
    }
}

int DirectSum::comp_level(int i, int d) const { return d - offset_[i] >= 0 ? d - offset_[i] : -1; }

int DirectSum::dim(int d) const {
    int n = 0;
    for (int i = 0; i < size(); ++i) {
        int l = comp_level(i, d);
        if (l >= 0) n += static_cast<int>(partition_count(l));
    }
    return n;
}

std::vector<Scalar> DirectSum::coords(const DirVec& v, int d) const {
    std::vector<Scalar> x;
    for (int i = 0; i < size(); ++i) {
        int l = comp_level(i, d);
        if (l < 0) {
            if (!v[i].empty()) throw std::invalid_argument("DirectSum::coords: component below its lowest weight");
            continue;
        }
        auto ci = vir::coords(v[i], l);
        x.insert(x.end(), ci.begin(), ci.end());
    }
    return x;
}

DirVec DirectSum::from_coords(const std::vector<Scalar>& x, int d) const {
    DirVec v(size());
    size_t pos = 0;
    for (int i = 0; i < size(); ++i) {
        int l = comp_level(i, d);
        if (l < 0) continue;
        size_t n = static_cast<size_t>(partition_count(l));
        std::vector<Scalar> part(x.begin() + pos, x.begin() + pos + n);
        v[i] = vir::from_coords(part, l);
        pos += n;
    }
    return v;
}

DirVec DirectSum::L(int m, const DirVec& v) const {
    DirVec r(size());
    for (int i = 0; i < size(); ++i) r[i] = comps_[i]->L(m, v[i]);
    return r;
}

int DirectSum::degree(const DirVec& v) const {
    int d = -1;
    for (int i = 0; i < size(); ++i) {
        if (v[i].empty()) continue;
        int di = level_of(v[i]) + offset_[i];
        if (d >= 0 && d != di) throw std::invalid_argument("DirectSum::degree: inhomogeneous vector");
        d = di;
    }
    return d;
}

namespace {

std::vector<DirVec> homogeneous_parts(const DirectSum& S, const DirVec& v) {
    std::map<int, DirVec> parts;
    for (int i = 0; i < S.size(); ++i)
        for (const auto& [m, k] : v[i]) {
            int off = 0;
            while (S.comp_level(i, off) != 0) ++off;
            int d = level_of(m) + off;
            auto& p = parts[d];
            if (p.empty()) p.resize(S.size());
            add_term(p[i], m, k);
        }
    std::vector<DirVec> out;
    for (auto& [d, p] : parts) out.push_back(p);
    return out;
}

bool dir_empty(const DirVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Vector& x) { return x.empty(); });
}

}  // namespace

DirGraded dir_submodule_generated(const DirectSum& S, const std::vector<DirVec>& gens, int cap) {
    DirGraded W;
    W.cap = cap;
    for (int d = 0; d <= cap; ++d) W.deg.emplace_back(S.dim(d));
    std::vector<DirVec> queue;
    for (const auto& g : gens)
        for (auto& p : homogeneous_parts(S, g)) queue.push_back(p);
    while (!queue.empty()) {
        DirVec x = queue.back();
        queue.pop_back();
        if (dir_empty(x)) continue;
        int d = S.degree(x);
        if (d > cap) continue;
        if (!W.deg[d].add(S.coords(x, d))) continue;
        for (int m : {1, 2}) {
            DirVec y = S.L(m, x);
            if (!dir_empty(y)) queue.push_back(y);
        }
    }
    for (int d = 1; d <= cap; ++d)
        for (int m : {1, 2}) {
            if (d - m < 0) continue;
            auto rows = W.deg[d - m].rows();
            for (const auto& r : rows) W.deg[d].add(S.coords(S.L(-m, S.from_coords(r, d - m)), d));
        }
    return W;
}

namespace {

// positions of component i inside the coordinates of degree d
std::pair<int, int> comp_range(const DirectSum& S, int i, int d) {
    int start = 0;
    for (int k = 0; k < i; ++k) {
        int l = S.comp_level(k, d);
        if (l >= 0) start += static_cast<int>(partition_count(l));
    }
    int l = S.comp_level(i, d);
    int len = l >= 0 ? static_cast<int>(partition_count(l)) : 0;
    return {start, len};
}

// basis of {x in W(d) : components in Z vanish}, as coordinate vectors
std::vector<std::vector<Scalar>> vanishing_on(const DirectSum& S, const Subspace& Wd, int d, const std::vector<int>& Z) {
    const auto& rows = Wd.rows();
    std::vector<int> idx;
    for (int z : Z) {
        auto [st, len] = comp_range(S, z, d);
        for (int t = 0; t < len; ++t) idx.push_back(st + t);
    }
    if (idx.empty()) return rows;
    Matrix A(static_cast<int>(idx.size()), static_cast<int>(rows.size()));
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t k = 0; k < rows.size(); ++k) A(static_cast<int>(i), static_cast<int>(k)) = rows[k][idx[i]];
    std::vector<std::vector<Scalar>> out;
    for (auto& c : kernel(A)) {
        std::vector<Scalar> x(Wd.ambient());
        for (size_t k = 0; k < rows.size(); ++k)
            if (sgn(c[k]) != 0)
                for (int j = 0; j < Wd.ambient(); ++j) x[j] += c[k] * rows[k][j];
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace

EchelonGenerators classify_direct_sum_submodule(const DirectSum& S, const std::vector<DirVec>& gens, int cap) {
    DirGraded W = dir_submodule_generated(S, gens, cap);
    EchelonGenerators e;
    e.n = S.size();
    std::vector<int> S_done;
    std::vector<bool> assigned(e.n, false);
    int left = e.n;
    while (left > 0) {
        // lowest degree of K_j = pi_j(W cap {S_done components vanish})
        std::map<int, int> low;
        std::map<int, std::vector<std::vector<Scalar>>> low_vecs;
        for (int d = 0; d <= cap; ++d) {
            auto vs = vanishing_on(S, W.deg[d], d, S_done);
            for (int j = 0; j < e.n; ++j) {
                if (assigned[j] || low.count(j)) continue;
                auto [st, len] = comp_range(S, j, d);
                bool nz = false;
                for (auto& x : vs)
                    for (int t = 0; t < len && !nz; ++t) nz = sgn(x[st + t]) != 0;
                if (nz) {
                    low[j] = d;
                    low_vecs[j] = vs;
                }
            }
        }
        for (int j = 0; j < e.n; ++j)
            if (!assigned[j] && !low.count(j)) {
                assigned[j] = true;
                e.order.push_back(j);
                --left;
            }
        if (low.empty()) break;
        int best = -1;
        for (auto [j, d] : low)
            if (best < 0 || d < low[best]) best = j;
        int d0 = low[best];
        const auto& vs = low_vecs[best];
        auto [st, len] = comp_range(S, best, d0);
        // the j-projections at d0 span a line; pick u and solve for a singular preimage
        Subspace proj(len);
        for (auto& x : vs) proj.add(std::vector<Scalar>(x.begin() + st, x.begin() + st + len));
        if (proj.dim() != 1)
            throw std::runtime_error("echelon: lowest piece of a component projection is not one-dimensional");
        const auto& u = proj.rows()[0];
        // unknowns: coefficients on vs
        int nv = static_cast<int>(vs.size());
        std::vector<std::vector<Scalar>> eqs;
        std::vector<Scalar> rhs;
        for (int t = 0; t < len; ++t) {
            std::vector<Scalar> row(nv);
            for (int k = 0; k < nv; ++k) row[k] = vs[k][st + t];
            eqs.push_back(row);
            rhs.push_back(u[t]);
        }
        for (int m : {1, 2}) {
            if (d0 - m < 0) continue;
            std::vector<std::vector<Scalar>> images;
            for (auto& x : vs) images.push_back(S.coords(S.L(m, S.from_coords(x, d0)), d0 - m));
            int n = S.dim(d0 - m);
            for (int t = 0; t < n; ++t) {
                std::vector<Scalar> row(nv);
                for (int k = 0; k < nv; ++k) row[k] = images[k][t];
                eqs.push_back(row);
                rhs.push_back(0);
            }
        }
        Matrix A(static_cast<int>(eqs.size()), nv);
        for (size_t i = 0; i < eqs.size(); ++i)
            for (int k = 0; k < nv; ++k) A(static_cast<int>(i), k) = eqs[i][k];
        auto sol = solve(A, rhs);
        if (!sol) throw std::runtime_error("echelon: no singular generator with the required leading component");
        std::vector<Scalar> x(S.dim(d0));
        for (int k = 0; k < nv; ++k)
            if (sgn((*sol)[k]) != 0)
                for (size_t t = 0; t < x.size(); ++t) x[t] += (*sol)[k] * vs[k][t];
        DirVec g = S.from_coords(x, d0);
        int lev = S.comp_level(best, d0);
        auto it = g[best].find(Monomial(lev, 1));
        if (it == g[best].end()) throw std::runtime_error("echelon: leading component lacks an L(-1)^N term");
        Scalar f = 1 / it->second;
        for (auto& c : g) c = f * c;
        e.generators.push_back(g);
        e.leading.push_back(best);
        e.N_level[best] = lev;
        e.order.push_back(best);
        assigned[best] = true;
        S_done.push_back(best);
        --left;
    }
    DirGraded G = dir_submodule_generated(S, e.generators, cap);
    for (int d = 0; d <= cap; ++d)
        if (G.deg[d].dim() != W.deg[d].dim())
            throw std::runtime_error("echelon: singular generators do not exhaust the submodule at degree " +
                                     std::to_string(d));
    return e;
}

PiW::PiW(const DirectSum& S, EchelonGenerators e) : S_(S), e_(std::move(e)), gen_of_(S.size(), -1) {
    split_.resize(S.size());
    for (size_t g = 0; g < e_.generators.size(); ++g) {
        int i = e_.leading[g];
        gen_of_[i] = static_cast<int>(g);
        split_[i] = std::make_unique<ProjectionSplit>(S.comp_ptr(i),
                                                      SingularVector{e_.N_level.at(i), e_.generators[g][i]});
    }
}

Vector PiW::w2_coords(int i, const Vector& x) const { return split_[i]->decompose(x).w2; }

DirVec PiW::rho0(int g, const Vector& a) const {
    DirVec out(S_.size());
    int N = e_.N_level.at(e_.leading[g]);
    for (int j = 0; j < S_.size(); ++j) {
        const Vector& wj = e_.generators[g][j];
        if (wj.empty()) continue;
        for (const auto& [m, k] : a) {
            int q = l1_power(m);
            Monomial prefix(m.begin(), m.end() - q);
            axpy(out[j], k, apply_pbw(S_.comp(j), prefix, q - N, wj));
        }
    }
    return out;
}

DirVec PiW::rho(const DirVec& v) const {
    DirVec out = v;
    for (size_t g = 0; g < e_.generators.size(); ++g) {
        int i = e_.leading[g];
        DirVec r = rho0(static_cast<int>(g), w2_coords(i, v[i]));
        for (int j = 0; j < S_.size(); ++j)
            if (j != i) axpy(out[j], 1, r[j]);
    }
    return out;
}

DirVec PiW::rho_inv(const DirVec& v) const {
    DirVec cur = v;
    for (int i : e_.order) {
        int g = gen_of_[i];
        if (g < 0) continue;
        DirVec r = rho0(g, w2_coords(i, cur[i]));
        for (int j = 0; j < S_.size(); ++j)
            if (j != i) axpy(cur[j], -1, r[j]);
    }
    return cur;
}

DirVec PiW::pi_N(const DirVec& v) const {
    DirVec out(S_.size());
    for (int i = 0; i < S_.size(); ++i)
        if (split_[i]) out[i] = split_[i]->project(v[i]);
    return out;
}

DirVec PiW::apply(const DirVec& v) const { return rho(pi_N(rho_inv(v))); }

}  // namespace vir
