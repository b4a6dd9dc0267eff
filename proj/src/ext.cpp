#include "virasoro/ext.hpp"

#include <algorithm>
#include <stdexcept>

namespace vir {

namespace {

Matrix zeros(int r, int c) { return Matrix(std::max(r, 0), std::max(c, 0)); }

Matrix sub_block(const Matrix& A, int r0, int c0, int nr, int nc) {
    Matrix B(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) B(i, j) = A(r0 + i, c0 + j);
    return B;
}

void put(Matrix& T, const Matrix& A, int r0, int c0) {
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T(r0 + i, c0 + j) = A(i, j);
}

Matrix hcat(const Matrix& A, const Matrix& B) {
    if (A.rows != B.rows) throw std::invalid_argument("hcat: row mismatch");
    Matrix T(A.rows, A.cols + B.cols);
    put(T, A, 0, 0);
    put(T, B, 0, A.cols);
    return T;
}

Matrix block_diag(const Matrix& A, const Matrix& B) {
    Matrix T(A.rows + B.rows, A.cols + B.cols);
    put(T, A, 0, 0);
    put(T, B, A.rows, A.cols);
    return T;
}

void add_scaled(Matrix& acc, const Scalar& k, const Matrix& A) {
    if (acc.rows != A.rows || acc.cols != A.cols) throw std::logic_error("shape mismatch in accumulation");
    if (sgn(k) == 0) return;
    for (size_t i = 0; i < acc.a.size(); ++i)
        if (sgn(A.a[i]) != 0) acc.a[i] += k * A.a[i];
}

int safe_dim(const GradedModule& W, int level) { return level < 0 ? 0 : W.dim(level); }

}  // namespace

// ---------------------------------------------------------------- modules

const Matrix& GradedModule::L(int m, int level) const {
    std::lock_guard lk(mu_);
    auto key = std::make_pair(m, level);
    auto it = lmemo_.find(key);
    if (it != lmemo_.end()) return *it->second;
    Matrix A;
    if (level < 0 || level - m < 0)
        A = zeros(safe_dim(*this, level - m), safe_dim(*this, level));
    else if (level > max_level() || level - m > max_level())
        throw std::out_of_range("mode matrix requested beyond the stored levels");
    else
        A = compute_L(m, level);
    return *lmemo_.emplace(key, std::make_unique<Matrix>(std::move(A))).first->second;
}

const Matrix& GradedModule::Y(const Monomial& v, int k, int level) const {
    std::lock_guard lk(mu_);
    auto key = std::make_tuple(v, k, level);
    auto it = ymemo_.find(key);
    if (it != ymemo_.end()) return *it->second;
    Matrix A = compute_Y(v, k, level);
    return *ymemo_.emplace(key, std::make_unique<Matrix>(std::move(A))).first->second;
}

Matrix GradedModule::Y(const Vector& v, int k, int level) const {
    Vector r = vacuum_reduce(v);
    if (r.empty() || !is_homogeneous(r)) throw std::invalid_argument("Y: need a nonzero homogeneous vacuum vector");
    Matrix out;
    bool first = true;
    for (const auto& [m, c] : r) {
        const Matrix& A = Y(m, k, level);
        if (first) {
            out = zeros(A.rows, A.cols);
            first = false;
        }
        add_scaled(out, c, A);
    }
    return out;
}

int GradedModule::lowest_level() const {
    for (int l = 0; l <= std::min(max_level(), 64); ++l)
        if (dim(l) > 0) return l;
    return -1;
}

// Y(L(-n)u, x) = :d^r Y(omega, x)/r! Y(u, x): with r = n - 2
Matrix GradedModule::compute_Y(const Monomial& v, int k, int level) const {
    int wt = level_of(v);
    int out = level + wt - k - 1;
    if (level > max_level() || out > max_level()) throw std::out_of_range("vertex operator beyond the stored levels");
    Matrix R = zeros(safe_dim(*this, out), safe_dim(*this, level));
    if (R.rows == 0 || R.cols == 0) return R;
    if (v.empty()) return k == -1 ? Matrix::identity(R.cols) : R;
    int n = v.front();
    if (n < 2) throw std::invalid_argument("Y: monomial has an L(-1) factor");
    Monomial u(v.begin() + 1, v.end());
    int r = n - 2;
    int wu = wt - n;
    // regular part of the omega factor on the left
    for (int j = 1 - out; j <= -1; ++j) {
        Integer c = binom(-j - 1, r);
        if (c == 0) continue;
        int i = k - j - r - 1;
        int mid = out - 1 + j;
        if (mid < 0) continue;
        add_scaled(R, Scalar(c), L(j - 1, mid) * Y(u, i, level));
    }
    // j = 0: u_(i) L(-1) = L(-1) u_(i) + i u_(i-1)
    {
        Scalar c = r % 2 ? -1 : 1;
        int i = k - r - 1;
        int mid = out - 1;
        if (mid >= 0) add_scaled(R, c, L(-1, mid) * Y(u, i, level));
        if (i != 0) add_scaled(R, c * i, Y(u, i - 1, level));
    }
    for (int j = 1; j <= level + 1; ++j) {
        Integer c = binom(-j - 1, r);
        if (c == 0) continue;
        int i = k - j - r - 1;
        int mid = level - j + 1;
        add_scaled(R, Scalar(c), Y(u, i, mid) * L(j - 1, level));
    }
    return R;
}

int VermaRep::dim(int level) const { return level < 0 ? 0 : static_cast<int>(partition_count(level)); }

Matrix VermaRep::compute_L(int m, int level) const { return mode_matrix(*M_, m, level); }

int SubmoduleRep::dim(int level) const { return level < 0 ? 0 : static_cast<int>(sp_->w2_basis(level).size()); }

namespace {

std::map<Monomial, int, MonoLess> positions(const std::vector<Monomial>& b) {
    std::map<Monomial, int, MonoLess> p;
    for (size_t i = 0; i < b.size(); ++i) p[b[i]] = static_cast<int>(i);
    return p;
}

}  // namespace

Matrix SubmoduleRep::compute_L(int m, int level) const {
    auto in = sp_->w2_basis(level);
    auto outb = sp_->w2_basis(level - m);
    auto pos = positions(outb);
    Matrix A(static_cast<int>(outb.size()), static_cast<int>(in.size()));
    for (size_t j = 0; j < in.size(); ++j) {
        auto d = sp_->decompose(sp_->module().L(m, sp_->w2_vector(in[j])));
        if (!d.w1.empty()) throw std::logic_error("submodule not closed under the mode action");
        for (const auto& [x, k] : d.w2) A(pos.at(x), static_cast<int>(j)) = k;
    }
    return A;
}

int QuotientRep::dim(int level) const { return level < 0 ? 0 : static_cast<int>(sp_->w1_basis(level).size()); }

Matrix QuotientRep::compute_L(int m, int level) const {
    auto in = sp_->w1_basis(level);
    auto outb = sp_->w1_basis(level - m);
    auto pos = positions(outb);
    Matrix A(static_cast<int>(outb.size()), static_cast<int>(in.size()));
    for (size_t j = 0; j < in.size(); ++j) {
        auto d = sp_->decompose(sp_->module().L(m, mono(in[j])));
        for (const auto& [x, k] : d.w1) A(pos.at(x), static_cast<int>(j)) = k;
    }
    return A;
}

DirectSumRep::DirectSumRep(ModulePtr a, ModulePtr b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_->central_charge() != b_->central_charge() || a_->lowest_weight() != b_->lowest_weight())
        throw std::invalid_argument("direct sum of modules with different c or grading");
}

Matrix DirectSumRep::compute_L(int m, int level) const { return block_diag(a_->L(m, level), b_->L(m, level)); }

ExtensionRep::ExtensionRep(ModulePtr W2, ModulePtr W1, TruncatedHom f)
    : W2_(std::move(W2)), W1_(std::move(W1)), f_(std::move(f)) {
    if (W2_->central_charge() != W1_->central_charge() || W2_->lowest_weight() != W1_->lowest_weight())
        throw std::invalid_argument("extension of modules with different c or grading");
    if (f_.weight != 2) throw std::invalid_argument("extension data must be F(omega)");
}

Matrix ExtensionRep::compute_L(int m, int level) const {
    int out = level - m;
    Matrix T(dim(out), dim(level));
    int d2o = W2_->dim(out), d2i = W2_->dim(level);
    put(T, W2_->L(m, level), 0, 0);
    put(T, W1_->L(m, level), d2o, d2i);
    auto it = f_.modes.find({m + 1, level});
    if (it == f_.modes.end()) throw std::out_of_range("F(omega) mode missing from the stored data");
    put(T, it->second, 0, d2i);
    return T;
}

// ---------------------------------------------------------------- sections

namespace {

struct LevelCoords {
    Matrix pi2, p;
};

class CoordCache {
public:
    explicit CoordCache(const Extension& e) : e_(e) {}
    const LevelCoords& at(int level) {
        auto it = memo_.find(level);
        if (it != memo_.end()) return it->second;
        Matrix I = e_.iota(level), P = e_.psi(level);
        int d = e_.U->dim(level), d2 = e_.W2->dim(level), d1 = e_.W1->dim(level);
        if (I.rows != d || P.rows != d || I.cols != d2 || P.cols != d1 || d2 + d1 != d)
            throw std::invalid_argument("section is not grading-preserving");
        LevelCoords c;
        if (d > 0) {
            auto inv = inverse(hcat(I, P));
            if (!inv) throw std::invalid_argument("submodule and section do not span the module");
            c.pi2 = sub_block(*inv, 0, 0, d2, d);
            c.p = sub_block(*inv, d2, 0, d1, d);
        } else {
            c.pi2 = zeros(d2, 0);
            c.p = zeros(d1, 0);
        }
        return memo_.emplace(level, std::move(c)).first->second;
    }

private:
    const Extension& e_;
    std::map<int, LevelCoords> memo_;
};

Matrix map_at(const GradedMap& phi, int level, int rows, int cols) {
    auto it = phi.find(level);
    if (it == phi.end()) return zeros(rows, cols);
    if (it->second.rows != rows || it->second.cols != cols) throw std::invalid_argument("graded map has wrong shape");
    return it->second;
}

}  // namespace

Extension verma_extension(std::shared_ptr<const ProjectionSplit> split) {
    Extension e;
    e.U = std::make_shared<VermaRep>(split->module_ptr());
    e.W2 = std::make_shared<SubmoduleRep>(split);
    e.W1 = std::make_shared<QuotientRep>(split);
    e.iota = [split](int level) {
        auto b = split->w2_basis(level);
        Matrix A(static_cast<int>(partition_count(level)), static_cast<int>(b.size()));
        for (size_t j = 0; j < b.size(); ++j) {
            auto x = coords(split->w2_vector(b[j]), level);
            for (size_t i = 0; i < x.size(); ++i) A(static_cast<int>(i), static_cast<int>(j)) = x[i];
        }
        return A;
    };
    e.psi = [split](int level) {
        auto b = split->w1_basis(level);
        Matrix A(static_cast<int>(partition_count(level)), static_cast<int>(b.size()));
        for (size_t j = 0; j < b.size(); ++j) A(basis_position(b[j]), static_cast<int>(j)) = 1;
        return A;
    };
    return e;
}

Extension split_extension(ModulePtr W2, ModulePtr W1) {
    Extension e;
    e.U = std::make_shared<DirectSumRep>(W2, W1);
    e.W2 = W2;
    e.W1 = W1;
    e.iota = [W2, W1](int level) {
        int d2 = W2->dim(level), d1 = W1->dim(level);
        Matrix A(d2 + d1, d2);
        put(A, Matrix::identity(d2), 0, 0);
        return A;
    };
    e.psi = [W2, W1](int level) {
        int d2 = W2->dim(level), d1 = W1->dim(level);
        Matrix A(d2 + d1, d1);
        put(A, Matrix::identity(d1), d2, 0);
        return A;
    };
    return e;
}

Extension shifted_section(const Extension& e, GradedMap phi) {
    Extension r = e;
    auto iota = e.iota;
    auto psi = e.psi;
    auto W2 = e.W2, W1 = e.W1;
    r.psi = [iota, psi, phi = std::move(phi), W2, W1](int level) {
        return psi(level) + iota(level) * map_at(phi, level, W2->dim(level), W1->dim(level));
    };
    return r;
}

Extension d_equivariant_section(const Extension& e, int level_cap) {
    CoordCache cc(e);
    GradedMap phi;
    phi[0] = zeros(e.W2->dim(0), e.W1->dim(0));
    for (int l = 1; l <= level_cap; ++l) {
        // phi_l L1(-1) = X_{l-1} + L2(-1) phi_{l-1}
        Matrix X = cc.at(l).pi2 * e.U->L(-1, l - 1) * e.psi(l - 1);
        Matrix B = X + e.W2->L(-1, l - 1) * phi[l - 1];
        Matrix At = e.W1->L(-1, l - 1).transpose();
        Matrix P(e.W2->dim(l), e.W1->dim(l));
        for (int row = 0; row < B.rows; ++row) {
            std::vector<Scalar> b(B.cols);
            for (int j = 0; j < B.cols; ++j) b[j] = B(row, j);
            auto x = solve(At, b);
            if (!x) throw std::runtime_error("no section commuting with L(-1) at level " + std::to_string(l));
            for (int j = 0; j < P.cols; ++j) P(row, j) = (*x)[j];
        }
        phi[l] = P;
    }
    return shifted_section(e, phi);
}

// ---------------------------------------------------------------- derivations

std::vector<Monomial> vacuum_spanning_set(int weight_cap) {
    std::vector<Monomial> out;
    for (int w = 2; w <= weight_cap; ++w)
        for (auto& m : prefix_basis(w)) out.push_back(m);
    return out;
}

bool DerivationData::same_values(const DerivationData& o) const { return F == o.F; }

DerivationData operator-(const DerivationData& x, const DerivationData& y) {
    if (x.level_cap != y.level_cap || x.weight_cap != y.weight_cap)
        throw std::invalid_argument("derivations stored with different caps");
    DerivationData r = x;
    r.generated = false;
    for (auto& [v, T] : r.F) {
        const auto& S = y.F.at(v);
        for (auto& [key, A] : T.modes) A = A - S.modes.at(key);
    }
    return r;
}

namespace {

template <class Fn>
void for_each_mode(int weight, int level_cap, Fn&& fn) {
    for (int l = 0; l <= level_cap; ++l)
        for (int k = l + weight - 1 - level_cap; k <= l + weight - 1; ++k) fn(k, l, l + weight - k - 1);
}

// -k F_(k-1) = L2(-1) F_(k) - F_(k) L1(-1) + X Y1_(k) - Y2_(k) X, X : W1(l) -> W2(l+1)
bool d_derivative_holds(const DerivationData& F, const GradedModule& W1, const GradedModule& W2,
                        const GradedMap* X) {
    int cap = F.level_cap;
    for (const auto& [v, T] : F.F) {
        bool ok = true;
        for_each_mode(T.weight, cap, [&](int k, int l, int o) {
            if (!ok || l + 1 > cap || o + 1 > cap) return;
            Matrix lhs = Scalar(-k) * T.modes.at({k - 1, l});
            Matrix rhs = W2.L(-1, o) * T.modes.at({k, l}) - T.modes.at({k, l + 1}) * W1.L(-1, l);
            if (X) {
                Matrix Xo = map_at(*X, o, W2.dim(o + 1), W1.dim(o));
                Matrix Xl = map_at(*X, l, W2.dim(l + 1), W1.dim(l));
                rhs = rhs + Xo * W1.Y(v, k, l) - W2.Y(v, k, l + 1) * Xl;
            }
            ok = lhs == rhs;
        });
        if (!ok) return false;
    }
    return true;
}

}  // namespace

DerivationData extension_to_derivation(const Extension& e, int level_cap, int weight_cap) {
    if (e.W1->lowest_weight() != e.U->lowest_weight() || e.W2->lowest_weight() != e.U->lowest_weight())
        throw std::invalid_argument("extension pieces must share the grading of U");
    if (level_cap < 1 || weight_cap < 2) throw std::invalid_argument("caps too small");
    CoordCache cc(e);
    DerivationData D;
    D.level_cap = level_cap;
    D.weight_cap = weight_cap;
    for (const auto& v : vacuum_spanning_set(weight_cap)) {
        TruncatedHom T;
        T.weight = level_of(v);
        T.level_cap = level_cap;
        for_each_mode(T.weight, level_cap, [&](int k, int l, int o) {
            T.modes[{k, l}] = cc.at(o).pi2 * e.U->Y(v, k, l) * e.psi(l);
        });
        D.F[v] = std::move(T);
    }
    GradedMap X;
    for (int l = 0; l < level_cap; ++l) X[l] = cc.at(l + 1).pi2 * e.U->L(-1, l) * e.psi(l);
    if (!d_derivative_holds(D, *e.W1, *e.W2, &X))
        throw std::runtime_error("pi2 Y psi fails the D-derivative identity");
    D.untwisted = d_derivative_holds(D, *e.W1, *e.W2, nullptr);
    return D;
}

Extension ExtensionModule::as_extension() const {
    Extension e;
    e.U = U;
    e.W2 = W2;
    e.W1 = W1;
    auto w2 = W2, w1 = W1;
    e.iota = [w2, w1](int level) {
        Matrix A(w2->dim(level) + w1->dim(level), w2->dim(level));
        put(A, Matrix::identity(w2->dim(level)), 0, 0);
        return A;
    };
    e.psi = [w2, w1](int level) {
        Matrix A(w2->dim(level) + w1->dim(level), w1->dim(level));
        put(A, Matrix::identity(w1->dim(level)), w2->dim(level), 0);
        return A;
    };
    return e;
}

namespace {

bool bracket_holds(const GradedModule& U, int cap, int mode_range) {
    Scalar c = U.central_charge();
    for (int m = -mode_range; m <= mode_range; ++m)
        for (int n = -mode_range; n <= mode_range; ++n)
            for (int l = 0; l <= cap; ++l) {
                int a = l - n, b = l - m, o = l - m - n;
                if (a > cap || b > cap || o > cap) continue;
                Matrix lhs = U.L(m, a) * U.L(n, l) - U.L(n, b) * U.L(m, l);
                Matrix rhs = Scalar(m - n) * U.L(m + n, l);
                if (m + n == 0 && o >= 0) add_scaled(rhs, c * Scalar(m * m * m - m) / 12, Matrix::identity(U.dim(l)));
                if (!(lhs == rhs)) return false;
            }
    return true;
}

}  // namespace

ExtensionModule derivation_to_extension(const DerivationData& F, ModulePtr W1, ModulePtr W2) {
    ExtensionModule G;
    G.W1 = W1;
    G.W2 = W2;
    G.U = std::make_shared<ExtensionRep>(W2, W1, F.omega());
    if (!bracket_holds(*G.U, F.level_cap, F.level_cap)) throw std::invalid_argument("F(omega) is not a cocycle");
    G.F = extension_to_derivation(G.as_extension(), F.level_cap, F.weight_cap);
    G.F.generated = true;
    if (!G.F.same_values(F)) throw std::invalid_argument("F disagrees with the derivation generated by F(omega)");
    return G;
}

DerivationData inner_derivation(const GradedMap& phi, const GradedModule& W1, const GradedModule& W2, int level_cap,
                                int weight_cap) {
    DerivationData D;
    D.level_cap = level_cap;
    D.weight_cap = weight_cap;
    for (const auto& v : vacuum_spanning_set(weight_cap)) {
        TruncatedHom T;
        T.weight = level_of(v);
        T.level_cap = level_cap;
        for_each_mode(T.weight, level_cap, [&](int k, int l, int o) {
            Matrix pl = map_at(phi, l, W2.dim(l), W1.dim(l));
            Matrix po = map_at(phi, o, W2.dim(o), W1.dim(o));
            T.modes[{k, l}] = W2.Y(v, k, l) * pl - po * W1.Y(v, k, l);
        });
        D.F[v] = std::move(T);
    }
    D.untwisted = d_derivative_holds(D, W1, W2, nullptr);
    return D;
}

namespace {

// incremental sparse elimination over Q
class SparseSystem {
public:
    using Row = std::map<int, Scalar>;
    explicit SparseSystem(int nvars) : n_(nvars) {}
    // false when the new equation contradicts the earlier ones
    bool add(Row row, Scalar rhs) {
        while (!row.empty()) {
            auto [col, lead] = *row.begin();
            auto it = piv_.find(col);
            if (it == piv_.end()) {
                Scalar inv = 1 / lead;
                for (auto& [j, x] : row) x *= inv;
                rhs *= inv;
                piv_.emplace(col, std::make_pair(std::move(row), rhs));
                return true;
            }
            const auto& [prow, prhs] = it->second;
            Scalar f = lead;
            for (const auto& [j, x] : prow) {
                auto [slot, fresh] = row.try_emplace(j, 0);
                slot->second -= f * x;
                if (sgn(slot->second) == 0) row.erase(slot);
            }
            rhs -= f * prhs;
        }
        return sgn(rhs) == 0;
    }
    std::vector<Scalar> solution() const {
        std::vector<Scalar> x(n_);
        for (auto it = piv_.rbegin(); it != piv_.rend(); ++it) {
            const auto& [row, rhs] = it->second;
            Scalar v = rhs;
            for (const auto& [j, a] : row)
                if (j != it->first) v -= a * x[j];
            x[it->first] = v;
        }
        return x;
    }

private:
    int n_;
    std::map<int, std::pair<Row, Scalar>> piv_;
};

}  // namespace

std::optional<InnerWitness> is_inner(const DerivationData& F, const GradedModule& W1, const GradedModule& W2) {
    int cap = F.level_cap;
    std::vector<int> offset(cap + 2, 0);
    for (int l = 0; l <= cap; ++l) offset[l + 1] = offset[l] + W2.dim(l) * W1.dim(l);
    auto var = [&](int l, int a, int b) { return offset[l] + a * W1.dim(l) + b; };
    SparseSystem sys(offset[cap + 1]);
    const auto& Fw = F.omega();
    // L(+-1), L(+-2) generate the Virasoro action
    for (int m : {-2, -1, 1, 2})
        for (int l = 0; l <= cap; ++l) {
            int o = l - m;
            if (o < 0 || o > cap) continue;
            const Matrix& A2 = W2.L(m, l);
            const Matrix& A1 = W1.L(m, l);
            const Matrix& target = Fw.modes.at({m + 1, l});
            for (int a = 0; a < W2.dim(o); ++a)
                for (int b = 0; b < W1.dim(l); ++b) {
                    SparseSystem::Row row;
                    for (int c = 0; c < W2.dim(l); ++c)
                        if (sgn(A2(a, c)) != 0) row[var(l, c, b)] += A2(a, c);
                    for (int c = 0; c < W1.dim(o); ++c)
                        if (sgn(A1(c, b)) != 0) row[var(o, a, c)] -= A1(c, b);
                    for (auto it = row.begin(); it != row.end();)
                        it = sgn(it->second) == 0 ? row.erase(it) : std::next(it);
                    if (!sys.add(std::move(row), target(a, b))) return std::nullopt;
                }
        }
    auto x = sys.solution();
    InnerWitness w;
    for (int l = 0; l <= cap; ++l) {
        Matrix P(W2.dim(l), W1.dim(l));
        for (int a = 0; a < P.rows; ++a)
            for (int b = 0; b < P.cols; ++b) P(a, b) = x[var(l, a, b)];
        w.phi_minus_one[l] = std::move(P);
    }
    auto check = inner_derivation(w.phi_minus_one, W1, W2, cap, F.weight_cap);
    if (!check.same_values(F)) return std::nullopt;
    return w;
}

bool intertwines(const Extension& U1, const Extension& U2, const GradedMap& phi, int level_cap) {
    CoordCache c1(U1);
    std::map<int, Matrix> T;
    auto T_at = [&](int l) -> const Matrix& {
        auto it = T.find(l);
        if (it != T.end()) return it->second;
        int d2 = U1.W2->dim(l), d1 = U1.W1->dim(l);
        Matrix blk = Matrix::identity(d2 + d1);
        put(blk, map_at(phi, l, d2, d1), 0, d2);
        Matrix to = hcat(U2.iota(l), U2.psi(l));
        const auto& lc = c1.at(l);
        Matrix from = vstack(lc.pi2, lc.p);
        return T.emplace(l, to * blk * from).first->second;
    };
    for (int l = 0; l <= level_cap; ++l) {
        if (U1.U->dim(l) != U2.U->dim(l)) return false;
        if (U1.U->dim(l) > 0 && !inverse(T_at(l))) return false;
    }
    for (int l = 0; l <= level_cap; ++l)
        for (int m = l - level_cap; m <= l; ++m) {
            int o = l - m;
            if (!(T_at(o) * U1.U->L(m, l) == U2.U->L(m, l) * T_at(l))) return false;
        }
    return true;
}

std::optional<EquivalenceMap> equivalence(const Extension& U1, const Extension& U2, int level_cap) {
    for (int l = 0; l <= level_cap; ++l) {
        if (U1.W1->dim(l) != U2.W1->dim(l) || U1.W2->dim(l) != U2.W2->dim(l))
            throw std::invalid_argument("extensions of different modules");
        for (int m : {-2, -1, 1, 2}) {
            if (l - m < 0 || l - m > level_cap) continue;
            if (!(U1.W1->L(m, l) == U2.W1->L(m, l)) || !(U1.W2->L(m, l) == U2.W2->L(m, l)))
                throw std::invalid_argument("extensions of different modules");
        }
    }
    auto F1 = extension_to_derivation(U1, level_cap, 3);
    auto F2 = extension_to_derivation(U2, level_cap, 3);
    auto w = is_inner(F1 - F2, *U1.W1, *U1.W2);
    if (!w) return std::nullopt;
    if (!intertwines(U1, U2, w->phi_minus_one, level_cap)) return std::nullopt;
    return EquivalenceMap{w->phi_minus_one};
}

// ---------------------------------------------------------------- axioms

namespace {

class VacuumProducts {
public:
    explicit VacuumProducts(const Scalar& c) : V_(Params{c, Scalar(0)}) {}
    // u_(m) v in V(c,0)
    Vector product(const Monomial& u, int m, const Monomial& v) const {
        return vacuum_reduce(V_.y_mode(mono(u), m, mono(v)));
    }

private:
    Verma V_;
};

// (x0+x2)^p Y(u,x0+x2) Y(v,x2) = (x2+x0)^p Y(Y(u,x0)v, x2) on level l, coefficientwise
bool weak_assoc_at(const GradedModule& U, const VacuumProducts& VP, const Monomial& u, const Monomial& v, int l,
                   int p, int cap) {
    int wu = level_of(u), wv = level_of(v);
    for (int i = -(wu + wv); i <= wu + wv; ++i)
        for (int j = -(l + wu + wv + 2 * p + 2); j <= cap - l - wv; ++j) {
            int o = l + wu + wv - p + i + j;
            if (o < 0 || o > cap) continue;
            Matrix lhs = zeros(U.dim(o), U.dim(l));
            for (int t = 0; t <= l + wv + j; ++t) {
                Integer c = binom(t + i, t);
                if (c == 0) continue;
                add_scaled(lhs, Scalar(c), U.Y(u, p - 1 - t - i, l + wv + j - t) * U.Y(v, t - j - 1, l));
            }
            Matrix rhs = zeros(U.dim(o), U.dim(l));
            for (int s = 0; s <= p; ++s) {
                Vector x = VP.product(u, s - i - 1, v);
                if (x.empty()) continue;
                add_scaled(rhs, Scalar(binom(p, s)), U.Y(x, p - s - j - 1, l));
            }
            if (!(lhs == rhs)) return false;
        }
    return true;
}

int find_p(const GradedModule& U, const VacuumProducts& VP, const Monomial& u, const Monomial& v, int l, int bound,
           int cap) {
    for (int p = 0; p <= bound; ++p)
        if (weak_assoc_at(U, VP, u, v, l, p, cap)) return p;
    return -1;
}

void weak_assoc_samples(const GradedModule& U, const AxiomOptions& opt, bool& ok, int& max_p,
                        std::vector<WeakAssocSample>& out) {
    VacuumProducts VP(U.central_charge());
    int cap = std::min(opt.level_cap, U.max_level());
    for (const auto& u : opt.sample)
        for (const auto& v : opt.sample)
            for (int l = 0; l <= opt.sample_level; ++l) {
                if (U.dim(l) == 0) continue;
                int p = find_p(U, VP, u, v, l, opt.p_bound, cap);
                out.push_back({u, v, l, p});
                if (p < 0) ok = false;
                max_p = std::max(max_p, p);
            }
}

}  // namespace

AxiomReport verify_module_axioms(const GradedModule& U, const AxiomOptions& opt) {
    AxiomReport rep;
    int cap = std::min(opt.level_cap, U.max_level());
    rep.bracket = bracket_holds(U, cap, std::min(cap, 4));
    Scalar h = U.lowest_weight();
    for (int l = 0; l <= cap; ++l)
        if (!(U.L(0, l) == (h + l) * Matrix::identity(U.dim(l)))) rep.d_commutator = false;
    for (const auto& v : opt.sample) {
        int wt = level_of(v);
        for_each_mode(wt, cap, [&](int k, int l, int o) {
            const Matrix& Yk = U.Y(v, k, l);
            Matrix dc = U.L(0, o) * Yk - Yk * U.L(0, l);
            if (!(dc == Scalar(wt - k - 1) * Yk)) rep.d_commutator = false;
            if (l + 1 <= cap && o + 1 <= cap) {
                Matrix Dc = U.L(-1, o) * Yk - U.Y(v, k, l + 1) * U.L(-1, l);
                if (!(Dc == Scalar(-k) * U.Y(v, k - 1, l))) rep.D_commutator = false;
            }
        });
    }
    for (int l = 0; l <= cap; ++l)
        for (int k = -3; k <= 3; ++k) {
            if (l - k - 1 > cap) continue;
            const Matrix& I = U.Y(Monomial{}, k, l);
            Matrix want = k == -1 ? Matrix::identity(U.dim(l)) : zeros(safe_dim(U, l - k - 1), U.dim(l));
            if (!(I == want)) rep.identity = false;
        }
    weak_assoc_samples(U, opt, rep.weak_assoc, rep.max_p, rep.samples);
    return rep;
}

CocycleReport verify_cocycle(const DerivationData& F, ModulePtr W1, ModulePtr W2, const AxiomOptions& opt) {
    CocycleReport rep;
    auto G = std::make_shared<ExtensionRep>(W2, W1, F.omega());
    int cap = std::min(opt.level_cap, F.level_cap);
    rep.bracket = bracket_holds(*G, F.level_cap, F.level_cap);
    ExtensionModule M{W2, W1, F, G};
    GradedMap X;
    for (int l = 0; l < F.level_cap; ++l) X[l] = F.omega().modes.at({0, l});
    rep.D_twisted = d_derivative_holds(F, *W1, *W2, &X);
    try {
        auto gen = extension_to_derivation(M.as_extension(), F.level_cap, F.weight_cap);
        rep.derivation_rule = gen.same_values(F);
    } catch (const std::runtime_error&) {
        rep.derivation_rule = false;
    }
    AxiomOptions o = opt;
    o.level_cap = cap;
    weak_assoc_samples(*G, o, rep.weak_assoc, rep.max_p, rep.samples);
    return rep;
}

RoundtripReport roundtrip_check(const DerivationData& F, ModulePtr W1, ModulePtr W2) {
    RoundtripReport r;
    auto G = derivation_to_extension(F, W1, W2);
    auto back = extension_to_derivation(G.as_extension(), F.level_cap, F.weight_cap);
    r.FG_identity = back.same_values(F);
    auto G2 = derivation_to_extension(back, W1, W2);
    r.GF_map = intertwines(G2.as_extension(), G.as_extension(), {}, F.level_cap);
    r.GF_solver = equivalence(G2.as_extension(), G.as_extension(), F.level_cap).has_value();
    return r;
}

RoundtripReport roundtrip_check(const Extension& U, int level_cap, int weight_cap) {
    RoundtripReport r;
    auto F = extension_to_derivation(U, level_cap, weight_cap);
    auto G = derivation_to_extension(F, U.W1, U.W2);
    auto back = extension_to_derivation(G.as_extension(), level_cap, weight_cap);
    r.FG_identity = back.same_values(F);
    r.GF_map = intertwines(G.as_extension(), U, {}, level_cap);
    r.GF_solver = equivalence(G.as_extension(), U, level_cap).has_value();
    return r;
}

int weight_gap(const GradedModule& W1, const GradedModule& W2, int search_cap) {
    auto lowest = [&](const GradedModule& W) {
        for (int l = 0; l <= std::min(search_cap, W.max_level()); ++l)
            if (W.dim(l) > 0) return l;
        throw std::invalid_argument("module has no vectors in the searched levels");
    };
    Scalar gap = W2.lowest_weight() + lowest(W2) - W1.lowest_weight() - lowest(W1);
    if (gap.get_den() != 1) throw std::invalid_argument("weights differ by a non-integer");
    return static_cast<int>(gap.get_num().get_si());
}

}  // namespace vir
