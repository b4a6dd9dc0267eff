#include <doctest.h>

#include "virasoro/correlators.hpp"

#include <string>

using namespace vir;

namespace {

Scalar q(const char* s) { return parse_scalar(s); }

std::shared_ptr<const Verma> verma(const char* c, const char* h) {
    return std::make_shared<const Verma>(Params{q(c), q(h)});
}

Scalar power(const Scalar& x, int e) {
    Scalar r = 1;
    for (int i = 0; i < std::abs(e); ++i) r *= x;
    return e < 0 ? Scalar(1 / r) : r;
}

// value of the rational function at a rational point away from its poles
Scalar eval_at(const RationalCorrelator& r, const std::vector<Scalar>& x) {
    Scalar n = 0;
    for (const auto& [e, k] : r.num) {
        Scalar t = k;
        for (size_t i = 0; i < e.size(); ++i) t *= power(x[i], e[i]);
        n += t;
    }
    for (const auto& [ij, p] : r.pair_orders) n /= power(x[ij.first] - x[ij.second], p);
    return n;
}

int weight_of(const Vector& v) { return level_of(v); }

CoefficientTable series_of(const RationalCorrelator& r, const std::vector<Exps>& window) {
    Region reg;
    for (int i = 0; i < r.nvars; ++i) reg.push_back(i);
    return expand_rational(r, reg, window);
}

}  // namespace

TEST_CASE("rational correlator arithmetic") {
    RationalCorrelator a;
    a.nvars = 2;
    a.num = pow_diff(2, 0, 1, 2);
    a.pair_orders[{0, 1}] = 3;
    a.canonicalize();
    CHECK(a.num == Laurent{{{0, 0}, Scalar(1)}});
    CHECK(a.pair_orders.at({0, 1}) == 1);

    RationalCorrelator b = times_diff(a, 1, 0, 1);
    CHECK(b.pair_orders.empty());
    CHECK(b.num == Laurent{{{0, 0}, Scalar(-1)}});
    CHECK(times_diff(b, 0, 1, -1) == Scalar(-1) * a);

    RationalCorrelator z;
    z.nvars = 2;
    CHECK((a + Scalar(-1) * a).is_zero());
    CHECK(a + z == a);

    std::vector<Scalar> pt{q("3"), q("1/2")};
    auto sum = a + central_sum(q("5"));
    CHECK(eval_at(sum, pt) == eval_at(a, pt) + eval_at(central_sum(q("5")), pt));

    RationalCorrelator o;
    o.nvars = 3;
    o.num[{-2, 1, 0}] = 3;
    o.num[{0, 0, -1}] = 1;
    CHECK(o.origin_orders() == std::vector<int>{2, 0, 1});
}

TEST_CASE("region expansion") {
    // 1/(x0 - x1) in both regions
    RationalCorrelator r;
    r.nvars = 2;
    r.num[{0, 0}] = 1;
    r.pair_orders[{0, 1}] = 1;
    for (int k = 0; k < 6; ++k) {
        CHECK(expand_coefficient(r, {0, 1}, {-1 - k, k}) == 1);
        CHECK(expand_coefficient(r, {1, 0}, {k, -1 - k}) == -1);
        CHECK(expand_coefficient(r, {0, 1}, {k, -1 - k}) == 0);
    }
    // 1/((x0-x1)(x1-x2)(x0-x2)) against a product of geometric series
    RationalCorrelator t;
    t.nvars = 3;
    t.num[{0, 0, 0}] = 1;
    t.pair_orders = {{{0, 1}, 1}, {{1, 2}, 1}, {{0, 2}, 1}};
    for (const auto& e : homogeneous_window(3, -3, -6, 8)) {
        Scalar direct = 0;
        // x0^{-1-a} x1^a * x1^{-1-b} x2^b * x0^{-1-c} x2^c
        for (int a = 0; a <= 20; ++a)
            for (int b = 0; b <= 20; ++b) {
                int c = -e[0] - 2 - a;
                if (c < 0) continue;
                if (a - 1 - b == e[1] && b + c == e[2]) direct += 1;
            }
        CHECK(expand_coefficient(t, {0, 1, 2}, e) == direct);
    }
    auto w = homogeneous_window(3, 4, -2, 3);
    CHECK(w.size() == 16);
    for (const auto& e : w) CHECK(e[0] + e[1] + e[2] == 4);
}

TEST_CASE("closed-form sums against direct summation") {
    for (int mp : {0, 1, 3}) {
        for (int L : {mp + 2, 0, -1}) {
            auto r = shifted_geometric_sum(mp, L);
            for (int n = L - 3; n <= L + 15; ++n) {
                Scalar direct = n >= L ? Scalar(2 * n - mp) : Scalar(0);
                CHECK(expand_coefficient(r, {0, 1}, {-n - 2, n}) == direct);
            }
        }
        // the two-term form at L = m' + 2
        RationalCorrelator two_term;
        two_term.nvars = 2;
        add_to(two_term.num, {-mp - 2, mp + 2}, Scalar(mp + 2));
        add_to(two_term.num, {-mp - 3, mp + 3}, Scalar(-mp - 2));
        add_to(two_term.num, {-mp - 2, mp + 2}, Scalar(2));
        two_term.pair_orders[{0, 1}] = 2;
        two_term.canonicalize();
        CHECK(two_term == shifted_geometric_sum(mp, mp + 2));
    }
    CHECK_THROWS(shifted_geometric_sum(1, 5));

    Scalar c = q("7/3");
    auto cs = central_sum(c);
    for (int m = -4; m <= 15; ++m) {
        Scalar direct = m >= -1 ? c * Scalar(m * m * m - m) / 12 : Scalar(0);
        CHECK(expand_coefficient(cs, {0, 1}, {-m - 2, m - 2}) == direct);
    }
}

TEST_CASE("two-point functions") {
    Scalar c = q("-22/5");
    auto M = std::make_shared<const Verma>(Params{c, Scalar(0)});
    CorrelatorEngine E(M);
    Vector omega = mono({2});
    auto r = E.matrix_coefficient(vacuum_vec(), {omega, omega}, std::nullopt, vacuum_vec());
    CHECK(r == central_sum(c));

    auto H = verma("1/2", "1/16");
    CorrelatorEngine F(H);
    auto g = F.matrix_coefficient(vacuum_vec(), {omega, omega}, std::nullopt, vacuum_vec());
    auto window = homogeneous_window(2, -4, -8, 16);
    CHECK(series_of(g, window) == truncated_series(*H, vacuum_vec(), {omega, omega}, std::nullopt, vacuum_vec(),
                                                   nullptr, window));
    for (const auto& [e, k] : g.num) CHECK(e[0] + e[1] - g.pair_orders[{0, 1}] == -4);
}

TEST_CASE("commutator reordering matches the mode-sum oracle") {
    auto M = verma("3/5", "2/7");
    CorrelatorEngine E(M);
    std::vector<std::vector<Vector>> lists = {
        {mono({2})}, {mono({3})}, {mono({4})}, {mono({2}), mono({2})}, {mono({3}), mono({2})},
        {mono({2}), mono({4})}, {mono({2}, q("-1/3")), mono({3}, 2)},
        {mono({2}), mono({2}), mono({2})}};
    for (const auto& ins : lists) {
        int wt = 0;
        for (const auto& v : ins) wt += weight_of(v);
        for (int lw = 0; lw <= 2; ++lw)
            for (const auto& bw : basis(lw))
                for (int ld = 0; ld <= 4; ++ld)
                    for (const auto& bd : basis(ld)) {
                        if (ins.size() == 3 && (ld > 3 || lw > 1)) continue;
                        auto r = E.matrix_coefficient(mono(bd), ins, std::nullopt, mono(bw));
                        int n = static_cast<int>(ins.size());
                        auto window = homogeneous_window(n, ld - lw - wt, -lw - 6, n == 3 ? 6 : 10);
                        auto oracle = truncated_series(*M, mono(bd), ins, std::nullopt, mono(bw), nullptr, window);
                        CHECK(series_of(r, window) == oracle);
                    }
    }
}

TEST_CASE("projected action of omega on W1") {
    auto M = verma("1", "1/4");
    auto sp = projection_split(M);
    auto a = projected_omega_action(sp, mono({1}));
    REQUIRE(a.size() == 1);
    CHECK(a.begin()->first == Exps{-1});
    CHECK(a.begin()->second == sp.s());
    CHECK(projected_omega_action(sp, vacuum_vec()).empty());
    CHECK(projected_omega_action(sp, mono({2})).empty());
    CHECK_THROWS(projected_omega_action(sp, mono({1, 1})));
    for (int l = 0; l <= 8; ++l)
        for (const auto& b : sp.w1_basis(l)) {
            auto v = projected_omega_action(sp, mono(b));
            CHECK(v.empty() == (l1_power(b) != sp.N() - 1));
        }
    auto one = projected_omega_product(sp, 1, mono({1}));
    REQUIRE(one.terms.size() == 1);
    CHECK(one.terms[0].plus_ops.empty());
    CHECK(one.terms[0].laurent == a);
    CHECK_THROWS(projected_omega_product(sp, 4, mono({1})));
}

TEST_CASE("projected two-omega product evaluates to the mode sums") {
    auto M = verma("1", "1/4");
    auto sp = projection_split(M);
    Projector pi = [&](const Vector& v) { return sp.project(v); };
    CorrelatorEngine E(M);
    Vector w1 = mono({1});
    auto pp = projected_omega_product(sp, 2, w1);
    for (int ld = 0; ld <= 6; ++ld)
        for (const auto& bd : basis(ld)) {
            RationalCorrelator r;
            r.nvars = 2;
            for (const auto& t : pp.terms) {
                RationalCorrelator piece;
                piece.nvars = 2;
                for (const auto& [e, v] : E.evaluate(t, 2, ld)) add_to(piece.num, e, coordinate_pairing(mono(bd), v));
                piece.pair_orders = t.poles;
                r = r + piece;
            }
            auto window = homogeneous_window(2, ld - 1 - 4, -8, 10);
            CHECK(series_of(r, window) == truncated_series(*M, mono(bd), {mono({2}), mono({2})}, 0, w1, pi, window));
        }
}

TEST_CASE("matrix coefficients with a projection") {
    auto M = verma("1", "1/4");
    auto sp = projection_split(M);
    Projector pi = [&](const Vector& v) { return sp.project(v); };
    CorrelatorEngine E(M);
    std::vector<std::vector<Vector>> lists = {{}, {mono({2})}, {mono({3})}, {mono({2}), mono({2})},
                                              {mono({3}), mono({2})}, {mono({2}), mono({3})}};
    for (const auto& ins : lists) {
        int n = static_cast<int>(ins.size());
        int wt = 0;
        for (const auto& v : ins) wt += weight_of(v);
        for (int k = 0; k <= n; ++k)
            for (int lw = 0; lw <= 2; ++lw)
                for (const auto& bw : basis(lw))
                    for (int ld = 0; ld <= 4; ++ld)
                        for (const auto& bd : basis(ld)) {
                            std::string label = std::to_string(n) + " insertions, pi at " + std::to_string(k);
                            INFO(label);
                            auto r = E.matrix_coefficient(mono(bd), ins, k, mono(bw), pi);
                            auto window = homogeneous_window(n, ld - lw - wt, -lw - 6, 10);
                            if (n == 0) {
                                Scalar direct = coordinate_pairing(mono(bd), sp.project(mono(bw)));
                                CHECK(r.num == (direct == 0 ? Laurent{} : Laurent{{{}, direct}}));
                                continue;
                            }
                            CHECK(series_of(r, window) ==
                                  truncated_series(*M, mono(bd), ins, k, mono(bw), pi, window));
                        }
    }
    // s' paired with Y(omega, z1) pi Y(omega, z2) L(-1)
    auto r = E.matrix_coefficient(sp.s(), {mono({2}), mono({2})}, 1, mono({1}), pi);
    CHECK_FALSE(r.is_zero());
    auto window = homogeneous_window(2, 2 - 1 - 4, -8, 10);
    CHECK(series_of(r, window) == truncated_series(*M, sp.s(), {mono({2}), mono({2})}, 1, mono({1}), pi, window));
}

TEST_CASE("projection before a W2 argument is removable") {
    auto M = verma("1", "1/4");
    auto sp = projection_split(M);
    Projector pi = [&](const Vector& v) { return sp.project(v); };
    CorrelatorEngine E(M);
    Vector s = sp.s();
    Vector s3 = M->L(-1, s);
    for (const auto& w : {s, s3})
        for (int ld = 2; ld <= 5; ++ld)
            for (const auto& bd : basis(ld)) {
                auto plain = E.matrix_coefficient(mono(bd), {mono({2}), mono({3})}, std::nullopt, w);
                CHECK(E.matrix_coefficient(mono(bd), {mono({2}), mono({3})}, 2, w, pi) == plain);
                CHECK(E.matrix_coefficient(mono(bd), {mono({2}), mono({3})}, 0, w, pi) == plain);
            }
}

TEST_CASE("N-weight-degree audit") {
    auto M = verma("1", "1/4");
    auto sp = projection_split(M);
    Projector pi = [&](const Vector& v) { return sp.project(v); };
    CorrelatorEngine E(M);
    auto r = E.matrix_coefficient(sp.s(), {mono({2}), mono({2})}, 0, mono({1}), pi);
    auto rep = check_n_weight_degree(r, sp.N(), {2}, 2, 0);
    CHECK(rep.min_degree == -2);
    CHECK(rep.bound == -2);
    CHECK(rep.pass);
    auto worse = check_n_weight_degree(times_diff(r, 0, 1, -1), sp.N(), {2}, 2, 0);
    CHECK(worse.min_degree == rep.min_degree - 1);
    CHECK_FALSE(worse.pass);
    // the same functional with z1 as the recentering point
    auto mid = E.matrix_coefficient(sp.s(), {mono({2}), mono({2})}, 1, mono({1}), pi);
    CHECK(check_n_weight_degree(mid, sp.N(), {2}, 2, 1).pass);
    RationalCorrelator zero;
    zero.nvars = 2;
    CHECK(check_n_weight_degree(zero, 2, {2}, 2, 0).pass);
}

TEST_CASE("insertion validation") {
    auto M = verma("1", "1/4");
    CorrelatorEngine E(M);
    CHECK_THROWS_AS(E.matrix_coefficient(vacuum_vec(), {mono({2, 2})}, std::nullopt, vacuum_vec()),
                    std::invalid_argument);
    CHECK(E.matrix_coefficient(mono({1}), {mono({1})}, std::nullopt, vacuum_vec()).is_zero());
    CHECK_THROWS(E.matrix_coefficient(vacuum_vec(), {mono({2})}, 0, vacuum_vec()));
}
