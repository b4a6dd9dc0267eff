#include <doctest.h>

#include "virasoro/json_io.hpp"

using namespace vir;

namespace {

json reparse(const json& j) { return json::parse(j.dump()); }

}  // namespace

TEST_CASE("correlator json roundtrip") {
    auto M = std::make_shared<const Verma>(Params{Scalar(1), Scalar(1, 4)});
    auto sp = projection_split(M);
    Projector pi = [&](const Vector& v) { return sp.project(v); };
    CorrelatorEngine E(M);
    std::vector<RationalCorrelator> rs = {
        E.matrix_coefficient(sp.s(), {mono({2}), mono({2})}, 0, mono({1}), pi),
        E.matrix_coefficient(mono({3, 1}), {mono({3}), mono({2})}, std::nullopt, mono({1})),
        central_sum(Scalar(-22, 5)), RationalCorrelator{2, {}, {}}};
    for (const auto& r : rs) {
        json j = to_json(r);
        auto back = correlator_from_json(reparse(j));
        CHECK(back == r);
        CHECK(back.num == r.num);
        CHECK(to_json(back).dump() == j.dump());
    }
    json j = to_json(rs[0]);
    j["origin_orders"]["z1"] = 7;
    CHECK_THROWS_AS(correlator_from_json(j), std::invalid_argument);
    json k = to_json(rs[0]);
    k["pair_orders"] = json{{"z2,z1", 1}};
    CHECK_THROWS_AS(correlator_from_json(k), std::invalid_argument);
}

TEST_CASE("derivation json roundtrip keeps empty blocks") {
    auto M = std::make_shared<const Verma>(Params{Scalar(1), Scalar(1, 4)});
    auto first = projection_split(M);
    auto sp = std::make_shared<const ProjectionSplit>(M, SingularVector{first.N(), first.s()});
    auto U = verma_extension(sp);
    auto F = extension_to_derivation(U, 5);
    bool empty_block = false;
    for (const auto& [v, T] : F.F)
        for (const auto& [key, A] : T.modes) empty_block = empty_block || A.rows == 0 || A.cols == 0;
    CHECK(empty_block);
    json j = to_json(F);
    auto back = derivation_from_json(reparse(j));
    CHECK(back.same_values(F));
    CHECK(back.untwisted == F.untwisted);
    CHECK(back.generated == F.generated);
    CHECK(back.level_cap == F.level_cap);
    CHECK(back.weight_cap == F.weight_cap);
    for (const auto& [v, T] : F.F) CHECK(back.F.at(v) == T);
    CHECK(to_json(back).dump() == j.dump());
}

TEST_CASE("block report json roundtrip") {
    for (auto [c, h] : {std::pair{"1/2", "1/2"}, std::pair{"1", "1/4"}, std::pair{"7", "3"}}) {
        Params p{parse_scalar(c), parse_scalar(h)};
        auto r = classify_block(p, 20);
        json j = to_json(r);
        auto back = block_report_from_json(reparse(j));
        CHECK(back.kase == r.kase);
        CHECK(back.integer_points == r.integer_points);
        CHECK(back.members == r.members);
        CHECK(back.h_list == r.h_list);
        CHECK(back.axis_point == r.axis_point);
        CHECK(to_json(back).dump() == j.dump());
    }
}

TEST_CASE("vectors and matrices keep exact scalars") {
    Params p{Scalar(-22, 5), Scalar(123456789, 1000000007)};
    Vector v = mono({3, 1}, Scalar(-7, 3)) + mono({2, 2}, Scalar(1, 1000000000));
    auto [q, w] = vector_from_json(reparse(to_json(p, v)));
    CHECK(q == p);
    CHECK(w == v);
    Matrix m(2, 2);
    m(0, 1) = Scalar(5, 9);
    m(1, 0) = -1;
    CHECK(matrix_from_json(reparse(to_json(m))) == m);
    json bad = to_json(p, v);
    bad["terms"][0]["modes"] = json::array({1, 3});
    CHECK_THROWS_AS(vector_from_json(bad), std::invalid_argument);
}

TEST_CASE("echelon generators json roundtrip") {
    auto A = std::make_shared<const Verma>(Params{Scalar(1), Scalar(1, 4)});
    auto B = std::make_shared<const Verma>(Params{Scalar(1), Scalar(9, 4)});
    DirectSum S({A, B});
    Vector s = mono({1, 1}) - mono({2});
    auto e = classify_direct_sum_submodule(S, {{s, vacuum_vec()}}, 6);
    auto back = echelon_from_json(reparse(to_json(e)));
    CHECK(back.n == e.n);
    CHECK(back.order == e.order);
    CHECK(back.generators == e.generators);
    CHECK(back.leading == e.leading);
    CHECK(back.N_level == e.N_level);
    Verma M({Scalar(1), Scalar(1, 4)});
    json g = to_json(gram_matrix(M, 2));
    CHECK(matrix_from_json(reparse(g).at("matrix")) == gram_matrix(M, 2).entries);
}
