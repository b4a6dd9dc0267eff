#include "virasoro/json_io.hpp"

#include <stdexcept>

namespace vir {

json to_json(const QuadScalar& q) {
    return json{{"a", to_str(q.a)}, {"b", to_str(q.b)}, {"d", to_str(q.d)}};
}

json to_json(const Params& p) { return json{{"c", to_str(p.c)}, {"h", to_str(p.h)}}; }

json to_json(const Params& p, const Vector& v) {
    json terms = json::array();
    for (const auto& [m, k] : v) terms.push_back(json{{"modes", m}, {"coeff", to_str(k)}});
    return json{{"params", to_json(p)}, {"terms", terms}};
}

json to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(to_str(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

Params params_from_json(const json& j) {
    return Params{parse_scalar(j.at("c").get<std::string>()), parse_scalar(j.at("h").get<std::string>())};
}

std::pair<Params, Vector> vector_from_json(const json& j) {
    Params p = params_from_json(j.at("params"));
    Vector v;
    for (const auto& t : j.at("terms")) {
        Monomial m = t.at("modes").get<Monomial>();
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] < 1 || (i > 0 && m[i] > m[i - 1]))
                throw std::invalid_argument("modes must be weakly decreasing positive integers");
        }
        add_term(v, m, parse_scalar(t.at("coeff").get<std::string>()));
    }
    return {p, v};
}

Matrix matrix_from_json(const json& j) {
    int r = static_cast<int>(j.size());
    int c = r ? static_cast<int>(j[0].size()) : 0;
    Matrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(j[i].size()) != c) throw std::invalid_argument("ragged matrix");
        for (int k = 0; k < c; ++k) m(i, k) = parse_scalar(j[i][k].get<std::string>());
    }
    return m;
}

namespace {

std::string var_name(int i) { return "z" + std::to_string(i + 1); }

int var_index(const std::string& s) {
    if (s.size() < 2 || s[0] != 'z') throw std::invalid_argument("bad variable name " + s);
    return std::stoi(s.substr(1)) - 1;
}

json monomial_json(const Monomial& m) { return json(m); }

json shaped(const Matrix& m) { return json{{"rows", m.rows}, {"cols", m.cols}, {"entries", to_json(m)}}; }

Matrix unshaped(const json& j) {
    Matrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
    const json& e = j.at("entries");
    if (static_cast<int>(e.size()) != m.rows) throw std::invalid_argument("matrix shape mismatch");
    for (int i = 0; i < m.rows; ++i) {
        if (static_cast<int>(e[i].size()) != m.cols) throw std::invalid_argument("matrix shape mismatch");
        for (int k = 0; k < m.cols; ++k) m(i, k) = parse_scalar(e[i][k].get<std::string>());
    }
    return m;
}

json samples_json(const std::vector<WeakAssocSample>& s) {
    json a = json::array();
    for (const auto& x : s)
        a.push_back(json{{"u", monomial_json(x.u)}, {"v", monomial_json(x.v)}, {"level", x.level}, {"p", x.p}});
    return a;
}

}  // namespace

json to_json(const GramMatrix& g) {
    json b = json::array();
    for (const auto& m : g.basis) b.push_back(m);
    return json{{"level", g.level}, {"basis", b}, {"matrix", to_json(g.entries)}};
}

namespace {

json terms_json(const Vector& v) {
    json a = json::array();
    for (const auto& [m, k] : v) a.push_back(json{{"modes", m}, {"coeff", to_str(k)}});
    return a;
}

Vector terms_from_json(const json& a) {
    Vector v;
    for (const auto& t : a) add_term(v, t.at("modes").get<Monomial>(), parse_scalar(t.at("coeff").get<std::string>()));
    return v;
}

}  // namespace

json to_json(const EchelonGenerators& e) {
    json gens = json::array();
    for (size_t g = 0; g < e.generators.size(); ++g) {
        json comps = json::array();
        for (const auto& v : e.generators[g]) comps.push_back(terms_json(v));
        gens.push_back(json{{"leading", e.leading[g]}, {"components", comps}});
    }
    json levels = json::object();
    for (const auto& [i, l] : e.N_level) levels[std::to_string(i)] = l;
    return json{{"n", e.n}, {"order", e.order}, {"generators", gens}, {"N_level", levels}};
}

EchelonGenerators echelon_from_json(const json& j) {
    EchelonGenerators e;
    e.n = j.at("n").get<int>();
    e.order = j.at("order").get<std::vector<int>>();
    for (const auto& g : j.at("generators")) {
        DirVec v;
        for (const auto& c : g.at("components")) v.push_back(terms_from_json(c));
        if (static_cast<int>(v.size()) != e.n) throw std::invalid_argument("generator with the wrong number of components");
        e.generators.push_back(std::move(v));
        e.leading.push_back(g.at("leading").get<int>());
    }
    for (const auto& [k, l] : j.at("N_level").items()) e.N_level[std::stoi(k)] = l.get<int>();
    return e;
}

json to_json(const BlockReport& r) {
    json pts = json::array();
    for (const auto& [a, b] : r.integer_points) pts.push_back(json::array({a, b}));
    auto scalars = [](const std::vector<Scalar>& v) {
        json a = json::array();
        for (const auto& x : v) a.push_back(to_str(x));
        return a;
    };
    json j{{"case", to_string(r.kase)}, {"level_cap", r.level_cap}, {"integer_points", pts},
           {"members", scalars(r.members)}};
    if (r.kase == BlockCase::D) {
        j["h_list"] = scalars(r.h_list);
        j["h_prime_list"] = scalars(r.h_prime_list);
    }
    j["axis_point"] = r.axis_point ? json::array({r.axis_point->first, r.axis_point->second}) : json(nullptr);
    return j;
}

BlockReport block_report_from_json(const json& j) {
    BlockReport r;
    std::string k = j.at("case").get<std::string>();
    bool found = false;
    for (BlockCase b : {BlockCase::A, BlockCase::B, BlockCase::C, BlockCase::D, BlockCase::Undetermined})
        if (to_string(b) == k) {
            r.kase = b;
            found = true;
        }
    if (!found) throw std::invalid_argument("unknown block case " + k);
    r.level_cap = j.at("level_cap").get<int>();
    for (const auto& p : j.at("integer_points")) r.integer_points.push_back({p.at(0).get<long>(), p.at(1).get<long>()});
    auto scalars = [](const json& a) {
        std::vector<Scalar> v;
        for (const auto& x : a) v.push_back(parse_scalar(x.get<std::string>()));
        return v;
    };
    r.members = scalars(j.at("members"));
    if (j.contains("h_list")) r.h_list = scalars(j.at("h_list"));
    if (j.contains("h_prime_list")) r.h_prime_list = scalars(j.at("h_prime_list"));
    const json& a = j.at("axis_point");
    if (!a.is_null()) r.axis_point = std::pair<long, long>{a.at(0).get<long>(), a.at(1).get<long>()};
    return r;
}

json to_json(const RationalCorrelator& r) {
    json num = json::array();
    for (const auto& [e, k] : r.num) num.push_back(json{{"exps", e}, {"coeff", to_str(k)}});
    json origin = json::object();
    auto o = r.origin_orders();
    for (int i = 0; i < r.nvars; ++i) origin[var_name(i)] = o[i];
    json pairs = json::object();
    for (const auto& [ij, p] : r.pair_orders)
        if (p > 0) pairs[var_name(ij.first) + "," + var_name(ij.second)] = p;
    return json{{"numerator", num}, {"origin_orders", origin}, {"pair_orders", pairs}};
}

RationalCorrelator correlator_from_json(const json& j) {
    RationalCorrelator r;
    r.nvars = static_cast<int>(j.at("origin_orders").size());
    for (const auto& t : j.at("numerator")) {
        Exps e = t.at("exps").get<Exps>();
        if (static_cast<int>(e.size()) != r.nvars) throw std::invalid_argument("exponent tuple of the wrong length");
        add_to(r.num, e, parse_scalar(t.at("coeff").get<std::string>()));
    }
    for (const auto& [key, p] : j.at("pair_orders").items()) {
        auto comma = key.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("bad pair key " + key);
        int a = var_index(key.substr(0, comma)), b = var_index(key.substr(comma + 1));
        if (a >= b || b >= r.nvars) throw std::invalid_argument("bad pair key " + key);
        r.pair_orders[{a, b}] = p.get<int>();
    }
    auto o = r.origin_orders();
    for (const auto& [key, p] : j.at("origin_orders").items())
        if (o.at(var_index(key)) != p.get<int>()) throw std::invalid_argument("origin orders disagree with numerator");
    return r;
}

json to_json(const CoefficientTable& t) {
    json a = json::array();
    for (const auto& [e, k] : t) a.push_back(json{{"exps", e}, {"coeff", to_str(k)}});
    return a;
}

json to_json(const DerivationData& F) {
    json maps = json::array();
    for (const auto& [v, T] : F.F) {
        json modes = json::array();
        for (const auto& [key, A] : T.modes)
            modes.push_back(json{{"k", key.first}, {"level", key.second}, {"matrix", shaped(A)}});
        maps.push_back(json{{"v", monomial_json(v)}, {"weight", T.weight}, {"modes", modes}});
    }
    return json{{"level_cap", F.level_cap}, {"weight_cap", F.weight_cap}, {"generated", F.generated},
                {"untwisted", F.untwisted}, {"F", maps}};
}

DerivationData derivation_from_json(const json& j) {
    DerivationData F;
    F.level_cap = j.at("level_cap").get<int>();
    F.weight_cap = j.at("weight_cap").get<int>();
    F.generated = j.at("generated").get<bool>();
    F.untwisted = j.at("untwisted").get<bool>();
    for (const auto& m : j.at("F")) {
        TruncatedHom T;
        T.weight = m.at("weight").get<int>();
        T.level_cap = F.level_cap;
        for (const auto& x : m.at("modes"))
            T.modes[{x.at("k").get<int>(), x.at("level").get<int>()}] = unshaped(x.at("matrix"));
        F.F[m.at("v").get<Monomial>()] = std::move(T);
    }
    return F;
}

json to_json(const AxiomReport& r) {
    return json{{"pass", r.pass()},          {"bracket", r.bracket},       {"d_commutator", r.d_commutator},
                {"D_commutator", r.D_commutator}, {"identity", r.identity}, {"weak_assoc", r.weak_assoc},
                {"max_p", r.max_p},          {"samples", samples_json(r.samples)}};
}

json to_json(const CocycleReport& r) {
    return json{{"pass", r.pass()},
                {"bracket", r.bracket},
                {"derivation_rule", r.derivation_rule},
                {"D_twisted", r.D_twisted},
                {"weak_assoc", r.weak_assoc},
                {"max_p", r.max_p},
                {"samples", samples_json(r.samples)}};
}

json to_json(const RoundtripReport& r) {
    return json{{"FG_identity", r.FG_identity}, {"GF_map", r.GF_map}, {"GF_solver", r.GF_solver}};
}

}  // namespace vir
