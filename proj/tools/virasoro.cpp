#include "suites.hpp"
#include "virasoro/correlators.hpp"
#include "virasoro/ext.hpp"
#include "virasoro/json_io.hpp"
#include "virasoro/parallel.hpp"
#include "virasoro/structure.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

using namespace vir;

namespace {

struct Input {
    std::string c = "1", h = "1/4";
    int max_level = 6;
    int cap = 8;
    std::string out;
    std::string in;
    std::string suite = "all";
    std::string scenario = "verma";
    std::string insertions = "2,2";
    std::string dual, input;
    std::string region;
    int pi = -1;
    int degree = 10;
    int weight_cap = 4;
    bool all = false;
    bool derivation = false;
};

struct BadInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

Params params(const Input& in) {
    try {
        return Params{parse_scalar(in.c), parse_scalar(in.h)};
    } catch (const std::invalid_argument& e) {
        throw BadInput(e.what());
    }
}

std::vector<int> int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw BadInput("not an integer list: '" + s + "'");
        }
        if (used != tok.size()) throw BadInput("not an integer list: '" + s + "'");
        out.push_back(v);
    }
    return out;
}

// "2,1,1" -> L(-2)L(-1)L(-1); empty -> the lowest-weight vector
Monomial monomial(const std::string& s) {
    Monomial m = int_list(s);
    for (size_t i = 0; i < m.size(); ++i)
        if (m[i] < 1 || (i > 0 && m[i] > m[i - 1]))
            throw BadInput("modes must be weakly decreasing positive integers: '" + s + "'");
    return m;
}

void emit(const Input& in, const json& j) {
    std::string text = j.dump(2) + "\n";
    if (in.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(in.out, std::ios::binary);
    if (!f) throw BadInput("cannot write " + in.out);
    f << text;
}

int cmd_singular(const Input& in) {
    Params p = params(in);
    Verma M(p);
    std::vector<std::vector<SingularVector>> found(in.max_level + 1);
    parallel_for(in.max_level, [&](size_t i) { found[i + 1] = find_singular(M, static_cast<int>(i) + 1); });
    json list = json::array();
    std::vector<Vector> lower;
    for (int l = 1; l <= in.max_level; ++l)
        for (const auto& s : found[l]) {
            bool descendant = false;
            if (!lower.empty()) descendant = submodule_generated(M, lower, l).level[l].contains(coords(s.s, l));
            if (!descendant) lower.push_back(s.s);
            if (descendant && !in.all) continue;
            json e{{"level", l}, {"vector", to_json(p, s.s)}};
            if (in.all) e["descendant"] = descendant;
            list.push_back(e);
        }
    emit(in, list);
    return 0;
}

int cmd_gram(const Input& in) {
    Verma M(params(in));
    std::vector<GramMatrix> g(in.max_level + 1);
    std::vector<Scalar> det(in.max_level + 1);
    parallel_for(in.max_level + 1, [&](size_t l) {
        g[l] = gram_matrix(M, static_cast<int>(l));
        det[l] = l == 0 ? Scalar(1) : kac_determinant(M, static_cast<int>(l));
    });
    json list = json::array();
    for (int l = 0; l <= in.max_level; ++l) {
        json e = to_json(g[l]);
        e["determinant"] = to_str(det[l]);
        list.push_back(e);
    }
    emit(in, json{{"params", to_json(M.params())}, {"levels", list}});
    return 0;
}

int cmd_classify(const Input& in) {
    Params p = params(in);
    emit(in, json{{"params", to_json(p)}, {"report", to_json(classify_block(p, in.cap))}});
    return 0;
}

int cmd_project(const Input& in) {
    std::ifstream f(in.in);
    if (!f) throw BadInput("cannot read " + in.in);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw BadInput(std::string("malformed JSON: ") + e.what());
    }
    auto [p, v] = [&] {
        try {
            return vector_from_json(j);
        } catch (const json::exception& e) {
            throw BadInput(std::string("malformed vector: ") + e.what());
        }
    }();
    auto M = std::make_shared<const Verma>(p);
    ProjectionSplit sp = projection_split(M);
    Vector pv = sp.project(v);
    emit(in, json{{"params", to_json(p)},
                  {"N", sp.N()},
                  {"singular_vector", to_json(p, sp.s())},
                  {"projection", to_json(p, pv)},
                  {"remainder", to_json(p, v - pv)}});
    return 0;
}

int cmd_correlator(const Input& in) {
    Params p = params(in);
    auto M = std::make_shared<const Verma>(p);
    std::vector<Vector> ins;
    int wt = 0;
    for (int n : int_list(in.insertions)) {
        if (n < 1) throw BadInput("insertions are L(-n)1 with n >= 1");
        ins.push_back(mono({n}));
        wt += n;
    }
    int n = static_cast<int>(ins.size());
    if (n > 3) throw BadInput("at most 3 insertions");
    std::optional<int> k;
    if (in.pi >= 0) {
        if (in.pi > n) throw BadInput("pi position beyond the insertions");
        k = in.pi;
    }
    Monomial bd = monomial(in.dual), bw = monomial(in.input);
    std::unique_ptr<ProjectionSplit> sp;
    Projector pi;
    if (k) {
        auto first = projection_split(M);
        sp = std::make_unique<ProjectionSplit>(M, SingularVector{first.N(), first.s()});
        pi = [&](const Vector& v) { return sp->project(v); };
    }
    CorrelatorEngine E(M);
    RationalCorrelator r = E.matrix_coefficient(mono(bd), ins, k, mono(bw), pi);
    json j{{"params", to_json(p)},
           {"insertions", int_list(in.insertions)},
           {"pi_position", k ? json(*k) : json(nullptr)},
           {"dual", bd},
           {"input", bw},
           {"correlator", to_json(r)}};
    if (!in.region.empty() && n > 0) {
        Region reg = int_list(in.region);
        std::vector<int> sorted = reg;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> want(n);
        std::iota(want.begin(), want.end(), 0);
        if (sorted != want) throw BadInput("region must order the variables 0.." + std::to_string(n - 1));
        int lw = level_of(bw);
        auto window = homogeneous_window(n, level_of(bd) - lw - wt, -lw - 6, in.degree);
        j["expansion"] = json{{"region", reg}, {"coefficients", to_json(expand_rational(r, reg, window))}};
    }
    emit(in, j);
    return 0;
}

int cmd_ext(const Input& in) {
    Params p = params(in);
    auto M = std::make_shared<const Verma>(p);
    auto first = projection_split(M);
    auto sp = std::make_shared<const ProjectionSplit>(M, SingularVector{first.N(), first.s()});
    Extension U = verma_extension(sp);
    if (in.scenario == "split")
        U = split_extension(U.W2, U.W1);
    else if (in.scenario == "d-equivariant")
        U = d_equivariant_section(U, in.cap);
    else if (in.scenario != "verma")
        throw BadInput("unknown scenario '" + in.scenario + "' (verma, split, d-equivariant)");
    auto F = extension_to_derivation(U, in.cap, in.weight_cap);
    auto cocycle = verify_cocycle(F, U.W1, U.W2, AxiomOptions{});
    auto witness = is_inner(F, *U.W1, *U.W2);
    auto rt = roundtrip_check(U, in.cap, in.weight_cap);
    json w = nullptr;
    if (witness) {
        w = json::object();
        for (const auto& [l, P] : witness->phi_minus_one) w[std::to_string(l)] = to_json(P);
    }
    json j{{"params", to_json(p)}, {"scenario", in.scenario},    {"cap", in.cap},
           {"N", sp->N()},         {"untwisted", F.untwisted},   {"cocycle", to_json(cocycle)},
           {"inner", witness.has_value()}, {"inner_witness", w}, {"roundtrip", to_json(rt)}};
    if (in.derivation) j["derivation"] = to_json(F);
    emit(in, j);
    return cocycle.pass() && rt.FG_identity && rt.GF_map && rt.GF_solver ? 0 : 1;
}

int cmd_verify(const Input& in) {
    std::vector<int> ids;
    try {
        ids = suites::select_suites(in.suite);
    } catch (const std::invalid_argument& e) {
        throw BadInput(e.what());
    }
    json list = json::array();
    bool ok = true;
    for (int id : ids) {
        auto r = suites::run_suite(id);
        ok = ok && r.pass;
        std::fprintf(stderr, "%s %2d %-15s %8.2fs\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
        list.push_back(json{{"id", r.id},
                            {"name", r.name},
                            {"pass", r.pass},
                            {"checks", r.checks},
                            {"failures", r.failures},
                            {"detail", r.detail}});
    }
    emit(in, json{{"pass", ok}, {"suites", list}});
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Virasoro Verma-module engine"};
    app.require_subcommand(1);
    // --h is the lowest weight, so help is long-form only
    app.set_help_flag("--help", "print this help");
    Input in;
    auto params_opts = [&](CLI::App* s) {
        s->add_option("--c", in.c, "central charge, p/q")->capture_default_str();
        s->add_option("--h", in.h, "lowest weight, p/q")->capture_default_str();
    };
    auto out_opt = [&](CLI::App* s) { s->add_option("--out", in.out, "write JSON here instead of stdout"); };

    auto* singular = app.add_subcommand("singular", "singular vectors up to a level");
    params_opts(singular);
    singular->add_option("--max-level", in.max_level)->check(CLI::Range(1, 16))->capture_default_str();
    singular->add_flag("--all", in.all, "also list vectors inside the submodule generated by lower ones");
    out_opt(singular);

    auto* gram = app.add_subcommand("gram", "Gram matrices and determinants");
    params_opts(gram);
    gram->add_option("--max-level", in.max_level)->check(CLI::Range(1, 12))->capture_default_str();
    out_opt(gram);

    auto* classify = app.add_subcommand("classify", "block classification");
    params_opts(classify);
    classify->add_option("--cap", in.cap, "level cap")->check(CLI::Range(1, 200))->capture_default_str();
    out_opt(classify);

    auto* project = app.add_subcommand("project", "apply the projection to a vector JSON");
    project->add_option("--in,input", in.in, "vector JSON file")->required();
    out_opt(project);

    auto* corr = app.add_subcommand("correlator", "matrix coefficient with an optional projection");
    params_opts(corr);
    corr->add_option("--insertions", in.insertions, "weights n of the insertions L(-n)1, comma separated")
        ->capture_default_str();
    corr->add_option("--pi", in.pi, "position of the projection (0 = leftmost)")->check(CLI::NonNegativeNumber);
    corr->add_option("--dual", in.dual, "modes of the dual vector");
    corr->add_option("--input", in.input, "modes of the input vector");
    corr->add_option("--region", in.region, "variables by decreasing modulus, e.g. 0,1");
    corr->add_option("--degree", in.degree, "expansion depth")->check(CLI::Range(1, 30))->capture_default_str();
    out_opt(corr);

    auto* ext = app.add_subcommand("ext", "extension / derivation correspondence for a scenario");
    params_opts(ext);
    ext->add_option("--scenario", in.scenario, "verma, split or d-equivariant")->capture_default_str();
    ext->add_option("--cap", in.cap, "level cap")->check(CLI::Range(1, 10))->capture_default_str();
    ext->add_option("--weight-cap", in.weight_cap)->check(CLI::Range(2, 6))->capture_default_str();
    ext->add_flag("--derivation", in.derivation, "include the derivation matrices");
    out_opt(ext);

    auto* verify = app.add_subcommand("verify", "run the acceptance suites");
    verify->add_option("--suite", in.suite, "all, a name, a number, or a comma-separated list")
        ->capture_default_str();
    out_opt(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*singular) return cmd_singular(in);
        if (*gram) return cmd_gram(in);
        if (*classify) return cmd_classify(in);
        if (*project) return cmd_project(in);
        if (*corr) return cmd_correlator(in);
        if (*ext) return cmd_ext(in);
        if (*verify) return cmd_verify(in);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 2;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
