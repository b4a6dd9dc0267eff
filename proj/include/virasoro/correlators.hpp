#pragma once

#include "virasoro/scalar.hpp"
#include "virasoro/structure.hpp"
#include "virasoro/verma.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

namespace vir {

using Exps = std::vector<int>;
using Laurent = std::map<Exps, Scalar>;    // finite Laurent polynomial in n variables
using VLaurent = std::map<Exps, Vector>;   // same, with vector coefficients
using PairOrders = std::map<std::pair<int, int>, int>;

void add_to(Laurent& acc, const Exps& e, const Scalar& k);
void add_to(VLaurent& acc, const Exps& e, const Vector& v, const Scalar& k = 1);
Laurent mul(const Laurent& x, const Laurent& y);
// (x_i - x_j)^p for p >= 0 in n variables
Laurent pow_diff(int n, int i, int j, int p);

// numerator / prod_{i<j} (x_i - x_j)^{p_ij}; poles at the origin live in negative exponents
struct RationalCorrelator {
    int nvars = 0;
    Laurent num;
    PairOrders pair_orders;

    std::vector<int> origin_orders() const;
    bool is_zero() const { return num.empty(); }
    // cancel common (x_i - x_j) factors
    void canonicalize();
};

RationalCorrelator operator+(const RationalCorrelator& a, const RationalCorrelator& b);
RationalCorrelator operator*(const Scalar& k, const RationalCorrelator& a);
bool operator==(const RationalCorrelator& a, const RationalCorrelator& b);
// multiply by (x_i - x_j)^k, k of either sign
RationalCorrelator times_diff(const RationalCorrelator& r, int i, int j, int k);
// the Laurent polynomial obtained by clearing all pair denominators
Laurent cleared_numerator(const RationalCorrelator& r, const PairOrders& target);

// variables listed by decreasing modulus
using Region = std::vector<int>;
using CoefficientTable = std::map<Exps, Scalar>;
Scalar expand_coefficient(const RationalCorrelator& r, const Region& region, const Exps& e);
CoefficientTable expand_rational(const RationalCorrelator& r, const Region& region, const std::vector<Exps>& window);
// exponent tuples with sum `total`, entries 1..n-1 in [lo, lo + cap]; entry 0 is determined by the sum
std::vector<Exps> homogeneous_window(int nvars, int total, int lo, int cap);

// sum_{n >= lower} (2n - m') y1^{-n-2} y2^n for lower in {m'+2, 0, -1}
RationalCorrelator shifted_geometric_sum(int mprime, int lower);
// sum_{m >= -1} c (m^3 - m)/12 x1^{-m-2} x2^{m-2}
RationalCorrelator central_sum(const Scalar& c);

using Projector = std::function<Vector(const Vector&)>;

enum class OpKind { Full, Plus, Minus };
// d-th derivative of Y(omega, x_var) or of its regular (m <= -2) / singular (m >= -1) part
struct Op {
    OpKind kind;
    int var;
    int d;
    friend bool operator<(const Op& a, const Op& b) {
        return std::tie(a.kind, a.var, a.d) < std::tie(b.kind, b.var, b.d);
    }
    friend bool operator==(const Op& a, const Op& b) { return a.kind == b.kind && a.var == b.var && a.d == b.d; }
};

// plus_ops (all regular parts) applied to a finite Laurent polynomial of vectors,
// times prod (x_i - x_j)^{-poles_ij} expanded for |x_i| > |x_j|, i < j
struct ProductTerm {
    PairOrders poles;
    std::vector<Op> plus_ops;
    VLaurent laurent;
};

struct ProjectedProduct {
    int nvars = 0;
    std::vector<ProductTerm> terms;
};

class CorrelatorEngine {
public:
    explicit CorrelatorEngine(std::shared_ptr<const Verma> M);
    const Verma& module() const { return *M_; }

    // Y(v_1, x_1) ... Y(v_n, x_n) w with regular parts moved left; pi (if any) applied to the right factor
    ProjectedProduct normal_order(const std::vector<Vector>& insertions, const Vector& w,
                                  const Projector& pi = nullptr) const;
    // apply the regular parts, keeping vectors of level <= level_cap
    VLaurent evaluate(const ProductTerm& t, int nvars, int level_cap) const;

    // <w', Y(v_1,z_1) ... Y(v_k,z_k) pi Y(v_{k+1},z_{k+1}) ... Y(v_n,z_n) w> with k = pi_position;
    // w' pairs through PBW coordinates
    RationalCorrelator matrix_coefficient(const Vector& wdual, const std::vector<Vector>& insertions,
                                          std::optional<int> pi_position, const Vector& w,
                                          const Projector& pi = nullptr) const;

private:
    std::shared_ptr<const Verma> M_;
    struct Item {
        Scalar k;
        std::vector<Op> ops;
    };
    std::vector<Item> expand_insertions(const std::vector<Vector>& ins, int offset) const;
    std::vector<ProductTerm> order_ops(std::vector<Op> ops, VLaurent U, PairOrders P, int nvars) const;
    VLaurent apply_minus(const Op& op, const VLaurent& U) const;
    VLaurent apply_plus(const Op& op, const VLaurent& U, int level_cap) const;
};

Scalar coordinate_pairing(const Vector& wdual, const Vector& v);

// brute force: the coefficient of prod z_i^{e_i} is a single product of modes v_(-e-1)
CoefficientTable truncated_series(const Verma& M, const Vector& wdual, const std::vector<Vector>& insertions,
                                  std::optional<int> pi_position, const Vector& w, const Projector& pi,
                                  const std::vector<Exps>& window);

// pi Y(omega, x) w1 for w1 in W1, a finite Laurent polynomial in one variable
VLaurent projected_omega_action(const ProjectionSplit& split, const Vector& w1);
ProjectedProduct projected_omega_product(const ProjectionSplit& split, int l, const Vector& w1, int cap = 3);

struct WeightDegreeReport {
    bool pass;
    int min_degree;
    int bound;
};
// recenter at the last variable other than phi_var and compare the lowest total degree in z_i - z_last
// with N - sum(weights) - phi_weight
WeightDegreeReport check_n_weight_degree(const RationalCorrelator& r, int N, const std::vector<int>& weights,
                                         int phi_weight, int phi_var);

}  // namespace vir
