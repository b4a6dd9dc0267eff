#pragma once

#include "virasoro/linalg.hpp"
#include "virasoro/scalar.hpp"
#include "virasoro/structure.hpp"
#include "virasoro/verma.hpp"

#include <climits>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace vir {

// a positive-energy Virasoro module given by its graded pieces and mode matrices;
// level l has weight lowest_weight() + l
class GradedModule {
public:
    virtual ~GradedModule() = default;
    virtual Scalar central_charge() const = 0;
    virtual Scalar lowest_weight() const = 0;
    virtual int dim(int level) const = 0;
    virtual int max_level() const { return INT_MAX; }

    // L(m) : level -> level - m (zero rows below level 0)
    const Matrix& L(int m, int level) const;
    // v_(k) for v in V(c,0): level -> level + wt v - k - 1; v is reduced modulo L(-1)1
    Matrix Y(const Vector& v, int k, int level) const;
    const Matrix& Y(const Monomial& v, int k, int level) const;
    int lowest_level() const;

protected:
    virtual Matrix compute_L(int m, int level) const = 0;

private:
    Matrix compute_Y(const Monomial& v, int k, int level) const;
    mutable std::recursive_mutex mu_;
    mutable std::map<std::pair<int, int>, std::unique_ptr<Matrix>> lmemo_;
    mutable std::map<std::tuple<Monomial, int, int>, std::unique_ptr<Matrix>> ymemo_;
};

using ModulePtr = std::shared_ptr<const GradedModule>;

class VermaRep : public GradedModule {
public:
    explicit VermaRep(std::shared_ptr<const Verma> M) : M_(std::move(M)) {}
    Scalar central_charge() const override { return M_->params().c; }
    Scalar lowest_weight() const override { return M_->params().h; }
    int dim(int level) const override;

protected:
    Matrix compute_L(int m, int level) const override;

private:
    std::shared_ptr<const Verma> M_;
};

// W2 = the submodule generated by s, on the w2_vector basis, graded as in the ambient module
class SubmoduleRep : public GradedModule {
public:
    explicit SubmoduleRep(std::shared_ptr<const ProjectionSplit> split) : sp_(std::move(split)) {}
    Scalar central_charge() const override { return sp_->module().params().c; }
    Scalar lowest_weight() const override { return sp_->module().params().h; }
    int dim(int level) const override;

protected:
    Matrix compute_L(int m, int level) const override;

private:
    std::shared_ptr<const ProjectionSplit> sp_;
};

// W1 = the quotient by W2, on the W1 monomial basis
class QuotientRep : public GradedModule {
public:
    explicit QuotientRep(std::shared_ptr<const ProjectionSplit> split) : sp_(std::move(split)) {}
    Scalar central_charge() const override { return sp_->module().params().c; }
    Scalar lowest_weight() const override { return sp_->module().params().h; }
    int dim(int level) const override;

protected:
    Matrix compute_L(int m, int level) const override;

private:
    std::shared_ptr<const ProjectionSplit> sp_;
};

// A + B, coordinates of A first
class DirectSumRep : public GradedModule {
public:
    DirectSumRep(ModulePtr a, ModulePtr b);
    Scalar central_charge() const override { return a_->central_charge(); }
    Scalar lowest_weight() const override { return a_->lowest_weight(); }
    int dim(int level) const override { return a_->dim(level) + b_->dim(level); }
    int max_level() const override { return std::min(a_->max_level(), b_->max_level()); }

protected:
    Matrix compute_L(int m, int level) const override;

private:
    ModulePtr a_, b_;
};

// graded linear map, one matrix per level
using GradedMap = std::map<int, Matrix>;

// the family phi_(k) of a map W1 -> W2-valued series; key (k, input level),
// the output level is input + weight - k - 1
struct TruncatedHom {
    int weight = 0;
    int level_cap = 0;
    std::map<std::pair<int, int>, Matrix> modes;
    friend bool operator==(const TruncatedHom& x, const TruncatedHom& y) {
        return x.weight == y.weight && x.level_cap == y.level_cap && x.modes == y.modes;
    }
};

struct DerivationData {
    int level_cap = 0;
    int weight_cap = 0;
    std::map<Monomial, TruncatedHom, MonoLess> F;  // keyed by V basis monomials
    bool generated = false;                         // produced from F(omega) by the derivation rule
    bool untwisted = true;                          // D-derivative property without the section correction

    const TruncatedHom& omega() const { return F.at({2}); }
    // matrix equality of all stored modes
    bool same_values(const DerivationData& o) const;
};

DerivationData operator-(const DerivationData& x, const DerivationData& y);

// the glued module W2 + W1 with L(m) = [[L2(m), F(omega)_(m+1)], [0, L1(m)]]
class ExtensionRep : public GradedModule {
public:
    ExtensionRep(ModulePtr W2, ModulePtr W1, TruncatedHom f_omega);
    Scalar central_charge() const override { return W1_->central_charge(); }
    Scalar lowest_weight() const override { return W1_->lowest_weight(); }
    int dim(int level) const override { return W2_->dim(level) + W1_->dim(level); }
    int max_level() const override { return f_.level_cap; }

protected:
    Matrix compute_L(int m, int level) const override;

private:
    ModulePtr W2_, W1_;
    TruncatedHom f_;
};

// U with a submodule iota(W2) and a grading-preserving section psi of U -> W1
struct Extension {
    ModulePtr U, W2, W1;
    std::function<Matrix(int)> iota, psi;
};

// M(c,h) over the projection split: W2 = <s>, W1 = quotient, psi = span of the W1 monomials
Extension verma_extension(std::shared_ptr<const ProjectionSplit> split);
// W2 + W1 as a module direct sum with the inclusions
Extension split_extension(ModulePtr W2, ModulePtr W1);
// the same U with psi replaced by psi + iota phi
Extension shifted_section(const Extension& e, GradedMap phi);
// a section commuting with L(-1), built level by level; throws if none exists
Extension d_equivariant_section(const Extension& e, int level_cap);

// the vacuum-module basis monomials of weight 2..weight_cap (parts >= 2)
std::vector<Monomial> vacuum_spanning_set(int weight_cap);

// F(v) = pi2 Y_U(v, .) psi
DerivationData extension_to_derivation(const Extension& e, int level_cap, int weight_cap = 4);

struct ExtensionModule {
    ModulePtr W2, W1;
    DerivationData F;
    std::shared_ptr<const ExtensionRep> U;
    Extension as_extension() const;
};
ExtensionModule derivation_to_extension(const DerivationData& F, ModulePtr W1, ModulePtr W2);

struct InnerWitness {
    GradedMap phi_minus_one;
};
// F(v) = Y2(v) phi - phi Y1(v)
DerivationData inner_derivation(const GradedMap& phi, const GradedModule& W1, const GradedModule& W2, int level_cap,
                                int weight_cap = 4);
std::optional<InnerWitness> is_inner(const DerivationData& F, const GradedModule& W1, const GradedModule& W2);

struct EquivalenceMap {
    GradedMap off_diagonal;  // pi2 T psi
};
std::optional<EquivalenceMap> equivalence(const Extension& U1, const Extension& U2, int level_cap);
// T psi1 = psi2 + iota phi, T iota = iota; checks T L1(m) = L2(m) T at all levels <= cap
bool intertwines(const Extension& U1, const Extension& U2, const GradedMap& phi, int level_cap);

struct WeakAssocSample {
    Monomial u, v;
    int level;
    int p;  // -1 when no exponent up to the bound works
};

struct AxiomReport {
    bool bracket = true;
    bool d_commutator = true;
    bool D_commutator = true;
    bool identity = true;
    bool weak_assoc = true;
    int max_p = 0;
    std::vector<WeakAssocSample> samples;
    bool pass() const { return bracket && d_commutator && D_commutator && identity && weak_assoc; }
};

struct AxiomOptions {
    int level_cap = 6;     // stored levels examined
    int sample_level = 2;  // weak associativity inputs up to this level
    int p_bound = 8;
    std::vector<Monomial> sample = {{2}, {3}};
};
AxiomReport verify_module_axioms(const GradedModule& U, const AxiomOptions& opt);

struct CocycleReport {
    bool bracket = true;          // derivation identity on (omega, omega)
    bool derivation_rule = true;  // stored F(v) agree with the rule generated from F(omega)
    bool D_twisted = true;        // D-derivative identity corrected by the section term
    bool weak_assoc = true;
    int max_p = 0;
    std::vector<WeakAssocSample> samples;
    bool pass() const { return bracket && derivation_rule && D_twisted && weak_assoc; }
};
CocycleReport verify_cocycle(const DerivationData& F, ModulePtr W1, ModulePtr W2, const AxiomOptions& opt);

struct RoundtripReport {
    bool FG_identity = false;  // F(G(F)) = F
    bool GF_map = false;       // (w2, w1) -> iota w2 + psi w1 intertwines G(F(U)) with U
    bool GF_solver = false;    // the equivalence solver also finds a map
};
RoundtripReport roundtrip_check(const DerivationData& F, ModulePtr W1, ModulePtr W2);
RoundtripReport roundtrip_check(const Extension& U, int level_cap, int weight_cap = 4);

// lowest weight of W2 minus lowest weight of W1
int weight_gap(const GradedModule& W1, const GradedModule& W2, int search_cap = 40);

}  // namespace vir
