#pragma once

#include "virasoro/linalg.hpp"
#include "virasoro/scalar.hpp"
#include "virasoro/verma.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace vir {

// coordinates of a homogeneous vector in basis(level)
std::vector<Scalar> coords(const Vector& v, int level);
Vector from_coords(const std::vector<Scalar>& x, int level);
int basis_position(const Monomial& m);

// rows of the matrix of L(m) : level -> level - m, columns indexed by basis(level)
Matrix mode_matrix(const Verma& M, int m, int level);

// a subspace of a fixed coordinate space kept in reduced row echelon form
class Subspace {
public:
    explicit Subspace(int ambient = 0) : n_(ambient) {}
    int ambient() const { return n_; }
    int dim() const { return static_cast<int>(rows_.size()); }
    // returns true if the span grew
    bool add(std::vector<Scalar> v);
    std::vector<Scalar> reduce(std::vector<Scalar> v) const;
    bool contains(const std::vector<Scalar>& v) const;
    const std::vector<std::vector<Scalar>>& rows() const { return rows_; }
    const std::vector<int>& pivots() const { return piv_; }

private:
    int n_;
    std::vector<std::vector<Scalar>> rows_;
    std::vector<int> piv_;
};

struct GramMatrix {
    int level;
    std::vector<Monomial> basis;
    Matrix entries;
};
GramMatrix gram_matrix(const Verma& M, int level);
Scalar kac_determinant(const Verma& M, int level);
// determinant of the Gram matrix reduced modulo a prime p (p must not divide denominators)
std::uint64_t kac_determinant_mod(const Verma& M, int level, std::uint64_t p);

struct SingularVector {
    int level;
    Vector s;
};
// throws std::runtime_error when a kernel vector has no L(-1)^N term
std::vector<SingularVector> find_singular(const Verma& M, int level);

struct FFLineData {
    Scalar disc;                      // (c-1)(c-25)
    QuadScalar nu;
    std::optional<QuadScalar> beta;   // nullopt: outside the quadratic tower
};
FFLineData ff_line(const Params& p);

enum class BlockCase { A, B, C, D, Undetermined };
std::string to_string(BlockCase b);

struct BlockReport {
    BlockCase kase = BlockCase::Undetermined;
    int level_cap = 0;
    std::vector<std::pair<long, long>> integer_points;
    std::vector<Scalar> members;     // h + r s for the distinct rs found
    std::vector<Scalar> h_list;      // case D only, i = 1, 2, ...
    std::vector<Scalar> h_prime_list;
    std::optional<std::pair<long, long>> axis_point;
};
BlockReport classify_block(const Params& p, int level_cap);

// the split W = W1 + W2 with W2 generated by one singular vector s of level N
class ProjectionSplit {
public:
    ProjectionSplit(std::shared_ptr<const Verma> M, SingularVector s);

    const Verma& module() const { return *M_; }
    std::shared_ptr<const Verma> module_ptr() const { return M_; }
    int N() const { return s_.level; }
    const Vector& s() const { return s_.s; }

    // prefix L(-1)^{q-N} s for a monomial prefix L(-1)^q with q >= N
    const Vector& w2_vector(const Monomial& m) const;
    std::vector<Monomial> w1_basis(int level) const;
    std::vector<Monomial> w2_basis(int level) const;

    struct Decomposition {
        Vector w2;  // coordinates on the w2_vector basis, keyed by monomial
        Vector w1;  // remainder, supported on W1 monomials
    };
    Decomposition decompose(const Vector& v) const;
    Vector project(const Vector& v) const;
    Vector from_w2_coords(const Vector& a) const;

private:
    std::shared_ptr<const Verma> M_;
    SingularVector s_;
    mutable std::mutex mu_;
    mutable std::map<Monomial, std::unique_ptr<Vector>, MonoLess> cache_;
};

// the first singular vector; rejects block D and irreducible modules
ProjectionSplit projection_split(std::shared_ptr<const Verma> M, int search_cap = 20);

// graded subspaces of one Verma module, levels 0..cap
struct GradedSubspace {
    int cap = 0;
    std::vector<Subspace> level;
    int dim(int l) const { return l <= cap ? level[l].dim() : -1; }
};
GradedSubspace submodule_generated(const Verma& M, const std::vector<Vector>& gens, int cap);
GradedSubspace span_levels(const std::vector<Vector>& vecs, int cap);
// closure under L(1), L(2), L(-1), L(-2) inside the stored levels
bool is_submodule(const Verma& M, const GradedSubspace& T);

struct InducedSplit {
    int cap;
    std::vector<int> dim_T1, dim_T2, dim_T;
    std::function<Vector(const Vector&)> project;    // pi of the induced split
    std::function<Vector(const Vector&)> normalize;   // canonical representative
    std::function<bool(const Vector&)> in_image;      // membership in the induced W2
};
// T contains W2: T = (W1 cap T) + W2
InducedSplit restrict_split(const ProjectionSplit& sp, const GradedSubspace& T);
// T contained in W2: W/T = (W1 + T)/T + W2/T
InducedSplit quotient_split(const ProjectionSplit& sp, const GradedSubspace& T);

// direct sums of Verma modules with a common central charge
using DirVec = std::vector<Vector>;

class DirectSum {
public:
    explicit DirectSum(std::vector<std::shared_ptr<const Verma>> comps);
    int size() const { return static_cast<int>(comps_.size()); }
    const Verma& comp(int i) const { return *comps_[i]; }
    std::shared_ptr<const Verma> comp_ptr(int i) const { return comps_[i]; }
    Scalar hmin() const { return hmin_; }
    // level of component i at global degree d, or -1
    int comp_level(int i, int d) const;
    int dim(int d) const;
    std::vector<Scalar> coords(const DirVec& v, int d) const;
    DirVec from_coords(const std::vector<Scalar>& x, int d) const;
    DirVec L(int m, const DirVec& v) const;
    // global degree of a homogeneous nonzero vector
    int degree(const DirVec& v) const;

private:
    std::vector<std::shared_ptr<const Verma>> comps_;
    Scalar hmin_;
    std::vector<int> offset_;
};

struct DirGraded {
    int cap = 0;
    std::vector<Subspace> deg;
};
DirGraded dir_submodule_generated(const DirectSum& S, const std::vector<DirVec>& gens, int cap);

struct EchelonGenerators {
    int n = 0;
    std::vector<int> order;                  // components in echelon order
    std::vector<DirVec> generators;          // one per nonzero N_i, echelon order
    std::vector<int> leading;                // leading component of each generator
    std::map<int, int> N_level;              // component -> level of its N_i generator
};
// throws std::runtime_error when the submodule is not exhausted within the cap
EchelonGenerators classify_direct_sum_submodule(const DirectSum& S, const std::vector<DirVec>& gens, int cap);

class PiW {
public:
    PiW(const DirectSum& S, EchelonGenerators e);
    DirVec apply(const DirVec& v) const;
    DirVec rho(const DirVec& v) const;
    DirVec rho_inv(const DirVec& v) const;
    DirVec pi_N(const DirVec& v) const;

private:
    const DirectSum& S_;
    EchelonGenerators e_;
    std::vector<std::unique_ptr<ProjectionSplit>> split_;   // per component, null when N_i = 0
    std::vector<int> gen_of_;                                // component -> generator index or -1
    // the N_i part of component i of v, as a PBW element applied to the generator
    Vector w2_coords(int i, const Vector& x) const;
    DirVec rho0(int g, const Vector& a) const;
};

}  // namespace vir
