#pragma once

#include "virasoro/scalar.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <tuple>
#include <utility>
#include <vector>

namespace vir {

// weakly decreasing positive parts n1 >= n2 >= ... >= ns, i.e. L(-n1)...L(-ns)|h>
using Monomial = std::vector<int>;

int level_of(const Monomial& m);
// number of trailing 1s (the L(-1) power)
int l1_power(const Monomial& m);

// level ascending, then reverse lexicographic: (3) < (2,1) < (1,1,1)
struct MonoLess {
    bool operator()(const Monomial& x, const Monomial& y) const;
};

using Vector = std::map<Monomial, Scalar, MonoLess>;

struct Params {
    Scalar c, h;
    friend bool operator==(const Params& x, const Params& y) { return x.c == y.c && x.h == y.h; }
};

void axpy(Vector& acc, const Scalar& k, const Vector& v);
void add_term(Vector& acc, const Monomial& m, const Scalar& k);
Vector operator+(const Vector& x, const Vector& y);
Vector operator-(const Vector& x, const Vector& y);
Vector operator*(const Scalar& k, const Vector& v);
Vector mono(const Monomial& m, const Scalar& k = 1);
Vector vacuum_vec();
bool is_homogeneous(const Vector& v);
// level of a homogeneous nonzero vector, -1 for zero
int level_of(const Vector& v);

struct Bracket {
    int coeff;        // on L(m+n)
    Scalar central;   // multiple of the identity
};
Bracket bracket(int m, int n, const Scalar& c);

std::vector<Monomial> basis(int level);
std::int64_t partition_count(int n);
// partitions of n into parts >= 2
std::vector<Monomial> prefix_basis(int level);

struct SFEntry {
    Monomial prefix;
    int q;
    Scalar coeff;
    friend bool operator==(const SFEntry& x, const SFEntry& y) {
        return x.prefix == y.prefix && x.q == y.q && x.coeff == y.coeff;
    }
};
std::vector<SFEntry> standard_form(const Vector& v);
Vector from_standard_form(const std::vector<SFEntry>& sf);
Monomial join(const Monomial& prefix, int q);
int index(const Vector& v);

// a Verma module M(c,h) with memoized mode action
class Verma {
public:
    explicit Verma(Params p);

    const Params& params() const { return p_; }
    Vector L(int m, const Vector& v) const;
    const Vector& L_mono(int m, const Monomial& x) const;
    // applies L(m1)...L(ml), rightmost first
    Vector word(const std::vector<int>& w, const Vector& v) const;
    // k-th mode of Y(v, x) = sum v_(k) x^{-k-1}; v lives in the vacuum module
    Vector y_mode(const Vector& vac, int k, const Vector& w) const;
    const Vector& y_mono(const Monomial& vac, int k, const Monomial& w) const;
    // coefficient of |h> in the contravariant pairing <x, y>
    Scalar pair(const Vector& x, const Vector& y) const;
    Scalar pair_mono(const Monomial& x, const Monomial& y) const;

private:
    Vector compute_L(int m, const Monomial& x) const;
    Vector compute_y(const Monomial& vac, int k, const Monomial& w) const;

    Params p_;
    mutable std::shared_mutex mu_;
    mutable std::map<std::pair<int, Monomial>, std::unique_ptr<Vector>> lmemo_;
    mutable std::map<std::tuple<Monomial, int, Monomial>, std::unique_ptr<Vector>> ymemo_;
    mutable std::map<std::pair<Monomial, Monomial>, Scalar> pmemo_;
};

// vacuum-module representative check: no trailing L(-1)
bool is_vacuum_rep(const Vector& v);
// image in V(c,0) = M(c,0)/<L(-1)|0>>: drop monomials with an L(-1) tail
Vector vacuum_reduce(const Vector& v);

}  // namespace vir
