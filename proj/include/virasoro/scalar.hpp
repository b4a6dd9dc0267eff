#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace vir {

using Scalar = mpq_class;
using Integer = mpz_class;

// accepts "p/q", "p", with optional sign; throws std::invalid_argument
Scalar parse_scalar(const std::string& s);
std::string to_str(const Scalar& x);

// generalized binomial coefficient, top may be negative
Integer binom(long top, long k);
// falling factorial top (top-1) ... (top-k+1)
Integer falling(long top, long k);

// exact square root in Q, if any
std::optional<Scalar> rational_sqrt(const Scalar& x);

// a + b*sqrt(d) with d fixed per context
struct QuadScalar {
    Scalar a, b, d;

    QuadScalar() : a(0), b(0), d(0) {}
    QuadScalar(Scalar a_, Scalar b_, Scalar d_);
    explicit QuadScalar(const Scalar& r) : a(r), b(0), d(0) {}

    bool is_rational() const { return b == 0; }
    QuadScalar conj() const;
    Scalar norm() const { return a * a - b * b * d; }

    friend QuadScalar operator+(const QuadScalar& x, const QuadScalar& y);
    friend QuadScalar operator-(const QuadScalar& x, const QuadScalar& y);
    friend QuadScalar operator*(const QuadScalar& x, const QuadScalar& y);
    friend QuadScalar operator/(const QuadScalar& x, const QuadScalar& y);
    friend bool operator==(const QuadScalar& x, const QuadScalar& y);
};

// square root of x inside Q(sqrt d), if it lies there
std::optional<QuadScalar> quad_sqrt(const QuadScalar& x);

}  // namespace vir
