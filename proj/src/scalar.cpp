#include "virasoro/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace vir {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
}

// a radicand is fixed per context; a zero radicand on one side means "rational"
Scalar pick_d(const QuadScalar& x, const QuadScalar& y) {
    if (x.b != 0 && y.b != 0 && x.d != y.d)
        throw std::invalid_argument("QuadScalar radicands differ");
    return x.b != 0 ? x.d : y.d;
}

}  // namespace

Scalar parse_scalar(const std::string& raw) {
    std::string s = raw;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
        throw std::invalid_argument("malformed rational: '" + raw + "'");
    Integer n(num), d(den);
    if (d == 0) throw std::invalid_argument("zero denominator: '" + raw + "'");
    Scalar r(n, d);
    r.canonicalize();
    return neg ? Scalar(-r) : r;
}

std::string to_str(const Scalar& x) { return x.get_str(); }

Integer binom(long top, long k) {
    if (k < 0) return 0;
    Integer t(top), r;
    mpz_bin_ui(r.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

Integer falling(long top, long k) {
    Integer r = 1;
    for (long i = 0; i < k; ++i) r *= (top - i);
    return r;
}

std::optional<Scalar> rational_sqrt(const Scalar& x) {
    if (x < 0) return std::nullopt;
    Integer n = x.get_num(), d = x.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
    Integer rn = sqrt(n), rd = sqrt(d);
    Scalar r(rn, rd);
    r.canonicalize();
    return r;
}

QuadScalar::QuadScalar(Scalar a_, Scalar b_, Scalar d_) : a(a_), b(b_), d(d_) {
    if (b == 0) return;
    if (auto r = rational_sqrt(d)) {
        a += b * *r;
        b = 0;
    }
}

QuadScalar QuadScalar::conj() const { return QuadScalar(a, -b, d); }

QuadScalar operator+(const QuadScalar& x, const QuadScalar& y) {
    return QuadScalar(x.a + y.a, x.b + y.b, pick_d(x, y));
}

QuadScalar operator-(const QuadScalar& x, const QuadScalar& y) {
    return QuadScalar(x.a - y.a, x.b - y.b, pick_d(x, y));
}

QuadScalar operator*(const QuadScalar& x, const QuadScalar& y) {
    Scalar d = pick_d(x, y);
    return QuadScalar(x.a * y.a + x.b * y.b * d, x.a * y.b + x.b * y.a, d);
}

QuadScalar operator/(const QuadScalar& x, const QuadScalar& y) {
    Scalar n = y.norm();
    if (n == 0) throw std::domain_error("QuadScalar division by zero");
    QuadScalar t = x * y.conj();
    return QuadScalar(t.a / n, t.b / n, t.d);
}

bool operator==(const QuadScalar& x, const QuadScalar& y) {
    return x.a == y.a && x.b == y.b && (x.b == 0 || x.d == y.d);
}

std::optional<QuadScalar> quad_sqrt(const QuadScalar& x) {
    if (x.is_rational()) {
        if (auto r = rational_sqrt(x.a)) return QuadScalar(*r);
        if (x.d != 0 && x.a != 0) {
            // sqrt(a) = t sqrt(d) when a/d is a rational square
            if (auto t = rational_sqrt(x.a / x.d)) return QuadScalar(0, *t, x.d);
        }
        return std::nullopt;
    }
    // (p + q sqrt d)^2 = x  <=>  p^2 + d q^2 = a, 2pq = b
    const Scalar& a = x.a;
    const Scalar& b = x.b;
    const Scalar& d = x.d;
    auto disc = rational_sqrt(a * a - d * b * b);
    if (!disc) return std::nullopt;
    for (int sgn : {1, -1}) {
        Scalar p2 = (a + sgn * *disc) / 2;
        auto p = rational_sqrt(p2);
        if (!p || *p == 0) continue;
        Scalar q = b / (2 * *p);
        if (*p * *p + d * q * q == a) return QuadScalar(*p, q, d);
    }
    return std::nullopt;
}

}  // namespace vir
