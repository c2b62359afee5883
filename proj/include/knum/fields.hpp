#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace knum {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_zero(const Rat& x) { return x == 0; }
inline std::string to_string(const Rat& x) { return x.str(); }
inline int characteristic_of(const Rat&) { return 0; }

/// Element of a prime field F_p. The modulus travels with the value; a
/// modulus of 0 marks a "bare" constant (e.g. the literal 1 in generic
/// code) that adopts the modulus of whatever it is combined with.
struct Fp {
    long long v = 0;
    long long p = 0;

    Fp() = default;
    Fp(long long value) : v(value), p(0) {}
    Fp(long long value, long long prime) : v(value), p(prime) { reduce(); }

    void reduce() {
        if (p > 0) {
            v %= p;
            if (v < 0) v += p;
        }
    }

    static long long unify(const Fp& a, const Fp& b) {
        if (a.p && b.p && a.p != b.p)
            throw FieldError("mixed F_p moduli: " + std::to_string(a.p) + " vs " +
                             std::to_string(b.p));
        return a.p ? a.p : b.p;
    }

    friend Fp operator+(const Fp& a, const Fp& b) {
        Fp r(a.v + b.v, unify(a, b));
        return r;
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        Fp r(a.v - b.v, unify(a, b));
        return r;
    }
    friend Fp operator*(const Fp& a, const Fp& b) {
        long long m = unify(a, b);
        if (m == 0) return Fp(a.v * b.v, 0);
        __int128 prod = static_cast<__int128>(a.v) * b.v;
        return Fp(static_cast<long long>(prod % m), m);
    }
    Fp inverse() const {
        if (p == 0) {
            if (v == 1 || v == -1) return *this;
            throw FieldError("cannot invert bare F_p constant without a modulus");
        }
        if (v % p == 0) throw FieldError("division by zero in F_p");
        // extended Euclid
        long long a = v % p, b = p, x0 = 1, x1 = 0;
        if (a < 0) a += p;
        while (b) {
            long long q = a / b;
            long long t = a - q * b; a = b; b = t;
            t = x0 - q * x1; x0 = x1; x1 = t;
        }
        return Fp(x0, p);
    }
    friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }
    Fp operator-() const { return Fp(-v, p); }
    Fp& operator+=(const Fp& o) { *this = *this + o; return *this; }
    Fp& operator-=(const Fp& o) { *this = *this - o; return *this; }
    Fp& operator*=(const Fp& o) { *this = *this * o; return *this; }

    friend bool operator==(const Fp& a, const Fp& b) {
        Fp d = a - b;
        return d.p ? (d.v % d.p == 0) : (d.v == 0);
    }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }
};

inline bool is_zero(const Fp& x) { return x.p ? (x.v % x.p == 0) : (x.v == 0); }
inline std::string to_string(const Fp& x) {
    Fp n = x; n.reduce();
    return std::to_string(n.v);
}
inline int characteristic_of(const Fp& x) { return static_cast<int>(x.p); }

inline Rat field_inverse(const Rat& x) {
    if (x == 0) throw FieldError("division by zero");
    return Rat(1) / x;
}
inline Fp field_inverse(const Fp& x) { return x.inverse(); }

/// Exact parse of "n", "-n" or "a/b" into the coefficient field.
inline Rat scalar_from_string(const std::string& s, const Rat&) { return Rat(s); }
inline Fp scalar_from_string(const std::string& s, const Fp& ctx) {
    auto slash = s.find('/');
    auto parse_ll = [](const std::string& t) {
        size_t pos = 0;
        long long r = std::stoll(t, &pos);
        if (pos != t.size()) throw FieldError("bad scalar literal: " + t);
        return r;
    };
    if (slash == std::string::npos) return Fp(parse_ll(s), ctx.p);
    Fp num(parse_ll(s.substr(0, slash)), ctx.p);
    Fp den(parse_ll(s.substr(slash + 1)), ctx.p);
    return num / den;
}

}  // namespace knum
