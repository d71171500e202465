#ifndef CMVLAB_SCALAR_HPP
#define CMVLAB_SCALAR_HPP

#include <complex>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <gmpxx.h>

namespace cmvlab {

using cplx = std::complex<double>;

// Complex number with rational real and imaginary parts.
class GaussRational {
public:
    mpq_class re;
    mpq_class im;

    GaussRational() : re(0), im(0) {}
    GaussRational(long v) : re(v), im(0) {}
    GaussRational(int v) : re(v), im(0) {}
    GaussRational(const mpq_class& r, const mpq_class& i = 0) : re(r), im(i) {}

    // exact binary value of a double pair
    static GaussRational from_complex(const cplx& z)
    {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::domain_error("non-finite value cannot be made exact");
        return GaussRational(mpq_class(z.real()), mpq_class(z.imag()));
    }

    cplx to_complex() const { return cplx(re.get_d(), im.get_d()); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

    GaussRational conj() const { return GaussRational(re, -im); }

    GaussRational& operator+=(const GaussRational& o) { re += o.re; im += o.im; return *this; }
    GaussRational& operator-=(const GaussRational& o) { re -= o.re; im -= o.im; return *this; }
    GaussRational& operator*=(const GaussRational& o)
    {
        mpq_class r = re * o.re - im * o.im;
        mpq_class i = re * o.im + im * o.re;
        re = r;
        im = i;
        return *this;
    }
    GaussRational& operator/=(const GaussRational& o)
    {
        if (o.is_zero())
            throw std::domain_error("division by exact zero");
        mpq_class den = o.re * o.re + o.im * o.im;
        mpq_class r = (re * o.re + im * o.im) / den;
        mpq_class i = (im * o.re - re * o.im) / den;
        re = r;
        im = i;
        return *this;
    }

    friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
    friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
    friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
    friend GaussRational operator-(const GaussRational& a) { return GaussRational(-a.re, -a.im); }
    friend bool operator==(const GaussRational& a, const GaussRational& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

    std::string str() const
    {
        if (sgn(im) == 0)
            return re.get_str();
        return "(" + re.get_str() + (sgn(im) < 0 ? "" : "+") + im.get_str() + "i)";
    }
    friend std::ostream& operator<<(std::ostream& os, const GaussRational& g) { return os << g.str(); }
};

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, GaussRational>;

inline cplx conj_of(const cplx& x) { return std::conj(x); }
inline GaussRational conj_of(const GaussRational& x) { return x.conj(); }

inline double magnitude(const cplx& x) { return std::abs(x); }
inline double magnitude(const GaussRational& x) { return std::abs(x.to_complex()); }

inline bool is_zero(const cplx& x) { return x.real() == 0.0 && x.imag() == 0.0; }
inline bool is_zero(const GaussRational& x) { return x.is_zero(); }

inline cplx to_cplx(const cplx& x) { return x; }
inline cplx to_cplx(const GaussRational& x) { return x.to_complex(); }

template <class T>
T from_cplx(const cplx& z)
{
    if constexpr (is_exact_v<T>)
        return GaussRational::from_complex(z);
    else
        return z;
}

template <class T>
T from_int(long v)
{
    if constexpr (is_exact_v<T>)
        return GaussRational(v);
    else
        return cplx(static_cast<double>(v), 0.0);
}

template <class T>
T ipow(const T& z, int k)
{
    if (k < 0) {
        T one = from_int<T>(1);
        return one / ipow(z, -k);
    }
    T result = from_int<T>(1);
    T base = z;
    unsigned e = static_cast<unsigned>(k);
    while (e) {
        if (e & 1u)
            result *= base;
        e >>= 1u;
        if (e)
            base *= base;
    }
    return result;
}

// k (k-1) ... (k-r+1)
inline long falling(long k, int r)
{
    long v = 1;
    for (int i = 0; i < r; ++i)
        v *= (k - i);
    return v;
}

inline double factorial(int r)
{
    double v = 1.0;
    for (int i = 2; i <= r; ++i)
        v *= i;
    return v;
}

template <class T>
T factorial_t(int r)
{
    long v = 1;
    for (int i = 2; i <= r; ++i)
        v *= i;
    return from_int<T>(v);
}

inline long binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    long v = 1;
    for (int i = 1; i <= k; ++i)
        v = v * (n - k + i) / i;
    return v;
}

} // namespace cmvlab

#endif
