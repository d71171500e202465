#ifndef CMVLAB_LAURENT_HPP
#define CMVLAB_LAURENT_HPP

#include <algorithm>
#include <map>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace cmvlab {

// Finitely supported Laurent polynomial sum_k c_k z^k. Exact zero
// coefficients are never stored.
template <class T>
class LaurentPoly {
public:
    LaurentPoly() = default;
    explicit LaurentPoly(const std::map<int, T>& coeffs)
    {
        for (const auto& [k, c] : coeffs)
            set(k, c);
    }

    static LaurentPoly constant(const T& c) { return monomial(0, c); }
    static LaurentPoly monomial(int k, const T& c)
    {
        LaurentPoly p;
        p.set(k, c);
        return p;
    }

    void set(int k, const T& c)
    {
        if (is_zero(c))
            c_.erase(k);
        else
            c_[k] = c;
    }

    T coeff(int k) const
    {
        auto it = c_.find(k);
        return it == c_.end() ? from_int<T>(0) : it->second;
    }

    const std::map<int, T>& coeffs() const { return c_; }
    bool is_zero_poly() const { return c_.empty(); }
    int max_exp() const { return c_.empty() ? 0 : c_.rbegin()->first; }
    int min_exp() const { return c_.empty() ? 0 : c_.begin()->first; }
    // (n, m) with L_n z^n + ... + L_{-m} z^{-m}
    int upper_degree() const { return std::max(0, max_exp()); }
    int lower_degree() const { return std::max(0, -min_exp()); }

    T eval(const T& z) const { return eval_deriv(z, 0); }

    T eval_deriv(const T& z, int order) const
    {
        if (is_zero(z))
            throw ZeroArgument("Laurent polynomial evaluated at z = 0");
        T s = from_int<T>(0);
        for (const auto& [k, c] : c_) {
            long f = falling(k, order);
            if (f == 0)
                continue;
            s += c * from_int<T>(f) * ipow(z, k - order);
        }
        return s;
    }

    LaurentPoly derivative(int order = 1) const
    {
        LaurentPoly d;
        for (const auto& [k, c] : c_) {
            long f = falling(k, order);
            if (f != 0)
                d.set(k - order, c * from_int<T>(f));
        }
        return d;
    }

    // coefficientwise conjugate, the polynomial written as Lbar
    LaurentPoly conj_coeffs() const
    {
        LaurentPoly r;
        for (const auto& [k, c] : c_)
            r.set(k, conj_of(c));
        return r;
    }

    // L_*(z) = Lbar(1/z)
    LaurentPoly reciprocal_star() const
    {
        LaurentPoly r;
        for (const auto& [k, c] : c_)
            r.set(-k, conj_of(c));
        return r;
    }

    LaurentPoly& operator+=(const LaurentPoly& o)
    {
        for (const auto& [k, c] : o.c_)
            set(k, coeff(k) + c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o)
    {
        for (const auto& [k, c] : o.c_)
            set(k, coeff(k) - c);
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
    {
        std::map<int, T> acc;
        for (const auto& [ka, ca] : a.c_)
            for (const auto& [kb, cb] : b.c_) {
                auto it = acc.find(ka + kb);
                if (it == acc.end())
                    acc.emplace(ka + kb, ca * cb);
                else
                    it->second += ca * cb;
            }
        return LaurentPoly(acc);
    }
    friend LaurentPoly operator*(const T& s, const LaurentPoly& a)
    {
        LaurentPoly r;
        for (const auto& [k, c] : a.c_)
            r.set(k, s * c);
        return r;
    }
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ == b.c_; }

    template <class U>
    LaurentPoly<U> convert() const
    {
        LaurentPoly<U> r;
        for (const auto& [k, c] : c_) {
            if constexpr (std::is_same_v<U, T>)
                r.set(k, c);
            else if constexpr (is_exact_v<U>)
                r.set(k, from_cplx<U>(c));
            else
                r.set(k, to_cplx(c));
        }
        return r;
    }

private:
    std::map<int, T> c_;
};

template <class T>
T eval_deriv(const LaurentPoly<T>& p, const T& z, int order)
{
    return p.eval_deriv(z, order);
}

template <class T>
struct SpectralZero {
    T point;
    int multiplicity;
};

template <class T>
struct SpectralData {
    std::vector<SpectralZero<T>> zeros;

    int total_multiplicity() const
    {
        int s = 0;
        for (const auto& z : zeros)
            s += z.multiplicity;
        return s;
    }
    int max_multiplicity() const
    {
        int s = 0;
        for (const auto& z : zeros)
            s = std::max(s, z.multiplicity);
        return s;
    }
};

// L(z) = leading * z^{-n} prod (z - zeta_i)^{m_i}, sum m_i = 2n.
template <class T>
struct PreparedLaurent {
    LaurentPoly<T> poly;
    SpectralData<T> spectral;
    T leading;
    int n = 0;

    // L_{(-1)^l n}
    T corner_coeff(int l) const { return poly.coeff(l % 2 == 0 ? n : -n); }

    // reciprocal polynomial with zeros 1/conj(zeta_i) kept in the same order
    PreparedLaurent reciprocal() const
    {
        PreparedLaurent r;
        r.poly = poly.reciprocal_star();
        r.n = n;
        r.leading = r.poly.coeff(n);
        for (const auto& z : spectral.zeros)
            r.spectral.zeros.push_back({from_int<T>(1) / conj_of(z.point), z.multiplicity});
        return r;
    }

    template <class U>
    PreparedLaurent<U> convert() const
    {
        PreparedLaurent<U> r;
        r.poly = poly.template convert<U>();
        r.n = n;
        if constexpr (std::is_same_v<U, T>)
            r.leading = leading;
        else if constexpr (is_exact_v<U>)
            r.leading = from_cplx<U>(leading);
        else
            r.leading = to_cplx(leading);
        for (const auto& z : spectral.zeros) {
            U p;
            if constexpr (std::is_same_v<U, T>)
                p = z.point;
            else if constexpr (is_exact_v<U>)
                p = from_cplx<U>(z.point);
            else
                p = to_cplx(z.point);
            r.spectral.zeros.push_back({p, z.multiplicity});
        }
        return r;
    }
};

template <class T>
PreparedLaurent<T> prepared_from_zeros(const T& leading, const SpectralData<T>& spectral)
{
    if (is_zero(leading))
        throw ZeroArgument("prepared polynomial needs a nonzero leading coefficient");
    int total = 0;
    for (std::size_t i = 0; i < spectral.zeros.size(); ++i) {
        const auto& z = spectral.zeros[i];
        if (z.multiplicity <= 0)
            throw OddDegree("multiplicities must be positive");
        if (is_zero(z.point))
            throw ZeroRoot("zero at the origin is not allowed");
        for (std::size_t j = 0; j < i; ++j)
            if (spectral.zeros[j].point == z.point)
                throw ZeroRoot("zeros must be pairwise distinct");
        total += z.multiplicity;
    }
    if (total % 2 != 0)
        throw OddDegree("sum of multiplicities is " + std::to_string(total));
    PreparedLaurent<T> out;
    out.n = total / 2;
    out.leading = leading;
    out.spectral = spectral;
    LaurentPoly<T> p = LaurentPoly<T>::monomial(-out.n, leading);
    for (const auto& z : spectral.zeros) {
        LaurentPoly<T> factor = LaurentPoly<T>::monomial(1, from_int<T>(1)) + LaurentPoly<T>::constant(-z.point);
        for (int r = 0; r < z.multiplicity; ++r)
            p = p * factor;
    }
    out.poly = p;
    return out;
}

// delta L(a, w) = (L(a) - L(w)) / (a - w) as a Laurent polynomial in w,
// expanded through complete homogeneous sums so that a = w is regular.
template <class T>
LaurentPoly<T> divided_difference_in_second(const LaurentPoly<T>& p, const T& a)
{
    if (is_zero(a))
        throw ZeroArgument("divided difference at z1 = 0");
    std::map<int, T> acc;
    auto add = [&](int k, const T& v) {
        auto it = acc.find(k);
        if (it == acc.end())
            acc.emplace(k, v);
        else
            it->second += v;
    };
    for (const auto& [j, c] : p.coeffs()) {
        if (j > 0) {
            for (int t = 0; t < j; ++t)
                add(t, c * ipow(a, j - 1 - t));
        } else if (j < 0) {
            const int jj = -j;
            for (int t = 0; t < jj; ++t)
                add(-1 - t, -c * ipow(a, -1 - (jj - 1 - t)));
        }
    }
    return LaurentPoly<T>(acc);
}

template <class T>
class DividedDifference {
public:
    explicit DividedDifference(LaurentPoly<T> p) : p_(std::move(p)) {}

    T operator()(const T& z1, const T& z2) const
    {
        if (is_zero(z2))
            throw ZeroArgument("divided difference at z2 = 0");
        return divided_difference_in_second(p_, z1).eval(z2);
    }

    // derivative of order r in the second argument
    T d2(const T& z1, const T& z2, int r) const { return divided_difference_in_second(p_, z1).eval_deriv(z2, r); }

    LaurentPoly<T> in_second(const T& z1) const { return divided_difference_in_second(p_, z1); }

private:
    LaurentPoly<T> p_;
};

template <class T>
DividedDifference<T> divided_difference(const LaurentPoly<T>& p)
{
    return DividedDifference<T>(p);
}

} // namespace cmvlab

#endif
