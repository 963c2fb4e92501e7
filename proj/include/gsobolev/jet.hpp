#pragma once

#include <array>
#include <cmath>

namespace gsobolev {

// Truncated univariate Taylor series c_0 + c_1 h + ... + c_{N-1} h^{N-1}.
template <int N>
struct Jet {
    std::array<double, N> c{};

    static Jet variable(double t)
    {
        Jet j;
        j.c[0] = t;
        if constexpr (N > 1)
            j.c[1] = 1.0;
        return j;
    }
    static Jet constant(double v)
    {
        Jet j;
        j.c[0] = v;
        return j;
    }

    // k-th derivative of the underlying function.
    double derivative(int k) const
    {
        double f = 1.0;
        for (int i = 2; i <= k; ++i)
            f *= i;
        return c[static_cast<std::size_t>(k)] * f;
    }
};

template <int N>
Jet<N> operator+(const Jet<N>& a, const Jet<N>& b)
{
    Jet<N> r;
    for (int k = 0; k < N; ++k)
        r.c[k] = a.c[k] + b.c[k];
    return r;
}

template <int N>
Jet<N> operator-(const Jet<N>& a, const Jet<N>& b)
{
    Jet<N> r;
    for (int k = 0; k < N; ++k)
        r.c[k] = a.c[k] - b.c[k];
    return r;
}

template <int N>
Jet<N> operator-(double s, const Jet<N>& b)
{
    Jet<N> r;
    for (int k = 0; k < N; ++k)
        r.c[k] = -b.c[k];
    r.c[0] += s;
    return r;
}

template <int N>
Jet<N> operator*(double s, const Jet<N>& b)
{
    Jet<N> r;
    for (int k = 0; k < N; ++k)
        r.c[k] = s * b.c[k];
    return r;
}

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b)
{
    Jet<N> r;
    for (int k = 0; k < N; ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j)
            s += a.c[j] * b.c[k - j];
        r.c[k] = s;
    }
    return r;
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b)
{
    Jet<N> q;
    for (int k = 0; k < N; ++k) {
        double s = a.c[k];
        for (int j = 1; j <= k; ++j)
            s -= b.c[j] * q.c[k - j];
        q.c[k] = s / b.c[0];
    }
    return q;
}

template <int N>
Jet<N> exp(const Jet<N>& a)
{
    Jet<N> e;
    e.c[0] = std::exp(a.c[0]);
    for (int k = 1; k < N; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j)
            s += j * a.c[j] * e.c[k - j];
        e.c[k] = s / k;
    }
    return e;
}

} // namespace gsobolev
