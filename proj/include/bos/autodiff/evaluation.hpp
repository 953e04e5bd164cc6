#pragma once

#include <bos/common/error.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace bos {

/// Forward-mode AD number: a value paired with a fixed, compile-time
/// number of partial derivatives. Mimics the built-in floating-point
/// types; mixed arithmetic with plain scalars behaves exactly like
/// arithmetic with constant-lifted scalars.
///
/// abs/min/max are not smooth; at a kink the derivative of the first
/// argument is propagated.
template <class ValueT, int NumDerivs>
class Evaluation {
public:
    static_assert(NumDerivs > 0);
    using Value = ValueT;
    static constexpr int num_derivs = NumDerivs;

    constexpr Evaluation() : value_(0), derivs_{} {}

    static constexpr Evaluation constant(ValueT v)
    {
        Evaluation r;
        r.value_ = v;
        return r;
    }

    static Evaluation variable(ValueT v, int index)
    {
        if (index < 0 || index >= NumDerivs) {
            throw EvaluationError("variable", "derivative index " + std::to_string(index)
                                  + " outside [0," + std::to_string(NumDerivs) + ")");
        }
        Evaluation r;
        r.value_ = v;
        r.derivs_[index] = 1.0;
        return r;
    }

    constexpr ValueT value() const { return value_; }
    constexpr ValueT derivative(int i) const { return derivs_[i]; }
    void set_value(ValueT v) { value_ = v; }
    void set_derivative(int i, ValueT d) { derivs_[i] = d; }

    // -- arithmetic ---------------------------------------------------

    Evaluation operator-() const
    {
        Evaluation r;
        r.value_ = -value_;
        for (int i = 0; i < NumDerivs; ++i) {
            r.derivs_[i] = -derivs_[i];
        }
        return r;
    }

    Evaluation& operator+=(const Evaluation& o)
    {
        value_ += o.value_;
        for (int i = 0; i < NumDerivs; ++i) {
            derivs_[i] += o.derivs_[i];
        }
        return *this;
    }

    Evaluation& operator-=(const Evaluation& o)
    {
        value_ -= o.value_;
        for (int i = 0; i < NumDerivs; ++i) {
            derivs_[i] -= o.derivs_[i];
        }
        return *this;
    }

    Evaluation& operator*=(const Evaluation& o)
    {
        // (u*v)' = v'u + u'v
        const ValueT u = value_;
        const ValueT v = o.value_;
        value_ = u * v;
        for (int i = 0; i < NumDerivs; ++i) {
            derivs_[i] = derivs_[i] * v + o.derivs_[i] * u;
        }
        return *this;
    }

    Evaluation& operator/=(const Evaluation& o)
    {
        const ValueT u = value_;
        const ValueT v = o.value_;
        value_ = u / v;
        for (int i = 0; i < NumDerivs; ++i) {
            derivs_[i] = (derivs_[i] * v - o.derivs_[i] * u) / (v * v);
        }
        return *this;
    }

    Evaluation& operator+=(ValueT s) { value_ += s; return *this; }
    Evaluation& operator-=(ValueT s) { value_ -= s; return *this; }

    Evaluation& operator*=(ValueT s)
    {
        value_ *= s;
        for (int i = 0; i < NumDerivs; ++i) {
            derivs_[i] *= s;
        }
        return *this;
    }

    Evaluation& operator/=(ValueT s)
    {
        value_ /= s;
        for (int i = 0; i < NumDerivs; ++i) {
            derivs_[i] /= s;
        }
        return *this;
    }

    friend Evaluation operator+(Evaluation a, const Evaluation& b) { return a += b; }
    friend Evaluation operator-(Evaluation a, const Evaluation& b) { return a -= b; }
    friend Evaluation operator*(Evaluation a, const Evaluation& b) { return a *= b; }
    friend Evaluation operator/(Evaluation a, const Evaluation& b) { return a /= b; }

    friend Evaluation operator+(Evaluation a, ValueT s) { return a += s; }
    friend Evaluation operator+(ValueT s, Evaluation a) { return a += s; }
    friend Evaluation operator-(Evaluation a, ValueT s) { return a -= s; }
    friend Evaluation operator-(ValueT s, const Evaluation& a) { return -a + s; }
    friend Evaluation operator*(Evaluation a, ValueT s) { return a *= s; }
    friend Evaluation operator*(ValueT s, Evaluation a) { return a *= s; }
    friend Evaluation operator/(Evaluation a, ValueT s) { return a /= s; }

    friend Evaluation operator/(ValueT s, const Evaluation& a)
    {
        Evaluation r;
        const ValueT v = a.value_;
        r.value_ = s / v;
        for (int i = 0; i < NumDerivs; ++i) {
            r.derivs_[i] = -s * a.derivs_[i] / (v * v);
        }
        return r;
    }

    // -- comparisons (on values, like built-in floats) ------------------

    friend bool operator==(const Evaluation& a, const Evaluation& b) { return a.value_ == b.value_; }
    friend bool operator!=(const Evaluation& a, const Evaluation& b) { return a.value_ != b.value_; }
    friend bool operator<(const Evaluation& a, const Evaluation& b) { return a.value_ < b.value_; }
    friend bool operator>(const Evaluation& a, const Evaluation& b) { return a.value_ > b.value_; }
    friend bool operator<=(const Evaluation& a, const Evaluation& b) { return a.value_ <= b.value_; }
    friend bool operator>=(const Evaluation& a, const Evaluation& b) { return a.value_ >= b.value_; }
    friend bool operator<(const Evaluation& a, ValueT s) { return a.value_ < s; }
    friend bool operator>(const Evaluation& a, ValueT s) { return a.value_ > s; }
    friend bool operator<=(const Evaluation& a, ValueT s) { return a.value_ <= s; }
    friend bool operator>=(const Evaluation& a, ValueT s) { return a.value_ >= s; }
    friend bool operator<(ValueT s, const Evaluation& a) { return s < a.value_; }
    friend bool operator>(ValueT s, const Evaluation& a) { return s > a.value_; }

    friend std::ostream& operator<<(std::ostream& os, const Evaluation& a)
    {
        os << a.value_ << " [";
        for (int i = 0; i < NumDerivs; ++i) {
            os << (i ? ", " : "") << a.derivs_[i];
        }
        return os << "]";
    }

private:
    ValueT value_;
    std::array<ValueT, NumDerivs> derivs_;
};

// -- elementary functions (chain rule on the scalar derivative) ---------

template <class V, int N>
Evaluation<V, N> exp(const Evaluation<V, N>& a)
{
    using std::exp;
    const V e = exp(a.value());
    Evaluation<V, N> r = Evaluation<V, N>::constant(e);
    for (int i = 0; i < N; ++i) {
        r.set_derivative(i, e * a.derivative(i));
    }
    return r;
}

template <class V, int N>
Evaluation<V, N> log(const Evaluation<V, N>& a)
{
    using std::log;
    if (!(a.value() > V(0))) {
        throw EvaluationError("log", "argument " + std::to_string(a.value()) + " not positive");
    }
    Evaluation<V, N> r = Evaluation<V, N>::constant(log(a.value()));
    for (int i = 0; i < N; ++i) {
        r.set_derivative(i, a.derivative(i) / a.value());
    }
    return r;
}

template <class V, int N>
Evaluation<V, N> sqrt(const Evaluation<V, N>& a)
{
    using std::sqrt;
    if (a.value() < V(0)) {
        throw EvaluationError("sqrt", "argument " + std::to_string(a.value()) + " negative");
    }
    const V s = sqrt(a.value());
    Evaluation<V, N> r = Evaluation<V, N>::constant(s);
    for (int i = 0; i < N; ++i) {
        r.set_derivative(i, a.derivative(i) / (2 * s));
    }
    return r;
}

template <class V, int N>
Evaluation<V, N> pow(const Evaluation<V, N>& a, V e)
{
    using std::pow;
    if (a.value() < V(0)) {
        throw EvaluationError("pow", "negative base " + std::to_string(a.value()));
    }
    const V p = pow(a.value(), e);
    const V dp = e * pow(a.value(), e - 1);
    Evaluation<V, N> r = Evaluation<V, N>::constant(p);
    for (int i = 0; i < N; ++i) {
        r.set_derivative(i, dp * a.derivative(i));
    }
    return r;
}

template <class V, int N>
Evaluation<V, N> abs(const Evaluation<V, N>& a)
{
    return a.value() < V(0) ? -a : a;
}

// Ties select the first operand.
template <class V, int N>
Evaluation<V, N> min(const Evaluation<V, N>& a, const Evaluation<V, N>& b)
{
    return a.value() <= b.value() ? a : b;
}

template <class V, int N>
Evaluation<V, N> max(const Evaluation<V, N>& a, const Evaluation<V, N>& b)
{
    return a.value() >= b.value() ? a : b;
}

template <class V, int N>
Evaluation<V, N> min(const Evaluation<V, N>& a, V b)
{
    return a.value() <= b ? a : Evaluation<V, N>::constant(b);
}

template <class V, int N>
Evaluation<V, N> max(const Evaluation<V, N>& a, V b)
{
    return a.value() >= b ? a : Evaluation<V, N>::constant(b);
}

/// Helpers that also accept plain scalars, so property code can be
/// written once and instantiated either with AD numbers or doubles.
inline double exp(double x) { return std::exp(x); }
inline double log(double x)
{
    if (!(x > 0)) {
        throw EvaluationError("log", "argument " + std::to_string(x) + " not positive");
    }
    return std::log(x);
}
inline double sqrt(double x)
{
    if (x < 0) {
        throw EvaluationError("sqrt", "argument " + std::to_string(x) + " negative");
    }
    return std::sqrt(x);
}
inline double abs(double x) { return std::abs(x); }
inline double min(double a, double b) { return a <= b ? a : b; }
inline double max(double a, double b) { return a >= b ? a : b; }

inline double value_of(double x) { return x; }

template <class V, int N>
V value_of(const Evaluation<V, N>& x) { return x.value(); }

/// The AD number used for reservoir cells: three primary variables.
using Eval3 = Evaluation<double, 3>;

/// The AD number used in well assembly: four well unknowns followed by
/// the three primary variables of the perforated cell.
using EvalWell = Evaluation<double, 7>;

} // namespace bos
