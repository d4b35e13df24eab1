#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "iwasawa/padic.hpp"

namespace iwasawa {

/// Coefficients live mod p^coeff_prec; terms of total degree >= degree_bound are unknown.
struct PrecisionPolicy {
    long coeff_prec = kDefaultPrecision;
    long degree_bound = 16;

    void validate() const;
    friend bool operator==(const PrecisionPolicy&, const PrecisionPolicy&) = default;
};

/**
 * Truncated power series over Z_p in one or two variables, optionally
 * multiplied by a single global factor p^(-scale) (elements of Q_p (x) Lambda).
 *
 * Stored coefficients are the integral parts and are capped at absolute
 * precision coeff_prec. An absent key is an exact zero; a stored O(p^k)
 * is a coefficient we failed to resolve, which is a different verdict.
 */
template <int Vars>
class PowerSeries {
public:
    using Exponent = std::array<long, Vars>;

    PowerSeries(long p, PrecisionPolicy policy);

    static PowerSeries one(long p, PrecisionPolicy policy);
    /// The variable with index var (0 = X or Z, 1 = Y).
    static PowerSeries variable(long p, PrecisionPolicy policy, int var = 0);
    static PowerSeries constant(const PadicNumber& c, PrecisionPolicy policy);

    long prime() const { return p_; }
    const PrecisionPolicy& policy() const { return policy_; }
    long scale() const { return scale_; }
    const std::map<Exponent, PadicNumber>& terms() const { return terms_; }

    /// Stores the integral part; caps it at coeff_prec, drops exact zeros and
    /// terms beyond the degree bound.
    void set_integral(const Exponent& e, const PadicNumber& c);
    /// Sets the coefficient of the value p^(-scale) * integral part.
    void set(const Exponent& e, const PadicNumber& c);
    /// Integral part at e (exact zero when absent).
    PadicNumber integral_coefficient(const Exponent& e) const;
    /// Value coefficient p^(-scale) * integral part.
    PadicNumber coefficient(const Exponent& e) const;

    /// Changes the global denominator exponent; rescales stored coefficients.
    PowerSeries with_scale(long new_scale) const;
    /// Same integral coefficients read with denominator exponent s.
    PowerSeries with_raw_scale(long s) const;
    /// Scale reduced as far as every stored coefficient allows.
    PowerSeries normalized_scale() const;

    bool is_exact_zero() const { return terms_.empty(); }
    /// Every stored coefficient vanishes at its precision.
    bool is_zero_to_precision() const;

    PowerSeries operator-() const;
    PowerSeries operator+(const PowerSeries& g) const;
    PowerSeries operator-(const PowerSeries& g) const;
    PowerSeries operator*(const PowerSeries& g) const;
    PowerSeries scalar_mul(const PadicNumber& c) const;

    /// Drop terms of degree >= n (n <= degree_bound).
    PowerSeries truncated(long n) const;
    PowerSeries with_coeff_cap(long m) const;

    bool equals_to_precision(const PowerSeries& g) const;

    std::string to_string() const;

private:
    void require_compatible(const PowerSeries& g) const;

    long p_;
    PrecisionPolicy policy_;
    long scale_ = 0;
    std::map<Exponent, PadicNumber> terms_;
};

using PowerSeries1 = PowerSeries<1>;
using PowerSeries2 = PowerSeries<2>;

extern template class PowerSeries<1>;
extern template class PowerSeries<2>;

enum class Variable { X, Y };

PowerSeries2 partial_derivative(const PowerSeries2& L, Variable var);

/// (1+Z)^c - 1 = sum_{k>=1} C(c,k) Z^k for c in Z_p.
PowerSeries1 one_plus_power(const PadicNumber& c, PrecisionPolicy policy);

/// (1+X)^a (1+Y)^b - 1 for p-adic integers a, b.
PowerSeries2 one_plus_power_product(const PadicNumber& a, const PadicNumber& b,
                                    PrecisionPolicy policy);

PowerSeries2 f_ab(const Direction& dir, PrecisionPolicy policy);

/// L(sx(Z), sy(Z)); both substituents must have zero constant term.
PowerSeries1 substitute(const PowerSeries2& L, const PowerSeries1& sx, const PowerSeries1& sy);

/**
 * The reduction Lambda -> Lambda/(f_ab) = Z_p[[Z]] for one direction.
 *
 * In the b-unit chart X maps to Z and Y to (1+Z)^(-a/b) - 1; in the a-unit
 * chart Y maps to Z and X to (1+Z)^(-b/a) - 1. Powers of the nontrivial
 * substituent are cached so one projector can be applied to many series.
 */
class Projector {
public:
    Projector(const Direction& dir, PrecisionPolicy policy);

    PowerSeries1 operator()(const PowerSeries2& L) const;

    const Direction& direction() const { return dir_; }
    const PowerSeries1& substituent() const { return powers_.at(1); }

private:
    Direction dir_;
    PrecisionPolicy policy_;
    std::vector<PowerSeries1> powers_;  // powers_[j] = substituent^j
};

PowerSeries1 project(const PowerSeries2& L, const Direction& dir);

struct AnticyclotomicRestriction {
    PowerSeries1 series;
    bool vanishes;
};

/// L(X, 0) as a series in X, with the vanishing-to-precision verdict.
AnticyclotomicRestriction restrict_anticyclotomic(const PowerSeries2& L);

}  // namespace iwasawa
