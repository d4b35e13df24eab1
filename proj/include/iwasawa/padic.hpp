#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace iwasawa {

/// Invalid input: wrong prime, malformed value, violated precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The answer depends on digits beyond the tracked precision.
class IndeterminateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr long kDefaultPrecision = 20;

bool is_prime(std::int64_t n);

/// Throws DomainError unless p is an odd prime.
void require_odd_prime(long p);

/// p^k, cached per thread.
const mpz_class& prime_power(long p, long k);

/// p-adic valuation of a nonzero integer.
long integer_valuation(const mpz_class& n, long p);

/**
 * An element of Q_p with capped precision.
 *
 * A nonzero value is p^valuation * unit where the unit is known modulo
 * p^relative_precision. Zero comes in two flavours: the exact zero, and
 * O(p^k), a value that vanishes modulo p^k but is otherwise unknown. Only
 * the zero element is ever exact; every nonzero value carries a finite
 * absolute precision valuation + relative_precision.
 */
class PadicNumber {
public:
    static PadicNumber zero(long p);
    static PadicNumber zero_to(long p, long absolute_precision);
    static PadicNumber from_integer(long p, const mpz_class& n, long rel_prec = kDefaultPrecision);
    static PadicNumber from_rational(long p, const mpz_class& num, const mpz_class& den,
                                     long rel_prec = kDefaultPrecision);
    /// Little-endian base-p digits of the unit; an empty list means O(p^valuation).
    static PadicNumber from_digits(long p, long valuation, const std::vector<long>& digits);

    long prime() const { return p_; }

    /// True for the exact zero and for O(p^k).
    bool is_zero() const { return rel_ == 0; }
    bool is_exact_zero() const { return rel_ == 0 && exact_; }

    /// ord_p, or nullopt (+infinity) when the value is zero to its precision.
    std::optional<long> valuation() const;
    /// The valuation for nonzero values; for O(p^k) the bound k.
    long valuation_lower_bound() const;
    /// nullopt for the exact zero.
    std::optional<long> absolute_precision() const;
    long relative_precision() const { return rel_; }

    const mpz_class& unit() const { return unit_; }
    std::vector<long> unit_digits() const;

    /// Representative of a p-adic integer modulo p^k; requires valuation >= 0
    /// and absolute precision >= k.
    mpz_class residue(long k) const;

    PadicNumber operator-() const;
    friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y);
    friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y);
    friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y);
    /// Throws IndeterminateError when y is zero to its precision.
    friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y);

    /// Multiplication by an exact rational num/den (den != 0).
    PadicNumber mul_rational(const mpz_class& num, const mpz_class& den = 1) const;
    /// Addition of an exact integer; precision is unchanged.
    PadicNumber add_integer(const mpz_class& n) const;
    /// Multiplication by p^k.
    PadicNumber shifted(long k) const;
    /// Forget everything beyond absolute precision k.
    PadicNumber with_absolute_cap(long k) const;

    /// Agreement modulo p^(min absolute precision).
    bool equals_to_precision(const PadicNumber& other) const;

    /// Rational reconstruction-free rendering: "0", "O(5^20)", "5^2 * 17 + O(5^22)".
    std::string to_string() const;

private:
    PadicNumber(long p, long val, mpz_class unit, long rel, bool exact)
        : p_(p), val_(val), unit_(std::move(unit)), rel_(rel), exact_(exact) {}

    static PadicNumber normalized(long p, long val, mpz_class value, long abs_prec);

    long p_ = 0;
    long val_ = 0;      // valuation, or absolute precision for O(p^k)
    mpz_class unit_;    // in [1, p^rel_), coprime to p; 0 for zeros
    long rel_ = 0;
    bool exact_ = false;
};

PadicNumber make_padic(long p, const mpz_class& numerator, const mpz_class& denominator,
                       long prec = kDefaultPrecision);

/// C(c, k) for a p-adic integer c.
PadicNumber binomial_coefficient(const PadicNumber& c, long k);

enum class Chart { BUnit, AUnit };

const char* to_string(Chart chart);

/// A point of P^1(Z_p), normalized to (a/b : 1) or (1 : b/a).
struct Direction {
    PadicNumber a;
    PadicNumber b;
    Chart chart;

    long prime() const { return a.prime(); }
    /// The anticyclotomic point (0:1): exact zero in the b-unit chart.
    bool is_anticyclotomic() const;
    /// Cannot be told apart from (0:1) at the tracked precision.
    bool indistinguishable_from_anticyclotomic() const;
    /// The same point written in the other chart; the pivot coordinate must be a unit.
    Direction in_chart(Chart target) const;
    bool equals_to_precision(const Direction& other) const;
    std::string to_string() const;
};

Direction canonical_direction(const PadicNumber& a, const PadicNumber& b);

/// Kronecker symbol (D/q), q >= 1.
int kronecker_symbol(std::int64_t d, std::int64_t q);

/// phi(p^k): 1 for k = 0, else p^(k-1)(p-1).
std::uint64_t euler_phi_ppower(long p, long k);

}  // namespace iwasawa
