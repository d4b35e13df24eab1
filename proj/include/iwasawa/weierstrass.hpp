#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iwasawa/padic.hpp"
#include "iwasawa/series.hpp"

namespace iwasawa {

/// Polynomial over Z_p, index = degree. Unlike a series it has no unknown tail.
struct PadicPolynomial {
    long prime = 0;
    std::vector<PadicNumber> coeffs;

    long degree() const { return static_cast<long>(coeffs.size()) - 1; }
    PadicNumber coefficient(long k) const;
    PowerSeries1 to_series(PrecisionPolicy policy) const;
    bool equals_to_precision(const PadicPolynomial& other) const;
    std::string to_string() const;
};

/// Exact integer polynomial, index = degree.
using IntPolynomial = std::vector<mpz_class>;

struct DivisionResult {
    PowerSeries1 quotient;
    PadicPolynomial remainder;
    /// r is determined modulo p^precision.
    long precision;
};

/// g = q f + r with deg r < lambda(f). Requires mu(f) = 0.
///
/// Terms of degree >= N are unknown, and T^N lies in (f, p^floor(N/lambda)),
/// so r is only determined modulo p^min(coefficient precision, floor(N/lambda)).
/// Quotient coefficients of degree d carry precision floor((N-1-d)/lambda).
DivisionResult weierstrass_divide(const PowerSeries1& g, const PowerSeries1& f);

struct DistinguishedData {
    long mu = 0;
    long lambda = 0;
    PadicPolynomial distinguished;
    PowerSeries1 unit;
    /// The distinguished polynomial is determined modulo p^precision.
    long precision = 0;
};

/// f = p^mu * P * U with P distinguished of degree lambda and U a unit.
DistinguishedData weierstrass_prepare(const PowerSeries1& f);

/// (1+T)^(p^n) - 1
IntPolynomial omega_poly(long p, long n);
/// omega_k / omega_(k-1) for k >= 1, T for k = 0.
IntPolynomial cyclotomic_factor(long p, long k);
PowerSeries1 int_polynomial_series(long p, const IntPolynomial& poly, PrecisionPolicy policy);

/// Largest e with cyclotomic_factor(p, k)^e dividing f.
long cyclotomic_multiplicity(const PowerSeries1& f, long k);

struct GrowthFormulaInput {
    long prime = 0;
    long free_rank = 0;
    /// Characteristic series of the torsion part; absent means trivial torsion.
    std::optional<PowerSeries1> torsion_char;
};

inline constexpr long kDefaultMaxLevel = 6;

/// r p^n + sum_{k<=n, Phi_k | f} phi(p^k).
std::uint64_t corank_at_level(const GrowthFormulaInput& input, long n,
                              long n_max = kDefaultMaxLevel);
long growth_number(const GrowthFormulaInput& input);

}  // namespace iwasawa
