#pragma once

#include <random>

#include "iwasawa/growth.hpp"
#include "iwasawa/module_homology.hpp"
#include "iwasawa/padic.hpp"
#include "iwasawa/series.hpp"
#include "iwasawa/weierstrass.hpp"

namespace testing {

using namespace iwasawa;

inline mpz_class random_mpz_below(std::mt19937_64& rng, const mpz_class& bound) {
    // bound fits comfortably in a few limbs here
    mpz_class r = 0;
    for (int i = 0; i < 4; ++i) r = (r << 64) + mpz_class(std::to_string(rng()));
    return r % bound;
}

inline PadicNumber random_integer_padic(std::mt19937_64& rng, long p, long prec) {
    return PadicNumber::from_integer(p, random_mpz_below(rng, prime_power(p, prec)), prec)
        .with_absolute_cap(prec);
}

inline PadicNumber random_unit(std::mt19937_64& rng, long p, long prec) {
    mpz_class u;
    do {
        u = random_mpz_below(rng, prime_power(p, prec));
    } while (u % p == 0);
    return PadicNumber::from_integer(p, u, prec);
}

/// Random integral polynomial-like series of total degree <= deg.
inline PowerSeries2 random_series2(std::mt19937_64& rng, long p, PrecisionPolicy pol, long deg,
                                   bool vanish_on_y0 = false) {
    PowerSeries2 s(p, pol);
    for (long i = 0; i <= deg; ++i)
        for (long j = 0; i + j <= deg; ++j) {
            if (vanish_on_y0 && j == 0) continue;
            s.set_integral({i, j}, random_integer_padic(rng, p, pol.coeff_prec));
        }
    return s;
}

inline PowerSeries1 random_series1(std::mt19937_64& rng, long p, PrecisionPolicy pol, long deg) {
    PowerSeries1 s(p, pol);
    for (long i = 0; i <= deg; ++i) s.set_integral({i}, random_integer_padic(rng, p, pol.coeff_prec));
    return s;
}

/// Random canonical direction; the valuation of the non-unit coordinate is
/// drawn from [0, max_val] with some weight on exact zero.
inline Direction random_direction(std::mt19937_64& rng, long p, long prec, long max_val = 2) {
    const long v = static_cast<long>(rng() % static_cast<unsigned long>(max_val + 2)) - 1;
    PadicNumber other = v < 0 ? PadicNumber::zero(p)
                              : random_unit(rng, p, prec).shifted(v).with_absolute_cap(prec);
    const PadicNumber unit = random_unit(rng, p, prec);
    return rng() % 2 == 0 ? canonical_direction(other, unit) : canonical_direction(unit, other);
}

inline Direction dir_of(long p, long a, long b, long prec = kDefaultPrecision) {
    auto value = [&](long x) {
        return x == 0 ? PadicNumber::zero(p) : PadicNumber::from_integer(p, x, prec);
    };
    return canonical_direction(value(a), value(b));
}

inline PadicNumber num(long p, long x, long prec = kDefaultPrecision) {
    return x == 0 ? PadicNumber::zero(p) : PadicNumber::from_integer(p, x, prec);
}

}  // namespace testing
