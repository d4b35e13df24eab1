#include "iwasawa/weierstrass.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace iwasawa {

namespace {

constexpr long kUnbounded = LONG_MAX / 4;

using Residues = std::vector<mpz_class>;

mpz_class mod_nonneg(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

PadicNumber residue_to_padic(long p, const mpz_class& r, long t) {
    if (t <= 0) return PadicNumber::zero_to(p, 0);
    const mpz_class v = mod_nonneg(r, prime_power(p, t));
    if (v == 0) return PadicNumber::zero_to(p, t);
    return PadicNumber::from_integer(p, v, t - integer_valuation(v, p));
}

// (a * b) mod (mod, T^len)
Residues mul_trunc(const Residues& a, const Residues& b, std::size_t len, const mpz_class& mod) {
    Residues r(len, 0);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) r[i + j] += a[i] * b[j];
    }
    for (auto& x : r) x = mod_nonneg(x, mod);
    return r;
}

Residues inverse_trunc(const Residues& b, std::size_t len, const mpz_class& mod) {
    Residues inv(len, 0);
    mpz_class inv0;
    if (mpz_invert(inv0.get_mpz_t(), b.at(0).get_mpz_t(), mod.get_mpz_t()) == 0)
        throw std::logic_error("inverse_trunc: constant term is not a unit");
    inv[0] = inv0;
    for (std::size_t k = 1; k < len; ++k) {
        mpz_class acc = 0;
        for (std::size_t i = 1; i <= k && i < b.size(); ++i) acc += b[i] * inv[k - i];
        inv[k] = mod_nonneg(-inv0 * acc, mod);
    }
    return inv;
}

struct ResidueDivision {
    Residues quotient;   // length qlen
    Residues remainder;  // length lambda
};

// Division of g by f in (Z/mod)[[T]], f having its first unit coefficient at
// index lambda. Inputs are treated as zero beyond their length, which is
// harmless modulo p^t once t <= floor(N / lambda).
ResidueDivision divide_residues(const Residues& g, const Residues& f, std::size_t lambda, long t,
                                std::size_t qlen, const mpz_class& mod) {
    const std::size_t len0 = qlen + static_cast<std::size_t>(t + 2) * lambda + 1;
    auto padded = [&](const Residues& v) {
        Residues r(len0, 0);
        for (std::size_t i = 0; i < v.size() && i < len0; ++i) r[i] = mod_nonneg(v[i], mod);
        return r;
    };
    Residues h = padded(g);
    const Residues fv = padded(f);
    const Residues low(fv.begin(), fv.begin() + static_cast<long>(lambda));
    const Residues high(fv.begin() + static_cast<long>(lambda), fv.end());
    const Residues high_inv = inverse_trunc(high, len0 - lambda, mod);

    Residues q(len0, 0);
    std::size_t len = len0;
    for (long iter = 0; iter <= t + 1; ++iter) {
        const Residues hi(h.begin() + static_cast<long>(lambda), h.begin() + static_cast<long>(len));
        if (std::all_of(hi.begin(), hi.end(), [](const mpz_class& x) { return x == 0; })) break;
        if (lambda == 0 || iter == t + 1) {
            if (lambda == 0) {
                // f is a unit: a single step is exact.
                q = mul_trunc(hi, high_inv, len, mod);
                std::fill(h.begin(), h.end(), 0);
                break;
            }
            throw std::logic_error("divide_residues: iteration did not converge");
        }
        const std::size_t next = len - lambda;
        const Residues step = mul_trunc(hi, high_inv, next, mod);
        for (std::size_t i = 0; i < next; ++i) q[i] = mod_nonneg(q[i] + step[i], mod);
        const Residues correction = mul_trunc(step, low, next, mod);
        Residues nh(next, 0);
        for (std::size_t i = 0; i < lambda; ++i) nh[i] = h[i];
        for (std::size_t i = 0; i < next; ++i) nh[i] = mod_nonneg(nh[i] - correction[i], mod);
        h = std::move(nh);
        len = next;
    }
    ResidueDivision out;
    out.quotient.assign(q.begin(), q.begin() + static_cast<long>(std::min(qlen, q.size())));
    out.quotient.resize(qlen, 0);
    out.remainder.assign(h.begin(), h.begin() + static_cast<long>(lambda));
    return out;
}

struct SeriesInvariants {
    long mu;
    long lambda;
    long precision;  // absolute precision of f / p^mu
};

SeriesInvariants invariants(const PowerSeries1& f) {
    if (f.scale() != 0)
        throw DomainError("series carries a denominator p^" + std::to_string(f.scale()) +
                          "; clear it before Weierstrass preparation");
    if (f.is_exact_zero()) throw DomainError("Weierstrass preparation of the zero series");
    if (f.is_zero_to_precision())
        throw IndeterminateError("series is zero to working precision");

    long mu = kUnbounded;
    long lambda = -1;
    for (const auto& [e, c] : f.terms()) {
        if (c.is_zero()) continue;
        if (*c.valuation() < mu) {
            mu = *c.valuation();
            lambda = e[0];
        }
    }
    for (const auto& [e, c] : f.terms()) {
        if (!c.is_zero()) continue;
        const long bound = c.valuation_lower_bound();
        if (bound < mu || (bound == mu && e[0] < lambda))
            throw IndeterminateError("mu/lambda not determined: coefficient of T^" +
                                     std::to_string(e[0]) + " is only known to be " +
                                     c.to_string());
    }
    if (lambda >= f.policy().degree_bound) throw DomainError("lambda exceeds truncation");
    long precision = f.policy().coeff_prec - mu;
    for (const auto& [e, c] : f.terms()) precision = std::min(precision, *c.absolute_precision() - mu);
    return {mu, lambda, precision};
}

Residues residues_of(const PowerSeries1& s, long shift, long t) {
    Residues r(static_cast<std::size_t>(s.policy().degree_bound), 0);
    for (const auto& [e, c] : s.terms())
        r[static_cast<std::size_t>(e[0])] = c.shifted(-shift).residue(t);
    return r;
}

long degree_window_precision(long n, long d, long lambda, long t) {
    if (lambda == 0) return t;
    return std::min(t, (n - 1 - d) / lambda);
}

PowerSeries1 residues_to_series(long p, const Residues& v, PrecisionPolicy policy, long lambda,
                                long t) {
    PowerSeries1 s(p, policy);
    const long n = policy.degree_bound;
    for (long d = 0; d < n; ++d) {
        const long prec = degree_window_precision(n, d, lambda, t);
        const mpz_class value = d < static_cast<long>(v.size()) ? v[static_cast<std::size_t>(d)] : 0;
        s.set_integral({d}, residue_to_padic(p, value, prec));
    }
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------

PadicNumber PadicPolynomial::coefficient(long k) const {
    if (k < 0 || k > degree()) return PadicNumber::zero(prime);
    return coeffs[static_cast<std::size_t>(k)];
}

PowerSeries1 PadicPolynomial::to_series(PrecisionPolicy policy) const {
    if (degree() >= policy.degree_bound)
        throw DomainError("polynomial degree exceeds the degree bound");
    PowerSeries1 s(prime, policy);
    for (long k = 0; k <= degree(); ++k) s.set_integral({k}, coeffs[static_cast<std::size_t>(k)]);
    return s;
}

bool PadicPolynomial::equals_to_precision(const PadicPolynomial& other) const {
    const long d = std::max(degree(), other.degree());
    for (long k = 0; k <= d; ++k)
        if (!coefficient(k).equals_to_precision(other.coefficient(k))) return false;
    return true;
}

std::string PadicPolynomial::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (long k = degree(); k >= 0; --k) {
        const PadicNumber& c = coeffs[static_cast<std::size_t>(k)];
        if (c.is_exact_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        if (k > 0) os << "*T";
        if (k > 1) os << "^" << k;
    }
    return first ? "0" : os.str();
}

DivisionResult weierstrass_divide(const PowerSeries1& g, const PowerSeries1& f) {
    if (g.prime() != f.prime()) throw DomainError("weierstrass_divide: prime mismatch");
    if (g.scale() != 0) throw DomainError("weierstrass_divide: dividend carries a denominator");
    const long p = f.prime();
    SeriesInvariants inv;
    try {
        inv = invariants(f);
    } catch (const IndeterminateError&) {
        throw IndeterminateError("not divisible at this precision: no unit coefficient resolved");
    }
    if (inv.mu != 0)
        throw IndeterminateError("not divisible at this precision: divisor is 0 mod p (mu = " +
                                 std::to_string(inv.mu) + ")");
    const long lambda = inv.lambda;
    const long n = std::min(g.policy().degree_bound, f.policy().degree_bound);

    long t = std::min({inv.precision, g.policy().coeff_prec, f.policy().coeff_prec});
    for (const auto& [e, c] : g.terms()) t = std::min(t, *c.absolute_precision());
    if (lambda > 0) t = std::min(t, n / lambda);
    if (t < 1) throw IndeterminateError("weierstrass_divide: no precision left");

    const mpz_class& mod = prime_power(p, t);
    const ResidueDivision div = divide_residues(residues_of(g, 0, t), residues_of(f, 0, t),
                                                static_cast<std::size_t>(lambda), t,
                                                static_cast<std::size_t>(n), mod);
    const PrecisionPolicy policy{std::min(g.policy().coeff_prec, f.policy().coeff_prec), n};
    DivisionResult out{residues_to_series(p, div.quotient, policy, lambda, t),
                       PadicPolynomial{p, {}}, t};
    for (const auto& r : div.remainder) out.remainder.coeffs.push_back(residue_to_padic(p, r, t));
    return out;
}

DistinguishedData weierstrass_prepare(const PowerSeries1& f) {
    const long p = f.prime();
    const SeriesInvariants inv = invariants(f);
    const long n = f.policy().degree_bound;
    long t = inv.precision;
    if (inv.lambda > 0) t = std::min(t, n / inv.lambda);
    if (t < 1) throw IndeterminateError("weierstrass_prepare: no precision left after removing p^mu");

    PadicPolynomial dist{p, {}};
    const mpz_class& mod = prime_power(p, t);
    const Residues fv = residues_of(f, inv.mu, t);
    const auto lambda = static_cast<std::size_t>(inv.lambda);

    if (inv.lambda == 0) {
        dist.coeffs.push_back(PadicNumber::from_integer(p, 1, t));
        return {inv.mu, inv.lambda, dist, residues_to_series(p, fv, f.policy(), 0, t), t};
    }
    // T^lambda = q f' + r, so P = T^lambda - r = q f' and U = q^-1.
    Residues tl(lambda + 1, 0);
    tl[lambda] = 1;
    const ResidueDivision div =
        divide_residues(tl, fv, lambda, t, static_cast<std::size_t>(n), mod);
    for (std::size_t i = 0; i < lambda; ++i)
        dist.coeffs.push_back(residue_to_padic(p, -div.remainder[i], t));
    dist.coeffs.push_back(PadicNumber::from_integer(p, 1, t));
    const Residues unit = inverse_trunc(div.quotient, static_cast<std::size_t>(n), mod);
    return {inv.mu, inv.lambda, dist, residues_to_series(p, unit, f.policy(), inv.lambda, t), t};
}

// ---------------------------------------------------------------------------

IntPolynomial omega_poly(long p, long n) {
    require_odd_prime(p);
    const mpz_class& pn = prime_power(p, n);
    if (pn > 1000000) throw DomainError("omega_poly: p^n too large");
    const unsigned long deg = pn.get_ui();
    IntPolynomial poly(deg + 1, 0);
    for (unsigned long k = 1; k <= deg; ++k) mpz_bin_uiui(poly[k].get_mpz_t(), deg, k);
    return poly;
}

IntPolynomial cyclotomic_factor(long p, long k) {
    require_odd_prime(p);
    if (k < 0) throw DomainError("cyclotomic_factor: negative level");
    if (k == 0) return {0, 1};
    const mpz_class& step = prime_power(p, k - 1);
    if (step * p > 1000000) throw DomainError("cyclotomic_factor: p^k too large");
    const unsigned long s = step.get_ui();
    const unsigned long deg = s * static_cast<unsigned long>(p - 1);
    IntPolynomial poly(deg + 1, 0);
    // sum_{i<p} (1+T)^(i p^(k-1))
    for (unsigned long i = 0; i < static_cast<unsigned long>(p); ++i) {
        mpz_class b;
        for (unsigned long j = 0; j <= i * s; ++j) {
            mpz_bin_uiui(b.get_mpz_t(), i * s, j);
            poly[j] += b;
        }
    }
    return poly;
}

PowerSeries1 int_polynomial_series(long p, const IntPolynomial& poly, PrecisionPolicy policy) {
    PowerSeries1 s(p, policy);
    for (std::size_t k = 0; k < poly.size(); ++k) {
        if (poly[k] == 0) continue;
        if (static_cast<long>(k) >= policy.degree_bound)
            throw DomainError("polynomial degree exceeds the degree bound");
        s.set_integral({static_cast<long>(k)}, PadicNumber::from_integer(p, poly[k], policy.coeff_prec));
    }
    return s;
}

long cyclotomic_multiplicity(const PowerSeries1& f, long k) {
    const long p = f.prime();
    const DistinguishedData data = weierstrass_prepare(f);
    const std::uint64_t phi_deg = euler_phi_ppower(p, k);
    if (phi_deg > static_cast<std::uint64_t>(data.lambda)) return 0;
    // Modulo p every distinguished polynomial is T^lambda, so divisibility
    // mod p alone says nothing.
    if (data.precision <= 1)
        throw IndeterminateError("cyclotomic_multiplicity: distinguished polynomial known only mod p " +
                                 std::string("(precision-starved quotient chain)"));
    const long t = data.precision;
    const mpz_class& mod = prime_power(p, t);
    Residues current;
    for (const auto& c : data.distinguished.coeffs) current.push_back(c.residue(t));
    IntPolynomial phi = cyclotomic_factor(p, k);
    for (auto& c : phi) c = mod_nonneg(c, mod);
    const std::size_t dphi = phi.size() - 1;

    long count = 0;
    while (current.size() - 1 >= dphi) {
        // Monic long division, exact over Z/p^t.
        Residues rem = current;
        Residues quot(current.size() - dphi, 0);
        for (std::size_t i = current.size() - 1; i + 1 > dphi; --i) {
            const mpz_class lead = rem[i];
            quot[i - dphi] = lead;
            if (lead == 0) continue;
            for (std::size_t j = 0; j <= dphi; ++j)
                rem[i - dphi + j] = mod_nonneg(rem[i - dphi + j] - lead * phi[j], mod);
        }
        const bool divisible = std::all_of(rem.begin(), rem.begin() + static_cast<long>(dphi),
                                           [](const mpz_class& x) { return x == 0; });
        if (!divisible) break;
        ++count;
        current = std::move(quot);
        if (current.size() == 1) break;
    }
    return count;
}

std::uint64_t corank_at_level(const GrowthFormulaInput& input, long n, long n_max) {
    if (n < 0) throw DomainError("corank_at_level: negative level");
    if (n > n_max)
        throw DomainError("corank_at_level: level " + std::to_string(n) + " exceeds n_max " +
                          std::to_string(n_max));
    if (input.free_rank < 0) throw DomainError("corank_at_level: negative free rank");
    require_odd_prime(input.prime);
    mpz_class total = prime_power(input.prime, n) * input.free_rank;
    if (input.torsion_char) {
        if (input.torsion_char->prime() != input.prime)
            throw DomainError("corank_at_level: prime mismatch");
        for (long k = 0; k <= n; ++k)
            if (cyclotomic_multiplicity(*input.torsion_char, k) >= 1)
                total += euler_phi_ppower(input.prime, k);
    }
    if (!total.fits_ulong_p()) throw DomainError("corank_at_level: overflow");
    return total.get_ui();
}

long growth_number(const GrowthFormulaInput& input) { return input.free_rank; }

}  // namespace iwasawa
