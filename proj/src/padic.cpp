#include "iwasawa/padic.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <map>
#include <sstream>
#include <utility>

namespace iwasawa {

namespace {

constexpr long kInfinite = LONG_MAX / 4;

mpz_class mod_nonneg(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

mpz_class inverse_mod(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::logic_error("inverse_mod: not invertible");
    return r;
}

// Splits n = p^e * u with p not dividing u.
std::pair<long, mpz_class> split_power(const mpz_class& n, long p) {
    mpz_class u = n;
    long e = 0;
    while (mpz_divisible_ui_p(u.get_mpz_t(), static_cast<unsigned long>(p)) != 0) {
        u /= p;
        ++e;
    }
    return {e, u};
}

void require_same_prime(const PadicNumber& x, const PadicNumber& y) {
    if (x.prime() != y.prime())
        throw DomainError("prime mismatch: " + std::to_string(x.prime()) + " vs " +
                          std::to_string(y.prime()));
}

}  // namespace

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    mpz_class z(std::to_string(n));
    return mpz_probab_prime_p(z.get_mpz_t(), 40) > 0;
}

void require_odd_prime(long p) {
    if (!is_prime(p)) throw DomainError("p must be prime (got " + std::to_string(p) + ")");
    if (p == 2) throw DomainError("p must be an odd prime");
}

const mpz_class& prime_power(long p, long k) {
    if (k < 0) throw DomainError("prime_power: negative exponent");
    thread_local std::map<std::pair<long, long>, mpz_class> cache;
    auto key = std::make_pair(p, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return cache.emplace(key, std::move(r)).first->second;
}

long integer_valuation(const mpz_class& n, long p) {
    if (n == 0) throw DomainError("valuation of zero integer");
    return split_power(n, p).first;
}

// ---------------------------------------------------------------------------

PadicNumber PadicNumber::zero(long p) { return PadicNumber(p, kInfinite, 0, 0, true); }

PadicNumber PadicNumber::zero_to(long p, long absolute_precision) {
    return PadicNumber(p, absolute_precision, 0, 0, false);
}

PadicNumber PadicNumber::normalized(long p, long val, mpz_class value, long abs_prec) {
    if (abs_prec - val <= 0) return zero_to(p, abs_prec);
    value = mod_nonneg(value, prime_power(p, abs_prec - val));
    if (value == 0) return zero_to(p, abs_prec);
    auto [e, u] = split_power(value, p);
    long v = val + e;
    return PadicNumber(p, v, std::move(u), abs_prec - v, false);
}

PadicNumber PadicNumber::from_integer(long p, const mpz_class& n, long rel_prec) {
    return from_rational(p, n, 1, rel_prec);
}

PadicNumber PadicNumber::from_rational(long p, const mpz_class& num, const mpz_class& den,
                                       long rel_prec) {
    require_odd_prime(p);
    if (den == 0) throw DomainError("denominator is zero");
    if (rel_prec < 1) throw DomainError("precision must be positive");
    if (num == 0) return zero(p);
    auto [en, un] = split_power(num, p);
    auto [ed, ud] = split_power(den, p);
    const mpz_class& mod = prime_power(p, rel_prec);
    mpz_class u = mod_nonneg(un * inverse_mod(mod_nonneg(ud, mod), mod), mod);
    return PadicNumber(p, en - ed, std::move(u), rel_prec, false);
}

PadicNumber PadicNumber::from_digits(long p, long valuation, const std::vector<long>& digits) {
    require_odd_prime(p);
    if (digits.empty()) return zero_to(p, valuation);
    mpz_class value = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (*it < 0 || *it >= p)
            throw DomainError("digit " + std::to_string(*it) + " out of range for p = " +
                              std::to_string(p));
        value = value * p + *it;
    }
    return normalized(p, valuation, value, valuation + static_cast<long>(digits.size()));
}

std::optional<long> PadicNumber::valuation() const {
    if (is_zero()) return std::nullopt;
    return val_;
}

long PadicNumber::valuation_lower_bound() const { return val_; }

std::optional<long> PadicNumber::absolute_precision() const {
    if (exact_) return std::nullopt;
    return val_ + rel_;
}

std::vector<long> PadicNumber::unit_digits() const {
    std::vector<long> out;
    out.reserve(static_cast<std::size_t>(rel_));
    mpz_class u = unit_;
    for (long i = 0; i < rel_; ++i) {
        out.push_back(mpz_class(u % p_).get_si());
        u /= p_;
    }
    return out;
}

mpz_class PadicNumber::residue(long k) const {
    if (k <= 0) return 0;
    if (val_ < 0) throw DomainError("residue of a non-integral p-adic number");
    if (!exact_ && val_ + rel_ < k)
        throw IndeterminateError("residue mod " + std::to_string(p_) + "^" + std::to_string(k) +
                                 " requested from a value known mod p^" +
                                 std::to_string(val_ + rel_));
    if (is_zero() || val_ >= k) return 0;
    return mod_nonneg(unit_ * prime_power(p_, val_), prime_power(p_, k));
}

PadicNumber PadicNumber::operator-() const {
    if (is_zero()) return *this;
    mpz_class u = prime_power(p_, rel_) - unit_;
    return PadicNumber(p_, val_, std::move(u), rel_, false);
}

PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
    require_same_prime(x, y);
    if (x.is_exact_zero()) return y;
    if (y.is_exact_zero()) return x;
    const long p = x.p_;
    const long abs_prec = std::min(*x.absolute_precision(), *y.absolute_precision());
    const long vmin = std::min(x.val_, y.val_);
    if (vmin >= abs_prec) return PadicNumber::zero_to(p, abs_prec);
    mpz_class value = 0;
    if (!x.is_zero()) value += x.unit_ * prime_power(p, x.val_ - vmin);
    if (!y.is_zero()) value += y.unit_ * prime_power(p, y.val_ - vmin);
    return PadicNumber::normalized(p, vmin, std::move(value), abs_prec);
}

PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return x + (-y); }

PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
    require_same_prime(x, y);
    const long p = x.p_;
    if (x.is_exact_zero() || y.is_exact_zero()) return PadicNumber::zero(p);
    if (x.is_zero() || y.is_zero()) return PadicNumber::zero_to(p, x.val_ + y.val_);
    const long rel = std::min(x.rel_, y.rel_);
    mpz_class u = mod_nonneg(x.unit_ * y.unit_, prime_power(p, rel));
    return PadicNumber(p, x.val_ + y.val_, std::move(u), rel, false);
}

PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) {
    require_same_prime(x, y);
    const long p = x.p_;
    if (y.is_zero())
        throw IndeterminateError("indeterminate divisor: " + y.to_string() +
                                 " is indistinguishable from 0");
    if (x.is_exact_zero()) return PadicNumber::zero(p);
    if (x.is_zero()) return PadicNumber::zero_to(p, x.val_ - y.val_);
    const long rel = std::min(x.rel_, y.rel_);
    const mpz_class& mod = prime_power(p, rel);
    mpz_class u = mod_nonneg(x.unit_ * inverse_mod(mod_nonneg(y.unit_, mod), mod), mod);
    return PadicNumber(p, x.val_ - y.val_, std::move(u), rel, false);
}

PadicNumber PadicNumber::mul_rational(const mpz_class& num, const mpz_class& den) const {
    if (den == 0) throw DomainError("denominator is zero");
    if (num == 0 || exact_) return zero(p_);
    auto [en, un] = split_power(num, p_);
    auto [ed, ud] = split_power(den, p_);
    if (is_zero()) return zero_to(p_, val_ + en - ed);
    const mpz_class& mod = prime_power(p_, rel_);
    mpz_class u = mod_nonneg(unit_ * un * inverse_mod(mod_nonneg(ud, mod), mod), mod);
    return PadicNumber(p_, val_ + en - ed, std::move(u), rel_, false);
}

PadicNumber PadicNumber::add_integer(const mpz_class& n) const {
    if (n == 0) return *this;
    if (exact_) return from_integer(p_, n);
    const long abs_prec = val_ + rel_;
    const long vn = integer_valuation(n, p_);
    if (vn >= abs_prec) return *this;
    return *this + from_integer(p_, n, abs_prec - vn);
}

PadicNumber PadicNumber::shifted(long k) const {
    if (exact_) return *this;
    PadicNumber r = *this;
    r.val_ += k;
    return r;
}

PadicNumber PadicNumber::with_absolute_cap(long k) const {
    if (exact_) return *this;
    if (val_ + rel_ <= k) return *this;
    if (val_ >= k) return zero_to(p_, k);
    const long rel = k - val_;
    return PadicNumber(p_, val_, mod_nonneg(unit_, prime_power(p_, rel)), rel, false);
}

bool PadicNumber::equals_to_precision(const PadicNumber& other) const {
    return (*this - other).is_zero();
}

std::string PadicNumber::to_string() const {
    if (exact_) return "0";
    std::ostringstream os;
    if (is_zero()) {
        os << "O(" << p_ << "^" << val_ << ")";
        return os.str();
    }
    os << unit_.get_str();
    if (val_ != 0) os << "*" << p_ << "^" << val_;
    os << " + O(" << p_ << "^" << (val_ + rel_) << ")";
    return os.str();
}

PadicNumber make_padic(long p, const mpz_class& numerator, const mpz_class& denominator,
                       long prec) {
    return PadicNumber::from_rational(p, numerator, denominator, prec);
}

PadicNumber binomial_coefficient(const PadicNumber& c, long k) {
    if (k < 0) throw DomainError("binomial_coefficient: negative k");
    if (c.valuation_lower_bound() < 0)
        throw DomainError("binomial_coefficient: argument is not a p-adic integer");
    const long p = c.prime();
    if (k == 0) {
        auto abs_prec = c.absolute_precision();
        return PadicNumber::from_integer(p, 1, abs_prec ? std::max(1L, *abs_prec) : kDefaultPrecision);
    }
    if (c.is_exact_zero()) return PadicNumber::zero(p);
    PadicNumber term = c;
    for (long i = 1; i < k; ++i) term = (term * c.add_integer(-i)).mul_rational(1, i + 1);
    // C(c, k) lies in Z_p, so anything below p^0 is noise from the division by k!.
    if (term.is_zero() && term.valuation_lower_bound() < 0) return PadicNumber::zero_to(p, 0);
    if (!term.is_zero() && *term.valuation() < 0)
        throw std::logic_error("binomial_coefficient: negative valuation for c in Z_p");
    return term;
}

// ---------------------------------------------------------------------------

const char* to_string(Chart chart) { return chart == Chart::BUnit ? "B_UNIT" : "A_UNIT"; }

bool Direction::is_anticyclotomic() const { return chart == Chart::BUnit && a.is_exact_zero(); }

bool Direction::indistinguishable_from_anticyclotomic() const {
    return chart == Chart::BUnit && a.is_zero();
}

Direction Direction::in_chart(Chart target) const {
    if (target == chart) return *this;
    if (chart == Chart::BUnit) {
        if (a.valuation() != 0L)
            throw DomainError("direction " + to_string() + " has no a-unit chart");
        return Direction{a / a, b / a, Chart::AUnit};
    }
    if (b.valuation() != 0L)
        throw DomainError("direction " + to_string() + " has no b-unit chart");
    return Direction{a / b, b / b, Chart::BUnit};
}

bool Direction::equals_to_precision(const Direction& other) const {
    return chart == other.chart && a.equals_to_precision(other.a) &&
           b.equals_to_precision(other.b);
}

std::string Direction::to_string() const {
    return "(" + a.to_string() + " : " + b.to_string() + ")";
}

Direction canonical_direction(const PadicNumber& a, const PadicNumber& b) {
    require_same_prime(a, b);
    if (a.is_zero() && b.is_zero())
        throw IndeterminateError("indeterminate direction: both coordinates are zero to precision");
    const long la = a.valuation_lower_bound();
    const long lb = b.valuation_lower_bound();
    bool b_chart;
    if (!a.is_zero() && !b.is_zero()) {
        b_chart = lb <= la;
    } else if (a.is_zero()) {
        // a = O(p^la): b is a pivot as long as a cannot undercut it.
        if (la < lb)
            throw IndeterminateError("indeterminate direction: a = " + a.to_string() +
                                     " may have smaller valuation than b");
        b_chart = true;
    } else {
        if (lb <= la)
            throw IndeterminateError("indeterminate direction: b = " + b.to_string() +
                                     " may have valuation equal to or below that of a");
        b_chart = false;
    }
    if (b_chart) return Direction{a / b, b / b, Chart::BUnit};
    return Direction{a / a, b / a, Chart::AUnit};
}

// ---------------------------------------------------------------------------

namespace {

// (a/2) via a mod 8; a odd.
int kronecker_two(std::int64_t a) {
    const std::int64_t r = ((a % 8) + 8) % 8;
    return (r == 1 || r == 7) ? 1 : -1;
}

// Jacobi symbol (a/n), n odd positive.
int jacobi(std::int64_t a, std::int64_t n) {
    a = ((a % n) + n) % n;
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const std::int64_t r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

}  // namespace

int kronecker_symbol(std::int64_t d, std::int64_t q) {
    if (q < 1) throw DomainError("kronecker_symbol: q must be positive");
    int result = 1;
    while (q % 2 == 0) {
        if (d % 2 == 0) return 0;
        result *= kronecker_two(d);
        q /= 2;
    }
    if (q == 1) return result;
    return result * jacobi(d, q);
}

std::uint64_t euler_phi_ppower(long p, long k) {
    if (k < 0) throw DomainError("euler_phi_ppower: negative exponent");
    if (k == 0) return 1;
    mpz_class r = prime_power(p, k - 1) * (p - 1);
    if (!r.fits_ulong_p()) throw DomainError("euler_phi_ppower: overflow");
    return r.get_ui();
}

}  // namespace iwasawa
