#include "iwasawa/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace iwasawa {

void PrecisionPolicy::validate() const {
    if (coeff_prec < 1) throw DomainError("coeff_prec must be at least 1");
    if (degree_bound < 2) throw DomainError("degree_bound must be at least 2");
}

namespace {

template <std::size_t N>
long total_degree(const std::array<long, N>& e) {
    return std::accumulate(e.begin(), e.end(), 0L);
}

template <std::size_t N>
std::array<long, N> add_exponents(const std::array<long, N>& x, const std::array<long, N>& y) {
    std::array<long, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = x[i] + y[i];
    return r;
}

}  // namespace

template <int Vars>
PowerSeries<Vars>::PowerSeries(long p, PrecisionPolicy policy) : p_(p), policy_(policy) {
    require_odd_prime(p);
    if (policy.coeff_prec < 1 || policy.degree_bound < 1)
        throw DomainError("precision policy must be positive");
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::one(long p, PrecisionPolicy policy) {
    PowerSeries r(p, policy);
    r.set_integral(Exponent{}, PadicNumber::from_integer(p, 1, policy.coeff_prec));
    return r;
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::variable(long p, PrecisionPolicy policy, int var) {
    if (var < 0 || var >= Vars) throw DomainError("variable index out of range");
    PowerSeries r(p, policy);
    Exponent e{};
    e[static_cast<std::size_t>(var)] = 1;
    r.set_integral(e, PadicNumber::from_integer(p, 1, policy.coeff_prec));
    return r;
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::constant(const PadicNumber& c, PrecisionPolicy policy) {
    PowerSeries r(c.prime(), policy);
    r.set(Exponent{}, c);
    return r;
}

template <int Vars>
void PowerSeries<Vars>::set_integral(const Exponent& e, const PadicNumber& c) {
    if (c.prime() != p_) throw DomainError("prime mismatch in series coefficient");
    for (long x : e)
        if (x < 0) throw DomainError("negative exponent");
    if (total_degree(e) >= policy_.degree_bound) return;
    if (c.is_exact_zero()) {
        terms_.erase(e);
        return;
    }
    if (c.valuation_lower_bound() < 0)
        throw DomainError("integral part has negative valuation: " + c.to_string());
    terms_.insert_or_assign(e, c.with_absolute_cap(policy_.coeff_prec));
}

template <int Vars>
void PowerSeries<Vars>::set(const Exponent& e, const PadicNumber& c) {
    if (!c.is_exact_zero() && c.valuation_lower_bound() + scale_ < 0)
        *this = with_scale(-c.valuation_lower_bound());
    set_integral(e, c.shifted(scale_));
}

template <int Vars>
PadicNumber PowerSeries<Vars>::integral_coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? PadicNumber::zero(p_) : it->second;
}

template <int Vars>
PadicNumber PowerSeries<Vars>::coefficient(const Exponent& e) const {
    return integral_coefficient(e).shifted(-scale_);
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::with_scale(long new_scale) const {
    if (new_scale < 0) throw DomainError("scale must be non-negative");
    const long shift = new_scale - scale_;
    PowerSeries r(p_, policy_);
    r.scale_ = new_scale;
    for (const auto& [e, c] : terms_) {
        if (c.valuation_lower_bound() + shift < 0)
            throw DomainError("cannot lower the scale below the coefficient valuations");
        r.set_integral(e, c.shifted(shift));
    }
    return r;
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::with_raw_scale(long s) const {
    if (s < 0) throw DomainError("scale must be non-negative");
    PowerSeries r = *this;
    r.scale_ = s;
    return r;
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::normalized_scale() const {
    if (scale_ == 0) return *this;
    long room = scale_;
    for (const auto& [e, c] : terms_) room = std::min(room, c.valuation_lower_bound());
    return with_scale(scale_ - std::max(0L, room));
}

template <int Vars>
bool PowerSeries<Vars>::is_zero_to_precision() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& kv) { return kv.second.is_zero(); });
}

template <int Vars>
void PowerSeries<Vars>::require_compatible(const PowerSeries& g) const {
    if (g.p_ != p_) throw DomainError("prime mismatch between series");
    if (!(g.policy_ == policy_)) throw DomainError("precision policy mismatch between series");
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::operator-() const {
    PowerSeries r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::operator+(const PowerSeries& g) const {
    require_compatible(g);
    const long s = std::max(scale_, g.scale_);
    PowerSeries a = with_scale(s);
    const PowerSeries b = g.with_scale(s);
    for (const auto& [e, c] : b.terms_) a.set_integral(e, a.integral_coefficient(e) + c);
    return a;
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::operator-(const PowerSeries& g) const {
    return *this + (-g);
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::operator*(const PowerSeries& g) const {
    require_compatible(g);
    std::map<Exponent, PadicNumber> acc;
    for (const auto& [e1, c1] : terms_) {
        const long d1 = total_degree(e1);
        for (const auto& [e2, c2] : g.terms_) {
            if (d1 + total_degree(e2) >= policy_.degree_bound) continue;
            const Exponent e = add_exponents(e1, e2);
            PadicNumber prod = c1 * c2;
            auto it = acc.find(e);
            if (it == acc.end())
                acc.emplace(e, std::move(prod));
            else
                it->second = it->second + prod;
        }
    }
    PowerSeries r(p_, policy_);
    r.scale_ = scale_ + g.scale_;
    for (const auto& [e, c] : acc) r.set_integral(e, c);
    return r;
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::scalar_mul(const PadicNumber& c) const {
    if (c.prime() != p_) throw DomainError("prime mismatch in scalar multiplication");
    PowerSeries r(p_, policy_);
    r.scale_ = scale_;
    if (c.is_exact_zero()) return r;
    const long v = c.valuation_lower_bound();
    PadicNumber factor = c;
    if (v < 0) {
        factor = c.shifted(-v);
        r.scale_ = scale_ - v;
    }
    for (const auto& [e, x] : terms_) r.set_integral(e, x * factor);
    return r;
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::truncated(long n) const {
    if (n > policy_.degree_bound) throw DomainError("cannot truncate above the degree bound");
    PowerSeries r(p_, PrecisionPolicy{policy_.coeff_prec, n});
    r.scale_ = scale_;
    for (const auto& [e, c] : terms_) r.set_integral(e, c);
    return r;
}

template <int Vars>
PowerSeries<Vars> PowerSeries<Vars>::with_coeff_cap(long m) const {
    if (m > policy_.coeff_prec) throw DomainError("cannot raise the coefficient precision");
    PowerSeries r(p_, PrecisionPolicy{m, policy_.degree_bound});
    r.scale_ = scale_;
    for (const auto& [e, c] : terms_) r.set_integral(e, c);
    return r;
}

template <int Vars>
bool PowerSeries<Vars>::equals_to_precision(const PowerSeries& g) const {
    if (g.p_ != p_) return false;
    const long bound = std::min(policy_.degree_bound, g.policy_.degree_bound);
    const long m = std::min(policy_.coeff_prec, g.policy_.coeff_prec);
    auto value = [](const PowerSeries& s, const Exponent& e, long cap) {
        return s.integral_coefficient(e).with_absolute_cap(cap).shifted(-s.scale_);
    };
    auto check = [&](const PowerSeries& a, const PowerSeries& b) {
        for (const auto& [e, c] : a.terms_) {
            if (total_degree(e) >= bound) continue;
            // Compare the values with both integral parts capped at the shared precision.
            if (!value(a, e, m).equals_to_precision(value(b, e, m))) return false;
        }
        return true;
    };
    return check(*this, g) && check(g, *this);
}

template <int Vars>
std::string PowerSeries<Vars>::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.shifted(-scale_).to_string() << ")";
        static constexpr const char* kNames1[] = {"Z"};
        static constexpr const char* kNames2[] = {"X", "Y"};
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            os << "*" << (Vars == 1 ? kNames1[0] : kNames2[i]);
            if (e[i] > 1) os << "^" << e[i];
        }
    }
    return os.str();
}

template class PowerSeries<1>;
template class PowerSeries<2>;

// ---------------------------------------------------------------------------

PowerSeries2 partial_derivative(const PowerSeries2& L, Variable var) {
    const auto& pol = L.policy();
    PowerSeries2 r(L.prime(), PrecisionPolicy{pol.coeff_prec, std::max(1L, pol.degree_bound - 1)});
    r = r.with_raw_scale(L.scale());
    const std::size_t idx = var == Variable::X ? 0 : 1;
    for (const auto& [e, c] : L.terms()) {
        if (e[idx] == 0) continue;
        auto d = e;
        d[idx] -= 1;
        r.set_integral(d, c.mul_rational(e[idx]));
    }
    return r;
}

PowerSeries1 one_plus_power(const PadicNumber& c, PrecisionPolicy policy) {
    if (c.valuation_lower_bound() < 0)
        throw DomainError("one_plus_power: exponent " + c.to_string() + " is not a p-adic integer");
    PowerSeries1 r(c.prime(), policy);
    if (c.is_exact_zero()) return r;
    PadicNumber term = c;
    for (long k = 1; k < policy.degree_bound; ++k) {
        if (k > 1) term = (term * c.add_integer(-(k - 1))).mul_rational(1, k);
        PadicNumber coeff = term;
        if (coeff.is_zero() && coeff.valuation_lower_bound() < 0)
            coeff = PadicNumber::zero_to(c.prime(), 0);
        r.set_integral({k}, coeff);
    }
    return r;
}

PowerSeries2 one_plus_power_product(const PadicNumber& a, const PadicNumber& b,
                                    PrecisionPolicy policy) {
    const PowerSeries1 A = one_plus_power(a, policy);
    const PowerSeries1 B = one_plus_power(b, policy);
    PowerSeries2 f(a.prime(), policy);
    for (const auto& [i, ca] : A.terms()) f.set_integral({i[0], 0}, ca);
    for (const auto& [j, cb] : B.terms()) f.set_integral({0, j[0]}, cb);
    for (const auto& [i, ca] : A.terms())
        for (const auto& [j, cb] : B.terms())
            if (i[0] + j[0] < policy.degree_bound) f.set_integral({i[0], j[0]}, ca * cb);
    return f;
}

PowerSeries2 f_ab(const Direction& dir, PrecisionPolicy policy) {
    return one_plus_power_product(dir.a, dir.b, policy);
}

namespace {

void require_no_constant(const PowerSeries1& s, const char* name) {
    auto it = s.terms().find({0});
    if (it == s.terms().end()) return;
    if (!it->second.is_zero())
        throw DomainError(std::string("substitute: ") + name + " has a nonzero constant term");
    throw IndeterminateError(std::string("substitute: constant term of ") + name +
                             " is not resolved at working precision");
}

PowerSeries1 conform(const PowerSeries1& s, PrecisionPolicy pol) {
    return s.with_coeff_cap(pol.coeff_prec).truncated(pol.degree_bound);
}

PadicNumber accumulate(std::map<long, PadicNumber>& acc, long k, const PadicNumber& x) {
    auto it = acc.find(k);
    if (it == acc.end()) return acc.emplace(k, x).first->second;
    it->second = it->second + x;
    return it->second;
}

}  // namespace

PowerSeries1 substitute(const PowerSeries2& L, const PowerSeries1& sx, const PowerSeries1& sy) {
    if (sx.prime() != L.prime() || sy.prime() != L.prime())
        throw DomainError("substitute: prime mismatch");
    require_no_constant(sx, "X-substituent");
    require_no_constant(sy, "Y-substituent");
    if (sx.scale() != 0 || sy.scale() != 0)
        throw DomainError("substitute: substituents must be integral");
    const PrecisionPolicy pol{
        std::min({L.policy().coeff_prec, sx.policy().coeff_prec, sy.policy().coeff_prec}),
        std::min({L.policy().degree_bound, sx.policy().degree_bound, sy.policy().degree_bound})};
    const long n = pol.degree_bound;
    const PowerSeries1 x = conform(sx, pol);
    const PowerSeries1 y = conform(sy, pol);

    std::vector<PowerSeries1> xpow{PowerSeries1::one(L.prime(), pol)};
    std::vector<PowerSeries1> ypow{PowerSeries1::one(L.prime(), pol)};
    for (long k = 1; k < n; ++k) {
        xpow.push_back(xpow.back() * x);
        ypow.push_back(ypow.back() * y);
    }
    // Group by the Y-exponent: sum_j (sum_i c_ij x^i) y^j.
    std::map<long, PowerSeries1> inner;
    for (const auto& [e, c] : L.terms()) {
        if (e[0] + e[1] >= n) continue;
        PowerSeries1 term = xpow[static_cast<std::size_t>(e[0])].scalar_mul(c);
        auto it = inner.find(e[1]);
        if (it == inner.end())
            inner.emplace(e[1], std::move(term));
        else
            it->second = it->second + term;
    }
    PowerSeries1 result(L.prime(), pol);
    for (const auto& [j, s] : inner) result = result + s * ypow[static_cast<std::size_t>(j)];
    return result.with_raw_scale(L.scale());
}

Projector::Projector(const Direction& dir, PrecisionPolicy policy)
    : dir_(dir), policy_(policy) {
    const PadicNumber exponent = dir.chart == Chart::BUnit ? -(dir.a / dir.b) : -(dir.b / dir.a);
    const PowerSeries1 sub = one_plus_power(exponent, policy);
    powers_.push_back(PowerSeries1::one(dir.prime(), policy));
    for (long k = 1; k < policy.degree_bound; ++k) powers_.push_back(powers_.back() * sub);
}

PowerSeries1 Projector::operator()(const PowerSeries2& L) const {
    if (L.prime() != dir_.prime()) throw DomainError("project: prime mismatch");
    if (!(L.policy() == policy_)) throw DomainError("project: precision policy mismatch");
    const long n = policy_.degree_bound;
    std::map<long, PadicNumber> acc;
    for (const auto& [e, c] : L.terms()) {
        // Z carries one exponent, the substituent the other.
        const long zdeg = dir_.chart == Chart::BUnit ? e[0] : e[1];
        const long sdeg = dir_.chart == Chart::BUnit ? e[1] : e[0];
        if (zdeg + sdeg >= n) continue;
        for (const auto& [k, s] : powers_[static_cast<std::size_t>(sdeg)].terms()) {
            if (zdeg + k[0] >= n) continue;
            accumulate(acc, zdeg + k[0], c * s);
        }
    }
    PowerSeries1 r(L.prime(), policy_);
    for (const auto& [k, c] : acc) r.set_integral({k}, c);
    return r.with_raw_scale(L.scale());
}

PowerSeries1 project(const PowerSeries2& L, const Direction& dir) {
    return Projector(dir, L.policy())(L);
}

AnticyclotomicRestriction restrict_anticyclotomic(const PowerSeries2& L) {
    PowerSeries1 r(L.prime(), L.policy());
    for (const auto& [e, c] : L.terms())
        if (e[1] == 0) r.set_integral({e[0]}, c);
    r = r.with_raw_scale(L.scale());
    const bool vanishes = r.is_zero_to_precision();
    return {std::move(r), vanishes};
}

}  // namespace iwasawa
