#include "iwasawa/module_homology.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <tuple>

namespace iwasawa {

namespace {

std::uint64_t ipow(std::uint64_t b, long e) {
    std::uint64_t r = 1;
    for (long i = 0; i < e; ++i) r *= b;
    return r;
}

// Inverse of a unit modulo mod by extended Euclid.
std::uint64_t inverse_mod(std::uint64_t u, std::uint64_t mod) {
    std::int64_t r0 = static_cast<std::int64_t>(mod), r1 = static_cast<std::int64_t>(u % mod);
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    }
    if (r0 != 1) throw std::logic_error("inverse_mod: not a unit");
    const std::int64_t m = static_cast<std::int64_t>(mod);
    return static_cast<std::uint64_t>(((s0 % m) + m) % m);
}

void require_small_modulus(long p, long m) {
    if (m < 1) throw DomainError("coefficient exponent m must be >= 1");
    mpz_class mod = prime_power(p, m);
    if (mod >= mpz_class(1UL << 31)) throw DomainError("p^m too large for the finite-level oracle");
}

}  // namespace

void CyclicModulePresentation::validate() const {
    if (generators.empty()) throw DomainError("module presentation needs at least one generator");
    const long p = generators.front().prime();
    for (const auto& g : generators) {
        if (g.prime() != p) throw DomainError("generators over different primes");
        if (g.scale() != 0) throw DomainError("generators must be integral");
        if (g.is_zero_to_precision()) throw DomainError("generator is zero to precision");
    }
}

ModMatrix::ModMatrix(std::size_t rows, std::size_t cols, long p, long m)
    : rows_(rows), cols_(cols), p_(p), m_(m), mod_(0) {
    require_small_modulus(p, m);
    mod_ = ipow(static_cast<std::uint64_t>(p), m);
    if (cols > std::numeric_limits<std::uint32_t>::max()) throw DomainError("matrix too wide");
}

std::uint64_t ModMatrix::get(std::size_t r, std::size_t c) const {
    const auto it = rows_.at(r).find(static_cast<std::uint32_t>(c));
    return it == rows_[r].end() ? 0 : it->second;
}

void ModMatrix::set(std::size_t r, std::size_t c, std::uint64_t v) {
    if (c >= cols_) throw std::out_of_range("ModMatrix column");
    v %= mod_;
    if (v == 0)
        rows_.at(r).erase(static_cast<std::uint32_t>(c));
    else
        rows_.at(r)[static_cast<std::uint32_t>(c)] = v;
}

void ModMatrix::add(std::size_t r, std::size_t c, std::uint64_t v) {
    set(r, c, get(r, c) + v % mod_);
}

ModMatrix ModMatrix::concat(const ModMatrix& other) const {
    if (other.rows() != rows() || other.mod_ != mod_) throw DomainError("concat: shape mismatch");
    ModMatrix out(rows(), cols_ + other.cols_, p_, m_);
    for (std::size_t r = 0; r < rows(); ++r) {
        out.rows_[r] = rows_[r];
        for (const auto& [c, v] : other.rows_[r])
            out.rows_[r][static_cast<std::uint32_t>(c + cols_)] = v;
    }
    return out;
}

ModMatrix ModMatrix::operator*(const ModMatrix& other) const {
    if (cols_ != other.rows() || other.mod_ != mod_) throw DomainError("matrix product: shape mismatch");
    ModMatrix out(rows(), other.cols_, p_, m_);
    for (std::size_t r = 0; r < rows(); ++r)
        for (const auto& [k, x] : rows_[r])
            for (const auto& [c, y] : other.rows_[k]) out.add(r, c, (x * y) % mod_);
    return out;
}

ModMatrix ModMatrix::identity(std::size_t n, long p, long m) {
    ModMatrix out(n, n, p, m);
    for (std::size_t i = 0; i < n; ++i) out.set(i, i, 1);
    return out;
}

bool ModMatrix::is_zero() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const auto& r) { return r.empty(); });
}

long CokernelStructure::log_size() const {
    long s = 0;
    for (long e : exponents) s += e;
    return s;
}

long CokernelStructure::full_rank() const {
    return static_cast<long>(std::count(exponents.begin(), exponents.end(), m));
}

CokernelStructure smith_cokernel(ModMatrix a) {
    const long p = a.prime();
    const long m = a.exponent();
    const std::uint64_t mod = a.modulus();
    const std::size_t nrows = a.rows();

    std::vector<std::map<std::uint32_t, std::uint64_t>> rows(nrows);
    std::vector<std::set<std::uint32_t>> col_rows(a.cols());
    for (std::size_t r = 0; r < nrows; ++r) {
        rows[r] = a.row(r);
        for (const auto& [c, v] : rows[r]) col_rows[c].insert(static_cast<std::uint32_t>(r));
    }
    auto valuation = [p](std::uint64_t x) {
        long v = 0;
        while (x % static_cast<std::uint64_t>(p) == 0) {
            x /= static_cast<std::uint64_t>(p);
            ++v;
        }
        return v;
    };

    CokernelStructure out{p, m, {}};
    std::vector<bool> active(nrows, true);
    while (true) {
        // Minimal valuation first, then the smallest Markowitz count.
        long best_v = m;
        std::size_t best_cost = std::numeric_limits<std::size_t>::max();
        std::size_t pr = 0;
        std::uint32_t pc = 0;
        for (std::size_t r = 0; r < nrows && !(best_v == 0 && best_cost == 0); ++r) {
            if (!active[r] || rows[r].empty()) continue;
            const std::size_t rlen = rows[r].size() - 1;
            for (const auto& [c, x] : rows[r]) {
                const long v = valuation(x);
                if (v > best_v) continue;
                const std::size_t cost = rlen * (col_rows[c].size() - 1);
                if (v < best_v || cost < best_cost) {
                    best_v = v;
                    best_cost = cost;
                    pr = r;
                    pc = c;
                }
            }
        }
        if (best_v == m) break;

        const std::uint64_t pv = ipow(static_cast<std::uint64_t>(p), best_v);
        const std::uint64_t uinv = inverse_mod(rows[pr].at(pc) / pv, mod);
        const auto pivot_row = rows[pr];
        const std::vector<std::uint32_t> targets(col_rows[pc].begin(), col_rows[pc].end());
        for (std::uint32_t r : targets) {
            if (r == pr) continue;
            const std::uint64_t factor = (rows[r].at(pc) / pv) % mod * uinv % mod;
            for (const auto& [c, y] : pivot_row) {
                const std::uint64_t sub = factor * y % mod;
                auto it = rows[r].find(c);
                const std::uint64_t cur = it == rows[r].end() ? 0 : it->second;
                const std::uint64_t nv = (cur + mod - sub) % mod;
                if (nv == 0) {
                    if (it != rows[r].end()) {
                        rows[r].erase(it);
                        col_rows[c].erase(r);
                    }
                } else if (it == rows[r].end()) {
                    rows[r].emplace(c, nv);
                    col_rows[c].insert(r);
                } else {
                    it->second = nv;
                }
            }
        }
        // Column operations clear the rest of the pivot row without touching other rows.
        for (const auto& [c, y] : pivot_row) col_rows[c].erase(static_cast<std::uint32_t>(pr));
        rows[pr].clear();
        active[pr] = false;
        out.exponents.push_back(best_v);
    }
    for (std::size_t r = 0; r < nrows; ++r)
        if (active[r]) out.exponents.push_back(m);
    std::sort(out.exponents.begin(), out.exponents.end());
    return out;
}

FiniteLevelRing::FiniteLevelRing(long p, long m, long n, int variables, std::uint64_t size_cap)
    : p_(p), m_(m), n_(n), vars_(variables) {
    require_odd_prime(p);
    require_small_modulus(p, m);
    if (n < 0) throw DomainError("level n must be nonnegative");
    if (variables != 1 && variables != 2) throw DomainError("finite-level ring has 1 or 2 variables");
    mpz_class total = prime_power(p, n * variables);
    if (total > mpz_class(static_cast<unsigned long>(size_cap)))
        throw DomainError("finite-level ring of rank " + total.get_str() + " exceeds the size cap " +
                          std::to_string(size_cap));
    mod_ = ipow(static_cast<std::uint64_t>(p), m);
    side_ = ipow(static_cast<std::uint64_t>(p), n);
    rank_ = static_cast<std::size_t>(total.get_ui());
}

const FiniteLevelRing::Element& FiniteLevelRing::x_power(long k) const {
    if (x_powers_.empty()) {
        Element one(side_, 0);
        one[0] = 1 % mod_;
        x_powers_.push_back(one);
    }
    while (static_cast<long>(x_powers_.size()) <= k) {
        const Element& prev = x_powers_.back();
        Element next(side_, 0);
        // (U - 1) * prev in Z/p^m[U]/(U^side - 1)
        for (std::uint64_t i = 0; i < side_; ++i) {
            const std::uint64_t shifted = prev[(i + side_ - 1) % side_];
            next[i] = (shifted + mod_ - prev[i]) % mod_;
        }
        x_powers_.push_back(std::move(next));
    }
    return x_powers_[static_cast<std::size_t>(k)];
}

std::uint64_t FiniteLevelRing::coefficient_residue(const PadicNumber& c) const {
    return mpz_class(c.residue(m_) % mpz_class(static_cast<unsigned long>(mod_))).get_ui();
}

FiniteLevelRing::Element FiniteLevelRing::reduce(const PowerSeries2& poly) const {
    if (poly.scale() != 0) throw DomainError("finite-level reduction needs an integral series");
    if (poly.prime() != p_) throw DomainError("finite-level reduction: prime mismatch");
    Element out(rank_, 0);
    for (const auto& [e, c] : poly.terms()) {
        if (vars_ == 1 && e[1] != 0) throw DomainError("univariate ring: term in Y");
        const std::uint64_t cr = coefficient_residue(c);
        if (cr == 0) continue;
        const Element xi = x_power(e[0]);  // copy: the next call may grow the cache
        if (vars_ == 1) {
            for (std::uint64_t a = 0; a < side_; ++a) out[a] = (out[a] + cr * xi[a]) % mod_;
            continue;
        }
        const Element& yj = x_power(e[1]);
        for (std::uint64_t a = 0; a < side_; ++a) {
            if (xi[a] == 0) continue;
            const std::uint64_t ca = cr * xi[a] % mod_;
            for (std::uint64_t b = 0; b < side_; ++b)
                if (yj[b] != 0) out[index(a, b)] = (out[index(a, b)] + ca * yj[b]) % mod_;
        }
    }
    return out;
}

FiniteLevelRing::Element FiniteLevelRing::reduce(const PowerSeries1& poly) const {
    PowerSeries2 lifted(poly.prime(), poly.policy());
    for (const auto& [e, c] : poly.terms()) lifted.set_integral({e[0], 0}, c);
    return reduce(lifted.with_raw_scale(poly.scale()));
}

FiniteLevelRing::Element FiniteLevelRing::reduce(const IntPolynomial& poly) const {
    Element out(rank_, 0);
    const mpz_class mod(static_cast<unsigned long>(mod_));
    for (std::size_t k = 0; k < poly.size(); ++k) {
        mpz_class c = poly[k] % mod;
        if (c < 0) c += mod;
        const std::uint64_t cr = c.get_ui();
        if (cr == 0) continue;
        const Element& xk = x_power(static_cast<long>(k));
        for (std::uint64_t a = 0; a < side_; ++a) {
            const std::size_t idx = vars_ == 1 ? a : index(a, 0);
            out[idx] = (out[idx] + cr * xk[a]) % mod_;
        }
    }
    return out;
}

FiniteLevelRing::Element FiniteLevelRing::group_element(std::int64_t i, std::int64_t j) const {
    if (vars_ == 1 && j != 0) throw DomainError("univariate ring: exponent in V");
    const auto s = static_cast<std::int64_t>(side_);
    const auto a = static_cast<std::uint64_t>(((i % s) + s) % s);
    const auto b = static_cast<std::uint64_t>(((j % s) + s) % s);
    Element out(rank_, 0);
    out[vars_ == 1 ? a : index(a, b)] = 1 % mod_;
    return out;
}

FiniteLevelRing::Element FiniteLevelRing::f_ab(const Direction& dir) const {
    if (vars_ != 2) throw DomainError("f_ab needs the two-variable ring");
    const mpz_class a = dir.a.is_exact_zero() ? mpz_class(0) : dir.a.residue(n_);
    const mpz_class b = dir.b.is_exact_zero() ? mpz_class(0) : dir.b.residue(n_);
    Element out = group_element(static_cast<std::int64_t>(a.get_si()),
                                static_cast<std::int64_t>(b.get_si()));
    out[0] = (out[0] + mod_ - 1) % mod_;
    return out;
}

FiniteLevelRing::Element FiniteLevelRing::multiply(const Element& x, const Element& y) const {
    Element out(rank_, 0);
    const std::uint64_t ysides = vars_ == 1 ? 1 : side_;
    for (std::size_t i = 0; i < rank_; ++i) {
        if (x[i] == 0) continue;
        const std::uint64_t xa = vars_ == 1 ? i : i / side_, xb = vars_ == 1 ? 0 : i % side_;
        for (std::size_t k = 0; k < rank_; ++k) {
            if (y[k] == 0) continue;
            const std::uint64_t ya = vars_ == 1 ? k : k / side_, yb = vars_ == 1 ? 0 : k % side_;
            const std::size_t idx = vars_ == 1 ? (xa + ya) % side_
                                               : index((xa + ya) % side_, (xb + yb) % ysides);
            out[idx] = (out[idx] + x[i] * y[k]) % mod_;
        }
    }
    return out;
}

FiniteLevelRing::Element FiniteLevelRing::add(const Element& x, const Element& y) const {
    Element out(rank_, 0);
    for (std::size_t i = 0; i < rank_; ++i) out[i] = (x[i] + y[i]) % mod_;
    return out;
}

FiniteLevelRing::Element FiniteLevelRing::scalar(std::uint64_t c) const {
    Element out(rank_, 0);
    out[0] = c % mod_;
    return out;
}

ModMatrix FiniteLevelRing::multiplication_matrix(const Element& r) const {
    ModMatrix out(rank_, rank_, p_, m_);
    for (std::size_t k = 0; k < rank_; ++k) {
        if (r[k] == 0) continue;
        const std::uint64_t ra = vars_ == 1 ? k : k / side_, rb = vars_ == 1 ? 0 : k % side_;
        for (std::size_t col = 0; col < rank_; ++col) {
            const std::uint64_t ca = vars_ == 1 ? col : col / side_;
            const std::uint64_t cb = vars_ == 1 ? 0 : col % side_;
            const std::size_t row = vars_ == 1 ? (ra + ca) % side_
                                               : index((ra + ca) % side_, (rb + cb) % side_);
            out.set(row, col, r[k]);
        }
    }
    return out;
}

FiniteLevelRing make_finite_level(long p, long m, long n) { return FiniteLevelRing(p, m, n, 2); }

CoinvariantsVerdict coinvariants_torsion(const CyclicModulePresentation& M, const Direction& dir) {
    M.validate();
    CoinvariantsVerdict out;
    for (const auto& g : M.generators) {
        const PowerSeries1 pi = project(g, dir);
        if (certify_nonzero(pi).kind != NonvanishingKind::Certified) continue;
        out.verdict = TorsionVerdict::Torsion;
        try {
            const DistinguishedData d = weierstrass_prepare(pi.with_raw_scale(0));
            if (!out.mu || std::make_pair(d.mu, d.lambda) < std::make_pair(*out.mu, *out.lambda)) {
                out.mu = d.mu;
                out.lambda = d.lambda;
            }
        } catch (const IndeterminateError&) {
            // Certified nonzero but lambda beyond the degree bound.
        } catch (const DomainError&) {
        }
    }
    return out;
}

std::vector<LevelKernel> f_torsion_finite_level(const CyclicModulePresentation& M,
                                                const Direction& dir,
                                                const std::vector<std::pair<long, long>>& levels,
                                                std::uint64_t size_cap) {
    M.validate();
    std::vector<LevelKernel> out;
    for (const auto& [m, n] : levels) {
        const FiniteLevelRing ring(M.generators.front().prime(), m, n, 2, size_cap);
        std::optional<ModMatrix> rel;
        for (const auto& g : M.generators) {
            ModMatrix block = ring.multiplication_matrix(ring.reduce(g));
            rel = rel ? rel->concat(block) : std::move(block);
        }
        LevelKernel k;
        k.m = m;
        k.n = n;
        k.module_log_size = smith_cokernel(*rel).log_size();
        k.kernel_log_size =
            smith_cokernel(rel->concat(ring.multiplication_matrix(ring.f_ab(dir)))).log_size();
        out.push_back(k);
    }
    return out;
}

long finite_level_rank(const PowerSeries1& f, long m, long n, std::uint64_t size_cap) {
    const FiniteLevelRing ring(f.prime(), m, n, 1, size_cap);
    return smith_cokernel(ring.multiplication_matrix(ring.reduce(f))).full_rank();
}

namespace {

bool nonconstant(const PowerSeries2& g) {
    return std::any_of(g.terms().begin(), g.terms().end(), [](const auto& t) {
        return (t.first[0] != 0 || t.first[1] != 0) && !t.second.is_zero();
    });
}

bool pure_in(const PowerSeries2& g, int var) {
    const int other = 1 - var;
    return std::all_of(g.terms().begin(), g.terms().end(),
                       [other](const auto& t) { return t.first[other] == 0; });
}

bool has_unit_coefficient(const PowerSeries2& g) {
    return std::any_of(g.terms().begin(), g.terms().end(), [](const auto& t) {
        const auto v = t.second.valuation();
        return v && *v == 0;
    });
}

bool certified_constant(const PowerSeries2& g) {
    if (g.terms().size() != 1) return false;
    const auto& [e, c] = *g.terms().begin();
    return e[0] == 0 && e[1] == 0 && !c.is_zero();
}

// Direction of g when g is f_ab to precision.
std::optional<Direction> as_f_ab(const PowerSeries2& g) {
    const PadicNumber a = g.integral_coefficient({1, 0});
    const PadicNumber b = g.integral_coefficient({0, 1});
    const bool a_unit = a.valuation() && *a.valuation() == 0;
    const bool b_unit = b.valuation() && *b.valuation() == 0;
    if (!a_unit && !b_unit) return std::nullopt;
    try {
        const Direction d = canonical_direction(a, b);
        if (!g.equals_to_precision(one_plus_power_product(a, b, g.policy()))) return std::nullopt;
        return d;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace

PseudoNullVerdict pseudo_null_sufficient(const CyclicModulePresentation& M) {
    M.validate();
    const auto& gens = M.generators;

    std::vector<Direction> dirs;
    for (const auto& g : gens)
        if (auto d = as_f_ab(g)) dirs.push_back(*d);
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j)
            if (!dirs[i].equals_to_precision(dirs[j])) return {true, "iii"};

    const bool has_constant = std::any_of(gens.begin(), gens.end(), certified_constant);
    for (const auto& g : gens) {
        if (!nonconstant(g) || !has_unit_coefficient(g)) continue;
        if (has_constant && (pure_in(g, 0) || pure_in(g, 1))) return {true, "i"};
    }

    for (const auto& gx : gens) {
        if (!nonconstant(gx) || !pure_in(gx, 0)) continue;
        for (const auto& gy : gens) {
            if (!nonconstant(gy) || !pure_in(gy, 1)) continue;
            if (has_unit_coefficient(gx) || has_unit_coefficient(gy)) return {true, "ii"};
        }
    }
    return {};
}

}  // namespace iwasawa
