#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iwasawa/growth.hpp"
#include "iwasawa/series.hpp"
#include "iwasawa/weierstrass.hpp"

namespace iwasawa {

/// M = Lambda/(g_1, ..., g_k) with polynomial generators.
struct CyclicModulePresentation {
    std::vector<PowerSeries2> generators;

    void validate() const;
};

/// Sparse matrix over Z/p^m, stored by rows.
class ModMatrix {
public:
    ModMatrix(std::size_t rows, std::size_t cols, long p, long m);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    long prime() const { return p_; }
    long exponent() const { return m_; }
    std::uint64_t modulus() const { return mod_; }

    std::uint64_t get(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, std::uint64_t v);
    void add(std::size_t r, std::size_t c, std::uint64_t v);
    const std::map<std::uint32_t, std::uint64_t>& row(std::size_t r) const { return rows_[r]; }

    /// [this | other], same row count.
    ModMatrix concat(const ModMatrix& other) const;
    ModMatrix operator*(const ModMatrix& other) const;
    static ModMatrix identity(std::size_t n, long p, long m);
    bool is_zero() const;

private:
    std::vector<std::map<std::uint32_t, std::uint64_t>> rows_;
    std::size_t cols_;
    long p_;
    long m_;
    std::uint64_t mod_;
};

/// Z/p^m-module structure of a cokernel: one exponent e in [0, m] per row,
/// the cokernel being the sum of the Z/p^e.
struct CokernelStructure {
    long prime = 0;
    long m = 0;
    std::vector<long> exponents;

    /// log_p of the cokernel size.
    long log_size() const;
    /// Number of summands Z/p^m.
    long full_rank() const;
};

/// Smith normal form by valuation-greedy pivoting.
CokernelStructure smith_cokernel(ModMatrix a);

inline constexpr std::uint64_t kDefaultSizeCap = 4096;

/// (Z/p^m)[X]/(omega_n(X)) or (Z/p^m)[X,Y]/(omega_n(X), omega_n(Y)), realized
/// as the group ring of (Z/p^n)^vars with X = U - 1, Y = V - 1.
class FiniteLevelRing {
public:
    using Element = std::vector<std::uint64_t>;

    FiniteLevelRing(long p, long m, long n, int variables = 2,
                    std::uint64_t size_cap = kDefaultSizeCap);

    long prime() const { return p_; }
    long m() const { return m_; }
    long n() const { return n_; }
    int variables() const { return vars_; }
    std::uint64_t modulus() const { return mod_; }
    /// p^(vars n)
    std::size_t rank() const { return rank_; }

    /// Polynomial in X (and Y); coefficients must be integral to precision m.
    Element reduce(const PowerSeries2& poly) const;
    Element reduce(const PowerSeries1& poly) const;
    Element reduce(const IntPolynomial& poly) const;
    /// U^i V^j, exponents taken mod p^n.
    Element group_element(std::int64_t i, std::int64_t j = 0) const;
    /// (1+X)^a (1+Y)^b - 1 with a, b read mod p^n.
    Element f_ab(const Direction& dir) const;

    Element multiply(const Element& x, const Element& y) const;
    Element add(const Element& x, const Element& y) const;
    Element scalar(std::uint64_t c) const;
    ModMatrix multiplication_matrix(const Element& r) const;

private:
    std::size_t index(std::uint64_t i, std::uint64_t j) const { return i * side_ + j; }
    /// X^k in the group-ring basis of one variable.
    const Element& x_power(long k) const;
    std::uint64_t coefficient_residue(const PadicNumber& c) const;

    long p_, m_, n_;
    int vars_;
    std::uint64_t mod_;
    std::uint64_t side_;
    std::size_t rank_;
    mutable std::vector<Element> x_powers_;
};

FiniteLevelRing make_finite_level(long p, long m, long n);

struct CoinvariantsVerdict {
    TorsionVerdict verdict = TorsionVerdict::NotConcluded;
    std::optional<long> mu;
    std::optional<long> lambda;
};

CoinvariantsVerdict coinvariants_torsion(const CyclicModulePresentation& M, const Direction& dir);

struct LevelKernel {
    long m = 0;
    long n = 0;
    /// log_p |M_{m,n}|
    long module_log_size = 0;
    /// log_p of the kernel of f_ab on M_{m,n}
    long kernel_log_size = 0;
};

/// Kernel of f_ab on M at finite levels. For a finite module the kernel and
/// cokernel of an endomorphism have the same size, so the kernel size is read
/// off the Smith form of [g_1 ... g_k f_ab].
std::vector<LevelKernel> f_torsion_finite_level(const CyclicModulePresentation& M,
                                                const Direction& dir,
                                                const std::vector<std::pair<long, long>>& levels,
                                                std::uint64_t size_cap = kDefaultSizeCap);

/// Number of Z/p^m summands of Lambda/(f, omega_n) at coefficient level m.
long finite_level_rank(const PowerSeries1& f, long m, long n,
                       std::uint64_t size_cap = kDefaultSizeCap);

struct PseudoNullVerdict {
    bool sufficient = false;
    std::string catalog;  // "i", "ii", "iii" when sufficient
};

PseudoNullVerdict pseudo_null_sufficient(const CyclicModulePresentation& M);

}  // namespace iwasawa
