#include "iwasawa/growth.hpp"

#include <algorithm>

namespace iwasawa {

namespace {

bool squarefree(std::int64_t n) {
    if (n < 0) n = -n;
    for (std::int64_t q = 2; q * q <= n; ++q) {
        if (n % q != 0) continue;
        n /= q;
        if (n % q == 0) return false;
    }
    return true;
}

std::vector<PrimePower> factor(std::int64_t n) {
    std::vector<PrimePower> out;
    for (std::int64_t q = 2; q * q <= n; ++q) {
        if (n % q != 0) continue;
        int e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        out.push_back({q, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

std::int64_t expand(const std::vector<PrimePower>& fs) {
    std::int64_t n = 1;
    for (const auto& f : fs)
        for (int i = 0; i < f.exponent; ++i) n *= f.prime;
    return n;
}

std::string list_primes(const std::vector<PrimePower>& fs) {
    std::string s;
    for (const auto& f : fs) {
        if (!s.empty()) s += "*";
        s += std::to_string(f.prime);
        if (f.exponent > 1) s += "^" + std::to_string(f.exponent);
    }
    return s.empty() ? "1" : s;
}

}  // namespace

const char* to_string(NonvanishingKind kind) {
    switch (kind) {
        case NonvanishingKind::Certified: return "CERTIFIED";
        case NonvanishingKind::ZeroToPrecision: return "ZERO_TO_PRECISION";
        case NonvanishingKind::Indeterminate: return "INDETERMINATE";
    }
    return "?";
}

const char* to_string(TorsionVerdict verdict) {
    switch (verdict) {
        case TorsionVerdict::Torsion: return "TORSION";
        case TorsionVerdict::NotConcluded: return "NOT_CONCLUDED";
        case TorsionVerdict::Indeterminate: return "INDETERMINATE";
    }
    return "?";
}

const char* to_string(CmClass cm) { return cm == CmClass::Generic ? "GENERIC" : "EXCEPTIONAL"; }

bool GrowthReport::inconclusive() const {
    if (!torsion.has_value() || !predicted_c.has_value()) return true;
    if (anticyclotomic) return false;
    return nonvanishing.kind != NonvanishingKind::Certified && !*torsion;
}

NonvanishingVerdict certify_nonzero(const PowerSeries1& s) {
    if (s.is_exact_zero()) return {NonvanishingKind::ZeroToPrecision, -1, 0};
    for (const auto& [e, c] : s.terms()) {
        if (c.is_zero()) continue;
        return {NonvanishingKind::Certified, e[0], *c.valuation() - s.scale()};
    }
    return {NonvanishingKind::Indeterminate, -1, 0};
}

void require_anticyclotomic_vanishing(const TwoVarLFunction& L) {
    if (!restrict_anticyclotomic(L.series).vanishes)
        throw DomainError("L(X, 0) does not vanish to precision; the derivative criterion needs it");
}

PadicNumber derivative_at_origin(const TwoVarLFunction& L, const Direction& dir) {
    require_anticyclotomic_vanishing(L);
    return project(L.series, dir).coefficient({1});
}

PadicNumber closed_form_derivative(const TwoVarLFunction& L, const Direction& dir) {
    require_anticyclotomic_vanishing(L);
    if (dir.is_anticyclotomic())
        throw DomainError("closed form excludes the direction (0:1): it needs a != 0");
    if (dir.indistinguishable_from_anticyclotomic())
        throw IndeterminateError("closed form: direction " + dir.to_string() +
                                 " cannot be separated from (0:1)");
    const PadicNumber c01 = L.series.coefficient({0, 1});
    if (dir.chart == Chart::AUnit) return c01;
    return -(dir.a / dir.b) * c01;
}

NonvanishingVerdict nonvanishing_certificate(const TwoVarLFunction& L, const Direction& dir) {
    return certify_nonzero(project(L.series, dir));
}

TorsionVerdict selmer_coinvariants_torsion(const std::vector<PowerSeries2>& char_factors,
                                           const Direction& dir) {
    bool not_concluded = false;
    bool indeterminate = false;
    for (const auto& g : char_factors) {
        if (g.is_exact_zero()) {
            not_concluded = true;
            continue;
        }
        if (g.is_zero_to_precision()) {
            indeterminate = true;
            continue;
        }
        const PowerSeries1 pi = project(g, dir);
        if (certify_nonzero(pi).kind != NonvanishingKind::Certified) not_concluded = true;
    }
    if (not_concluded) return TorsionVerdict::NotConcluded;
    if (indeterminate) return TorsionVerdict::Indeterminate;
    return TorsionVerdict::Torsion;
}

bool is_fundamental_discriminant(std::int64_t d) {
    if (d == 0 || d == 1) return false;
    const std::int64_t r = ((d % 4) + 4) % 4;
    if (r == 1) return squarefree(d);
    if (r != 0) return false;
    const std::int64_t m = d / 4;
    const std::int64_t rm = ((m % 4) + 4) % 4;
    return (rm == 2 || rm == 3) && squarefree(m);
}

HypothesisReport check_hypotheses(std::int64_t n, std::int64_t d, long p) {
    if (n < 1) throw DomainError("N must be a positive integer");
    require_odd_prime(p);
    if (d >= 0 || !is_fundamental_discriminant(d))
        throw DomainError("D = " + std::to_string(d) +
                          " is not the discriminant of an imaginary quadratic field");
    if (n % p == 0)
        throw DomainError("p = " + std::to_string(p) + " divides N = " + std::to_string(n) +
                          ": bad reduction at p is not supported");

    HypothesisReport rep;
    for (const auto& f : factor(n)) {
        switch (kronecker_symbol(d, f.prime)) {
            case 1: rep.split_factors.push_back(f); break;
            case -1: rep.inert_factors.push_back(f); break;
            default: rep.ramified_factors.push_back(f); break;
        }
    }
    rep.n_plus = expand(rep.split_factors);
    rep.n_minus = expand(rep.inert_factors);
    rep.n_ramified = expand(rep.ramified_factors);
    rep.squarefree_n_minus = std::all_of(rep.inert_factors.begin(), rep.inert_factors.end(),
                                         [](const PrimePower& f) { return f.exponent == 1; });
    const bool even = rep.inert_factors.size() % 2 == 0;
    rep.ghh_ok = rep.squarefree_n_minus && even;
    if (!rep.squarefree_n_minus)
        rep.ghh_reason = "N- = " + list_primes(rep.inert_factors) + " is not squarefree";
    else if (!even)
        rep.ghh_reason = "N- = " + list_primes(rep.inert_factors) + " has an odd number (" +
                         std::to_string(rep.inert_factors.size()) + ") of prime factors";
    else
        rep.ghh_reason = "N- = " + list_primes(rep.inert_factors) +
                         " is squarefree with an even number of prime factors";
    if (!rep.ramified_factors.empty())
        rep.ghh_reason += "; ramified part " + list_primes(rep.ramified_factors);
    rep.p_splits = kronecker_symbol(d, p) == 1;
    rep.p_ge_5 = p >= 5;
    return rep;
}

long mazur_predicted_growth(const MazurSetting& setting) {
    if (!setting.direction_is_anticyclotomic || setting.sign == 1) return 0;
    return setting.cm_class == CmClass::Generic ? 1 : 2;
}

namespace {

void fill_corank_table(GrowthReport& rep, const GrowthFormulaInput& input, long n_max) {
    try {
        for (long n = 0; n <= n_max; ++n)
            rep.corank_table.emplace_back(n, corank_at_level(input, n, n_max));
    } catch (const IndeterminateError& e) {
        rep.notes.push_back(std::string("corank table stops early: ") + e.what());
    }
}

struct EffectiveHeight {
    bool nonzero = false;
    std::optional<long> valuation;
};

EffectiveHeight effective_height(const TwoVarLFunction& L, const HeightValue& height) {
    switch (height.kind) {
        case HeightValue::Kind::DeclaredNonzero: return {true, std::nullopt};
        case HeightValue::Kind::Explicit:
            if (!height.value) throw DomainError("height: explicit value missing");
            return {!height.value->is_zero(), height.value->valuation()};
        case HeightValue::Kind::DeriveFromL: {
            const PadicNumber c01 = L.series.coefficient({0, 1});
            return {!c01.is_zero(), c01.valuation()};
        }
    }
    return {};
}

GrowthReport analyze_anticyclotomic(const TwoVarLFunction& L, const Direction& dir,
                                    long ac_free_rank, const AnalysisOptions& options) {
    GrowthReport rep(dir);
    rep.anticyclotomic = true;
    const PowerSeries1 pi = project(L.series, dir);
    rep.derivative_value = pi.coefficient({1});
    rep.nonvanishing = certify_nonzero(pi);
    rep.predicted_c = ac_free_rank;
    rep.torsion = ac_free_rank == 0;
    rep.notes.push_back("(0:1) is excluded from the derivative criterion; Lambda_ac-corank " +
                        std::to_string(ac_free_rank) + " taken as input");
    GrowthFormulaInput input{L.series.prime(), ac_free_rank, options.ac_torsion};
    if (options.ac_torsion) {
        try {
            const DistinguishedData d = weierstrass_prepare(*options.ac_torsion);
            rep.mu = d.mu;
            rep.lambda = d.lambda;
        } catch (const IndeterminateError& e) {
            rep.notes.push_back(std::string("anticyclotomic torsion part: ") + e.what());
        }
    }
    fill_corank_table(rep, input, options.n_max);
    return rep;
}

GrowthReport analyze_direction(const TwoVarLFunction& L, const Direction& dir,
                               const EffectiveHeight& height, const AnalysisOptions& options) {
    GrowthReport rep(dir);
    if (dir.indistinguishable_from_anticyclotomic()) {
        rep.notes.push_back("direction " + dir.to_string() +
                            " cannot be separated from (0:1) at working precision");
        return rep;
    }
    const PowerSeries1 pi = Projector(dir, L.series.policy())(L.series);
    rep.derivative_value = pi.coefficient({1});
    rep.closed_form_value = closed_form_derivative(L, dir);
    rep.nonvanishing = certify_nonzero(pi);
    if (!rep.derivative_value->equals_to_precision(*rep.closed_form_value)) {
        rep.notes.push_back("derivative and closed form disagree; nothing concluded");
        rep.nonvanishing = {};
        return rep;
    }

    if (rep.nonvanishing.kind == NonvanishingKind::Certified) {
        rep.torsion = true;
    } else if (height.nonzero) {
        rep.torsion = true;
        rep.notes.push_back("torsion from the nonzero height alone; the projection is not "
                            "certified at working precision");
    } else {
        rep.notes.push_back("projection not certified and no nonzero height: torsion undecided");
        return rep;
    }
    rep.predicted_c = 0;

    if (rep.nonvanishing.kind != NonvanishingKind::Certified) return rep;
    // Weierstrass data of p^scale * pi, an element of Lambda_{a,b} itself.
    const PowerSeries1 integral = pi.with_raw_scale(0);
    if (pi.scale() != 0)
        rep.notes.push_back("projection carries the factor p^-" + std::to_string(pi.scale()) +
                            "; mu is that of p^" + std::to_string(pi.scale()) + " times it");
    try {
        const DistinguishedData d = weierstrass_prepare(integral);
        rep.mu = d.mu;
        rep.lambda = d.lambda;
    } catch (const std::exception& e) {
        rep.notes.push_back(std::string("Weierstrass data unavailable: ") + e.what());
        return rep;
    }
    fill_corank_table(rep, GrowthFormulaInput{L.series.prime(), 0, integral}, options.n_max);
    return rep;
}

}  // namespace

std::vector<GrowthReport> analyze(const TwoVarLFunction& L, const std::vector<Direction>& dirs,
                                  const HeightValue& height, long ac_free_rank,
                                  const MazurSetting& setting, const AnalysisOptions& options) {
    require_anticyclotomic_vanishing(L);
    if (ac_free_rank < 0) throw DomainError("ac_free_rank must be nonnegative");
    if (setting.sign != 1 && setting.sign != -1) throw DomainError("sign must be +1 or -1");
    const EffectiveHeight h = effective_height(L, height);

    std::vector<GrowthReport> out;
    out.reserve(dirs.size());
    for (const auto& dir : dirs) {
        if (dir.prime() != L.series.prime()) throw DomainError("direction prime mismatch");
        GrowthReport rep = dir.is_anticyclotomic()
                               ? analyze_anticyclotomic(L, dir, ac_free_rank, options)
                               : analyze_direction(L, dir, h, options);
        rep.height_nonzero = h.nonzero;
        rep.height_valuation = h.valuation;
        MazurSetting s = setting;
        s.direction_is_anticyclotomic = rep.anticyclotomic;
        rep.conjectured_c = mazur_predicted_growth(s);
        if (rep.predicted_c && *rep.predicted_c != rep.conjectured_c)
            rep.notes.push_back("predicted c = " + std::to_string(*rep.predicted_c) +
                                " differs from the conjectured " +
                                std::to_string(rep.conjectured_c));
        if (height.kind == HeightValue::Kind::DeriveFromL)
            rep.notes.push_back("height derived from dL/dY(0,0), which matches it only up to a "
                                "unit: valuation only");
        if (!L.h_imc_assumed())
            rep.notes.push_back("h-IMC not flagged: the torsion conclusion is conditional on it");
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace iwasawa
