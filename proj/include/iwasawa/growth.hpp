#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "iwasawa/padic.hpp"
#include "iwasawa/series.hpp"
#include "iwasawa/weierstrass.hpp"

namespace iwasawa {

enum class HypothesisFlag { HImcAssumed, Integral };

/// Coefficients of the two-variable p-adic L-function L_p(X, Y).
struct TwoVarLFunction {
    PowerSeries2 series;
    std::string provenance;
    std::set<HypothesisFlag> flags;

    bool h_imc_assumed() const { return flags.count(HypothesisFlag::HImcAssumed) != 0; }
};

/// The Heegner height <z, z>_0: an explicit value, a bare "nonzero"
/// declaration, or dL/dY(0,0) read off the L-function.
struct HeightValue {
    enum class Kind { Explicit, DeclaredNonzero, DeriveFromL };
    Kind kind = Kind::DeriveFromL;
    std::optional<PadicNumber> value;

    static HeightValue derive() { return {Kind::DeriveFromL, std::nullopt}; }
    static HeightValue nonzero() { return {Kind::DeclaredNonzero, std::nullopt}; }
    static HeightValue explicit_value(PadicNumber v) { return {Kind::Explicit, std::move(v)}; }
};

enum class CmClass { Generic, Exceptional };

struct MazurSetting {
    CmClass cm_class = CmClass::Generic;
    int sign = -1;
    bool direction_is_anticyclotomic = false;
};

struct PrimePower {
    std::int64_t prime;
    int exponent;
};

struct HypothesisReport {
    bool p_splits = false;
    std::int64_t n_plus = 1;
    std::int64_t n_minus = 1;
    std::int64_t n_ramified = 1;
    std::vector<PrimePower> split_factors;
    std::vector<PrimePower> inert_factors;
    std::vector<PrimePower> ramified_factors;
    bool squarefree_n_minus = true;
    bool ghh_ok = false;
    std::string ghh_reason;
    bool p_ge_5 = false;
};

enum class NonvanishingKind { Certified, ZeroToPrecision, Indeterminate };

struct NonvanishingVerdict {
    NonvanishingKind kind = NonvanishingKind::Indeterminate;
    long degree = -1;     // Certified only
    long valuation = 0;   // Certified only; valuation of the value coefficient
};

enum class TorsionVerdict { Torsion, NotConcluded, Indeterminate };

const char* to_string(NonvanishingKind kind);
const char* to_string(TorsionVerdict verdict);
const char* to_string(CmClass cm);

struct GrowthReport {
    explicit GrowthReport(Direction d) : direction(std::move(d)) {}

    Direction direction;
    bool anticyclotomic = false;
    std::optional<PadicNumber> derivative_value;
    std::optional<PadicNumber> closed_form_value;
    NonvanishingVerdict nonvanishing;
    std::optional<bool> torsion;  // nullopt: indeterminate
    std::optional<long> lambda;
    std::optional<long> mu;
    std::optional<long> predicted_c;
    long conjectured_c = 0;
    bool height_nonzero = false;
    std::optional<long> height_valuation;
    std::vector<std::pair<long, std::uint64_t>> corank_table;
    std::vector<std::string> notes;

    /// Anything short of a full certificate for this direction.
    bool inconclusive() const;
};

/// Lowest-degree coefficient that is nonzero at its precision.
NonvanishingVerdict certify_nonzero(const PowerSeries1& s);

/// Coefficient of Z in the projection of L along dir.
PadicNumber derivative_at_origin(const TwoVarLFunction& L, const Direction& dir);

/// -(a/b) dL/dY(0,0) in the b-unit chart, dL/dY(0,0) in the a-unit chart.
PadicNumber closed_form_derivative(const TwoVarLFunction& L, const Direction& dir);

NonvanishingVerdict nonvanishing_certificate(const TwoVarLFunction& L, const Direction& dir);

/// Torsion of the coinvariants of the Selmer dual from its characteristic factors.
TorsionVerdict selmer_coinvariants_torsion(const std::vector<PowerSeries2>& char_factors,
                                           const Direction& dir);

HypothesisReport check_hypotheses(std::int64_t n, std::int64_t d, long p);

bool is_fundamental_discriminant(std::int64_t d);

/// The growth number c of Mazur's conjecture.
long mazur_predicted_growth(const MazurSetting& setting);

struct AnalysisOptions {
    /// Anticyclotomic torsion characteristic series, if known.
    std::optional<PowerSeries1> ac_torsion;
    long n_max = kDefaultMaxLevel;
};

std::vector<GrowthReport> analyze(const TwoVarLFunction& L, const std::vector<Direction>& dirs,
                                  const HeightValue& height, long ac_free_rank,
                                  const MazurSetting& setting, const AnalysisOptions& options = {});

/// Throws DomainError unless L(X, 0) vanishes to precision.
void require_anticyclotomic_vanishing(const TwoVarLFunction& L);

}  // namespace iwasawa
