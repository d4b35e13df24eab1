#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "iwasawa/cli.hpp"
#include "support.hpp"

using namespace iwasawa;
using testing::dir_of;
using testing::num;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

IntPolynomial mul(const IntPolynomial& a, const IntPolynomial& b) {
    IntPolynomial r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Direction random_nonzero_a(std::mt19937_64& rng) {
    for (;;) {
        const Direction d = testing::random_direction(rng, 5, 20);
        if (!d.a.is_exact_zero()) return d;
    }
}

Outcome derivative_identity() {
    Outcome o;
    std::mt19937_64 rng(1001);
    const PrecisionPolicy pol{20, 10};
    long checked = 0, chart_a = 0, chart_b = 0;
    for (int i = 0; i < 200; ++i) {
        const TwoVarLFunction L{testing::random_series2(rng, 5, pol, 8, true), "random", {}};
        for (int k = 0; k < 50; ++k) {
            const Direction d = random_nonzero_a(rng);
            (d.chart == Chart::AUnit ? chart_a : chart_b)++;
            const PadicNumber lhs = derivative_at_origin(L, d);
            const PadicNumber rhs = closed_form_derivative(L, d);
            if (!lhs.equals_to_precision(rhs)) o.fail("mismatch at " + d.to_string());
            ++checked;
        }
    }
    o.detail = o.pass ? std::to_string(checked) + " pairs (chart A " + std::to_string(chart_a) +
                            ", chart B " + std::to_string(chart_b) + ")"
                      : o.detail;
    return o;
}

Outcome kernel_property() {
    Outcome o;
    std::mt19937_64 rng(1002);
    const PrecisionPolicy pol{20, 12};
    std::vector<Direction> dirs{dir_of(5, 1, 0), dir_of(5, 0, 1), dir_of(5, 1, 1),
                                dir_of(5, 5, 1), dir_of(5, 1, 5), dir_of(5, 25, 3)};
    while (dirs.size() < 100) dirs.push_back(testing::random_direction(rng, 5, 20));
    long va = 0, vb = 0;
    for (const auto& d : dirs) {
        if (!d.a.is_exact_zero() && *d.a.valuation() > 0) ++va;
        if (!d.b.is_exact_zero() && *d.b.valuation() > 0) ++vb;
        if (!project(f_ab(d, pol), d).is_zero_to_precision()) o.fail("nonzero at " + d.to_string());
    }
    if (va == 0 || vb == 0) o.fail("sample lacks directions with v(a) > 0 or v(b) > 0");
    if (o.pass)
        o.detail = "100 directions, " + std::to_string(va) + " with v(a)>0, " + std::to_string(vb) +
                   " with v(b)>0";
    return o;
}

Outcome first_order_congruence() {
    Outcome o;
    std::mt19937_64 rng(1003);
    const PrecisionPolicy pol{20, 8};
    for (int i = 0; i < 100; ++i) {
        const PadicNumber c = -(testing::random_unit(rng, 5, 20) / testing::random_unit(rng, 5, 20));
        const PadicNumber lin = one_plus_power(c, pol).coefficient({1});
        if (!lin.equals_to_precision(c) || lin.absolute_precision() != c.absolute_precision())
            o.fail("linear coefficient differs for " + c.to_string());
    }
    if (o.pass) o.detail = "100 unit ratios";
    return o;
}

Outcome weierstrass_reconstruction() {
    Outcome o;
    std::mt19937_64 rng(1004);
    const PrecisionPolicy pol{20, 128};
    for (int i = 0; i < 100; ++i) {
        const long mu = static_cast<long>(rng() % 4);
        const long lambda = static_cast<long>(rng() % 7);
        PowerSeries1 P(5, pol);
        for (long k = 0; k < lambda; ++k)
            P.set_integral({k}, testing::random_integer_padic(rng, 5, 20) * num(5, 5));
        P.set({lambda}, num(5, 1));
        PowerSeries1 U = testing::random_series1(rng, 5, pol, 1 + static_cast<long>(rng() % 8));
        U.set_integral({0}, testing::random_unit(rng, 5, 20));
        const PowerSeries1 f = (P * U).scalar_mul(num(5, prime_power(5, mu).get_si()));
        const DistinguishedData d = weierstrass_prepare(f);
        const long t = 20 - mu;
        if (d.mu != mu || d.lambda != lambda) {
            o.fail("invariants (" + std::to_string(d.mu) + ", " + std::to_string(d.lambda) + ") for (" +
                   std::to_string(mu) + ", " + std::to_string(lambda) + ")");
            continue;
        }
        if (d.precision != t) o.fail("precision " + std::to_string(d.precision) + " != " + std::to_string(t));
        for (long k = 0; k <= lambda; ++k) {
            const PadicNumber& got = d.distinguished.coeffs[static_cast<std::size_t>(k)];
            const PadicNumber want = P.coefficient({k});
            if (!got.equals_to_precision(want) || got.absolute_precision().value_or(t) < t)
                o.fail("distinguished coefficient " + std::to_string(k) + " differs");
        }
    }
    for (int i = 0; i < 100; ++i) {
        const PrecisionPolicy dp{20, 16};
        PowerSeries1 f = testing::random_series1(rng, 7, dp, 10);
        const long lambda = static_cast<long>(rng() % 4);
        for (long k = 0; k < lambda; ++k) f.set_integral({k}, f.integral_coefficient({k}) * num(7, 7));
        f.set_integral({lambda}, testing::random_unit(rng, 7, 20));
        const PowerSeries1 g = testing::random_series1(rng, 7, dp, 15);
        const DivisionResult r = weierstrass_divide(g, f);
        if (!(r.quotient * f + r.remainder.to_series(dp)).equals_to_precision(g))
            o.fail("g != q f + r");
    }
    if (o.pass) o.detail = "100 preparations at N = 128, 100 divisions";
    return o;
}

Outcome oracle_formula_agreement() {
    Outcome o;
    const PrecisionPolicy pol{20, 60};
    const IntPolynomial T{0, 1}, phi = cyclotomic_factor(5, 1);
    const std::vector<std::pair<std::string, IntPolynomial>> fs{
        {"T", T}, {"Phi", phi}, {"T*Phi", mul(T, phi)}, {"T-5", {-5, 1}}, {"Phi^2", mul(phi, phi)}};
    std::ostringstream rows;
    for (const auto& [name, poly] : fs) {
        const PowerSeries1 f = int_polynomial_series(5, poly, pol);
        rows << " " << name << ":";
        for (long n = 0; n <= 2; ++n) {
            const long oracle = finite_level_rank(f, 3, n);
            const auto formula = static_cast<long>(corank_at_level({5, 0, f}, n));
            rows << (n ? "," : "") << oracle;
            if (oracle != formula)
                o.fail(name + " at n=" + std::to_string(n) + ": oracle " + std::to_string(oracle) +
                       ", formula " + std::to_string(formula) + " (oracle at m=4: " +
                       std::to_string(finite_level_rank(f, 4, n)) + ")");
        }
    }
    const PowerSeries1 tphi = int_polynomial_series(5, mul(T, phi), pol);
    for (long n = 0; n <= 2; ++n)
        if (finite_level_rank(tphi, 3, n) != std::vector<long>{1, 5, 5}[static_cast<std::size_t>(n)])
            o.fail("T*Phi row is not 1, 5, 5");
    if (o.pass) o.detail = "oracle ranks" + rows.str();
    return o;
}

Outcome growth_shape() {
    Outcome o;
    std::mt19937_64 rng(1006);
    const PrecisionPolicy pol{20, 80};
    const IntPolynomial phi = cyclotomic_factor(5, 1);
    const std::vector<IntPolynomial> pieces{{0, 1}, phi, {-5, 1}, {10, 1}, {5, 1}};
    long cases = 0;
    for (int i = 0; i < 25; ++i) {
        IntPolynomial f{1};
        for (const auto& piece : pieces)
            for (long e = static_cast<long>(rng() % 3); e > 0; --e) f = mul(f, piece);
        const GrowthFormulaInput in{5, 1, int_polynomial_series(5, f, pol)};
        const auto excess = [&](long n) {
            return static_cast<long>(corank_at_level(in, n)) - prime_power(5, n).get_si();
        };
        const long c2 = excess(2);
        for (long n = 3; n <= 6; ++n)
            if (excess(n) != c2) o.fail("corank - 5^n not constant for case " + std::to_string(i));
        ++cases;
    }
    if (o.pass) o.detail = std::to_string(cases) + " torsion parts, n = 2..6";
    return o;
}

Outcome pseudo_null_consistency() {
    Outcome o;
    std::mt19937_64 rng(1007);
    const PrecisionPolicy pol{10, 8};
    auto term = [&](long i, long j, long c) {
        PowerSeries2 s(5, pol);
        s.set({i, j}, num(5, c, 10));
        return s;
    };
    const std::vector<std::pair<std::string, CyclicModulePresentation>> modules{
        {"(p,X)", {{term(0, 0, 5), term(1, 0, 1)}}},
        {"(X,Y)", {{term(1, 0, 1), term(0, 1, 1)}}},
        {"(f10,f01)", {{f_ab(dir_of(5, 1, 0, 10), pol), f_ab(dir_of(5, 0, 1, 10), pol)}}}};
    // v(b) <= 1: the sample along which the kernels have already stabilized at n = 1
    std::vector<Direction> dirs;
    while (dirs.size() < 20) {
        const PadicNumber b = testing::random_unit(rng, 5, 10).shifted(static_cast<long>(rng() % 2));
        const long va = static_cast<long>(rng() % 4) - 1;
        const PadicNumber a = va < 0 ? PadicNumber::zero(5) : testing::random_unit(rng, 5, 10).shifted(va);
        dirs.push_back(canonical_direction(a, b.with_absolute_cap(10)));
    }
    for (const auto& [name, M] : modules)
        for (const auto& d : dirs) {
            if (coinvariants_torsion(M, d).verdict != TorsionVerdict::Torsion)
                o.fail(name + " coinvariants not torsion along " + d.to_string());
            const auto ks = f_torsion_finite_level(M, d, {{2, 1}, {2, 2}});
            if (ks[0].kernel_log_size != ks[1].kernel_log_size)
                o.fail(name + " kernel changes along " + d.to_string());
        }
    if (o.pass) o.detail = "3 modules x 20 directions";
    return o;
}

// Independent classification: q splits iff D is a nonzero square mod q.
int split_sign(std::int64_t d, std::int64_t q) {
    const std::int64_t r = ((d % q) + q) % q;
    if (r == 0) return 0;
    for (std::int64_t x = 1; x < q; ++x)
        if (x * x % q == r) return 1;
    return -1;
}

Outcome hypothesis_checker() {
    Outcome o;
    struct Row {
        std::int64_t n, d;
        long p;
        bool ghh;
        std::optional<bool> splits;
    };
    for (const Row& row : {Row{11, -4, 5, false, true}, Row{15, -11, 13, true, std::nullopt}}) {
        const HypothesisReport r = check_hypotheses(row.n, row.d, row.p);
        std::int64_t minus = 1, inert_count = 0, m = row.n;
        bool squarefree = true;
        for (std::int64_t q = 2; m > 1; ++q) {
            int e = 0;
            while (m % q == 0) m /= q, ++e;
            if (e > 0 && split_sign(row.d, q) == -1) {
                for (int k = 0; k < e; ++k) minus *= q;
                inert_count += e;
                squarefree = squarefree && e == 1;
            }
        }
        const bool ghh = squarefree && inert_count % 2 == 0;
        const bool splits = split_sign(row.d, row.p) == 1;
        if (r.n_minus != minus) o.fail("N- disagrees with enumeration");
        if (r.ghh_ok != ghh || r.ghh_ok != row.ghh) o.fail("ghh_ok wrong for N=" + std::to_string(row.n));
        if (r.p_splits != splits) o.fail("p_splits disagrees with enumeration");
        if (row.splits && r.p_splits != *row.splits) o.fail("p_splits wrong for N=" + std::to_string(row.n));
    }
    if (o.pass) o.detail = "(11,-4,5) ghh false split; (15,-11,13) ghh true";
    return o;
}

Outcome mazur_table() {
    Outcome o;
    struct Row {
        MazurSetting s;
        long c;
    };
    const std::vector<Row> rows{{{CmClass::Generic, -1, false}, 0},
                                {{CmClass::Exceptional, -1, false}, 0},
                                {{CmClass::Generic, 1, true}, 0},
                                {{CmClass::Exceptional, 1, true}, 0},
                                {{CmClass::Generic, -1, true}, 1},
                                {{CmClass::Exceptional, -1, true}, 2}};
    for (const auto& row : rows)
        if (mazur_predicted_growth(row.s) != row.c) o.fail("row with expected c = " + std::to_string(row.c));
    // the report carries the same value along (0:1) and (1:0)
    TwoVarLFunction L{PowerSeries2(5, {20, 10}), "toy", {HypothesisFlag::HImcAssumed}};
    L.series.set({0, 1}, num(5, 1));
    L.series.set({1, 1}, num(5, 1));
    const auto reps = analyze(L, {dir_of(5, 0, 1), dir_of(5, 1, 0)}, HeightValue::derive(), 1,
                              {CmClass::Exceptional, -1, true});
    if (reps[0].conjectured_c != 2 || reps[1].conjectured_c != 0) o.fail("report conjectured_c");
    if (o.pass) o.detail = "c = 0 / 1 / 2";
    return o;
}

std::string run_all(const std::vector<std::filesystem::path>& corpus) {
    using namespace iwasawa::cli;
    std::ostringstream all;
    for (const auto& path : corpus) {
        for (const char* name : {"analyze", "project", "weierstrass", "growth-table", "hypotheses", "oracle"}) {
            for (OutputFormat fmt : {OutputFormat::Structured, OutputFormat::Table}) {
                Overrides ov;
                ov.output = fmt;
                all << "== " << path.filename().string() << " " << name << "\n";
                try {
                    const ParsedInput in = parse_input(path.string(), ov);
                    const int rc = run_command(parse_command(name), in, all);
                    all << "exit " << rc << "\n";
                } catch (const std::exception& e) {
                    all << "error " << e.what() << "\nexit 1\n";
                }
            }
        }
    }
    return all.str();
}

Outcome determinism_and_honesty() {
    Outcome o;
    std::vector<std::filesystem::path> corpus;
    for (const auto& e : std::filesystem::directory_iterator(IWASAWA_DATA_DIR))
        if (e.path().extension() == ".json") corpus.push_back(e.path());
    std::sort(corpus.begin(), corpus.end());
    if (corpus.empty()) o.fail("empty corpus");
    if (run_all(corpus) != run_all(corpus)) o.fail("reports differ between runs");

    const std::string starved =
        R"({"p": 5, "coeff_prec": 20, "series": [[0, 1, "95367431640625"]], "directions": ["1:0", "1:1", "3:1"], "height": "derive"})";
    const cli::ParsedInput in = cli::parse_input_text(starved);
    if (!in.L.series.coefficient({0, 1}).is_zero() || in.L.series.coefficient({0, 1}).is_exact_zero())
        o.fail("p^20 Y did not parse as O(p^20) Y");
    std::ostringstream out;
    const int rc = cli::run_command(cli::Command::Analyze, in, out);
    if (rc != 2) o.fail("exit " + std::to_string(rc) + " on p^20 Y");
    for (const auto& r : analyze(in.L, in.config.directions, HeightValue::derive(), 1, {})) {
        if (r.nonvanishing.kind != NonvanishingKind::Indeterminate) o.fail("verdict is not INDETERMINATE");
        if (r.torsion.has_value() || r.predicted_c.has_value()) o.fail("a conclusion was drawn from O(p^20)");
    }
    if (out.str().find("ZERO") != std::string::npos) o.fail("report claims zero");
    if (o.pass) o.detail = std::to_string(corpus.size()) + " corpus files x 6 commands x 2 formats; p^20 Y INDETERMINATE";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"derivative identity", derivative_identity},
        {"kernel of the projection", kernel_property},
        {"first-order congruence", first_order_congruence},
        {"Weierstrass reconstruction", weierstrass_reconstruction},
        {"oracle-formula corank agreement", oracle_formula_agreement},
        {"growth shape p^n + O(1)", growth_shape},
        {"pseudo-null consistency", pseudo_null_consistency},
        {"hypothesis checker", hypothesis_checker},
        {"Mazur case table", mazur_table},
        {"determinism and precision honesty", determinism_and_honesty}};
    int failures = 0;
    int k = 0;
    for (const auto& [name, check] : criteria) {
        ++k;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << " " << name << ": " << o.detail
                  << " [" << std::fixed << std::setprecision(2) << secs << "s]" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
