#include "iwasawa/cli.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace iwasawa::cli {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
    throw DomainError(field + ": " + msg);
}

long get_long(const json& j, const std::string& field, long fallback, long lo, long hi) {
    if (!j.contains(field)) return fallback;
    const json& v = j.at(field);
    if (!v.is_number_integer()) field_error(field, "expected an integer");
    const long x = v.get<long>();
    if (x < lo || x > hi)
        field_error(field, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
}

std::string coefficient_string(const json& v, const std::string& field) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    field_error(field, "coefficient must be a string");
}

long exponent_of(const json& v, const std::string& field) {
    if (!v.is_number_integer() || v.get<long>() < 0)
        field_error(field, "exponent must be a nonnegative integer");
    return v.get<long>();
}

PowerSeries2 parse_series2(const json& arr, const std::string& field, long p,
                           const PrecisionPolicy& policy) {
    if (!arr.is_array()) field_error(field, "expected a list of [i, j, coefficient]");
    PowerSeries2 s(p, policy);
    std::set<std::array<long, 2>> seen;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string f = field + "[" + std::to_string(k) + "]";
        const json& t = arr[k];
        if (!t.is_array() || t.size() != 3) field_error(f, "expected [i, j, coefficient]");
        const std::array<long, 2> e{exponent_of(t[0], f), exponent_of(t[1], f)};
        if (!seen.insert(e).second) field_error(f, "duplicate exponent");
        try {
            s.set(e, parse_coefficient(p, coefficient_string(t[2], f), policy.coeff_prec));
        } catch (const DomainError& err) {
            field_error(f, err.what());
        }
    }
    return s;
}

PowerSeries1 parse_series1(const json& arr, const std::string& field, long p,
                           const PrecisionPolicy& policy) {
    if (!arr.is_array()) field_error(field, "expected a list of [k, coefficient]");
    PowerSeries1 s(p, policy);
    std::set<long> seen;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string f = field + "[" + std::to_string(k) + "]";
        const json& t = arr[k];
        if (!t.is_array() || t.size() != 2) field_error(f, "expected [k, coefficient]");
        const long e = exponent_of(t[0], f);
        if (!seen.insert(e).second) field_error(f, "duplicate exponent");
        try {
            s.set({e}, parse_coefficient(p, coefficient_string(t[1], f), policy.coeff_prec));
        } catch (const DomainError& err) {
            field_error(f, err.what());
        }
    }
    return s;
}

std::vector<Direction> parse_directions(const json& arr, const std::string& field, long p,
                                        long prec) {
    if (!arr.is_array()) field_error(field, "expected a list of \"a:b\" strings");
    std::vector<Direction> out;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string f = field + "[" + std::to_string(k) + "]";
        if (!arr[k].is_string()) field_error(f, "expected \"a:b\"");
        try {
            out.push_back(parse_direction(p, arr[k].get<std::string>(), prec));
        } catch (const std::runtime_error& err) {
            field_error(f, err.what());
        } catch (const std::invalid_argument& err) {
            field_error(f, err.what());
        }
    }
    return out;
}

HeightValue parse_height(const json& j, long p, long prec) {
    if (j.is_number_integer())
        return HeightValue::explicit_value(PadicNumber::from_integer(p, mpz_class(j.get<long>()), prec));
    if (!j.is_string()) field_error("height", "expected \"nonzero\", \"derive\" or \"num/den\"");
    const std::string s = j.get<std::string>();
    if (s == "derive") return HeightValue::derive();
    if (s == "nonzero") return HeightValue::nonzero();
    static const std::regex rational(R"((-?\d+)(?:/(\d+))?)");
    std::smatch m;
    if (!std::regex_match(s, m, rational))
        field_error("height", "expected \"nonzero\", \"derive\" or \"num/den\" (got \"" + s + "\")");
    const mpz_class num(m[1].str());
    const mpz_class den(m[2].matched ? m[2].str() : std::string("1"));
    if (den == 0) field_error("height", "zero denominator");
    return HeightValue::explicit_value(make_padic(p, num, den, prec));
}

std::string lambda_string(const std::optional<long>& x) {
    return x ? std::to_string(*x) : std::string("-");
}

ordered_json optional_json(const std::optional<long>& x) {
    return x ? ordered_json(*x) : ordered_json(nullptr);
}

ordered_json series_json(const PowerSeries1& s) {
    ordered_json arr = ordered_json::array();
    for (const auto& [e, c] : s.terms())
        arr.push_back(ordered_json::array({e[0], format_coefficient(c.shifted(-s.scale()))}));
    return arr;
}

ordered_json nonvanishing_json(const NonvanishingVerdict& v) {
    ordered_json j;
    j["verdict"] = to_string(v.kind);
    if (v.kind == NonvanishingKind::Certified) {
        j["degree"] = v.degree;
        j["valuation"] = v.valuation;
    }
    return j;
}

std::string nonvanishing_text(const NonvanishingVerdict& v) {
    if (v.kind != NonvanishingKind::Certified) return to_string(v.kind);
    return "CERTIFIED(degree " + std::to_string(v.degree) + ", valuation " +
           std::to_string(v.valuation) + ")";
}

std::string torsion_text(const std::optional<bool>& t) {
    if (!t) return "INDETERMINATE";
    return *t ? "TORSION" : "NOT_TORSION";
}

ordered_json report_json(const GrowthReport& r, long p) {
    ordered_json j;
    j["direction"] = r.direction.to_string();
    j["chart"] = to_string(r.direction.chart);
    j["anticyclotomic"] = r.anticyclotomic;
    j["derivative"] = r.derivative_value ? ordered_json(r.derivative_value->to_string()) : nullptr;
    j["closed_form"] = r.closed_form_value ? ordered_json(r.closed_form_value->to_string()) : nullptr;
    j["nonvanishing"] = nonvanishing_json(r.nonvanishing);
    j["torsion"] = torsion_text(r.torsion);
    j["mu"] = optional_json(r.mu);
    j["lambda"] = optional_json(r.lambda);
    j["predicted_c"] = optional_json(r.predicted_c);
    j["conjectured_c"] = r.conjectured_c;
    j["height"] = {{"nonzero", r.height_nonzero}, {"valuation", optional_json(r.height_valuation)}};
    ordered_json table = ordered_json::array();
    for (const auto& [n, c] : r.corank_table)
        table.push_back({{"n", n}, {"p^n", prime_power(p, n).get_str()}, {"corank", c}});
    j["corank_table"] = table;
    j["notes"] = r.notes;
    return j;
}

void print_report_table(std::ostream& out, const GrowthReport& r, long p) {
    out << "direction " << r.direction.to_string() << "  chart " << to_string(r.direction.chart)
        << (r.anticyclotomic ? "  (anticyclotomic)" : "") << "\n";
    out << "  derivative     " << (r.derivative_value ? r.derivative_value->to_string() : "-") << "\n";
    out << "  closed form    " << (r.closed_form_value ? r.closed_form_value->to_string() : "-")
        << "\n";
    out << "  nonvanishing   " << nonvanishing_text(r.nonvanishing) << "\n";
    out << "  torsion        " << torsion_text(r.torsion) << "\n";
    out << "  mu / lambda    " << lambda_string(r.mu) << " / " << lambda_string(r.lambda) << "\n";
    out << "  predicted c    " << lambda_string(r.predicted_c) << "   conjectured c "
        << r.conjectured_c << "\n";
    if (!r.corank_table.empty()) {
        out << "  " << std::setw(3) << "n" << std::setw(12) << "p^n" << std::setw(12) << "corank"
            << "\n";
        for (const auto& [n, c] : r.corank_table)
            out << "  " << std::setw(3) << n << std::setw(12) << prime_power(p, n).get_str()
                << std::setw(12) << c << "\n";
    }
    for (const auto& note : r.notes) out << "  note: " << note << "\n";
}

void emit(std::ostream& out, const ordered_json& j) { out << j.dump(2) << "\n"; }

int run_analyze(const ParsedInput& in, std::ostream& out) {
    const auto& cfg = in.config;
    if (cfg.directions.empty()) field_error("directions", "analyze needs at least one direction");
    AnalysisOptions opts;
    opts.ac_torsion = cfg.ac_torsion;
    opts.n_max = cfg.n_max;
    const auto reports = analyze(in.L, cfg.directions, cfg.height, cfg.ac_free_rank, cfg.setting, opts);
    bool inconclusive = false;
    for (const auto& r : reports) inconclusive = inconclusive || r.inconclusive();
    if (cfg.output == OutputFormat::Table) {
        for (const auto& r : reports) print_report_table(out, r, cfg.p);
        out << "status " << (inconclusive ? "INCONCLUSIVE" : "CERTIFIED") << "\n";
    } else {
        ordered_json j;
        j["command"] = "analyze";
        j["p"] = cfg.p;
        j["provenance"] = in.L.provenance;
        j["reports"] = ordered_json::array();
        for (const auto& r : reports) j["reports"].push_back(report_json(r, cfg.p));
        j["status"] = inconclusive ? "INCONCLUSIVE" : "CERTIFIED";
        emit(out, j);
    }
    return inconclusive ? 2 : 0;
}

int run_project(const ParsedInput& in, std::ostream& out) {
    const auto& cfg = in.config;
    if (cfg.directions.empty()) field_error("directions", "project needs at least one direction");
    bool inconclusive = false;
    ordered_json j;
    j["command"] = "project";
    j["p"] = cfg.p;
    j["projections"] = ordered_json::array();
    for (const auto& d : cfg.directions) {
        const PowerSeries1 pi = Projector(d, in.L.series.policy())(in.L.series);
        const NonvanishingVerdict v = certify_nonzero(pi);
        inconclusive = inconclusive || v.kind == NonvanishingKind::Indeterminate;
        if (cfg.output == OutputFormat::Table) {
            out << "direction " << d.to_string() << "  chart " << to_string(d.chart) << "\n";
            out << "  " << pi.to_string() << "\n";
            out << "  nonvanishing " << nonvanishing_text(v) << "\n";
            continue;
        }
        ordered_json e;
        e["direction"] = d.to_string();
        e["chart"] = to_string(d.chart);
        e["coeff_prec"] = pi.policy().coeff_prec;
        e["degree_bound"] = pi.policy().degree_bound;
        e["series"] = series_json(pi);
        e["nonvanishing"] = nonvanishing_json(v);
        j["projections"].push_back(e);
    }
    if (cfg.output == OutputFormat::Structured) emit(out, j);
    return inconclusive ? 2 : 0;
}

int run_weierstrass(const ParsedInput& in, std::ostream& out) {
    const auto& cfg = in.config;
    if (!cfg.univariate) field_error("univariate", "weierstrass needs a one-variable series");
    const DistinguishedData d = weierstrass_prepare(*cfg.univariate);
    if (cfg.output == OutputFormat::Table) {
        out << "mu " << d.mu << "\nlambda " << d.lambda << "\nP " << d.distinguished.to_string()
            << "\nprecision " << d.precision << "\n";
        return 0;
    }
    ordered_json j;
    j["command"] = "weierstrass";
    j["p"] = cfg.p;
    j["mu"] = d.mu;
    j["lambda"] = d.lambda;
    j["P"] = d.distinguished.to_string();
    ordered_json coeffs = ordered_json::array();
    for (std::size_t k = 0; k < d.distinguished.coeffs.size(); ++k) {
        const PadicNumber& c = d.distinguished.coeffs[k];
        if (!c.is_exact_zero()) coeffs.push_back(ordered_json::array({k, format_coefficient(c)}));
    }
    j["distinguished"] = coeffs;
    j["precision"] = d.precision;
    emit(out, j);
    return 0;
}

int run_growth_table(const ParsedInput& in, std::ostream& out) {
    const auto& cfg = in.config;
    const GrowthFormulaInput g{cfg.p, cfg.ac_free_rank, cfg.ac_torsion};
    struct Row {
        long n;
        std::string pn;
        std::uint64_t phi;
        bool factor;
        std::uint64_t corank;
    };
    std::vector<Row> rows;
    std::string stopped;
    try {
        for (long n = 0; n <= cfg.n_max; ++n) {
            const bool factor = g.torsion_char && cyclotomic_multiplicity(*g.torsion_char, n) >= 1;
            rows.push_back({n, prime_power(cfg.p, n).get_str(), euler_phi_ppower(cfg.p, n), factor,
                            corank_at_level(g, n, cfg.n_max)});
        }
    } catch (const IndeterminateError& e) {
        stopped = e.what();
    }
    if (cfg.output == OutputFormat::Table) {
        out << "r = " << cfg.ac_free_rank << "\n";
        out << std::setw(3) << "n" << std::setw(12) << "p^n" << std::setw(12) << "phi(p^n)"
            << std::setw(8) << "Phi_n" << std::setw(12) << "corank" << "\n";
        for (const auto& r : rows)
            out << std::setw(3) << r.n << std::setw(12) << r.pn << std::setw(12) << r.phi
                << std::setw(8) << (r.factor ? "yes" : "no") << std::setw(12) << r.corank << "\n";
        if (!stopped.empty()) out << "INDETERMINATE: " << stopped << "\n";
    } else {
        ordered_json j;
        j["command"] = "growth-table";
        j["p"] = cfg.p;
        j["free_rank"] = cfg.ac_free_rank;
        j["rows"] = ordered_json::array();
        for (const auto& r : rows)
            j["rows"].push_back({{"n", r.n},
                                 {"p^n", r.pn},
                                 {"phi(p^n)", r.phi},
                                 {"cyclotomic_factor", r.factor},
                                 {"corank", r.corank}});
        if (!stopped.empty()) j["indeterminate"] = stopped;
        emit(out, j);
    }
    return stopped.empty() ? 0 : 2;
}

ordered_json factors_json(const std::vector<PrimePower>& fs) {
    ordered_json arr = ordered_json::array();
    for (const auto& f : fs) arr.push_back(ordered_json::array({f.prime, f.exponent}));
    return arr;
}

int run_hypotheses(const ParsedInput& in, std::ostream& out) {
    const auto& cfg = in.config;
    if (!cfg.hypotheses) field_error("hypotheses", "missing {N, D}");
    const auto [n, d] = *cfg.hypotheses;
    const HypothesisReport r = check_hypotheses(n, d, cfg.p);
    if (cfg.output == OutputFormat::Table) {
        out << "N = " << n << "  D = " << d << "  p = " << cfg.p << "\n";
        out << "N+ = " << r.n_plus << "  N- = " << r.n_minus << "  ramified = " << r.n_ramified
            << "\n";
        out << "ghh_ok " << (r.ghh_ok ? "true" : "false") << "  (" << r.ghh_reason << ")\n";
        out << "p_splits " << (r.p_splits ? "true" : "false") << "\n";
        out << "p_ge_5 " << (r.p_ge_5 ? "true" : "false") << "\n";
        return 0;
    }
    ordered_json j;
    j["command"] = "hypotheses";
    j["N"] = n;
    j["D"] = d;
    j["p"] = cfg.p;
    j["N_plus"] = {{"value", r.n_plus}, {"factors", factors_json(r.split_factors)}};
    j["N_minus"] = {{"value", r.n_minus}, {"factors", factors_json(r.inert_factors)}};
    j["ramified"] = {{"value", r.n_ramified}, {"factors", factors_json(r.ramified_factors)}};
    j["squarefree_N_minus"] = r.squarefree_n_minus;
    j["ghh_ok"] = r.ghh_ok;
    j["ghh_reason"] = r.ghh_reason;
    j["p_splits"] = r.p_splits;
    j["p_ge_5"] = r.p_ge_5;
    emit(out, j);
    return 0;
}

int run_oracle(const ParsedInput& in, std::ostream& out) {
    const auto& cfg = in.config;
    if (!cfg.oracle) field_error("oracle", "missing oracle block");
    const OracleSpec& spec = *cfg.oracle;
    const PseudoNullVerdict pn = pseudo_null_sufficient(spec.module);
    bool inconclusive = false;
    ordered_json j;
    j["command"] = "oracle";
    j["p"] = cfg.p;
    j["pseudo_null"] = pn.sufficient ? "SUFFICIENT_YES (catalog " + pn.catalog + ")" : "UNKNOWN";
    j["directions"] = ordered_json::array();
    if (cfg.output == OutputFormat::Table) out << "pseudo-null " << j["pseudo_null"].get<std::string>() << "\n";
    for (const auto& d : spec.directions) {
        const CoinvariantsVerdict cv = coinvariants_torsion(spec.module, d);
        inconclusive = inconclusive || cv.verdict != TorsionVerdict::Torsion;
        const auto kernels = f_torsion_finite_level(spec.module, d, spec.levels);
        // Consistency check only: equal kernel sizes across n at fixed m.
        bool constant = true;
        for (const auto& a : kernels)
            for (const auto& b : kernels)
                if (a.m == b.m && a.n >= 1 && b.n >= 1 && a.kernel_log_size != b.kernel_log_size)
                    constant = false;
        if (cfg.output == OutputFormat::Table) {
            out << "direction " << d.to_string() << "  H0 " << to_string(cv.verdict) << "  mu/lambda "
                << lambda_string(cv.mu) << "/" << lambda_string(cv.lambda) << "\n";
            out << std::setw(5) << "m" << std::setw(5) << "n" << std::setw(14) << "log_p |M|"
                << std::setw(16) << "log_p |ker f|" << "\n";
            for (const auto& k : kernels)
                out << std::setw(5) << k.m << std::setw(5) << k.n << std::setw(14)
                    << k.module_log_size << std::setw(16) << k.kernel_log_size << "\n";
            out << "  consistency check (kernel constant for n >= 1): " << (constant ? "yes" : "no")
                << "\n";
            continue;
        }
        ordered_json e;
        e["direction"] = d.to_string();
        e["coinvariants"] = to_string(cv.verdict);
        e["mu"] = optional_json(cv.mu);
        e["lambda"] = optional_json(cv.lambda);
        e["levels"] = ordered_json::array();
        for (const auto& k : kernels)
            e["levels"].push_back({{"m", k.m},
                                   {"n", k.n},
                                   {"log_p_module", k.module_log_size},
                                   {"log_p_kernel", k.kernel_log_size}});
        e["consistency_check_kernel_constant"] = constant;
        j["directions"].push_back(e);
    }
    if (cfg.output == OutputFormat::Structured) emit(out, j);
    return inconclusive ? 2 : 0;
}

}  // namespace

PadicNumber parse_coefficient(long p, const std::string& s, long prec) {
    static const std::regex integer(R"(-?\d+)");
    static const std::regex digits(R"((-?\d+):([0-9,]*))");
    std::smatch m;
    if (std::regex_match(s, integer)) {
        const mpz_class n(s);
        if (n == 0) return PadicNumber::zero(p);
        return PadicNumber::from_integer(p, n, prec).with_absolute_cap(prec);
    }
    if (!std::regex_match(s, m, digits))
        throw DomainError("malformed coefficient \"" + s + "\"");
    const long v = std::stol(m[1].str());
    const std::string body = m[2].str();
    std::vector<long> ds;
    if (p > 10) {
        if (!body.empty()) {
            std::stringstream ss(body);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                if (tok.empty()) throw DomainError("malformed coefficient \"" + s + "\"");
                ds.push_back(std::stol(tok));
            }
        }
    } else {
        for (char c : body) {
            if (c == ',') throw DomainError("malformed coefficient \"" + s + "\" (no commas for p <= 10)");
            ds.push_back(c - '0');
        }
    }
    for (long d : ds)
        if (d >= p) throw DomainError("digit " + std::to_string(d) + " out of range in \"" + s + "\"");
    if (!ds.empty() && ds.front() == 0)
        throw DomainError("leading unit digit must be nonzero in \"" + s + "\"");
    return PadicNumber::from_digits(p, v, ds);
}

std::string format_coefficient(const PadicNumber& c) {
    if (c.is_exact_zero()) return "0";
    if (c.is_zero()) return std::to_string(c.valuation_lower_bound()) + ":";
    std::string s = std::to_string(*c.valuation()) + ":";
    const auto ds = c.unit_digits();
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (c.prime() > 10 && i > 0) s += ",";
        s += std::to_string(ds[i]);
    }
    return s;
}

Direction parse_direction(long p, const std::string& s, long prec) {
    static const std::regex pattern(R"(\s*(-?\d+)\s*:\s*(-?\d+)\s*)");
    std::smatch m;
    if (!std::regex_match(s, m, pattern))
        throw DomainError("direction \"" + s + "\" is not of the form a:b");
    const mpz_class a(m[1].str()), b(m[2].str());
    if (a == 0 && b == 0) throw DomainError("direction 0:0 is not a point of P^1");
    auto value = [&](const mpz_class& x) {
        return x == 0 ? PadicNumber::zero(p) : PadicNumber::from_integer(p, x, prec);
    };
    return canonical_direction(value(a), value(b));
}

Command parse_command(const std::string& name) {
    if (name == "analyze") return Command::Analyze;
    if (name == "project") return Command::Project;
    if (name == "weierstrass") return Command::Weierstrass;
    if (name == "growth-table") return Command::GrowthTable;
    if (name == "hypotheses") return Command::Hypotheses;
    if (name == "oracle") return Command::Oracle;
    throw DomainError("unknown command \"" + name + "\"");
}

ParsedInput parse_input_text(const std::string& text, const Overrides& overrides) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("input is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw DomainError("input must be an object");
    static const std::set<std::string> known{
        "p",          "coeff_prec",   "degree_bound", "series",     "directions", "height",
        "ac_free_rank", "setting",    "hypotheses",   "flags",      "provenance", "univariate",
        "torsion_ac", "oracle",       "n_max",        "output"};
    for (const auto& [k, v] : root.items())
        if (!known.count(k)) field_error(k, "unknown field");

    ParsedInput in{TwoVarLFunction{PowerSeries2(5, {}), "", {}}, {}};
    AnalysisConfig& cfg = in.config;
    if (!root.contains("p")) field_error("p", "missing");
    if (!root["p"].is_number_integer()) field_error("p", "expected an integer");
    cfg.p = root["p"].get<long>();
    try {
        require_odd_prime(cfg.p);
    } catch (const DomainError& e) {
        field_error("p", e.what());
    }
    cfg.policy.coeff_prec = get_long(root, "coeff_prec", kDefaultPrecision, 1, 2000);
    cfg.policy.degree_bound = get_long(root, "degree_bound", 16, 1, 512);
    if (overrides.precision) cfg.policy.coeff_prec = *overrides.precision;
    if (overrides.degree_bound) cfg.policy.degree_bound = *overrides.degree_bound;
    try {
        cfg.policy.validate();
    } catch (const DomainError& e) {
        field_error("coeff_prec/degree_bound", e.what());
    }
    cfg.n_max = overrides.n_max ? *overrides.n_max : get_long(root, "n_max", kDefaultMaxLevel, 0, 12);
    if (cfg.n_max < 0 || cfg.n_max > 12) field_error("n_max", "must lie in [0, 12]");

    if (root.contains("output")) {
        const auto& o = root["output"];
        if (o == "structured") cfg.output = OutputFormat::Structured;
        else if (o == "table") cfg.output = OutputFormat::Table;
        else field_error("output", "expected \"structured\" or \"table\"");
    }
    if (overrides.output) cfg.output = *overrides.output;

    const long p = cfg.p;
    const long prec = cfg.policy.coeff_prec;
    in.L.series = root.contains("series") ? parse_series2(root["series"], "series", p, cfg.policy)
                                          : PowerSeries2(p, cfg.policy);
    if (root.contains("provenance")) {
        if (!root["provenance"].is_string()) field_error("provenance", "expected a string");
        in.L.provenance = root["provenance"].get<std::string>();
    }
    if (root.contains("flags")) {
        if (!root["flags"].is_array()) field_error("flags", "expected a list");
        for (const auto& f : root["flags"]) {
            if (f == "H_IMC_ASSUMED") in.L.flags.insert(HypothesisFlag::HImcAssumed);
            else if (f == "INTEGRAL") in.L.flags.insert(HypothesisFlag::Integral);
            else field_error("flags", "unknown flag " + f.dump());
        }
    }
    if (in.L.flags.count(HypothesisFlag::Integral) && in.L.series.scale() != 0)
        field_error("series", "flagged INTEGRAL but has negative-valuation coefficients");

    if (root.contains("directions"))
        cfg.directions = parse_directions(root["directions"], "directions", p, prec);
    if (root.contains("height")) cfg.height = parse_height(root["height"], p, prec);
    cfg.ac_free_rank = get_long(root, "ac_free_rank", 1, 0, 1000);

    if (root.contains("setting")) {
        const json& s = root["setting"];
        if (!s.is_object()) field_error("setting", "expected {cm_class, sign}");
        if (s.contains("cm_class")) {
            if (s["cm_class"] == "GENERIC") cfg.setting.cm_class = CmClass::Generic;
            else if (s["cm_class"] == "EXCEPTIONAL") cfg.setting.cm_class = CmClass::Exceptional;
            else field_error("setting.cm_class", "expected GENERIC or EXCEPTIONAL");
        }
        if (s.contains("sign")) {
            if (s["sign"] != 1 && s["sign"] != -1) field_error("setting.sign", "expected +1 or -1");
            cfg.setting.sign = s["sign"].get<int>();
        }
    }
    if (root.contains("hypotheses")) {
        const json& h = root["hypotheses"];
        if (!h.is_object() || !h.contains("N") || !h.contains("D") || !h["N"].is_number_integer() ||
            !h["D"].is_number_integer())
            field_error("hypotheses", "expected {N: integer, D: integer}");
        cfg.hypotheses = std::make_pair(h["N"].get<std::int64_t>(), h["D"].get<std::int64_t>());
    }
    if (root.contains("univariate"))
        cfg.univariate = parse_series1(root["univariate"], "univariate", p, cfg.policy);
    if (root.contains("torsion_ac")) {
        cfg.ac_torsion = parse_series1(root["torsion_ac"], "torsion_ac", p, cfg.policy);
        if (cfg.ac_torsion->scale() != 0) field_error("torsion_ac", "must be integral");
    }
    if (root.contains("oracle")) {
        const json& o = root["oracle"];
        if (!o.is_object() || !o.contains("generators") || !o["generators"].is_array())
            field_error("oracle", "expected {generators, directions, levels}");
        OracleSpec spec;
        for (std::size_t k = 0; k < o["generators"].size(); ++k)
            spec.module.generators.push_back(parse_series2(
                o["generators"][k], "oracle.generators[" + std::to_string(k) + "]", p, cfg.policy));
        try {
            spec.module.validate();
        } catch (const DomainError& e) {
            field_error("oracle.generators", e.what());
        }
        spec.directions = o.contains("directions")
                              ? parse_directions(o["directions"], "oracle.directions", p, prec)
                              : cfg.directions;
        if (spec.directions.empty()) field_error("oracle.directions", "no directions");
        if (o.contains("levels")) {
            if (!o["levels"].is_array()) field_error("oracle.levels", "expected [[m, n], ...]");
            for (const auto& l : o["levels"]) {
                if (!l.is_array() || l.size() != 2 || !l[0].is_number_integer() ||
                    !l[1].is_number_integer())
                    field_error("oracle.levels", "expected [m, n] pairs");
                spec.levels.emplace_back(l[0].get<long>(), l[1].get<long>());
            }
        } else {
            spec.levels = {{2, 0}, {2, 1}, {2, 2}};
        }
        cfg.oracle = std::move(spec);
    }
    return in;
}

ParsedInput parse_input(const std::string& path, const Overrides& overrides) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open input file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_input_text(ss.str(), overrides);
}

int run_command(Command cmd, const ParsedInput& input, std::ostream& out) {
    try {
        switch (cmd) {
            case Command::Analyze: return run_analyze(input, out);
            case Command::Project: return run_project(input, out);
            case Command::Weierstrass: return run_weierstrass(input, out);
            case Command::GrowthTable: return run_growth_table(input, out);
            case Command::Hypotheses: return run_hypotheses(input, out);
            case Command::Oracle: return run_oracle(input, out);
        }
    } catch (const IndeterminateError& e) {
        if (input.config.output == OutputFormat::Table) {
            out << "INDETERMINATE: " << e.what() << "\n";
        } else {
            ordered_json j;
            j["status"] = "INDETERMINATE";
            j["reason"] = e.what();
            emit(out, j);
        }
        return 2;
    }
    return 1;
}

}  // namespace iwasawa::cli
