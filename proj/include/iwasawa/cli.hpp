#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iwasawa/growth.hpp"
#include "iwasawa/module_homology.hpp"

namespace iwasawa::cli {

enum class OutputFormat { Structured, Table };

struct OracleSpec {
    CyclicModulePresentation module;
    std::vector<Direction> directions;
    std::vector<std::pair<long, long>> levels;  // (m, n)
};

struct AnalysisConfig {
    long p = 0;
    PrecisionPolicy policy;
    std::vector<Direction> directions;
    HeightValue height;
    long ac_free_rank = 1;
    MazurSetting setting;
    std::optional<std::pair<std::int64_t, std::int64_t>> hypotheses;  // (N, D)
    OutputFormat output = OutputFormat::Structured;
    long n_max = kDefaultMaxLevel;
    std::optional<PowerSeries1> univariate;
    std::optional<PowerSeries1> ac_torsion;
    std::optional<OracleSpec> oracle;
};

/// Command-line values that win over the file.
struct Overrides {
    std::optional<long> precision;
    std::optional<long> degree_bound;
    std::optional<long> n_max;
    std::optional<OutputFormat> output;
};

struct ParsedInput {
    TwoVarLFunction L;
    AnalysisConfig config;
};

ParsedInput parse_input(const std::string& path, const Overrides& overrides = {});
ParsedInput parse_input_text(const std::string& text, const Overrides& overrides = {});

/// Base-10 integer reduced mod p^prec, or "v:digits" with little-endian
/// base-p digits of the unit (comma separated when p > 10); "v:" alone is O(p^v).
PadicNumber parse_coefficient(long p, const std::string& s, long prec);
/// Inverse of parse_coefficient on everything except the exact zero.
std::string format_coefficient(const PadicNumber& c);

Direction parse_direction(long p, const std::string& s, long prec);

enum class Command { Analyze, Project, Weierstrass, GrowthTable, Hypotheses, Oracle };

Command parse_command(const std::string& name);

/// 0: fully certified, 2: some verdict indeterminate or not concluded.
int run_command(Command cmd, const ParsedInput& input, std::ostream& out);

}  // namespace iwasawa::cli
