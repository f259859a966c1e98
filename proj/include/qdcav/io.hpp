// io.hpp — tabular output with a self-describing header
//
// Every table carries its kind, a schema version and the full list of
// settings that produced it. CSV output starts with `# ` comment lines
// (schema line first, then one `key = value` line per setting in insertion
// order), then the column line. JSON output holds the same data as an object
// with keys schema, version, meta, columns, rows. Numbers are written in the
// shortest form that round-trips, so identical inputs give identical bytes.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qdcav/charfunc.hpp"
#include "qdcav/criteria.hpp"
#include "qdcav/moments.hpp"
#include "qdcav/oracle.hpp"

namespace qdcav {

inline constexpr int kSchemaVersion = 1;

enum class Format { csv, json };
Format parse_format(std::string_view text);

// Empty cells (std::monostate) mark values that do not apply to a row.
using Cell = std::variant<std::monostate, double, long, std::string>;

struct Table {
    std::string kind;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void set(std::string key, std::string value);
    void set(std::string key, double value);
    void set(std::string key, long value);
    void add_row(std::vector<Cell> row);
};

std::string format_number(double value);
std::string format_cell(const Cell& cell);

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);
void write_table(const Table& table, Format format, std::ostream& out);

// Header lines shared by all parameter-driven tables.
void describe_params(Table& table, const SystemParams& params, Units units);
void describe_solve(Table& table, const SolveOptions& options, Precision precision);

// Rows n = 0..max_n: n, I, B, ReR, ImR. Meta records the ladder diagnostics.
Table moments_table(const FullMoments& full, long max_n);

// Columns p, order, criterion, value, flag, note.
Table criteria_table(const CriteriaReport& report);

// Columns alpha, phi, tail_bound, rounding_bound, max_term, precision_bits,
// exceeds_one, envelope.
Table charfn_table(const CharFnProfile& profile);

// Columns solver, size, wall_ns, fitted_slope.
Table benchmark_table(const BenchmarkReport& report);

}  // namespace qdcav
