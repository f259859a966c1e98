#include "qdcav/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace qdcav {

Format parse_format(std::string_view text) {
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    throw std::invalid_argument("format must be csv or json; got '" + std::string(text) + "'");
}

void Table::set(std::string key, std::string value) {
    for (auto& [k, v] : meta) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    meta.emplace_back(std::move(key), std::move(value));
}

void Table::set(std::string key, double value) { set(std::move(key), format_number(value)); }

void Table::set(std::string key, long value) { set(std::move(key), std::to_string(value)); }

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("Table::add_row: row has " + std::to_string(row.size()) + " cells, table has " +
                               std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_cell(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(long v) const { return std::to_string(v); }
        std::string operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, cell);
}

namespace {

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

nlohmann::ordered_json json_cell(const Cell& cell) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(double v) const {
            if (v == 0.0) return 0.0;
            if (std::isfinite(v)) return v;
            return format_number(v);
        }
        nlohmann::ordered_json operator()(long v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, cell);
}

}  // namespace

void write_csv(const Table& table, std::ostream& out) {
    out << "# qdcav " << table.kind << " schema " << kSchemaVersion << '\n';
    for (const auto& [key, value] : table.meta) out << "# " << key << " = " << value << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i != 0) out << ',';
        out << csv_field(table.columns[i]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i != 0) out << ',';
            out << csv_field(format_cell(row[i]));
        }
        out << '\n';
    }
}

void write_json(const Table& table, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["schema"] = "qdcav/" + table.kind;
    doc["version"] = kSchemaVersion;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.meta) meta[key] = value;
    doc["meta"] = std::move(meta);
    doc["columns"] = table.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const auto& cell : row) r.push_back(json_cell(cell));
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(1) << '\n';
}

void write_table(const Table& table, Format format, std::ostream& out) {
    if (format == Format::json) {
        write_json(table, out);
    } else {
        write_csv(table, out);
    }
}

void describe_params(Table& table, const SystemParams& params, Units units) {
    table.set("units", std::string(to_string(units)));
    table.set("g", params.g);
    table.set("kappa", params.kappa);
    table.set("gamma", params.gamma);
    table.set("p", params.p);
    table.set("delta", params.delta);
    table.set("gamma_d", params.gamma_d);
}

void describe_solve(Table& table, const SolveOptions& options, Precision precision) {
    table.set("eps", options.epsilon);
    table.set("tol", options.tol);
    table.set("min_order", options.min_order);
    table.set("margin", options.margin);
    table.set("ladder_method", std::string(options.method == LadderMethod::forward ? "forward" : "backward_ratio"));
    table.set("precision", std::string(to_string(precision)));
}

Table moments_table(const FullMoments& full, long max_n) {
    if (max_n < 0) throw std::invalid_argument("moments_table: max_n must be >= 0");
    const long rows = std::min(max_n, full.br_order());
    Table t;
    t.kind = "moments";
    const auto& ladder = full.ladder;
    t.set("ladder_order", ladder.order());
    t.set("cutoff_N", ladder.cutoff_N);
    t.set("i1_lower", ladder.i1_bracket.lower);
    t.set("i1_upper", ladder.i1_bracket.upper);
    t.set("i1_mismatch", ladder.i1_mismatch);
    t.set("tail_ratio_bound", ladder.tail_ratio_bound);
    t.set("truncated", std::string(ladder.truncated ? "true" : "false"));
    t.set("first_negative", ladder.first_negative);
    t.columns = {"n", "I", "B", "ReR", "ImR"};
    for (long n = 0; n <= rows; ++n) {
        const auto k = static_cast<std::size_t>(n);
        t.add_row({n, full.i_moments()[k], full.b_moments[k], full.r_moments[k].real(), full.r_moments[k].imag()});
    }
    return t;
}

Table criteria_table(const CriteriaReport& report) {
    Table t;
    t.kind = "criteria";
    t.set("points", static_cast<long>(report.p_grid.size()));
    t.set("failed_points", report.failed_points);
    t.columns = {"p", "order", "criterion", "value", "flag", "note"};
    for (const auto& row : report.rows) {
        t.add_row({row.p, row.order, std::string(to_string(row.criterion)), row.value,
                   std::string(to_string(row.verdict)), row.note});
    }
    return t;
}

Table charfn_table(const CharFnProfile& profile) {
    Table t;
    t.kind = "charfn";
    t.set("xi", profile.xi);
    t.set("n_trunc", profile.n_trunc);
    t.set("n_split", profile.n_split);
    t.set("i_n_split", profile.i_n_split);
    const PhiNonclassicality verdict = nonclassicality_by_phi(profile);
    t.set("verdict_sampled", std::string(to_string(verdict.sampled)));
    t.set("verdict_asymptotic", std::string(to_string(verdict.asymptotic)));
    t.set("first_alpha_exceeding_one", verdict.first_alpha);
    t.columns = {"alpha", "phi", "tail_bound", "rounding_bound", "max_term", "precision_bits", "exceeds_one", "envelope"};
    for (std::size_t i = 0; i < profile.alpha_grid.size(); ++i) {
        t.add_row({profile.alpha_grid[i], profile.phi[i], profile.tail_bound[i], profile.rounding_bound[i],
                   profile.max_term[i], static_cast<long>(profile.precision_bits[i]),
                   static_cast<long>(profile.exceeds_one[i]), profile.envelope[i]});
    }
    return t;
}

Table benchmark_table(const BenchmarkReport& report) {
    Table t;
    t.kind = "benchmark";
    for (std::size_t i = 0; i < report.notices.size(); ++i) t.set("notice_" + std::to_string(i), report.notices[i]);
    t.columns = {"solver", "size", "wall_ns", "fitted_slope"};
    for (const auto& row : report.rows) {
        const double slope = row.solver == "recurrence" ? report.recurrence_slope : report.dense_slope;
        t.add_row({row.solver, row.size, row.wall_ns, slope});
    }
    return t;
}

}  // namespace qdcav
