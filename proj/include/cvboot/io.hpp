#pragma once

// CSV ingestion (RFC 4180 quoting, header row required) and JSON/CSV
// serialization of reports.

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "cvboot/core.hpp"
#include "cvboot/engine.hpp"
#include "cvboot/metrics.hpp"
#include "cvboot/sim.hpp"

namespace cvboot {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Parses CSV text: comma separated, double-quoted fields may contain commas,
/// newlines and doubled quotes; LF or CRLF line ends; a UTF-8 BOM is skipped.
inline CsvTable parse_csv(std::istream& in)
{
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.rfind("\xEF\xBB\xBF", 0) == 0)
        text.erase(0, 3);
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    Index line = 1;
    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        if (!(record.size() == 1 && record[0].empty()))
            records.push_back(std::move(record));
        record.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n')
                    ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field_started && !field.empty())
                fail(ErrorCode::Io, "stray quote inside an unquoted field on line ", line);
            quoted = true;
            field_started = true;
            break;
        case ',': end_field(); break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n')
                break;
            [[fallthrough]];
        case '\n':
            end_record();
            ++line;
            break;
        default:
            field += c;
            field_started = true;
        }
    }
    if (quoted)
        fail(ErrorCode::Io, "unterminated quoted field at end of input");
    if (field_started || !field.empty() || !record.empty())
        end_record();
    if (records.empty())
        fail(ErrorCode::Io, "CSV input has no header row");
    CsvTable table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size())
            fail(ErrorCode::Io, "record ", r, " has ", records[r].size(), " fields, header has ", table.header.size());
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

struct ColumnSelection {
    std::string outcome;
    std::optional<std::string> treatment;
    std::vector<std::string> features; // empty: every other column
    std::optional<std::string> id;
    OutcomeKind kind = OutcomeKind::continuous;
};

struct IngestResult {
    Dataset data;
    std::vector<std::string> feature_names;
    Index dropped_count = 0;
};

namespace detail {

inline std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

inline bool is_missing_token(const std::string& s)
{
    return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan" || s == "?" || s == "." || s == "null";
}

inline std::optional<double> parse_number(const std::string& s)
{
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        return std::nullopt;
    return v;
}

} // namespace detail

/// Builds a Dataset from selected columns. Rows with a missing value (empty,
/// NA, NaN, ?, ., null) in any selected column are dropped and counted; any
/// other non-numeric cell is an error naming its row and column.
inline IngestResult ingest_table(const CsvTable& table, const ColumnSelection& sel)
{
    std::unordered_map<std::string, Index> index;
    for (Index c = 0; c < table.header.size(); ++c)
        index.emplace(detail::trim(table.header[c]), c);
    auto locate = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end())
            fail(ErrorCode::MissingColumn, "column '", name, "' not found in header");
        return it->second;
    };
    const Index y_col = locate(sel.outcome);
    std::optional<Index> g_col;
    if (sel.treatment)
        g_col = locate(*sel.treatment);
    std::optional<Index> id_col;
    if (sel.id)
        id_col = locate(*sel.id);

    IngestResult out;
    std::vector<Index> x_cols;
    if (sel.features.empty()) {
        for (Index c = 0; c < table.header.size(); ++c)
            if (c != y_col && (!g_col || c != *g_col) && (!id_col || c != *id_col)) {
                x_cols.push_back(c);
                out.feature_names.push_back(detail::trim(table.header[c]));
            }
    } else {
        for (const auto& f : sel.features) {
            const Index c = locate(f);
            if (c == y_col || (g_col && c == *g_col))
                fail(ErrorCode::InvalidArgument, "column '", f, "' is selected both as a feature and as outcome/treatment");
            x_cols.push_back(c);
            out.feature_names.push_back(f);
        }
    }
    if (g_col && *g_col == y_col)
        fail(ErrorCode::InvalidArgument, "outcome and treatment must be different columns");
    if (x_cols.empty())
        fail(ErrorCode::InvalidArgument, "no feature columns selected");

    std::vector<Index> selected = x_cols;
    selected.push_back(y_col);
    if (g_col)
        selected.push_back(*g_col);

    std::vector<std::vector<double>> kept;
    std::vector<std::string> ids;
    for (Index r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        std::vector<double> values;
        bool missing = false;
        for (Index c : selected) {
            const std::string cell = detail::trim(row[c]);
            if (detail::is_missing_token(cell)) {
                missing = true;
                break;
            }
            auto v = detail::parse_number(cell);
            if (!v)
                fail(ErrorCode::NonNumericCell, "row ", r + 1, ", column '", detail::trim(table.header[c]),
                     "': cannot parse '", cell, "'");
            values.push_back(*v);
        }
        if (missing) {
            ++out.dropped_count;
            continue;
        }
        kept.push_back(std::move(values));
        ids.push_back(id_col ? row[*id_col] : std::to_string(r + 1));
    }
    if (kept.size() < 2)
        fail(ErrorCode::EmptyAfterFiltering, kept.size(), " rows left after dropping ", out.dropped_count,
             " rows with missing values");

    Dataset d;
    const auto n = static_cast<Eigen::Index>(kept.size());
    const auto p = static_cast<Eigen::Index>(x_cols.size());
    d.features.resize(n, p);
    d.outcome.resize(n);
    if (g_col)
        d.treatment = Eigen::VectorXd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& v = kept[static_cast<Index>(i)];
        for (Eigen::Index j = 0; j < p; ++j)
            d.features(i, j) = v[static_cast<Index>(j)];
        d.outcome[i] = v[static_cast<Index>(p)];
        if (g_col)
            (*d.treatment)[i] = v[static_cast<Index>(p) + 1];
    }
    d.ids = std::move(ids);
    d.kind = sel.kind;
    out.data = validate(std::move(d));
    return out;
}

inline IngestResult ingest_csv(const std::string& path, const ColumnSelection& sel)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::Io, "cannot open '", path, "'");
    return ingest_table(parse_csv(in), sel);
}

/// Writes a dataset as CSV with columns z1..zp, [g,] y.
inline void write_csv(std::ostream& out, const Dataset& d)
{
    out << std::setprecision(17);
    for (Index j = 0; j < d.p(); ++j)
        out << 'z' << j + 1 << ',';
    if (d.has_treatment())
        out << "g,";
    out << "y\n";
    for (Index i = 0; i < d.n(); ++i) {
        for (Index j = 0; j < d.p(); ++j)
            out << d.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) << ',';
        if (d.has_treatment())
            out << d.g(i) << ',';
        out << d.y(i) << '\n';
    }
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

using Json = nlohmann::ordered_json;

inline Json to_json(const Interval& iv) { return Json{{"lo", iv.lo}, {"hi", iv.hi}}; }

inline Json to_json(const InferenceReport& r)
{
    Json j;
    j["point"] = r.point;
    j["se"] = r.se;
    j["se_adj"] = r.se_adj;
    j["alpha"] = r.alpha;
    j["z_crit"] = r.z_crit;
    j["ci_normal"] = to_json(r.ci_normal);
    j["ci_adj"] = to_json(r.ci_adj);
    if (r.c_crit) {
        j["c_crit"] = *r.c_crit;
        j["ci_calibrated"] = to_json(*r.ci_calibrated);
        j["ci_calibrated_adj"] = to_json(*r.ci_calibrated_adj);
    }
    j["n"] = r.n;
    j["m"] = r.m;
    j["m_adj"] = r.m_adj;
    j["b_boot"] = r.b_boot;
    j["b_cv"] = r.b_cv;
    j["b_cv_point"] = r.b_cv_point;
    j["components"] = Json{{"sigma_bt_sq", r.components.sigma_bt_sq},
                           {"tau0_sq", r.components.tau0_sq},
                           {"sigma_bt_sq_raw", r.components.sigma_bt_sq_raw},
                           {"adj_factor", r.components.adj_factor}};
    j["sigma_clamped"] = r.sigma_clamped;
    j["fits"] = Json{{"point", r.fits.point},
                     {"bootstrap", r.fits.bootstrap},
                     {"redraws", r.fits.redraws},
                     {"total", r.fits.total()}};
    j["missing_cells"] = r.missing_cells;
    j["dropped_rows"] = r.dropped_rows;
    return j;
}

/// Flat one-row table of the interval fields.
inline std::string to_csv(const InferenceReport& r)
{
    std::ostringstream os;
    os << std::setprecision(10);
    os << "point,se,se_adj,ci_lo,ci_hi,ci_adj_lo,ci_adj_hi,ci_cal_lo,ci_cal_hi,ci_cal_adj_lo,ci_cal_adj_hi,"
          "m,m_adj,n,b_boot,b_cv,fits_used\n";
    os << r.point << ',' << r.se << ',' << r.se_adj << ',' << r.ci_normal.lo << ',' << r.ci_normal.hi << ','
       << r.ci_adj.lo << ',' << r.ci_adj.hi << ',';
    if (r.ci_calibrated)
        os << r.ci_calibrated->lo << ',' << r.ci_calibrated->hi << ',' << r.ci_calibrated_adj->lo << ','
           << r.ci_calibrated_adj->hi << ',';
    else
        os << ",,,,";
    os << r.m << ',' << r.m_adj << ',' << r.n << ',' << r.b_boot << ',' << r.b_cv << ',' << r.fits_used << '\n';
    return os.str();
}

/// Curve rows (grid, value, se, ci_lo, ci_hi).
inline Json to_json(const PrevalidationResult& r)
{
    Json rows = Json::array();
    for (Index g = 0; g < r.curve.grid.size(); ++g) {
        Json row{{"grid", r.curve.grid[g]}, {"value", r.curve.sensitivity[g]}};
        if (!r.se.empty()) {
            row["se"] = r.se[g];
            row["ci_lo"] = r.ci[g].lo;
            row["ci_hi"] = r.ci[g].hi;
        }
        rows.push_back(row);
    }
    Json j;
    j["curve"] = rows;
    j["auc"] = r.curve.auc;
    j["auc_exact"] = r.curve.auc_exact;
    if (r.auc_ci) {
        j["auc_se"] = r.auc_se;
        j["auc_ci"] = to_json(*r.auc_ci);
        j["k_adj"] = r.k_adj;
    }
    j["fits"] = r.fits;
    j["redraws"] = r.redraws;
    return j;
}

inline std::string to_csv(const PrevalidationResult& r)
{
    std::ostringstream os;
    os << std::setprecision(10) << "grid,value,se,ci_lo,ci_hi\n";
    for (Index g = 0; g < r.curve.grid.size(); ++g) {
        os << r.curve.grid[g] << ',' << r.curve.sensitivity[g] << ',';
        if (!r.se.empty())
            os << r.se[g] << ',' << r.ci[g].lo << ',' << r.ci[g].hi;
        else
            os << ",,";
        os << '\n';
    }
    return os.str();
}

inline Json to_json(const Rate& r) { return Json{{"rate", r.value}, {"mc_se", r.mc_se}, {"n", r.count}}; }

inline Json to_json(const CoverageRow& row)
{
    Json j{{"m", row.m},
           {"truth", row.truth},
           {"sims", row.sims},
           {"failed", row.failed},
           {"mean", row.mean},
           {"bias", row.bias},
           {"sd", row.sd},
           {"mean_se", row.mean_se},
           {"mean_se_adj", row.mean_se_adj},
           {"median_width", row.median_width},
           {"coverage", to_json(row.coverage)},
           {"coverage_adj", to_json(row.coverage_adj)}};
    if (row.coverage_cal) {
        j["coverage_cal"] = to_json(*row.coverage_cal);
        j["coverage_cal_adj"] = to_json(*row.coverage_cal_adj);
        j["median_width_cal"] = row.median_width_cal;
    }
    if (row.coverage_dn_adj)
        j["coverage_dn_adj"] = to_json(*row.coverage_dn_adj);
    return j;
}

inline std::string to_csv(const std::vector<CoverageRow>& rows)
{
    std::ostringstream os;
    os << std::setprecision(10)
       << "m,truth,sims,failed,mean,bias,sd,mean_se,mean_se_adj,coverage,coverage_mc_se,coverage_adj,"
          "coverage_adj_mc_se,coverage_cal,coverage_cal_mc_se,coverage_cal_adj,coverage_cal_adj_mc_se\n";
    for (const auto& r : rows) {
        os << r.m << ',' << r.truth << ',' << r.sims << ',' << r.failed << ',' << r.mean << ',' << r.bias << ','
           << r.sd << ',' << r.mean_se << ',' << r.mean_se_adj << ',' << r.coverage.value << ','
           << r.coverage.mc_se << ',' << r.coverage_adj.value << ',' << r.coverage_adj.mc_se << ',';
        if (r.coverage_cal)
            os << r.coverage_cal->value << ',' << r.coverage_cal->mc_se << ',' << r.coverage_cal_adj->value << ','
               << r.coverage_cal_adj->mc_se;
        else
            os << ",,,";
        os << '\n';
    }
    return os.str();
}

} // namespace cvboot
