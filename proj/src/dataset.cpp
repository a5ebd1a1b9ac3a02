#include "tuberegress/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "tuberegress/errors.hpp"
#include "tuberegress/rng.hpp"

namespace tuberegress {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(std::string_view(line).substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

bool parse_finite_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out, std::chars_format::general);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

} // namespace

bool Dataset::has_column(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

size_t Dataset::column_index(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw DataError(Errc::unknown_feature, "UnknownFeature: no column named '" + name + "'");
    }
    return static_cast<size_t>(it - columns.begin());
}

Dataset Dataset::take_rows(std::span<const size_t> idx) const {
    Dataset out;
    out.columns = columns;
    out.target_name = target_name;
    out.provenance = provenance;
    out.X = X.take_rows(idx);
    out.y.resize(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) out.y[i] = y[idx[i]];
    return out;
}

double quantile_sorted(std::span<const double> sorted_values, double q) {
    const size_t n = sorted_values.size();
    if (n == 1) return sorted_values[0];
    const double h = static_cast<double>(n - 1) * q;
    const size_t lo = static_cast<size_t>(h);
    if (lo + 1 >= n) return sorted_values[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

double population_mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double population_std(std::span<const double> v) {
    const double mu = population_mean(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    const double ma = population_mean(a);
    const double mb = population_mean(b);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0) return 0.0;
    return cov / std::sqrt(va * vb);
}

Dataset load_csv(const std::string& path, const std::string& target_column) {
    std::ifstream file(path);
    if (!file.is_open()) {
        throw DataError(Errc::io_error, "cannot open CSV file: " + path);
    }

    std::string line;
    if (!std::getline(file, line)) {
        throw DataError(Errc::parse_error, "ParseError: empty file: " + path);
    }
    // strip UTF-8 BOM if present
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const std::vector<std::string> header = split_line(line);
    if (header.empty() || header[0].empty()) {
        throw DataError(Errc::parse_error, "ParseError: missing header row in " + path);
    }
    {
        std::unordered_set<std::string> seen;
        for (const auto& name : header) {
            if (!seen.insert(name).second) {
                throw DataError(Errc::parse_error, "ParseError: duplicate column name '" + name + "'");
            }
        }
    }

    auto target_it = std::find(header.begin(), header.end(), target_column);
    if (target_it == header.end()) {
        throw DataError(Errc::unknown_target, "UnknownTarget: column '" + target_column + "' not in header");
    }
    const size_t target_idx = static_cast<size_t>(target_it - header.begin());
    const size_t n_fields = header.size();

    std::vector<double> flat;
    std::vector<double> targets;
    size_t data_row = 0;
    while (std::getline(file, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        ++data_row;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != n_fields) {
            throw DataError(Errc::parse_error,
                            "ParseError: row " + std::to_string(data_row) + " has " +
                                std::to_string(cells.size()) + " cells, expected " + std::to_string(n_fields));
        }
        for (size_t c = 0; c < n_fields; ++c) {
            if (cells[c].empty()) {
                throw DataError(Errc::missing_value,
                                "MissingValue: row " + std::to_string(data_row) + ", column " +
                                    std::to_string(c + 1) + " (" + header[c] + ")");
            }
            double v;
            if (!parse_finite_double(cells[c], v)) {
                throw DataError(Errc::parse_error,
                                "ParseError: row " + std::to_string(data_row) + ", column " +
                                    std::to_string(c + 1) + " (" + header[c] + "): '" + cells[c] + "'");
            }
            if (c == target_idx) {
                targets.push_back(v);
            } else {
                flat.push_back(v);
            }
        }
    }

    if (data_row == 0) {
        throw DataError(Errc::parse_error, "ParseError: no data rows in " + path);
    }

    const size_t d = n_fields - 1;
    if (d == 0) {
        throw DataError(Errc::parse_error, "ParseError: no feature columns besides the target");
    }

    // duplicate-row detection: exact bitwise equality over all columns
    {
        std::unordered_map<std::string, size_t> seen;
        seen.reserve(data_row * 2);
        std::string key;
        key.resize((d + 1) * sizeof(double));
        std::vector<size_t> dup_pairs;
        for (size_t i = 0; i < data_row; ++i) {
            std::memcpy(key.data(), flat.data() + i * d, d * sizeof(double));
            std::memcpy(key.data() + d * sizeof(double), &targets[i], sizeof(double));
            auto [it, inserted] = seen.emplace(key, i);
            if (!inserted) {
                dup_pairs.push_back(it->second);
                dup_pairs.push_back(i);
            }
        }
        if (!dup_pairs.empty()) {
            std::ostringstream msg;
            msg << "DuplicateRows:";
            for (size_t i = 0; i + 1 < dup_pairs.size() && i < 10; i += 2) {
                msg << " (" << dup_pairs[i] + 1 << "," << dup_pairs[i + 1] + 1 << ")";
            }
            throw DataError(Errc::duplicate_rows, msg.str());
        }
    }

    Dataset ds;
    ds.columns.reserve(d);
    for (size_t c = 0; c < n_fields; ++c) {
        if (c != target_idx) ds.columns.push_back(header[c]);
    }
    ds.X.rows = data_row;
    ds.X.cols = d;
    ds.X.data = std::move(flat);
    ds.y = std::move(targets);
    ds.target_name = target_column;
    ds.provenance = "loaded from " + path;
    return ds;
}

namespace {

ColumnSummary summarize_column(const std::string& name, std::vector<double> v) {
    ColumnSummary s;
    s.name = name;
    s.mean = population_mean(v);
    s.stddev = population_std(v);
    std::sort(v.begin(), v.end());
    s.min = v.front();
    s.max = v.back();
    s.q1 = quantile_sorted(v, 0.25);
    s.median = quantile_sorted(v, 0.5);
    s.q3 = quantile_sorted(v, 0.75);
    return s;
}

} // namespace

SummaryStats summary_stats(const Dataset& ds) {
    SummaryStats out;
    out.columns.reserve(ds.n_cols() + 1);
    for (size_t j = 0; j < ds.n_cols(); ++j) {
        out.columns.push_back(summarize_column(ds.columns[j], ds.column_copy(j)));
    }
    out.columns.push_back(summarize_column(ds.target_name, ds.y));
    return out;
}

Matrix correlation_matrix(const Dataset& ds, bool include_target) {
    const size_t d = ds.n_cols() + (include_target ? 1 : 0);
    std::vector<std::vector<double>> cols(d);
    for (size_t j = 0; j < ds.n_cols(); ++j) cols[j] = ds.column_copy(j);
    if (include_target) cols[d - 1] = ds.y;

    const size_t n = ds.n_rows();
    std::vector<double> means(d), stds(d);
    for (size_t j = 0; j < d; ++j) {
        means[j] = population_mean(cols[j]);
        stds[j] = population_std(cols[j]);
    }

    Matrix r(d, d, 0.0);
    for (size_t a = 0; a < d; ++a) {
        r.at(a, a) = 1.0;
        for (size_t b = a + 1; b < d; ++b) {
            double v = 0.0;
            if (stds[a] > 0.0 && stds[b] > 0.0) {
                double cov = 0.0;
                for (size_t i = 0; i < n; ++i) {
                    cov += (cols[a][i] - means[a]) * (cols[b][i] - means[b]);
                }
                cov /= static_cast<double>(n);
                v = cov / (stds[a] * stds[b]);
            }
            r.at(a, b) = v;
            r.at(b, a) = v;
        }
    }
    return r;
}

SplitPair stratified_split(const Dataset& ds, double test_fraction, size_t n_bins, uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError(Errc::config_invalid, "test_fraction must be in (0,1)");
    }
    if (n_bins < 2) {
        throw ConfigError(Errc::config_invalid, "n_bins must be >= 2");
    }
    const size_t n = ds.n_rows();

    // bin edges at target quantiles i/n_bins, right-closed intervals
    std::vector<double> sorted_y = ds.y;
    std::sort(sorted_y.begin(), sorted_y.end());
    std::vector<double> edges(n_bins - 1);
    for (size_t i = 1; i < n_bins; ++i) {
        edges[i - 1] = quantile_sorted(sorted_y, static_cast<double>(i) / static_cast<double>(n_bins));
    }

    std::vector<std::vector<size_t>> bins(n_bins);
    for (size_t i = 0; i < n; ++i) {
        size_t b = n_bins - 1;
        for (size_t e = 0; e < edges.size(); ++e) {
            if (ds.y[i] <= edges[e]) {
                b = e;
                break;
            }
        }
        bins[b].push_back(i);
    }
    for (size_t b = 0; b < n_bins; ++b) {
        if (bins[b].size() < 2) {
            throw DataError(Errc::bin_too_small,
                            "BinTooSmall: bin " + std::to_string(b) + " has " +
                                std::to_string(bins[b].size()) + " rows");
        }
    }

    // per-bin test counts by largest remainder, exact total
    const size_t total_test = static_cast<size_t>(std::llround(test_fraction * static_cast<double>(n)));
    std::vector<size_t> take(n_bins);
    std::vector<std::pair<double, size_t>> remainders(n_bins);
    size_t assigned = 0;
    for (size_t b = 0; b < n_bins; ++b) {
        const double exact = test_fraction * static_cast<double>(bins[b].size());
        take[b] = static_cast<size_t>(exact);
        assigned += take[b];
        remainders[b] = {exact - static_cast<double>(take[b]), b};
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (size_t i = 0; assigned < total_test && i < n_bins; ++i) {
        const size_t b = remainders[i].second;
        if (take[b] < bins[b].size()) {
            ++take[b];
            ++assigned;
        }
    }

    Rng rng(seed);
    std::vector<size_t> test_idx, train_idx;
    test_idx.reserve(total_test);
    train_idx.reserve(n - total_test);
    for (size_t b = 0; b < n_bins; ++b) {
        rng.shuffle(bins[b]);
        for (size_t i = 0; i < bins[b].size(); ++i) {
            (i < take[b] ? test_idx : train_idx).push_back(bins[b][i]);
        }
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    SplitPair sp;
    sp.train = ds.take_rows(train_idx);
    sp.test = ds.take_rows(test_idx);
    sp.train.provenance = ds.provenance + "; stratified train split";
    sp.test.provenance = ds.provenance + "; stratified test split";
    sp.train_indices = std::move(train_idx);
    sp.test_indices = std::move(test_idx);
    sp.test_fraction = test_fraction;
    sp.n_bins = n_bins;
    sp.seed = seed;
    return sp;
}

std::vector<size_t> sample_subset_indices(size_t n_rows, size_t n, uint64_t seed) {
    if (n == 0 || n > n_rows) {
        throw DataError(Errc::subset_too_large,
                        "SubsetTooLarge: requested " + std::to_string(n) + " of " + std::to_string(n_rows));
    }
    std::vector<size_t> idx(n_rows);
    std::iota(idx.begin(), idx.end(), size_t{0});
    Rng rng(seed);
    rng.partial_shuffle(idx, n);
    idx.resize(n);
    return idx;
}

Dataset sample_subset(const Dataset& ds, size_t n, uint64_t seed) {
    const std::vector<size_t> idx = sample_subset_indices(ds.n_rows(), n, seed);
    Dataset out = ds.take_rows(idx);
    out.provenance = ds.provenance + "; subset n=" + std::to_string(n);
    return out;
}

} // namespace tuberegress
