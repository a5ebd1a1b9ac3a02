#include "tuberegress/kernel.hpp"

#include <cmath>

#include "tuberegress/errors.hpp"

namespace tuberegress {

std::string gamma_spec_name(const GammaSpec& g) {
    switch (g.mode) {
        case GammaSpec::Mode::scale: return "scale";
        case GammaSpec::Mode::auto_mode: return "auto";
        case GammaSpec::Mode::fixed: return std::to_string(g.value);
    }
    return "?";
}

GammaSpec gamma_spec_from_name(const std::string& s) {
    if (s == "scale") return GammaSpec::scale();
    if (s == "auto") return GammaSpec::auto_mode();
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size() && v > 0.0) return GammaSpec::fixed(v);
    } catch (const std::exception&) {
    }
    throw ConfigError(Errc::config_invalid, "gamma must be 'scale', 'auto' or a positive number, got '" + s + "'");
}

std::string kernel_kind_name(KernelSpec::Kind k) {
    switch (k) {
        case KernelSpec::Kind::rbf: return "rbf";
        case KernelSpec::Kind::linear: return "linear";
        case KernelSpec::Kind::poly: return "poly";
    }
    return "?";
}

KernelSpec::Kind kernel_kind_from_name(const std::string& s) {
    if (s == "rbf") return KernelSpec::Kind::rbf;
    if (s == "linear") return KernelSpec::Kind::linear;
    if (s == "poly") return KernelSpec::Kind::poly;
    throw ConfigError(Errc::config_invalid, "kernel must be rbf|linear|poly, got '" + s + "'");
}

double resolve_gamma(const KernelSpec& spec, const Matrix& X) {
    switch (spec.gamma.mode) {
        case GammaSpec::Mode::fixed:
            return spec.gamma.value;
        case GammaSpec::Mode::auto_mode:
            return 1.0 / static_cast<double>(X.cols);
        case GammaSpec::Mode::scale: {
            // population variance of the flattened matrix
            const size_t total = X.data.size();
            double mean = 0.0;
            for (double v : X.data) mean += v;
            mean /= static_cast<double>(total);
            double var = 0.0;
            for (double v : X.data) var += (v - mean) * (v - mean);
            var /= static_cast<double>(total);
            if (var == 0.0) {
                throw DataError(Errc::zero_variance, "ZeroVariance: gamma 'scale' undefined on constant X");
            }
            return 1.0 / (static_cast<double>(X.cols) * var);
        }
    }
    return 1.0;
}

ResolvedKernel resolve_kernel(const KernelSpec& spec, const Matrix& X) {
    ResolvedKernel r;
    r.kind = spec.kind;
    r.gamma = resolve_gamma(spec, X);
    r.coef0 = spec.coef0;
    r.degree = spec.degree;
    return r;
}

double kernel_eval(const ResolvedKernel& k, std::span<const double> x, std::span<const double> x2) {
    if (x.size() != x2.size()) {
        throw DataError(Errc::dimension_mismatch,
                        "DimensionMismatch: " + std::to_string(x.size()) + " vs " + std::to_string(x2.size()));
    }
    switch (k.kind) {
        case KernelSpec::Kind::rbf: {
            double d2 = 0.0;
            for (size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - x2[i];
                d2 += d * d;
            }
            return std::exp(-k.gamma * d2);
        }
        case KernelSpec::Kind::linear: {
            double dot = 0.0;
            for (size_t i = 0; i < x.size(); ++i) dot += x[i] * x2[i];
            return dot;
        }
        case KernelSpec::Kind::poly: {
            double dot = 0.0;
            for (size_t i = 0; i < x.size(); ++i) dot += x[i] * x2[i];
            double base = k.gamma * dot + k.coef0;
            double out = 1.0;
            for (int p = 0; p < k.degree; ++p) out *= base;
            return out;
        }
    }
    return 0.0;
}

std::shared_ptr<const std::vector<double>> KernelCache::row(size_t i, const Matrix& X,
                                                            const ResolvedKernel& k) {
    auto found = by_index_.find(i);
    if (found != by_index_.end()) {
        ++hits_;
        lru_.splice(lru_.begin(), lru_, found->second);
        return lru_.front().values;
    }

    ++misses_;
    auto values = std::make_shared<std::vector<double>>(X.rows);
    auto xi = X.row(i);
    for (size_t j = 0; j < X.rows; ++j) {
        (*values)[j] = kernel_eval(k, xi, X.row(j));
    }

    const size_t row_bytes = X.rows * sizeof(double);
    while (!lru_.empty() && resident_bytes_ + row_bytes > capacity_bytes_) {
        by_index_.erase(lru_.back().index);
        resident_bytes_ -= lru_.back().values->size() * sizeof(double);
        lru_.pop_back();
        ++evictions_;
    }
    if (row_bytes <= capacity_bytes_) {
        lru_.push_front(Entry{i, values});
        by_index_[i] = lru_.begin();
        resident_bytes_ += row_bytes;
    }
    return values;
}

Matrix kernel_matrix(const Matrix& X, const ResolvedKernel& k) {
    Matrix K(X.rows, X.rows);
    for (size_t i = 0; i < X.rows; ++i) {
        K.at(i, i) = kernel_eval(k, X.row(i), X.row(i));
        for (size_t j = i + 1; j < X.rows; ++j) {
            const double v = kernel_eval(k, X.row(i), X.row(j));
            K.at(i, j) = v;
            K.at(j, i) = v;
        }
    }
    return K;
}

} // namespace tuberegress
