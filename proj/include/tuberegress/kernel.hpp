#pragma once

#include <list>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tuberegress/matrix.hpp"

namespace tuberegress {

struct GammaSpec {
    enum class Mode { scale, auto_mode, fixed };
    Mode mode = Mode::scale;
    double value = 0.0; // only for fixed

    static GammaSpec scale() { return {Mode::scale, 0.0}; }
    static GammaSpec auto_mode() { return {Mode::auto_mode, 0.0}; }
    static GammaSpec fixed(double g) { return {Mode::fixed, g}; }

    bool operator==(const GammaSpec&) const = default;
};

std::string gamma_spec_name(const GammaSpec& g);
GammaSpec gamma_spec_from_name(const std::string& s);

struct KernelSpec {
    enum class Kind { rbf, linear, poly };
    Kind kind = Kind::rbf;
    GammaSpec gamma;
    double coef0 = 0.0;
    int degree = 3;

    bool operator==(const KernelSpec&) const = default;
};

std::string kernel_kind_name(KernelSpec::Kind k);
KernelSpec::Kind kernel_kind_from_name(const std::string& s);

// KernelSpec with gamma resolved to a number; what the evaluators consume.
struct ResolvedKernel {
    KernelSpec::Kind kind = KernelSpec::Kind::rbf;
    double gamma = 1.0;
    double coef0 = 0.0;
    int degree = 3;
};

// gamma 'scale' = 1 / (n_features * population variance of all entries of X),
// 'auto' = 1 / n_features.
double resolve_gamma(const KernelSpec& spec, const Matrix& X);
ResolvedKernel resolve_kernel(const KernelSpec& spec, const Matrix& X);

double kernel_eval(const ResolvedKernel& k, std::span<const double> x, std::span<const double> x2);

// Bounded LRU cache of whole kernel rows keyed by training row index.
// Single-writer: the SMO solver owns its cache exclusively.
class KernelCache {
public:
    explicit KernelCache(size_t capacity_bytes) : capacity_bytes_(capacity_bytes) {}

    // Row [K(x_i, x_j)]_j over all rows of X. Cached rows are exact copies of
    // recomputation; eviction is least-recently-used.
    std::shared_ptr<const std::vector<double>> row(size_t i, const Matrix& X, const ResolvedKernel& k);

    size_t hits() const { return hits_; }
    size_t misses() const { return misses_; }
    size_t evictions() const { return evictions_; }
    size_t resident_bytes() const { return resident_bytes_; }

private:
    struct Entry {
        size_t index;
        std::shared_ptr<const std::vector<double>> values;
    };
    size_t capacity_bytes_;
    size_t resident_bytes_ = 0;
    std::list<Entry> lru_; // front = most recent
    std::unordered_map<size_t, std::list<Entry>::iterator> by_index_;
    size_t hits_ = 0, misses_ = 0, evictions_ = 0;
};

// Dense n x n kernel matrix; used by small-problem paths and tests.
Matrix kernel_matrix(const Matrix& X, const ResolvedKernel& k);

} // namespace tuberegress
