#include "tuberegress/baselines.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "tuberegress/errors.hpp"

namespace tuberegress {

namespace {

LinearModel solve_least_squares(const Matrix& X, const std::vector<double>& y, double lambda) {
    const auto n = static_cast<Eigen::Index>(X.rows);
    const auto d = static_cast<Eigen::Index>(X.cols);
    const Eigen::Index extra = lambda > 0.0 ? d : 0;

    // design [X 1] with sqrt(lambda) * [I 0] appended; the intercept column is
    // not penalized
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + extra, d + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + extra);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) A(i, j) = X.at(i, j);
        A(i, d) = 1.0;
        b(i) = y[static_cast<size_t>(i)];
    }
    if (extra > 0) {
        const double s = std::sqrt(lambda);
        for (Eigen::Index j = 0; j < d; ++j) A(n + j, j) = s;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (lambda == 0.0 && qr.rank() < d + 1) {
        throw DataError(Errc::singular_system, "SingularSystem: rank-deficient design matrix");
    }
    const Eigen::VectorXd w = qr.solve(b);

    LinearModel m;
    m.coefficients.resize(static_cast<size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) m.coefficients[static_cast<size_t>(j)] = w(j);
    m.intercept = w(d);
    m.lambda = lambda;
    return m;
}

} // namespace

LinearModel ols_fit(const Matrix& X, const std::vector<double>& y) {
    if (X.rows != y.size()) {
        throw DataError(Errc::dimension_mismatch, "ols_fit: X/y size mismatch");
    }
    if (X.rows <= X.cols) {
        throw DataError(Errc::singular_system,
                        "SingularSystem: OLS needs n > d, got n=" + std::to_string(X.rows) +
                            ", d=" + std::to_string(X.cols));
    }
    return solve_least_squares(X, y, 0.0);
}

LinearModel ridge_fit(const Matrix& X, const std::vector<double>& y, double lambda) {
    if (X.rows != y.size()) {
        throw DataError(Errc::dimension_mismatch, "ridge_fit: X/y size mismatch");
    }
    if (lambda < 0.0) {
        throw ConfigError(Errc::config_invalid, "ridge lambda must be >= 0");
    }
    return solve_least_squares(X, y, lambda);
}

std::vector<double> linear_predict(const LinearModel& m, const Matrix& X) {
    if (X.cols != m.coefficients.size()) {
        throw DataError(Errc::dimension_mismatch, "linear_predict: feature count mismatch");
    }
    std::vector<double> out(X.rows, m.intercept);
    for (size_t i = 0; i < X.rows; ++i) {
        auto r = X.row(i);
        double acc = m.intercept;
        for (size_t j = 0; j < X.cols; ++j) acc += m.coefficients[j] * r[j];
        out[i] = acc;
    }
    return out;
}

KnnModel knn_fit(Matrix X, std::vector<double> y, size_t k) {
    if (X.rows != y.size()) {
        throw DataError(Errc::dimension_mismatch, "knn_fit: X/y size mismatch");
    }
    if (k == 0 || k > X.rows) {
        throw DataError(Errc::k_too_large,
                        "KTooLarge: k=" + std::to_string(k) + " with n=" + std::to_string(X.rows));
    }
    return KnnModel{std::move(X), std::move(y), k};
}

std::vector<double> knn_predict(const KnnModel& m, const Matrix& X) {
    if (X.cols != m.train_X.cols) {
        throw DataError(Errc::dimension_mismatch, "knn_predict: feature count mismatch");
    }
    const size_t n = m.train_X.rows;
    std::vector<double> out(X.rows);
    std::vector<std::pair<double, size_t>> dist(n);
    for (size_t q = 0; q < X.rows; ++q) {
        auto query = X.row(q);
        for (size_t i = 0; i < n; ++i) {
            auto t = m.train_X.row(i);
            double d2 = 0.0;
            for (size_t j = 0; j < query.size(); ++j) {
                const double d = query[j] - t[j];
                d2 += d * d;
            }
            dist[i] = {d2, i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(m.k), dist.end());
        double acc = 0.0;
        for (size_t i = 0; i < m.k; ++i) acc += m.train_y[dist[i].second];
        out[q] = acc / static_cast<double>(m.k);
    }
    return out;
}

} // namespace tuberegress
