#pragma once

#include <vector>

#include "tuberegress/matrix.hpp"

namespace tuberegress {

struct LinearModel {
    std::vector<double> coefficients;
    double intercept = 0.0;
    double lambda = 0.0;
};

// Least squares / ridge with unpenalized intercept, solved by Householder QR
// on the (augmented) design matrix.
LinearModel ols_fit(const Matrix& X, const std::vector<double>& y);
LinearModel ridge_fit(const Matrix& X, const std::vector<double>& y, double lambda);
std::vector<double> linear_predict(const LinearModel& m, const Matrix& X);

struct KnnModel {
    Matrix train_X;
    std::vector<double> train_y;
    size_t k = 5;
};

KnnModel knn_fit(Matrix X, std::vector<double> y, size_t k);
// Mean target of the k nearest rows by Euclidean distance; ties broken by
// lower training index.
std::vector<double> knn_predict(const KnnModel& m, const Matrix& X);

} // namespace tuberegress
