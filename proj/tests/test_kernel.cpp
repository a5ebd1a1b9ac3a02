#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "test_helpers.hpp"
#include "tuberegress/errors.hpp"
#include "tuberegress/kernel.hpp"

using namespace tuberegress;

TEST_SUITE_BEGIN("kernel");

namespace {

Matrix random_matrix(size_t n, size_t d, uint64_t seed) {
    Rng rng(seed);
    Matrix X(n, d);
    for (double& v : X.data) v = 2.0 * rng.uniform01() - 1.0;
    return X;
}

} // namespace

TEST_CASE("rbf at zero distance is 1, hand value at gamma 0.5") {
    ResolvedKernel k{KernelSpec::Kind::rbf, 0.5, 0.0, 3};
    const std::vector<double> a = {0.3, -1.2};
    CHECK(kernel_eval(k, a, a) == 1.0);

    const std::vector<double> zero = {0.0, 0.0};
    const std::vector<double> one = {1.0, 1.0};
    CHECK(kernel_eval(k, zero, one) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(kernel_eval(k, zero, one) == doctest::Approx(0.36788).epsilon(1e-4));
}

TEST_CASE("linear dot product and polynomial arithmetic") {
    ResolvedKernel lin{KernelSpec::Kind::linear, 1.0, 0.0, 3};
    const std::vector<double> a = {1, 2}, b = {3, 4};
    CHECK(kernel_eval(lin, a, b) == 11.0);

    ResolvedKernel poly{KernelSpec::Kind::poly, 1.0, 1.0, 2};
    const std::vector<double> e1 = {1, 0}, e1b = {1, 0};
    // x'x = 1 -> (1*1 + 1)^2 = 4
    CHECK(kernel_eval(poly, e1, e1b) == doctest::Approx(4.0));
}

TEST_CASE("dimension mismatch") {
    ResolvedKernel k{KernelSpec::Kind::rbf, 1.0, 0.0, 3};
    const std::vector<double> a = {1, 2}, b = {1, 2, 3};
    CHECK_THROWS_AS(kernel_eval(k, a, b), DataError);
}

TEST_CASE("symmetry for all three kinds") {
    Rng rng(12);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> a(3), b(3);
        for (int j = 0; j < 3; ++j) {
            a[j] = rng.normal();
            b[j] = rng.normal();
        }
        for (auto kind : {KernelSpec::Kind::rbf, KernelSpec::Kind::linear, KernelSpec::Kind::poly}) {
            ResolvedKernel k{kind, 0.7, 0.5, 3};
            CHECK(kernel_eval(k, a, b) == kernel_eval(k, b, a));
        }
    }
}

TEST_CASE("rbf strictly decreases with distance") {
    ResolvedKernel k{KernelSpec::Kind::rbf, 0.9, 0.0, 3};
    const std::vector<double> origin = {0.0};
    double prev = 1.0;
    for (double d = 0.25; d < 4.0; d += 0.25) {
        const std::vector<double> x = {d};
        const double v = kernel_eval(k, origin, x);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("rbf and linear kernel matrices are positive semidefinite") {
    for (uint64_t seed = 1; seed <= 8; ++seed) {
        const Matrix X = random_matrix(20, 3, seed);
        for (auto kind : {KernelSpec::Kind::rbf, KernelSpec::Kind::linear}) {
            ResolvedKernel k{kind, 0.8, 0.0, 3};
            const Matrix K = kernel_matrix(X, k);
            Eigen::MatrixXd M(20, 20);
            for (size_t i = 0; i < 20; ++i) {
                for (size_t j = 0; j < 20; ++j) M(static_cast<long>(i), static_cast<long>(j)) = K.at(i, j);
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
            CHECK(es.eigenvalues().minCoeff() >= -1e-8);
        }
    }
}

TEST_CASE("resolve_gamma") {
    SUBCASE("scale: 1 / (d * pooled population variance)") {
        // entries {0,1,0,1,...}: mean 0.5, var 0.25 -> pooled var with d=2
        Matrix X(2, 2);
        X.at(0, 0) = 0; X.at(0, 1) = 1;
        X.at(1, 0) = 1; X.at(1, 1) = 0;
        KernelSpec spec;
        spec.gamma = GammaSpec::scale();
        CHECK(resolve_gamma(spec, X) == doctest::Approx(1.0 / (2.0 * 0.25)));

        // entries {0,1,1,2}: mean 1, pooled variance 0.5, d=2 -> gamma 1.0
        Matrix X2(2, 2);
        X2.at(0, 0) = 0; X2.at(0, 1) = 1;
        X2.at(1, 0) = 1; X2.at(1, 1) = 2;
        CHECK(resolve_gamma(spec, X2) == doctest::Approx(1.0));
    }
    SUBCASE("auto: 1/d") {
        KernelSpec spec;
        spec.gamma = GammaSpec::auto_mode();
        CHECK(resolve_gamma(spec, Matrix(3, 4, 1.0)) == doctest::Approx(0.25));
    }
    SUBCASE("fixed") {
        KernelSpec spec;
        spec.gamma = GammaSpec::fixed(0.1);
        CHECK(resolve_gamma(spec, Matrix(2, 2, 0.0)) == 0.1);
    }
    SUBCASE("scale on constant X -> ZeroVariance") {
        KernelSpec spec;
        spec.gamma = GammaSpec::scale();
        try {
            resolve_gamma(spec, Matrix(3, 2, 7.0));
            FAIL("expected ZeroVariance");
        } catch (const DataError& e) {
            CHECK(e.code() == Errc::zero_variance);
        }
    }
}

TEST_CASE("kernel cache") {
    const Matrix X = random_matrix(6, 2, 77);
    ResolvedKernel k{KernelSpec::Kind::rbf, 1.0, 0.0, 3};
    const size_t row_bytes = X.rows * sizeof(double);

    SUBCASE("second request served from cache with identical values") {
        KernelCache cache(8 * row_bytes);
        const auto r1 = cache.row(0, X, k);
        const std::vector<double> copy = *r1;
        const auto r2 = cache.row(0, X, k);
        CHECK(cache.hits() == 1);
        CHECK(cache.misses() == 1);
        CHECK(*r2 == copy);
    }
    SUBCASE("capacity of one row evicts LRU") {
        KernelCache cache(row_bytes);
        cache.row(0, X, k);
        cache.row(1, X, k); // evicts row 0
        cache.row(0, X, k); // recomputed
        CHECK(cache.misses() == 3);
        CHECK(cache.hits() == 0);
        CHECK(cache.evictions() >= 2);
        CHECK(cache.resident_bytes() <= row_bytes);
    }
    SUBCASE("cached row equals direct recomputation exactly") {
        KernelCache cache(8 * row_bytes);
        const auto row = cache.row(2, X, k);
        for (size_t j = 0; j < X.rows; ++j) {
            CHECK((*row)[j] == kernel_eval(k, X.row(2), X.row(j)));
        }
    }
}

TEST_SUITE_END();
