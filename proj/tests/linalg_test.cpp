#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "spca/linalg.hpp"
#include "spca/rng.hpp"
#include "support/oracles.hpp"

using namespace spca;

namespace {

Matrix reconstruct(const EigDecomposition& e) {
    const int p = e.eigenvectors.rows();
    Matrix m(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            double s = 0.0;
            for (int k = 0; k < p; ++k)
                s += e.eigenvectors(i, k) * e.eigenvalues[k] * e.eigenvectors(j, k);
            m(i, j) = s;
        }
    return m;
}

double max_orthonormality_defect(const Matrix& u) {
    double worst = 0.0;
    for (int i = 0; i < u.cols(); ++i)
        for (int j = 0; j < u.cols(); ++j) {
            double s = 0.0;
            for (int k = 0; k < u.rows(); ++k) s += u(k, i) * u(k, j);
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

}  // namespace

TEST_CASE("sym_eig on a diagonal matrix sorts and permutes") {
    const SymMatrix a = SymMatrix::diagonal({3.0, 1.0, 2.0});
    const EigDecomposition e = sym_eig(a);
    REQUIRE(e.eigenvalues[0] == Catch::Approx(3.0));
    REQUIRE(e.eigenvalues[1] == Catch::Approx(2.0));
    REQUIRE(e.eigenvalues[2] == Catch::Approx(1.0));
    // eigenvectors form a signed permutation of the identity
    for (int k = 0; k < 3; ++k) {
        int ones = 0;
        for (int i = 0; i < 3; ++i) {
            const double v = std::abs(e.eigenvectors(i, k));
            if (v > 0.5) {
                ++ones;
                REQUIRE(v == Catch::Approx(1.0).margin(1e-12));
            } else {
                REQUIRE(v == Catch::Approx(0.0).margin(1e-12));
            }
        }
        REQUIRE(ones == 1);
    }
}

TEST_CASE("sym_eig on the 2x2 identity") {
    const EigDecomposition e = sym_eig(SymMatrix::identity(2));
    REQUIRE(e.eigenvalues[0] == Catch::Approx(1.0));
    REQUIRE(e.eigenvalues[1] == Catch::Approx(1.0));
    REQUIRE(max_orthonormality_defect(e.eigenvectors) < 1e-10);
}

TEST_CASE("sym_eig closed-form 2x2") {
    Matrix raw(2, 2, {2.0, 1.0, 1.0, 2.0});
    const EigDecomposition e = sym_eig(SymMatrix::symmetrized(raw));
    REQUIRE(e.eigenvalues[0] == Catch::Approx(3.0).margin(1e-12));
    REQUIRE(e.eigenvalues[1] == Catch::Approx(1.0).margin(1e-12));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(e.eigenvectors(0, 0)) == Catch::Approx(inv_sqrt2));
    REQUIRE(std::abs(e.eigenvectors(1, 0)) == Catch::Approx(inv_sqrt2));
    REQUIRE(e.eigenvectors(0, 0) * e.eigenvectors(1, 0) > 0.0);   // (1,1) direction
    REQUIRE(e.eigenvectors(0, 1) * e.eigenvectors(1, 1) < 0.0);   // (1,-1) direction
}

TEST_CASE("non-finite input is rejected at construction") {
    Matrix raw(2, 2, {1.0, 0.0, 0.0, std::nan("")});
    REQUIRE_THROWS_AS(SymMatrix::symmetrized(raw), NonFinite);
}

TEST_CASE("eigendecomposition properties on random symmetric matrices") {
    Rng rng(7);
    for (int trial = 0; trial < 12; ++trial) {
        const int p = 2 + rng.index_below(49);
        const SymMatrix a = oracles::random_symmetric(rng, p, 2.0);
        const EigDecomposition e = sym_eig(a);
        const double anorm = frobenius_norm(a);

        double recon_err = 0.0;
        const Matrix r = reconstruct(e);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) recon_err += (r(i, j) - a(i, j)) * (r(i, j) - a(i, j));
        REQUIRE(std::sqrt(recon_err) <= 1e-8 * std::max(1.0, anorm));

        REQUIRE(max_orthonormality_defect(e.eigenvectors) < 1e-10);
        REQUIRE(std::is_sorted(e.eigenvalues.rbegin(), e.eigenvalues.rend()));

        double eig_sum = 0.0;
        for (double w : e.eigenvalues) eig_sum += w;
        REQUIRE(eig_sum == Catch::Approx(trace(a)).epsilon(1e-8));

        // shift invariance
        const double c = rng.normal();
        const EigDecomposition shifted = sym_eig(a + c * SymMatrix::identity(p));
        for (int k = 0; k < p; ++k)
            REQUIRE(shifted.eigenvalues[k] == Catch::Approx(e.eigenvalues[k] + c).margin(1e-9));
    }
}

TEST_CASE("cholesky of identity is the identity") {
    const Matrix r = cholesky_upper(SymMatrix::identity(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) REQUIRE(r(i, j) == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-14));
}

TEST_CASE("cholesky hand-worked 2x2") {
    Matrix raw(2, 2, {4.0, 2.0, 2.0, 2.0});
    const Matrix r = cholesky_upper(SymMatrix::symmetrized(raw));
    REQUIRE(r(0, 0) == Catch::Approx(2.0));
    REQUIRE(r(0, 1) == Catch::Approx(1.0));
    REQUIRE(r(1, 0) == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(r(1, 1) == Catch::Approx(1.0));
}

TEST_CASE("cholesky of the zero matrix is zero") {
    const Matrix r = cholesky_upper(SymMatrix(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) REQUIRE(r(i, j) == 0.0);
}

TEST_CASE("cholesky rejects indefinite input") {
    REQUIRE_THROWS_AS(cholesky_upper(SymMatrix::diagonal({1.0, -1.0})), NotPsd);
}

TEST_CASE("cholesky round-trips random factors") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const int p = 2 + rng.index_below(8);
        Matrix r(p, p);
        for (int i = 0; i < p; ++i) {
            r(i, i) = 0.2 + rng.uniform();
            for (int j = i + 1; j < p; ++j) r(i, j) = rng.normal();
        }
        Matrix a(p, p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                double s = 0.0;
                for (int k = 0; k < p; ++k) s += r(k, i) * r(k, j);
                a(i, j) = s;
            }
        const Matrix back = cholesky_upper(SymMatrix::symmetrized(a));
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j)
                REQUIRE(back(i, j) == Catch::Approx(r(i, j)).margin(1e-8 * std::max(1.0, std::abs(r(i, j)))));
    }
}

TEST_CASE("lstsq_2col examples") {
    Matrix basis(3, 2);
    basis(0, 0) = 1.0;
    basis(1, 1) = 1.0;
    auto [a1, b1] = lstsq_2col(basis, {5.0, 7.0, 9.0});
    REQUIRE(a1 == Catch::Approx(5.0));
    REQUIRE(b1 == Catch::Approx(7.0));

    Matrix basis2(4, 2);
    Rng rng(3);
    for (int i = 0; i < 4; ++i) {
        basis2(i, 0) = rng.normal();
        basis2(i, 1) = rng.normal();
    }
    Vector target(4);
    for (int i = 0; i < 4; ++i) target[i] = 2.0 * basis2(i, 0) - 3.0 * basis2(i, 1);
    auto [a2, b2] = lstsq_2col(basis2, target);
    REQUIRE(a2 == Catch::Approx(2.0));
    REQUIRE(b2 == Catch::Approx(-3.0));

    Matrix basis3(2, 2, {1.0, 1.0, 0.0, 1.0});  // columns (1,0) and (1,1)
    auto [a3, b3] = lstsq_2col(basis3, {0.0, 1.0});
    REQUIRE(a3 == Catch::Approx(-1.0));
    REQUIRE(b3 == Catch::Approx(1.0));
}

TEST_CASE("lstsq_2col rejects dependent columns") {
    Matrix basis(3, 2);
    for (int i = 0; i < 3; ++i) {
        basis(i, 0) = i + 1.0;
        basis(i, 1) = 2.0 * (i + 1.0);
    }
    REQUIRE_THROWS_AS(lstsq_2col(basis, {1.0, 0.0, 0.0}), DegenerateBasis);
}

TEST_CASE("lstsq_2col residual is orthogonal to the basis") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int p = 3 + rng.index_below(30);
        Matrix basis(p, 2);
        Vector target(p);
        for (int i = 0; i < p; ++i) {
            basis(i, 0) = rng.normal();
            basis(i, 1) = rng.normal();
            target[i] = rng.normal();
        }
        auto [alpha, beta] = lstsq_2col(basis, target);
        double r1 = 0.0, r2 = 0.0;
        for (int i = 0; i < p; ++i) {
            const double res = alpha * basis(i, 0) + beta * basis(i, 1) - target[i];
            r1 += res * basis(i, 0);
            r2 += res * basis(i, 1);
        }
        const double bound = 1e-8 * std::max(1.0, norm2(target));
        REQUIRE(std::abs(r1) < bound);
        REQUIRE(std::abs(r2) < bound);
    }
}

TEST_CASE("standard_pca returns the leading eigenpairs") {
    const SymMatrix a = SymMatrix::diagonal({1.0, 5.0, 3.0});
    const PcaResult pca = standard_pca(a, 2);
    REQUIRE(pca.eigenvalues[0] == Catch::Approx(5.0));
    REQUIRE(pca.eigenvalues[1] == Catch::Approx(3.0));
    REQUIRE(std::abs(pca.components(1, 0)) == Catch::Approx(1.0));
    REQUIRE(std::abs(pca.components(2, 1)) == Catch::Approx(1.0));
}
