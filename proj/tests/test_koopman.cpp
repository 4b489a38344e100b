#include <doctest.h>

#include <cmath>

#include "koop/errors.hpp"
#include "koop/koopman.hpp"
#include "koop/systems.hpp"
#include "test_helpers.hpp"

using namespace koop;
using koop::testing::random_complex;
using koop::testing::random_real;
using koop::testing::random_vector;
using koop::testing::spectrum_hausdorff;

namespace {

SnapshotPairs linear_system_pairs(const RMatrix& M, int count, Rng& rng) {
    SnapshotPairs pairs;
    for (int i = 0; i < count; ++i) {
        const RVector x = random_vector(rng, static_cast<int>(M.rows()));
        pairs.append(x, M * x, PairOrigin::Observed);
    }
    return pairs;
}

}  // namespace

TEST_SUITE_BEGIN("koopman");

TEST_CASE("build_gram on a single scalar pair") {
    SnapshotPairs pairs;
    RVector x(1), y(1);
    x << 1.0;
    y << 2.0;
    pairs.append(x, y, PairOrigin::Observed);
    const GramMatrices gram = build_gram(pairs, Dictionary::linear(1));
    CHECK(gram.G(0, 0) == Complex(1.0, 0.0));
    CHECK(gram.A(0, 0) == Complex(2.0, 0.0));
    CHECK(gram.sample_count == 1);
}

TEST_CASE("build_gram accumulates the hand-computed two-pair example") {
    SnapshotPairs pairs;
    RVector a(2), b(2), c(2), d(2);
    a << 1.0, 0.0;
    b << 0.0, 1.0;
    c << 0.0, 1.0;
    d << -1.0, 0.0;
    pairs.append(a, b, PairOrigin::Observed);
    pairs.append(c, d, PairOrigin::Observed);
    const GramMatrices gram = build_gram(pairs, Dictionary::linear(2));
    CHECK((gram.G - 0.5 * CMatrix::Identity(2, 2)).norm() <= 1e-15);
    CMatrix expected_A(2, 2);
    expected_A << Complex(0, 0), Complex(0.5, 0), Complex(-0.5, 0), Complex(0, 0);
    CHECK((gram.A - expected_A).norm() <= 1e-15);
}

TEST_CASE("build_gram entries stay bounded for unit-modulus dictionaries") {
    SnapshotPairs pairs;
    RVector x(1), y(1);
    x << 0.3;
    y << 0.9;
    pairs.append(x, y, PairOrigin::Observed);
    const GramMatrices gram = build_gram(pairs, Dictionary::fourier(1, 1, 0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(std::abs(gram.G(i, j)) <= 1.0 + 1e-12);
            CHECK(std::abs(gram.A(i, j)) <= 1.0 + 1e-12);
        }
}

TEST_CASE("gram matrices are Hermitian positive semidefinite") {
    Rng rng(12);
    for (const auto& dict :
         {Dictionary::linear(3), Dictionary::fourier(3, 4, 1), Dictionary::monomial(3, 2)}) {
        SnapshotPairs pairs;
        for (int i = 0; i < 12; ++i)
            pairs.append(random_vector(rng, 3), random_vector(rng, 3), PairOrigin::Observed);
        const GramMatrices gram = build_gram(pairs, dict);
        CHECK((gram.G - gram.G.adjoint()).norm() <= 1e-10);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(gram.G);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("build_gram rejects an empty pair set") {
    CHECK_THROWS_AS(build_gram(SnapshotPairs{}, Dictionary::linear(2)), InsufficientDataError);
}

TEST_CASE("fit_edmd recovers a scalar linear map") {
    SnapshotPairs pairs;
    for (const double v : {1.0, -2.0, 0.5}) {
        RVector x(1), y(1);
        x << v;
        y << 0.5 * v;
        pairs.append(x, y, PairOrigin::Observed);
    }
    const Dictionary dict = Dictionary::linear(1);
    const KoopmanModel model = fit_edmd(build_gram(pairs, dict), dict);
    CHECK(std::abs(model.K(0, 0) - Complex(0.5, 0.0)) <= 1e-12);
    CHECK(model.lambda == 0.0);
    CHECK(model.solver_mode == SolverMode::Pseudoinverse);
}

TEST_CASE("fit_edmd recovers the transpose of a 2-d linear map") {
    Rng rng(13);
    RMatrix M(2, 2);
    M << 0.8, 0.3, -0.2, 0.6;
    const Dictionary dict = Dictionary::linear(2);
    const SnapshotPairs pairs = linear_system_pairs(M, 10, rng);
    const KoopmanModel model = fit_edmd(build_gram(pairs, dict), dict);
    CHECK((model.K.real() - M.transpose()).norm() <= 1e-8);
    CHECK(model.K.imag().norm() <= 1e-12);
}

TEST_CASE("fit_edmd stays finite on duplicated, rank-deficient data") {
    SnapshotPairs pairs;
    RVector x(3), y(3);
    x << 1.0, 2.0, 3.0;
    y << 0.5, 1.0, 1.5;
    for (int i = 0; i < 4; ++i) pairs.append(x, y, PairOrigin::Observed);
    const Dictionary dict = Dictionary::linear(3);
    const KoopmanModel model = fit_edmd(build_gram(pairs, dict), dict);
    CHECK(model.K.allFinite());
}

TEST_CASE("fit_robust approaches the EDMD solution as lambda vanishes") {
    Rng rng(14);
    RMatrix M(2, 2);
    M << 0.9, 0.1, -0.3, 0.7;
    const Dictionary dict = Dictionary::linear(2);
    const GramMatrices gram = build_gram(linear_system_pairs(M, 25, rng), dict);
    const KoopmanModel edmd = fit_edmd(gram, dict);
    const KoopmanModel robust = fit_robust(gram, dict, 1e-12, {});
    CHECK((edmd.K - robust.K).norm() <= 1e-8);
}

TEST_CASE("fit_robust returns zero when A is zero") {
    Rng rng(15);
    const Dictionary dict = Dictionary::linear(3);
    GramMatrices gram;
    gram.G = random_complex(rng, 3, 3);
    gram.G = gram.G.adjoint() * gram.G;
    gram.A = CMatrix::Zero(3, 3);
    gram.sample_count = 5;
    for (const SolverMode mode : {SolverMode::Ridge, SolverMode::ExactFrobenius}) {
        RobustSolveOptions opts;
        opts.mode = mode;
        CHECK(fit_robust(gram, dict, 0.4, opts).K.norm() <= 1e-12);
    }
}

TEST_CASE("fit_robust requires a positive lambda and a regularized mode") {
    Rng rng(16);
    const Dictionary dict = Dictionary::linear(2);
    const GramMatrices gram = build_gram(linear_system_pairs(RMatrix::Identity(2, 2), 5, rng), dict);
    CHECK_THROWS_AS(fit_robust(gram, dict, 0.0, {}), ConfigError);
    RobustSolveOptions opts;
    opts.mode = SolverMode::Pseudoinverse;
    CHECK_THROWS_AS(fit_robust(gram, dict, 0.5, opts), ConfigError);
}

TEST_CASE("sparse-ring setup: regularization keeps the spectral radius at or below plain EDMD") {
    // 15 observed pairs of the 40-dimensional ring, 30 artificial points
    OscillatorRingConfig cfg;
    Rng rng(0);
    const RVector theta0 = random_vector(rng, 20);
    const Trajectory traj = simulate_oscillators(cfg, theta0, RVector::Zero(20), 16);
    const std::vector<RVector> train(traj.states.begin(), traj.states.begin() + 16);
    const Dictionary dict = Dictionary::linear(40);

    const KoopmanModel plain = fit_edmd(build_gram(SnapshotPairs::from_trajectory(train), dict), dict);

    EnrichmentConfig enrich;
    enrich.radius = 0.1;
    enrich.multiplier = 2;
    enrich.seed = 0;
    const GramMatrices gram = build_gram(enrich_trajectory(train, enrich), dict);
    const KoopmanModel robust = fit_robust(gram, dict, 1e-6, {});
    CHECK(spectral_radius(robust.K) <= spectral_radius(plain.K));
}

TEST_CASE("train_from_trajectory with no enrichment and lambda zero is plain EDMD") {
    Rng rng(17);
    RMatrix M(3, 3);
    M = 0.5 * RMatrix::Identity(3, 3) + 0.1 * random_real(rng, 3, 3);
    std::vector<RVector> traj{random_vector(rng, 3)};
    for (int i = 0; i < 12; ++i) traj.push_back(M * traj.back());

    const Dictionary dict = Dictionary::linear(3);
    EnrichmentConfig enrich;
    enrich.radius = 0.1;
    enrich.multiplier = 0;
    const KoopmanModel composed = train_from_trajectory(traj, dict, enrich, 0.0);
    const KoopmanModel direct = fit_edmd(build_gram(SnapshotPairs::from_trajectory(traj), dict), dict);
    CHECK((composed.K - direct.K).norm() == 0.0);
    CHECK(!composed.provenance.has_value());
}

TEST_CASE("train_from_trajectory is deterministic and records provenance") {
    Rng rng(18);
    std::vector<RVector> traj;
    for (int i = 0; i < 10; ++i) traj.push_back(random_vector(rng, 4));
    const Dictionary dict = Dictionary::linear(4);
    EnrichmentConfig enrich;
    enrich.radius = 0.2;
    enrich.multiplier = 3;
    enrich.seed = 123;
    const KoopmanModel a = train_from_trajectory(traj, dict, enrich, 0.05);
    const KoopmanModel b = train_from_trajectory(traj, dict, enrich, 0.05);
    CHECK((a.K - b.K).norm() == 0.0);
    REQUIRE(a.provenance.has_value());
    CHECK(a.provenance->multiplier == 3);
    CHECK(a.provenance->seed == 123);
    CHECK(a.lambda == 0.05);
}

TEST_CASE("the linear-dictionary pipeline matches an independently coded DMD") {
    Rng rng(19);
    RMatrix M = random_real(rng, 4, 4, 0.4);
    const SnapshotPairs pairs = linear_system_pairs(M, 30, rng);
    const Dictionary dict = Dictionary::linear(4);
    const KoopmanModel model = fit_edmd(build_gram(pairs, dict), dict);

    // direct least squares on the raw snapshot matrices, no Gram step
    RMatrix X(30, 4), Y(30, 4);
    for (int i = 0; i < 30; ++i) {
        X.row(i) = pairs.inputs[static_cast<std::size_t>(i)].transpose();
        Y.row(i) = pairs.outputs[static_cast<std::size_t>(i)].transpose();
    }
    const RMatrix K_direct = X.colPivHouseholderQr().solve(Y);
    CHECK((model.K.real() - K_direct).norm() <= 1e-8);
}

TEST_CASE("exact dense data recovers operator and spectrum of a 6-d map") {
    Rng rng(20);
    RMatrix M = random_real(rng, 6, 6);
    M *= 0.9 / spectral_radius(M.cast<Complex>());
    const Dictionary dict = Dictionary::linear(6);
    const KoopmanModel model = fit_edmd(build_gram(linear_system_pairs(M, 50, rng), dict), dict);
    CHECK((model.K.real() - M.transpose()).norm() <= 1e-8);

    const auto fitted = spectrum(model);
    const EigResult truth = eig(M.cast<Complex>());
    std::vector<Complex> fitted_values;
    for (const auto& pair : fitted) fitted_values.push_back(pair.value);
    CHECK(spectrum_hausdorff(fitted_values, truth.values) <= 1e-8);
}

TEST_CASE("spectrum of a diagonal operator is its diagonal in canonical order") {
    KoopmanModel model;
    model.dictionary = Dictionary::linear(2);
    model.K = CMatrix::Zero(2, 2);
    model.K(0, 0) = 0.5;
    model.K(1, 1) = 0.9;
    const auto pairs = spectrum(model);
    CHECK(std::abs(pairs[0].value - Complex(0.9, 0.0)) <= 1e-14);
    CHECK(std::abs(pairs[1].value - Complex(0.5, 0.0)) <= 1e-14);
}

TEST_CASE("the ring model from dense exact data reproduces the exponential spectrum") {
    OscillatorRingConfig cfg;
    const RMatrix S = oscillator_step_matrix(cfg);
    Rng rng(21);
    SnapshotPairs pairs;
    for (int i = 0; i < 200; ++i) {
        const RVector x = random_vector(rng, 40);
        pairs.append(x, S * x, PairOrigin::Observed);
    }
    const Dictionary dict = Dictionary::linear(40);
    const KoopmanModel model = fit_edmd(build_gram(pairs, dict), dict);

    std::vector<Complex> fitted;
    for (const auto& pair : spectrum(model)) fitted.push_back(pair.value);

    // oracle: discrete spectrum = exp(dt * eig of the continuous block matrix)
    const EigResult cont = eig(oscillator_continuous_matrix(cfg).cast<Complex>());
    std::vector<Complex> expected;
    for (const Complex& value : cont.values) expected.push_back(std::exp(cfg.dt * value));
    CHECK(spectrum_hausdorff(fitted, expected) <= 1e-6);

    // and back through the principal logarithm
    const std::vector<Complex> recovered = discrete_to_continuous(fitted, cfg.dt);
    CHECK(spectrum_hausdorff(recovered, cont.values) <= 1e-6);
}

TEST_CASE("eigenfunction evaluation is the feature row dotted with the eigenvector") {
    Rng rng(22);
    RMatrix M(2, 2);
    M << 0.9, 0.2, 0.0, 0.5;
    const Dictionary dict = Dictionary::linear(2);
    KoopmanModel model = fit_edmd(build_gram(linear_system_pairs(M, 20, rng), dict), dict);

    const auto pairs = spectrum(model);
    const RVector x = random_vector(rng, 2);
    for (int j = 0; j < 2; ++j) {
        const Complex direct = (dict.evaluate(x) * pairs[static_cast<std::size_t>(j)].vector)(0);
        CHECK(std::abs(eigenfunction_eval(model, j, x) - direct) <= 1e-14);
    }

    // defining relation phi(T x) = lambda phi(x) on exact linear data
    for (int trial = 0; trial < 10; ++trial) {
        const RVector x0 = random_vector(rng, 2);
        for (int j = 0; j < 2; ++j) {
            const Complex lhs = eigenfunction_eval(model, j, RVector(M * x0));
            const Complex rhs = pairs[static_cast<std::size_t>(j)].value *
                                eigenfunction_eval(model, j, x0);
            CHECK(std::abs(lhs - rhs) <= 1e-6);
        }
    }
    CHECK_THROWS_AS(eigenfunction_eval(model, 2, x), DimensionError);
}

TEST_CASE("discrete_to_continuous maps the principal branch") {
    const std::vector<Complex> eigs{Complex(1.0, 0.0), std::exp(Complex(0.0, 0.02))};
    const auto cont = discrete_to_continuous(eigs, 0.01);
    CHECK(std::abs(cont[0]) <= 1e-14);
    CHECK(std::abs(cont[1] - Complex(0.0, 2.0)) <= 1e-12);
}

TEST_CASE("an exactly zero eigenvalue maps to the -inf sentinel") {
    const auto cont = discrete_to_continuous({Complex(0.0, 0.0)}, 0.1);
    CHECK(std::isinf(cont[0].real()));
    CHECK(cont[0].real() < 0);
    CHECK_THROWS_AS(discrete_to_continuous({Complex(1.0, 0.0)}, 0.0), ConfigError);
}

TEST_CASE("worst_case_residual_sample collapses to the nominal residual at lambda zero") {
    Rng rng(23);
    GramMatrices gram;
    gram.G = random_complex(rng, 3, 3);
    gram.A = random_complex(rng, 3, 3);
    const CMatrix K = random_complex(rng, 3, 3);
    const double nominal = (gram.G * K - gram.A).norm();
    CHECK(worst_case_residual_sample(gram, K, 0.0, 50, 1) == nominal);
}

TEST_CASE("sampled worst case dominates the nominal residual and respects the bound") {
    for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
        Rng rng(seed);
        const int n = 4;
        GramMatrices gram;
        gram.G = random_complex(rng, n, n);
        gram.A = random_complex(rng, n, n);
        const CMatrix K = random_complex(rng, n, n);
        const double lambda = 0.6;
        const double nominal = (gram.G * K - gram.A).norm();
        const double sampled = worst_case_residual_sample(gram, K, lambda, 50, seed);
        CHECK(sampled >= nominal);
        CHECK(sampled <= nominal + lambda * K.norm() + lambda * n + 1e-9);
    }
}

TEST_CASE("operator norm shrinks with lambda in both solver modes") {
    Rng rng(24);
    const Dictionary dict = Dictionary::linear(3);
    const GramMatrices gram = build_gram(linear_system_pairs(random_real(rng, 3, 3), 15, rng), dict);
    for (const SolverMode mode : {SolverMode::Ridge, SolverMode::ExactFrobenius}) {
        RobustSolveOptions opts;
        opts.mode = mode;
        opts.max_iter = 20000;
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 12; ++i) {
            const double lambda = std::pow(10.0, -6.0 + 7.0 * i / 11.0);
            const double norm = fit_robust(gram, dict, lambda, opts).K.norm();
            const double slack = mode == SolverMode::Ridge ? 1e-12 : 1e-6 * std::max(1.0, prev);
            CHECK(norm <= prev + slack);
            prev = norm;
        }
    }
}

TEST_SUITE_END();
