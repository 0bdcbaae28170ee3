#include <doctest.h>

#include "helpers.hpp"
#include "sprec/precoder.hpp"

using namespace sprec;
using test::random_matrix;
using test::random_vector;

namespace {

// Trace of an orthogonal projector equals its rank.
double projector_rank(const CMatrix& m) { return m.trace().real(); }

Projector lte_continuity(int order) {
    const Profile p = build_profile("lte10");
    return build_projector(continuity_constraints(p.num, p.alloc, order));
}

std::vector<double> hybrid_notches() { return {-6.5075e6, -6.5e6, 6.5e6, 6.5075e6}; }

}  // namespace

TEST_SUITE("precoder") {

TEST_CASE("continuity orders give 2(N+1) constraints") {
    const int dims[] = {598, 596, 594, 592, 590};
    for (int n = 0; n <= 4; ++n) {
        const Projector g = lte_continuity(n);
        CHECK(g.constraints() == 2 * (n + 1));
        CHECK(g.dimension() - g.constraints() == dims[n]);
    }
}

TEST_CASE("constraint rows are unit norm") {
    const Profile p = build_profile("lte10");
    const auto a = continuity_constraints(p.num, p.alloc, 4);
    for (int r = 0; r < a.rows(); ++r) CHECK(a.entries.row(r).norm() == doctest::Approx(1.0));
    CHECK(a.row_scales.size() == 10);
    const auto b = notch_constraints(p.num, p.alloc, hybrid_notches());
    for (int r = 0; r < b.rows(); ++r) CHECK(b.entries.row(r).norm() == doctest::Approx(1.0));
}

TEST_CASE("zero cyclic prefix makes the order-0 rows identical") {
    const Numerology num = make_numerology(600, 15e3, 1024, 0.0);
    const auto alloc = contiguous_allocation(600, true, 1024);
    const auto a = continuity_constraints(num, alloc, 0);
    CHECK((a.entries.row(0) - a.entries.row(1)).norm() < 1e-12);
    const Projector g = build_projector(a);
    CHECK(g.constraints() == 1);
    CHECK(g.requested_constraints() == 2);
    CHECK_FALSE(g.warnings().empty());
}

TEST_CASE("precoded symbols have vanishing edge derivatives") {
    const Profile p = build_profile("lte10");
    const Projector g = lte_continuity(4);
    Rng rng = make_rng(7);
    const CVector d = g.apply(random_vector(600, rng));
    const double df = p.num.subcarrier_spacing;
    const double t0 = -p.num.cp_duration();
    const double t1 = p.num.useful_duration();
    for (int n = 0; n <= 4; ++n) {
        double peak = 0.0;
        for (int i = 0; i < 400; ++i) {
            const double t = t0 + (t1 - t0) * i / 399.0;
            peak = std::max(peak, std::abs(test::symbol_derivative(p.alloc.indices, d, df, t, n)));
        }
        CHECK(std::abs(test::symbol_derivative(p.alloc.indices, d, df, t0, n)) <= 1e-6 * peak);
        CHECK(std::abs(test::symbol_derivative(p.alloc.indices, d, df, t1, n)) <= 1e-6 * peak);
    }
}

TEST_CASE("notch at a harmonic with no cyclic prefix selects one subcarrier") {
    const Numerology num = make_numerology(600, 15e3, 1024, 0.0);
    const auto alloc = contiguous_allocation(600, true, 1024);
    const std::vector<double> f = {37 * 15e3};
    const auto a = notch_constraints(num, alloc, f);
    const auto it = std::find(alloc.indices.begin(), alloc.indices.end(), 37);
    const auto col = static_cast<Eigen::Index>(it - alloc.indices.begin());
    CHECK(std::abs(a.entries(0, col)) == doctest::Approx(1.0));
    CHECK(a.entries.row(0).norm() == doctest::Approx(1.0));
}

TEST_CASE("notches are exact against a numerically integrated spectrum") {
    const Profile p = build_profile("lte10");
    const Projector g = build_projector(notch_constraints(p.num, p.alloc, hybrid_notches()));
    CHECK(g.dimension() - g.constraints() == 596);
    Rng rng = make_rng(11);
    const CVector x = random_vector(600, rng);
    const CVector d = g.apply(x);
    const double df = p.num.subcarrier_spacing;
    const double t0 = -p.num.cp_duration();
    const double t1 = p.num.useful_duration();
    // Composite Simpson rule on a 16x oversampled grid.
    const int n = 16 * p.num.symbol_samples();
    const double h = (t1 - t0) / n;
    auto spectrum = [&](const CVector& v, double f) {
        cd acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = t0 + i * h;
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += w * test::symbol_derivative(p.alloc.indices, v, df, t, 0) * std::exp(cd(0.0, -2.0 * kPi * f * t));
        }
        return acc * h / 3.0;
    };
    auto scale = [&](const CVector& v) { return (t1 - t0) * v.lpNorm<1>(); };
    for (double fr : {0.0, 2.1e6, 5.25e6, -7.0e6}) {
        const cd direct = (spectrum_kernel(p.num, p.alloc, fr).transpose() * x).value();
        CHECK(std::abs(direct - spectrum(x, fr)) <= 1e-7 * scale(x));
    }
    for (double f : hybrid_notches()) {
        const CVector a = spectrum_kernel(p.num, p.alloc, f);
        CHECK(std::abs((a.transpose() * d).value()) <= 1e-10 * d.norm() * a.norm());
        CHECK(std::abs(spectrum(d, f)) <= 1e-7 * scale(d));
    }
}

TEST_CASE("stacking") {
    const Profile p = build_profile("lte10");
    const auto c1 = continuity_constraints(p.num, p.alloc, 1);
    const std::vector<double> f = {6e6, -6e6};
    const auto n2 = notch_constraints(p.num, p.alloc, f);
    const std::vector<ConstraintMatrix> both = {c1, n2};
    CHECK(stack(both).rows() == 6);
    const std::vector<ConstraintMatrix> one = {c1};
    CHECK((stack(one).entries - c1.entries).norm() == 0.0);
    const auto c0 = continuity_constraints(p.num, p.alloc, 0);
    const std::vector<ConstraintMatrix> twice = {c0, c0};
    const Projector g = build_projector(stack(twice));
    CHECK(g.constraints() == 2);
    CHECK(g.requested_constraints() == 4);
    // Same projector as the deduplicated rows.
    const Projector ref = build_projector(c0);
    CHECK((g.dense() - ref.dense()).norm() <= 1e-9 * ref.dense().norm());
    const Numerology small = make_numerology(8, 15e3, 16, 0.0);
    const std::vector<ConstraintMatrix> bad = {c0, continuity_constraints(small, contiguous_allocation(8, true, 16), 0)};
    CHECK_THROWS(stack(bad));
}

TEST_CASE("duplicate notch frequencies are dropped with a warning") {
    const Profile p = build_profile("lte10");
    const std::vector<double> f = {6e6, 6e6, -6e6};
    const auto a = notch_constraints(p.num, p.alloc, f);
    CHECK(a.rows() == 2);
    CHECK_FALSE(a.warnings.empty());
}

TEST_CASE("two-dimensional projection") {
    ConstraintMatrix a;
    a.entries = CMatrix::Constant(1, 2, cd(1.0 / std::sqrt(2.0), 0.0));
    a.kind = "custom";
    a.row_scales = {1.0};
    const CMatrix g = build_projector(a).dense();
    CHECK(g(0, 0).real() == doctest::Approx(0.5));
    CHECK(g(0, 1).real() == doctest::Approx(-0.5));
    CHECK(g(1, 0).real() == doctest::Approx(-0.5));
    CHECK(g(1, 1).real() == doctest::Approx(0.5));
}

TEST_CASE("projector algebra") {
    const Profile lte = build_profile("lte10");
    const Profile frag = build_profile("fragmented450");
    std::vector<std::pair<Projector, ConstraintMatrix>> cases;
    for (int n = 0; n <= 4; ++n) {
        auto a = continuity_constraints(lte.num, lte.alloc, n);
        cases.emplace_back(build_projector(a), a);
    }
    const std::vector<double> f = {37500, 150000, 1.8e6, 2.2e6, -4.7e6, 4.7e6};
    auto a = notch_constraints(frag.num, frag.alloc, f);
    cases.emplace_back(build_projector(a), a);
    for (const auto& [g, c] : cases) {
        const CMatrix d = g.dense();
        const double nrm = d.norm();
        CHECK((d - d.adjoint()).norm() <= 1e-9 * nrm);
        CHECK((d * d - d).norm() <= 1e-9 * nrm);
        CHECK((c.entries * d).norm() <= 1e-9 * nrm);
        CHECK(projector_rank(d) == doctest::Approx(g.dimension() - g.constraints()).epsilon(1e-9));
        CHECK(g.dimension() - g.constraints() == c.cols() - c.rows());
    }
}

TEST_CASE("fast apply matches the dense projector") {
    Rng rng = make_rng(3);
    for (int k : {8, 64, 600}) {
        const int l = k == 600 ? 1024 : 2 * k;
        const Numerology num = make_numerology(k, 15e3, l, 0.0);
        const auto alloc = contiguous_allocation(k, true, l);
        const Projector g = build_projector(continuity_constraints(num, alloc, k == 8 ? 1 : 3));
        const CMatrix d = g.dense();
        for (int i = 0; i < 5; ++i) {
            const CVector x = random_vector(k, rng);
            CHECK((g.apply(x) - d * x).norm() <= 1e-10 * (d * x).norm());
        }
    }
}

TEST_CASE("precode cost is 2MK multiplications") {
    const Projector g = lte_continuity(4);
    Rng rng = make_rng(5);
    OpCount count;
    const CVector x = random_vector(600, rng);
    const CVector y = precode(g, x, &count);
    CHECK(count.complex_mults == 2ULL * 10 * 600);
    CHECK((precode(g, y) - y).norm() <= 1e-10 * y.norm());
    CHECK_THROWS_AS(precode(g, CVector::Zero(5)), std::invalid_argument);
}

TEST_CASE("nearest point, contraction and row scaling") {
    const Projector g = lte_continuity(2);
    const Profile p = build_profile("lte10");
    Rng rng = make_rng(9);
    for (int i = 0; i < 100; ++i) {
        const CVector d = random_vector(600, rng);
        const CVector s = g.apply(random_vector(600, rng));
        CHECK((d - g.apply(d)).norm() <= (d - s).norm() + 1e-12);
        CHECK(g.apply(d).norm() <= d.norm() + 1e-12);
    }
    auto a = continuity_constraints(p.num, p.alloc, 2);
    std::uniform_real_distribution<double> u(0.2, 5.0);
    for (int r = 0; r < a.rows(); ++r) a.entries.row(r) *= u(rng);
    const Projector scaled = build_projector(a);
    CHECK((scaled.dense() - g.dense()).norm() <= 1e-9 * g.dense().norm());
}

TEST_CASE("distortion of independent symbols") {
    const Projector g = lte_continuity(4);
    Rng rng = make_rng(13);
    double sum_eps = 0.0, sum_d = 0.0;
    for (int b = 0; b < 10; ++b) {
        const CMatrix batch = random_matrix(600, 1000, rng);
        const DistortionReport r = distortion(g, batch);
        for (double e : r.epsilon_norms) sum_eps += e * e;
        sum_d += batch.squaredNorm();
    }
    CHECK(sum_eps / 10000.0 == doctest::Approx(10.0).epsilon(0.02));
    CHECK(std::sqrt(sum_eps / sum_d) == doctest::Approx(std::sqrt(10.0 / 600.0)).epsilon(0.02));
    const CMatrix inside = g.apply_columns(random_matrix(600, 4, rng));
    for (double e : distortion(g, inside).epsilon_norms) CHECK(e < 1e-10);
}

TEST_CASE("rate loss") {
    CHECK(rate_loss(lte_continuity(4)) == doctest::Approx(10.0 / 600.0));
    CHECK(rate_loss(Projector::identity(600)) == 0.0);
    const Profile frag = build_profile("fragmented450");
    PrecoderConfig cfg;
    cfg.kind = PrecoderConfig::Kind::continuity;
    cfg.order = 4;
    CHECK(rate_loss(make_precoder(cfg, frag.num, frag.alloc)) == doctest::Approx(10.0 / 450.0));
}

TEST_CASE("config parsing") {
    CHECK(parse_precoder_kind("stacked") == PrecoderConfig::Kind::stacked);
    CHECK(to_string(PrecoderConfig::Kind::notch) == "notch");
    CHECK_THROWS_AS(parse_precoder_kind("fancy"), std::invalid_argument);
}

}
