#include <doctest.h>

#include "helpers.hpp"
#include "sprec/channel.hpp"
#include "sprec/detection.hpp"

using namespace sprec;

namespace {

CVector random_symbols(int k, const Constellation& c, Rng& rng) {
    std::uniform_int_distribution<int> pick(0, c.size() - 1);
    CVector d(k);
    for (int i = 0; i < k; ++i) d[i] = c.points()[pick(rng)];
    return d;
}

Projector lte_continuity(int order) {
    const Profile p = build_profile("lte10");
    return build_projector(continuity_constraints(p.num, p.alloc, order));
}

int symbol_errors(const CVector& est, const CVector& d, const Constellation& c) {
    int e = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) e += c.nearest(est[i]) != d[i];
    return e;
}

}  // namespace

TEST_SUITE("detection") {

TEST_CASE("zero forcing") {
    CVector h(3), y(3);
    h << 2.0, cd(0.0, 1.0), 0.0;
    y << 4.0, cd(0.0, 1.0), 1.0;
    const Equalized e = zf_equalize(y, h);
    CHECK(std::abs(e.symbols[0] - 2.0) < 1e-15);
    CHECK(std::abs(e.symbols[1] - 1.0) < 1e-15);
    CHECK(e.noise_scale[0] == doctest::Approx(0.25));
    CHECK(std::isinf(e.noise_scale[2]));
}

TEST_CASE("symbol estimates") {
    const Constellation c(Modulation::qam16);
    CVector y(2);
    y << c.points()[3], c.points()[7] * 0.98;
    const CVector hard = symbol_estimate(y, RVector::Constant(2, 0.1), c, SoftMode::hard);
    CHECK(hard[0] == c.points()[3]);
    CHECK(hard[1] == c.points()[7]);
    // Vanishing noise gives the nearest point; huge noise gives the mean (0).
    const CVector soft = symbol_estimate(y, RVector::Constant(2, 1e-8), c, SoftMode::soft);
    CHECK(std::abs(soft[1] - c.points()[7]) < 1e-6);
    const CVector flat = symbol_estimate(y, RVector::Constant(2, 1e8), c, SoftMode::soft);
    CHECK(std::abs(flat[0]) < 1e-6);
}

TEST_CASE("noiseless precoded symbols are recovered") {
    const Constellation c(Modulation::qpsk);
    Rng rng = make_rng(41);
    for (int order : {0, 2, 4}) {
        const Projector g = lte_continuity(order);
        for (bool aware : {false, true}) {
            DetectOptions opt;
            opt.noise_aware = aware;
            const CVector d = random_symbols(600, c, rng);
            const CVector r = g.apply(d);
            const DetectResult res = iterative_detect(g, r, RVector::Constant(600, 1e-6), c, opt);
            CHECK(symbol_errors(res.estimate, d, c) == 0);
            CHECK(res.iterations >= 1);
            CHECK(res.iterations <= opt.max_iters);
            CHECK((res.estimate - d).norm() < 1e-3 * d.norm());
        }
    }
}

TEST_CASE("hard detector reaches a fixed point") {
    const Constellation c(Modulation::qam16);
    Rng rng = make_rng(42);
    const Projector g = lte_continuity(4);
    const CVector d = random_symbols(600, c, rng);
    DetectOptions opt;
    opt.mode = SoftMode::hard;
    const DetectResult res = iterative_detect(g, g.apply(d), RVector::Constant(600, 1e-4), c, opt);
    CHECK(symbol_errors(res.estimate, d, c) == 0);
    REQUIRE_FALSE(res.residuals.empty());
    CHECK(res.residuals.back() < 1e-9);
}

TEST_CASE("projection receiver") {
    const Projector g = lte_continuity(1);
    Rng rng = make_rng(43);
    const CVector r = test::random_vector(600, rng);
    CHECK((project_receive(g, r) - g.apply(r)).norm() < 1e-12);
}

TEST_CASE("MRT weights") {
    CVector h(3);
    h << 1.0, cd(0.0, 2.0), 2.0;
    const CVector w = mrt_precode(h);
    CHECK(w.norm() == doctest::Approx(1.0));
    CHECK(std::abs((h.transpose() * w).value() - 3.0) < 1e-12);
}

TEST_CASE("noiseless MISO detection") {
    const Profile p = build_profile("lte10");
    const Constellation c(Modulation::qam16);
    Rng rng = make_rng(44);
    const Projector g = lte_continuity(4);
    const CMatrix h = miso_channel(eva_profile(), 4, p.num, p.alloc, rng);
    CMatrix w(600, 4);
    for (int k = 0; k < 600; ++k) w.row(k) = mrt_precode(h.row(k).transpose()).transpose();
    const CVector d = random_symbols(600, c, rng);
    CVector y = CVector::Zero(600);
    for (int i = 0; i < 4; ++i) y += h.col(i).cwiseProduct(g.apply(w.col(i).cwiseProduct(d)));
    RVector post;
    const DetectResult res = miso_detect(g, h, w, y, 1e-8, c, DetectOptions{}, &post);
    CHECK(symbol_errors(res.estimate, d, c) == 0);
    CHECK(post.size() == 600);
}

TEST_CASE("soft mode parsing") {
    CHECK(parse_soft_mode("hard") == SoftMode::hard);
    CHECK(parse_soft_mode("soft") == SoftMode::soft);
    CHECK_THROWS(parse_soft_mode("fuzzy"));
}

}
