#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "sts/trajectory.hpp"

using namespace sts;

namespace {

const TrajectorySpec kSpec{{0.35, 0.75}, {0.45, 1.05}, 0.05, 3.4};

// Dense polynomial helpers for the jerk-optimality property.
using Poly = std::vector<double>;  // coefficients, lowest order first

Poly mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

Poly add(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
}

Poly deriv(const Poly& p) {
    Poly out;
    for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * static_cast<double>(i));
    if (out.empty()) out.push_back(0.0);
    return out;
}

double eval(const Poly& p, double x) {
    double y = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) y = y * x + p[i];
    return y;
}

// Integral of p(x)^2 over [0,1] by exact term-wise integration.
double integral_sq(const Poly& p) {
    const Poly sq = mul(p, p);
    double s = 0.0;
    for (std::size_t i = 0; i < sq.size(); ++i) s += sq[i] / static_cast<double>(i + 1);
    return s;
}

double arc_length(const TrajectorySpec& spec) {
    double len = 0.0;
    Vec2 prev = path_point(spec, 0.0);
    for (int i = 1; i <= 2000; ++i) {
        const Vec2 p = path_point(spec, i / 2000.0);
        len += (p - prev).norm();
        prev = p;
    }
    return len;
}

}  // namespace

TEST_CASE("minimum-jerk law boundary conditions") {
    const double T = 3.4;
    CHECK(minjerk_s(0.0, T) == 0.0);
    CHECK(minjerk_s(T, T) == 1.0);
    CHECK(std::abs(minjerk_s(T / 2.0, T) - 0.5) <= 1e-12);

    const double h = 1e-5 * T;
    // One-sided slope at the ends (the law is clamped outside [0, T]).
    const double v0 = (minjerk_s(h, T) - minjerk_s(0.0, T)) / h;
    const double vT = (minjerk_s(T, T) - minjerk_s(T - h, T)) / h;
    CHECK(std::abs(v0) < 1e-6);
    CHECK(std::abs(vT) < 1e-6);
    const double a0 = (minjerk_s(2 * h, T) - 2 * minjerk_s(h, T) + minjerk_s(0.0, T)) / (h * h);
    const double aT =
        (minjerk_s(T, T) - 2 * minjerk_s(T - h, T) + minjerk_s(T - 2 * h, T)) / (h * h);
    CHECK(std::abs(a0) < 1e-3);
    CHECK(std::abs(aT) < 1e-3);
}

TEST_CASE("minimum-jerk law is strictly increasing and clamped") {
    const double T = 2.0;
    double prev = -1.0;
    for (int i = 0; i <= 400; ++i) {
        const double s = minjerk_s(T * i / 400.0, T);
        CHECK(s > prev);
        prev = s;
    }
    CHECK(minjerk_s(-1.0, T) == 0.0);
    CHECK(minjerk_s(10.0, T) == 1.0);
}

TEST_CASE("quintic minimizes integrated squared jerk among admissible curves") {
    // s(tau) = 10 tau^3 - 15 tau^4 + 6 tau^5; any competitor with the same
    // position/velocity/acceleration boundary values costs strictly more.
    const Poly minjerk{0.0, 0.0, 0.0, 10.0, -15.0, 6.0};
    const Poly jerk = deriv(deriv(deriv(minjerk)));
    const double base_cost = integral_sq(jerk);

    // Sanity: our polynomial matches the production law.
    for (int i = 0; i <= 20; ++i) {
        const double tau = i / 20.0;
        CHECK(std::abs(eval(minjerk, tau) - minjerk_s(tau, 1.0)) < 1e-12);
    }

    // Perturbations tau^3 (1-tau)^3 (a + b tau) vanish with their first two
    // derivatives at both ends, so candidates stay admissible.
    const Poly bump = mul(mul(Poly{0, 0, 0, 1}, mul(Poly{1, -1}, mul(Poly{1, -1}, Poly{1, -1}))),
                          Poly{1});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = dist(rng);
        const double b = dist(rng);
        if (std::abs(a) < 1e-3 && std::abs(b) < 1e-3) continue;
        const Poly candidate = add(minjerk, mul(bump, Poly{a, b}));
        CHECK(std::abs(eval(candidate, 0.0)) < 1e-12);
        CHECK(std::abs(eval(candidate, 1.0) - 1.0) < 1e-12);
        const double cost = integral_sq(deriv(deriv(deriv(candidate))));
        CHECK(cost > base_cost);
    }
}

TEST_CASE("path endpoints are exact and dev bulges by half its value") {
    const Vec2 p0 = path_point(kSpec, 0.0);
    const Vec2 p1 = path_point(kSpec, 1.0);
    CHECK(p0.x == kSpec.pi.x);
    CHECK(p0.y == kSpec.pi.y);
    CHECK(p1.x == kSpec.pf.x);
    CHECK(p1.y == kSpec.pf.y);

    // Vertical segment: the quadratic Bezier apex sits at dev/2 laterally.
    TrajectorySpec vertical{{0.0, 0.0}, {0.0, 1.0}, 0.1, 3.4};
    double max_off = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        max_off = std::max(max_off, std::abs(path_point(vertical, i / 1000.0).x));
    }
    CHECK(max_off == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(path_point(vertical, 0.5).x == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("zero deviation gives a collinear path no shorter than the chord") {
    TrajectorySpec straight = kSpec;
    straight.dev = 0.0;
    const Vec2 d = straight.pf - straight.pi;
    for (int i = 0; i <= 100; ++i) {
        const Vec2 p = path_point(straight, i / 100.0) - straight.pi;
        CHECK(std::abs(p.x * d.y - p.y * d.x) < 1e-12);
    }
    const double chord = d.norm();
    CHECK(arc_length(straight) == doctest::Approx(chord).epsilon(1e-6));
    CHECK(arc_length(kSpec) > chord);
}

TEST_CASE("trajectory state advances to completion") {
    TrajectoryState st(kSpec);
    CHECK(st.point().x == kSpec.pi.x);
    CHECK(st.point().y == kSpec.pi.y);
    int ticks = 0;
    while (!st.complete()) {
        st.advance(0.01);
        ++ticks;
    }
    CHECK(ticks >= 340);
    CHECK(ticks <= 341);  // one extra tick allowed for accumulated fp error
    CHECK(st.point().x == kSpec.pf.x);  // bitwise-exact arrival
    CHECK(st.point().y == kSpec.pf.y);
    const Vec2 end = st.point();
    st.advance(0.01);  // no-op once complete
    CHECK(st.point().x == end.x);
    CHECK(st.point().y == end.y);
}

TEST_CASE("stabilization shift translates the remaining path rigidly") {
    TrajectoryState st(kSpec);
    for (int i = 0; i < 100; ++i) st.advance(0.01);
    TrajectoryState ref = st;

    st.stabilization_update(0.03);
    st.stabilization_update(-0.01);
    CHECK(st.x_shift() == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(st.point().x == doctest::Approx(ref.point().x + 0.02).epsilon(1e-12));
    CHECK(st.point().y == ref.point().y);

    // Time was frozen during the shift: both need the same remaining ticks,
    // and the shifted copy lands at pf translated by the net shift.
    while (!ref.complete()) {
        st.advance(0.01);
        ref.advance(0.01);
    }
    CHECK(st.complete());
    CHECK(st.point().x == doctest::Approx(kSpec.pf.x + 0.02).epsilon(1e-12));
    CHECK(st.point().y == kSpec.pf.y);
}

TEST_CASE("reverse trajectory runs straight back to home") {
    TrajectoryState st(kSpec);
    for (int i = 0; i < 204; ++i) st.advance(0.01);  // 60% of the way
    const Vec2 here = st.point();
    const Vec2 home = kSpec.pi;

    const TrajectorySpec rev = reverse_trajectory(st, home, st.elapsed());
    CHECK(rev.pi.x == here.x);
    CHECK(rev.pi.y == here.y);
    CHECK(rev.pf.x == home.x);
    CHECK(rev.pf.y == home.y);
    CHECK(rev.dev == 0.0);
    CHECK(rev.duration == doctest::Approx(2.04).epsilon(1e-12));

    TrajectoryState back(rev);
    while (!back.complete()) back.advance(0.01);
    CHECK(back.point().x == home.x);  // bitwise-exact return
    CHECK(back.point().y == home.y);
}

TEST_CASE("spec validation") {
    TrajectorySpec bad = kSpec;
    bad.duration = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = kSpec;
    bad.pf = bad.pi;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = kSpec;
    bad.dev = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_NOTHROW(kSpec.validate());
}
