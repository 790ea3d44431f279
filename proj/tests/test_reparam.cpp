#include <doctest.h>

#include <cmath>
#include <random>

#include "orbits/reparam.hpp"
#include "testutil.hpp"

using namespace orbits;
using namespace orbits::testing;

TEST_CASE("constant-speed loop has the identity time map") {
    Loop z = circle_loop(64, 1.0, 1);  // |z| = 1
    ReparamTable tab = time_map(z);
    CHECK(tab.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));
    for (int j = 0; j < z.size(); ++j)
        CHECK(tab.cumulative()[(size_t)j] == doctest::Approx(z.node(j)).epsilon(1e-13));
    CHECK(tab.collisions().empty());
}

TEST_CASE("sqrt(2) cos(pi tau) has the closed-form time map and one collision") {
    const int n = 128;
    Loop z = cosine_loop(n, std::sqrt(2.0), 1);
    ReparamTable tab = time_map(z);
    CHECK(tab.norm_sq() == doctest::Approx(1.0).epsilon(1e-13));
    for (int j = 0; j < n; ++j) {
        double tau = z.node(j);
        double want = tau + std::sin(2.0 * pi * tau) / (2.0 * pi);
        CHECK(std::abs(tab.cumulative()[(size_t)j] - want) < 1e-12);
    }
    REQUIRE(tab.collisions().size() == 1);
    CHECK(std::abs(tab.collisions()[0].tau - 0.5) < 1e-10);
}

TEST_CASE("zero loop rejected") {
    std::vector<cd> zero(32, cd(0.0, 0.0));
    Loop z(zero, Parity::periodic);
    CHECK_THROWS_AS((void)time_map(z), DegenerateLoop);
}

TEST_CASE("time map endpoints and monotonicity") {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        for (Parity p : {Parity::periodic, Parity::antiperiodic}) {
            Loop z = random_loop(64, p, 8, seed);
            ReparamTable tab = time_map(z);
            CHECK(tab.cumulative().front() == 0.0);
            CHECK(tab.t_of(1.0) == doctest::Approx(1.0).epsilon(1e-14));
            for (size_t j = 1; j < tab.cumulative().size(); ++j)
                CHECK(tab.cumulative()[j] >= tab.cumulative()[j - 1] - 1e-14);
        }
    }
}

TEST_CASE("invert_time") {
    Loop z = circle_loop(64, 1.3, 1);
    ReparamTable tab = time_map(z);
    CHECK(tab.invert(0.37) == doctest::Approx(0.37).epsilon(1e-12));  // constant speed

    Loop zc = cosine_loop(128, std::sqrt(2.0), 1);
    ReparamTable tc = time_map(zc);
    // t = 1/2 sits at the inflection: the value contract is tight, tau itself
    // is resolvable only to the cube root of the evaluation noise
    double tau_half = tc.invert(0.5);
    CHECK(std::abs(tau_half - 0.5) < 1e-5);
    CHECK(std::abs(tc.t_of(tau_half) - 0.5) < 1e-12);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        double t = u(rng);
        CHECK(std::abs(tc.t_of(tc.invert(t)) - t) < 1e-11);
    }
}

TEST_CASE("derivative identity for the inverse map") {
    Loop z = random_loop(64, Parity::antiperiodic, 6, 17);
    ReparamTable tab = time_map(z);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        double t = u(rng);
        double tau = tab.invert(t);
        double tp = tab.speed_sq(tau) / tab.norm_sq();  // t'_z(tau)
        double taudot = tab.norm_sq() / tab.speed_sq(tau);
        CHECK(std::abs(taudot * tp - 1.0) < 1e-9);
    }
}

TEST_CASE("sigma_map on circles") {
    const int n = 64;
    double r = 1.7;
    Loop z = circle_loop(n, std::sqrt(r), 1);
    Loop q = sigma_map(z);
    CHECK(q.parity() == Parity::periodic);
    CHECK(q.size() == 4 * n);
    for (int j = 0; j < q.size(); ++j) {
        cd want = r * std::polar(1.0, 2.0 * pi * q.node(j));
        CHECK(std::abs(q[j] - want) < 1e-10);
    }
}

TEST_CASE("sigma_map is invariant under the involution, bit for bit") {
    Loop z = random_loop(64, Parity::antiperiodic, 6, 23);
    Loop a = sigma_map(z);
    Loop b = sigma_map(apply_involution(z));
    for (int j = 0; j < a.size(); ++j) CHECK(a[j] == b[j]);
}

TEST_CASE("sigma_map of a real twisted loop is a nonnegative segment") {
    double A = std::pow(2.0 / (pi * pi), 1.0 / 6.0);
    Loop z = cosine_loop(128, A, 1);
    Loop q = sigma_map(z);
    double upper = A * A;
    for (int j = 0; j < q.size(); ++j) {
        CHECK(std::abs(q[j].imag()) < 1e-12);
        CHECK(q[j].real() > -1e-12);
        CHECK(q[j].real() < upper + 1e-9);
    }
}

TEST_CASE("winding doubles through sigma_map") {
    for (uint64_t seed = 1; seed <= 8; ++seed) {
        for (Parity p : {Parity::periodic, Parity::antiperiodic}) {
            Loop z = random_loop(64, p, 5, seed);
            HalfInt w = winding_number(z);
            HalfInt wq = winding_number(sigma_map(z));
            CHECK(wq.twice == 2 * w.twice);
        }
    }
}

TEST_CASE("collision report") {
    CHECK(collision_report(circle_loop(64, 1.0, 1)).empty());

    double A = std::pow(2.0 / (pi * pi), 1.0 / 6.0);
    auto cols = collision_report(cosine_loop(128, A, 1));
    REQUIRE(cols.size() == 1);
    CHECK(std::abs(cols[0].tau - 0.5) < 1e-10);
    CHECK(cols[0].z_prime_abs == doctest::Approx(A * pi).epsilon(1e-9));
    CHECK(cols[0].t_third > 0.0);

    auto two = collision_report(cosine_loop(128, 1.0, 2));  // cos(2 pi tau), periodic
    REQUIRE(two.size() == 2);
    CHECK(std::abs(two[0].tau - 0.25) < 1e-10);
    CHECK(std::abs(two[1].tau - 0.75) < 1e-10);
}

TEST_CASE("a vanishing point with vanishing derivative is degenerate") {
    // z = (1 + cos(2 pi tau)) / 2 touches 0 quadratically at tau = 1/2
    const int n = 64;
    std::vector<cd> s((size_t)n);
    for (int j = 0; j < n; ++j)
        s[(size_t)j] = 0.5 * (1.0 + std::cos(2.0 * pi * j / n));
    Loop z(s, Parity::periodic);
    CHECK_THROWS_AS((void)collision_report(z), DegenerateCollision);
}

TEST_CASE("kinetic identity: squared-speed norm of sigma equals 4 ||z||^2 ||z'||^2") {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        for (Parity p : {Parity::periodic, Parity::antiperiodic}) {
            Loop z = random_loop(128, p, 8, seed);
            Loop q = sigma_map(z, 4 * z.size());
            double lhs = l2_norm_sq(spectral_derivative(q));
            double rhs = 4.0 * l2_norm_sq(z) * l2_norm_sq(spectral_derivative(z));
            CHECK(rel_err(lhs, rhs) < 1e-6);
        }
    }
}

TEST_CASE("coulomb identity: mean of 1/|q| equals 1/||z||^2") {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        for (Parity p : {Parity::periodic, Parity::antiperiodic}) {
            Loop z = random_loop(128, p, 8, seed);
            Loop q = sigma_map(z, 4 * z.size());
            double mean = 0.0;
            for (const cd& v : q.samples()) mean += 1.0 / std::abs(v);
            mean /= q.size();
            CHECK(rel_err(mean, 1.0 / l2_norm_sq(z)) < 1e-6);
        }
    }
}
