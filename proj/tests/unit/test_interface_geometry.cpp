#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "sil/error.hpp"
#include "sil/interface_geometry.hpp"

using namespace sil;
using gen::vecd;

TEST_SUITE("interface_geometry")
{
    TEST_CASE("shrinking circle radius, horizon and signed distance")
    {
        Interface c = Interface::shrinking_sphere(vecd({0, 0}), 0.5, 0.1);
        CHECK(c.radius(0.05) == doctest::Approx(std::sqrt(0.25 - 0.1)));
        CHECK(c.horizon() == doctest::Approx((0.25 - 0.04) / 2.0));
        CHECK(c.d_Sigma(vecd({0.3, 0.0}), 0.0) == doctest::Approx(0.2));
        CHECK(c.d_Sigma(vecd({0.0, -0.7}), 0.0) == doctest::Approx(-0.2));
        CHECK(c.chi(vecd({0.1, 0.1}), 0.0) == 1);
        Interface s = Interface::shrinking_sphere(vecd({0, 0, 0}), 0.5, 0.1);
        CHECK(s.radius(0.01) == doctest::Approx(std::sqrt(0.25 - 0.04)));
        CHECK_THROWS_AS(Interface::shrinking_sphere(vecd({0, 0}), 0.15, 0.1), Error);
    }

    TEST_CASE("unit normal, calibration length and cutoffs")
    {
        Interface c = Interface::shrinking_sphere(vecd({0.1, -0.2}), 0.5, 0.15);
        gen::Gen g(41);
        for (int k = 0; k < gen::kCases; ++k) {
            double t = g.uniform(0.0, 0.05);
            double r = g.uniform(0.05, 0.9);
            VecN dir = g.unit(2);
            VecD x = vecd({0.1 + r * dir[0], -0.2 + r * dir[1]});
            CHECK(c.grad_d(x, t).norm() == doctest::Approx(1.0));
            double xi = c.xi(x, t).norm();
            CHECK(xi <= 1.0 + 1e-15);
            if (std::abs(c.d_Sigma(x, t)) >= 0.15) CHECK(xi == 0.0);
            double e = c.eta0(x, t);
            CHECK(e >= 0.0);
            CHECK(e <= 1.0);
            double v = g.uniform(-1.0, 1.0);
            CHECK(std::abs(c.eta_trunc(v)) <= 0.15);
            if (std::abs(c.d_Sigma(x, t)) < 0.15) {
                VecD p = c.project(x, t);
                CHECK(std::abs(c.d_Sigma(p, t)) < 1e-12);
            }
        }
        CHECK_THROWS_AS(c.grad_d(vecd({0.1, -0.2}), 0.0), Error);
    }

    TEST_CASE("identity residuals converge at second order")
    {
        Interface c = Interface::shrinking_sphere(vecd({0, 0}), 0.5, 0.2);
        double t = 0.01, r = c.radius(t);
        std::vector<VecD> on, tube;
        for (int k = 0; k < 16; ++k) {
            double a = 2 * M_PI * (k + 0.3) / 16;
            on.push_back(vecd({r * std::cos(a), r * std::sin(a)}));
            tube.push_back(vecd({(r - 0.07) * std::cos(a), (r - 0.07) * std::sin(a)}));
        }
        auto a1 = c.verify_identities(t, on, 1e-2), a2 = c.verify_identities(t, on, 5e-3);
        auto b1 = c.verify_identities(t, tube, 1e-2), b2 = c.verify_identities(t, tube, 5e-3);
        CHECK(std::log2(a1.div_xi / a2.div_xi) == doctest::Approx(2.0).epsilon(0.1));
        CHECK(std::log2(b1.transport_d / b2.transport_d) == doctest::Approx(2.0).epsilon(0.1));
        CHECK(std::log2(b1.transport_xi / b2.transport_xi) == doctest::Approx(2.0).epsilon(0.1));
        CHECK(std::log2(b1.transport_xi2 / b2.transport_xi2) == doctest::Approx(2.0).epsilon(0.1));
        CHECK_THROWS_AS(c.verify_identities(t, {vecd({0.0, 0.05})}, 1e-3), Error);
    }

    TEST_CASE("stationary point")
    {
        Interface p = Interface::stationary_point(0.1, 0.4);
        CHECK(p.d_Sigma(vecd({-0.2}), 1.0) == doctest::Approx(0.3));
        CHECK(p.velocity(vecd({0.0}), 0.0) == 0.0);
        CHECK(std::isinf(p.horizon()));
        CHECK(p.H_ext(vecd({0.0}), 0.0).norm() == 0.0);
        CHECK(p.calibration_constant() > 0.0);
    }

    TEST_CASE("calibration bound 1 - phi(d/delta0) >= C min(d^2, 1)")
    {
        Interface c = Interface::shrinking_sphere(vecd({0, 0}), 0.5, 0.2);
        double C = c.calibration_constant();
        gen::Gen g(42);
        for (int k = 0; k < gen::kCases; ++k) {
            double d = g.uniform(1e-3, 2.0);
            double phi = std::abs(d) < 0.2 ? Interface::phi(d / 0.2) : 0.0;
            CHECK(1.0 - phi >= C * std::min(d * d, 1.0) - 1e-12);
        }
    }
}
