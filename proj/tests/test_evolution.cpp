#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "liewave/evolution.hpp"
#include "liewave/presets.hpp"
#include "support/oracles.hpp"

using namespace liewave;

namespace {

CauchyData make_data(const GroupSpec&, SpectralField u0, SpectralField u1, double eps = 1.0) {
    CauchyData d;
    d.u0 = std::move(u0);
    d.u1 = std::move(u1);
    d.epsilon = eps;
    return d;
}

std::size_t trivial_slot(const GroupSpec& spec) {
    auto dual = enumerate_dual(spec);
    for (std::size_t i = 0; i < dual.size(); ++i)
        if (dual[i].region == Region::R1) return i;
    throw std::runtime_error("no trivial representation");
}

}  // namespace

TEST_CASE("homogeneous evolution", "[evolution]") {
    SECTION("zero mode follows u0 + (1 - e^{-t}) u1 exactly") {
        for (const auto& spec : {GroupSpec::torus({Rational(1)}, 2), GroupSpec::su2(2)}) {
            auto data = make_data(spec, constant_field(spec), constant_field(spec));
            const std::size_t slot = trivial_slot(spec);
            for (double t : {0.0, 0.5, 2.0, 10.0, 40.0}) {
                auto st = evolve_homogeneous(data, t);
                CHECK(std::abs(st.u.coeffs[slot][0] - Complex(2.0 - std::exp(-t), 0.0)) < 1e-14);
                CHECK(std::abs(st.du.coeffs[slot][0] - Complex(std::exp(-t), 0.0)) < 1e-14);
            }
        }
    }
    SECTION("resonant single mode reproduces (1+t)e^{-t}") {
        auto spec = GroupSpec::torus({Rational(1)}, 2);
        auto data = make_data(spec, single_mode_field(spec, {1}), zero_spectral_field(spec));
        for (double t : {0.0, 0.3, 1.0, 3.0, 8.0}) {
            auto n = energy_norms(evolve_homogeneous(data, t));
            CHECK(n[0] == Catch::Approx((1.0 + t) * std::exp(-t)).margin(1e-12));
            CHECK(n[2] == Catch::Approx(t * std::exp(-t)).margin(1e-12));
        }
    }
    SECTION("t = 0 returns the scaled data with du = u1") {
        auto spec = GroupSpec::su2(3);
        HarmonicPlan plan(make_grid(spec, 1.0));
        auto data = make_data(spec, random_field(plan, 5), random_field(plan, 6), 0.25);
        auto st = evolve_homogeneous(data, 0.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < st.u.coeffs.size(); ++i)
            for (std::size_t e = 0; e < st.u.coeffs[i].size(); ++e) {
                worst = std::max(worst, std::abs(st.u.coeffs[i][e] - 0.25 * data.u0.coeffs[i][e]));
                worst = std::max(worst, std::abs(st.du.coeffs[i][e] - 0.25 * data.u1.coeffs[i][e]));
            }
        CHECK(worst == 0.0);
    }
    SECTION("linearity in the data") {
        auto spec = GroupSpec::torus({Rational(2)}, 3);
        HarmonicPlan plan(make_grid(spec, 1.0));
        auto a0 = random_field(plan, 21), a1 = random_field(plan, 22);
        auto b0 = random_field(plan, 23), b1 = random_field(plan, 24);
        SpectralField m0 = a0, m1 = a1;
        for (std::size_t i = 0; i < m0.coeffs.size(); ++i) {
            m0.coeffs[i][0] = 2.0 * a0.coeffs[i][0] - 3.0 * b0.coeffs[i][0];
            m1.coeffs[i][0] = 2.0 * a1.coeffs[i][0] - 3.0 * b1.coeffs[i][0];
        }
        auto sa = evolve_homogeneous(make_data(spec, a0, a1), 1.7);
        auto sb = evolve_homogeneous(make_data(spec, b0, b1), 1.7);
        auto sm = evolve_homogeneous(make_data(spec, m0, m1), 1.7);
        double worst = 0.0;
        for (std::size_t i = 0; i < sm.u.coeffs.size(); ++i) {
            worst = std::max(worst, std::abs(sm.u.coeffs[i][0] -
                                             (2.0 * sa.u.coeffs[i][0] - 3.0 * sb.u.coeffs[i][0])));
            worst = std::max(worst, std::abs(sm.du.coeffs[i][0] -
                                             (2.0 * sa.du.coeffs[i][0] - 3.0 * sb.du.coeffs[i][0])));
        }
        CHECK(worst < 1e-13);
    }
    SECTION("per-mode ODE residual by centered differences") {
        auto spec = GroupSpec::torus({Rational(1)}, 2);
        HarmonicPlan plan(make_grid(spec, 1.0));
        auto data = make_data(spec, random_field(plan, 31), random_field(plan, 32));
        auto dual = enumerate_dual(spec);
        const double dt = 1e-3;
        for (double t : {1.0, 2.0}) {
            auto lo = evolve_homogeneous(data, t - dt);
            auto mid = evolve_homogeneous(data, t);
            auto hi = evolve_homogeneous(data, t + dt);
            for (std::size_t i = 0; i < dual.size(); ++i) {
                const double l2 = dual[i].eigenvalue_d();
                const Complex r = (hi.u.coeffs[i][0] - 2.0 * mid.u.coeffs[i][0] + lo.u.coeffs[i][0]) / (dt * dt) +
                                  (1.0 + l2) * (hi.u.coeffs[i][0] - lo.u.coeffs[i][0]) / (2.0 * dt) +
                                  l2 * mid.u.coeffs[i][0];
                CHECK(std::abs(r) < 1e-6);
            }
        }
    }
}

TEST_CASE("energy norms", "[evolution]") {
    auto spec = GroupSpec::torus({Rational(1)}, 2);
    SECTION("zero data") {
        auto st = evolve_homogeneous(make_data(spec, zero_spectral_field(spec), zero_spectral_field(spec)), 1.0);
        auto n = energy_norms(st);
        CHECK(n == std::array<double, 4>{0.0, 0.0, 0.0, 0.0});
    }
    SECTION("resonant mode at t = 0 gives (1, 1, 0, 0)") {
        auto st = evolve_homogeneous(make_data(spec, single_mode_field(spec, {1}), zero_spectral_field(spec)), 0.0);
        auto n = energy_norms(st);
        CHECK(n[0] == Catch::Approx(1.0));
        CHECK(n[1] == Catch::Approx(1.0));
        CHECK(n[2] == 0.0);
        CHECK(n[3] == 0.0);
    }
    SECTION("constant data approach (2, 0, 0, 0)") {
        auto st = evolve_homogeneous(make_data(spec, constant_field(spec), constant_field(spec)), 40.0);
        auto n = energy_norms(st);
        CHECK(n[0] == Catch::Approx(2.0).margin(1e-12));
        CHECK(n[1] == 0.0);
        CHECK(n[2] < 1e-12);
        CHECK(n[3] == 0.0);
    }
}

TEST_CASE("X(T) norm over a sampled trajectory", "[evolution]") {
    auto spec = GroupSpec::torus({Rational(1)}, 2);
    SECTION("single zero state") {
        std::vector<EvolutionState> traj{
            evolve_homogeneous(make_data(spec, zero_spectral_field(spec), zero_spectral_field(spec)), 0.0)};
        CHECK(xT_norm(traj) == 0.0);
    }
    SECTION("resonant data: the sum of norms is (2 + 4t)e^{-t}, peaking at t = 1/2") {
        auto data = make_data(spec, single_mode_field(spec, {1}), zero_spectral_field(spec));
        std::vector<EvolutionState> traj;
        std::vector<double> grid;
        double closed_max = 0.0;
        for (double t = 0.0; t <= 5.0 + 1e-12; t += 0.25) {
            grid.push_back(t);
            traj.push_back(evolve_homogeneous(data, t));
            closed_max = std::max(closed_max, (2.0 + 4.0 * t) * std::exp(-t));
        }
        const double x = xT_norm(traj);
        CHECK(x == Catch::Approx(closed_max).margin(1e-12));
        CHECK(x == Catch::Approx(4.0 * std::exp(-0.5)).margin(1e-12));
        CHECK(x > 2.0);  // the sup is not the t = 0 value

        // adding samples never decreases the sup
        std::vector<EvolutionState> coarse(traj.begin(), traj.begin() + 3);
        CHECK(xT_norm(coarse) <= x + 1e-15);
    }
}

TEST_CASE("pseudo-spectral nonlinearity", "[evolution]") {
    SECTION("constants map to |c|^p") {
        auto spec = GroupSpec::su2(2);
        HarmonicPlan plan(make_grid(spec, 2.0));
        auto c = constant_field(spec, Complex(-1.7, 0.0));
        auto F = apply_nonlinearity(c, 2.5, plan);
        const std::size_t slot = trivial_slot(spec);
        CHECK(std::abs(F.coeffs[slot][0] - Complex(std::pow(1.7, 2.5), 0.0)) < 1e-12);
        double off = 0.0;
        for (std::size_t i = 0; i < F.coeffs.size(); ++i)
            for (std::size_t e = 0; e < F.coeffs[i].size(); ++e)
                if (!(i == slot && e == 0)) off = std::max(off, std::abs(F.coeffs[i][e]));
        CHECK(off < 1e-12);
    }
    SECTION("cos² has coefficients 1/2 and 1/4 at k = 0, ±2") {
        auto spec = GroupSpec::torus({Rational(1)}, 4);
        HarmonicPlan plan(make_grid(spec, 2.0));
        auto u = zero_spectral_field(spec);
        auto dual = enumerate_dual(spec);
        for (std::size_t i = 0; i < dual.size(); ++i)
            if (std::abs(dual[i].index.components[0]) == 1) u.coeffs[i][0] = 0.5;  // cos x
        auto F = apply_nonlinearity(u, 2.0, plan);
        for (std::size_t i = 0; i < dual.size(); ++i) {
            const int k = dual[i].index.components[0];
            double expected = 0.0;
            if (k == 0) expected = 0.5;
            if (std::abs(k) == 2) expected = 0.25;
            CHECK(std::abs(F.coeffs[i][0] - Complex(expected, 0.0)) < 1e-13);
        }
    }
    SECTION("|cos|³ against the dense quadrature reference") {
        auto spec = GroupSpec::torus({Rational(1)}, 32);
        HarmonicPlan plan(make_grid(spec, 4.0));
        auto u = zero_spectral_field(spec);
        auto dual = enumerate_dual(spec);
        for (std::size_t i = 0; i < dual.size(); ++i)
            if (std::abs(dual[i].index.components[0]) == 1) u.coeffs[i][0] = 0.5;
        auto F = apply_nonlinearity(u, 3.0, plan);
        const double pi = std::numbers::pi;
        for (int k : {0, 1, 2, -1, -2}) {
            const Complex expected =
                oracle::piecewise_gl(
                    [&](double x) {
                        return std::pow(std::abs(std::cos(x)), 3.0) * std::polar(1.0, -k * x);
                    },
                    {0.0, 0.5 * pi, 1.5 * pi, 2.0 * pi}) /
                (2.0 * pi);
            for (std::size_t i = 0; i < dual.size(); ++i)
                if (dual[i].index.components[0] == k)
                    CHECK(std::abs(F.coeffs[i][0] - expected) < 1e-8);
        }
    }
}

TEST_CASE("duhamel quadrature", "[evolution]") {
    SECTION("zero forcing reduces to the homogeneous flow") {
        auto spec = GroupSpec::torus({Rational(1)}, 3);
        HarmonicPlan plan(make_grid(spec, 1.0));
        auto data = make_data(spec, random_field(plan, 41), random_field(plan, 42));
        const double t = 1.3;
        const int n_panels = 4;
        ForcingHistory forcing;
        std::vector<double> gl_nodes, gl_w;
        detail::gauss_legendre(4, gl_nodes, gl_w);
        for (int k = 0; k < n_panels; ++k)
            for (int q = 0; q < 4; ++q)
                forcing.add(t * (k + 0.5 + 0.5 * gl_nodes[q]) / n_panels, zero_spectral_field(spec));
        auto out = duhamel_apply(data, forcing, t, n_panels);
        auto hom = evolve_homogeneous(data, t);
        double worst = 0.0;
        for (std::size_t i = 0; i < out.coeffs.size(); ++i)
            worst = std::max(worst, std::abs(out.coeffs[i][0] - hom.u.coeffs[i][0]));
        CHECK(worst < 1e-14);
    }
    SECTION("constant forcing on the zero mode: c (t - 1 + e^{-t})") {
        auto spec = GroupSpec::torus({Rational(1)}, 2);
        auto data = make_data(spec, zero_spectral_field(spec), zero_spectral_field(spec));
        const double t = 1.0, c = 0.8;
        const int n_panels = 4;
        ForcingHistory forcing;
        std::vector<double> gl_nodes, gl_w;
        detail::gauss_legendre(4, gl_nodes, gl_w);
        for (int k = 0; k < n_panels; ++k)
            for (int q = 0; q < 4; ++q)
                forcing.add(t * (k + 0.5 + 0.5 * gl_nodes[q]) / n_panels, constant_field(spec, Complex(c, 0.0)));
        auto out = duhamel_apply(data, forcing, t, n_panels);
        const std::size_t slot = trivial_slot(spec);
        CHECK(std::abs(out.coeffs[slot][0] - Complex(c * std::exp(-1.0), 0.0)) < 1e-10);
    }
    SECTION("decaying forcing on a λ² = 2 mode matches the closed convolution") {
        auto spec = GroupSpec::torus({Rational(1), Rational(1)}, 1);
        auto data = make_data(spec, zero_spectral_field(spec), zero_spectral_field(spec));
        auto dual = enumerate_dual(spec);
        std::size_t slot = 0;
        for (std::size_t i = 0; i < dual.size(); ++i)
            if (dual[i].index.components == std::vector<int>{1, 1}) slot = i;
        REQUIRE(dual[slot].eigenvalue == Rational(2));

        const double t = 1.0;
        const int n_panels = 6;
        ForcingHistory forcing;
        std::vector<double> gl_nodes, gl_w;
        detail::gauss_legendre(4, gl_nodes, gl_w);
        for (int k = 0; k < n_panels; ++k)
            for (int q = 0; q < 4; ++q) {
                const double s = t * (k + 0.5 + 0.5 * gl_nodes[q]) / n_panels;
                auto F = zero_spectral_field(spec);
                F.coeffs[slot][0] = std::exp(-s);
                forcing.add(s, F);
            }
        auto out = duhamel_apply(data, forcing, t, n_panels);
        // ∫₀ᵗ (e^{-(t-s)} - e^{-2(t-s)}) e^{-s} ds = t e^{-t} - e^{-t} + e^{-2t}
        const double expected = t * std::exp(-t) - std::exp(-t) + std::exp(-2.0 * t);
        CHECK(std::abs(out.coeffs[slot][0] - Complex(expected, 0.0)) < 1e-8);
    }
    SECTION("missing forcing snapshots are an error") {
        auto spec = GroupSpec::torus({Rational(1)}, 2);
        auto data = make_data(spec, zero_spectral_field(spec), zero_spectral_field(spec));
        ForcingHistory forcing;
        forcing.add(0.5, zero_spectral_field(spec));
        CHECK_THROWS_AS(duhamel_apply(data, forcing, 1.0, 2), std::invalid_argument);
    }
}

TEST_CASE("picard iteration", "[evolution]") {
    auto spec = GroupSpec::torus({Rational(1)}, 8);
    SemilinearConfig cfg;
    cfg.p = 2.0;
    cfg.T = 0.5;
    cfg.n_time_steps = 16;
    cfg.picard_tol = 1e-12;
    cfg.picard_max_iters = 25;
    cfg.oversample = 2.0;

    SECTION("epsilon = 0 converges immediately to zero") {
        auto data = make_data(spec, single_mode_field(spec, {1}), single_mode_field(spec, {1}), 0.0);
        auto rep = picard_solve(data, cfg);
        CHECK(rep.converged);
        CHECK(rep.iterations == 1);
        CHECK(xT_norm(rep.trajectory) == 0.0);
    }
    SECTION("small data converge and match the RK4 reference") {
        auto data = make_data(spec, single_mode_field(spec, {1}), single_mode_field(spec, {1}), 1e-3);
        auto rep = picard_solve(data, cfg);
        REQUIRE(rep.converged);
        CHECK(rep.success());
        CHECK(rep.rho_hat < 0.5);
        CHECK(rep.rho_hat > 0.0);
        CHECK(rep.fixed_point_residual < 10.0 * cfg.picard_tol);

        // geometric decay of the successive differences
        for (std::size_t k = 1; k < rep.diffs.size(); ++k)
            CHECK(rep.diffs[k] < 0.5 * rep.diffs[k - 1]);

        // independent trajectory: RK4 on the full truncated spectral system
        HarmonicPlan plan(make_grid(spec, cfg.oversample));
        SpectralField eu0 = data.u0, eu1 = data.u1;
        for (std::size_t i = 0; i < eu0.coeffs.size(); ++i) {
            eu0.coeffs[i][0] *= data.epsilon;
            eu1.coeffs[i][0] *= data.epsilon;
        }
        auto ref = oracle::rk4_semilinear(plan, eu0, eu1, cfg.p, cfg.T, 1e-4);
        const EvolutionState& last = rep.trajectory.back();
        REQUIRE(last.t == Catch::Approx(cfg.T));
        double dist_sq = 0.0;
        for (std::size_t i = 0; i < last.u.coeffs.size(); ++i)
            dist_sq += std::norm(last.u.coeffs[i][0] - ref.u.coeffs[i][0]);
        CHECK(std::sqrt(dist_sq) < 1e-6);

        // real data stay real along the whole trajectory
        double imag_worst = 0.0;
        for (const auto& st : rep.trajectory) {
            auto g = plan.inverse(st.u);
            for (const auto& z : g.samples) imag_worst = std::max(imag_worst, std::abs(z.imag()));
        }
        CHECK(imag_worst < 1e-10);
    }
    SECTION("halving T roughly halves the contraction factor") {
        auto data = make_data(spec, single_mode_field(spec, {1}), single_mode_field(spec, {1}), 1e-3);
        auto rep_full = picard_solve(data, cfg);
        SemilinearConfig half = cfg;
        half.T = 0.5 * cfg.T;
        auto rep_half = picard_solve(data, half);
        REQUIRE(rep_full.converged);
        REQUIRE(rep_half.converged);
        const double ratio = rep_half.rho_hat / rep_full.rho_hat;
        CHECK(ratio > 0.3);
        CHECK(ratio < 0.7);
    }
    SECTION("large data on a long horizon abort instead of crashing") {
        auto data = make_data(spec, single_mode_field(spec, {1}), single_mode_field(spec, {1}), 1.0);
        SemilinearConfig big = cfg;
        big.T = 50.0;
        auto rep = picard_solve(data, big);
        CHECK_FALSE(rep.success());
        CHECK((rep.blew_up || !rep.converged));
        CHECK_FALSE(rep.diagnostic.empty());
    }
    SECTION("config validation") {
        SemilinearConfig bad = cfg;
        bad.p = 1.0;
        CHECK_THROWS_AS(bad.validate(spec), std::invalid_argument);
        SemilinearConfig su2_bad = cfg;
        su2_bad.p = 3.5;
        CHECK_THROWS_AS(su2_bad.validate(GroupSpec::su2(2)), std::invalid_argument);
        CHECK_FALSE(cfg.validate(spec).empty());         // n = 1 torus warns
        CHECK(cfg.validate(GroupSpec::su2(2)).empty());  // p = 2 fine on SU(2)
    }
}
