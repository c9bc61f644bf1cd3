#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include "liewave/harmonic.hpp"
#include "liewave/presets.hpp"
#include "support/oracles.hpp"

using namespace liewave;
using std::numbers::pi;

namespace {

// Textbook closed forms for the small Wigner d blocks, the independent
// reference for the recurrence and for the quadrature orthogonality check.
// Rows and columns are ordered with m, n descending.
double closed_d(int two_l, int two_m, int two_n, double beta) {
    const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
    const double x = std::cos(beta), sb = std::sin(beta);
    auto key = [&](int tm, int tn) { return tm * 100 + tn; };
    switch (two_l) {
        case 0:
            return 1.0;
        case 1: {
            std::map<int, double> v{{key(1, 1), c}, {key(1, -1), -s}, {key(-1, 1), s}, {key(-1, -1), c}};
            return v.at(key(two_m, two_n));
        }
        case 2: {
            std::map<int, double> v{
                {key(2, 2), 0.5 * (1 + x)},   {key(2, 0), -sb / std::sqrt(2.0)}, {key(2, -2), 0.5 * (1 - x)},
                {key(0, 2), sb / std::sqrt(2.0)}, {key(0, 0), x},               {key(0, -2), -sb / std::sqrt(2.0)},
                {key(-2, 2), 0.5 * (1 - x)},  {key(-2, 0), sb / std::sqrt(2.0)}, {key(-2, -2), 0.5 * (1 + x)}};
            return v.at(key(two_m, two_n));
        }
        case 4: {
            std::map<int, double> v{{key(4, 4), 0.25 * (1 + x) * (1 + x)},
                                    {key(4, -4), 0.25 * (1 - x) * (1 - x)},
                                    {key(4, 0), std::sqrt(6.0) / 4.0 * sb * sb},
                                    {key(2, 2), 0.5 * (1 + x) * (2 * x - 1)},
                                    {key(2, -2), 0.5 * (1 - x) * (2 * x + 1)},
                                    {key(0, 0), 0.5 * (3 * x * x - 1)}};
            return v.at(key(two_m, two_n));
        }
    }
    throw std::runtime_error("closed_d: no closed form stored");
}

Complex closed_entry(int two_l, int two_m, int two_n, double a, double b, double g) {
    return std::polar(1.0, -0.5 * two_m * a) * closed_d(two_l, two_m, two_n, b) *
           std::polar(1.0, -0.5 * two_n * g);
}

GridField sample_function(const GridDescriptor& grid, const std::function<Complex(double, double, double)>& f) {
    std::vector<Complex> samples(grid.node_count());
    const auto& a = grid.axis_nodes[0];
    const auto& b = grid.axis_nodes[1];
    const auto& g = grid.axis_nodes[2];
    std::size_t idx = 0;
    for (double av : a)
        for (double bv : b)
            for (double gv : g) samples[idx++] = f(av, bv, gv);
    return GridField(grid, std::move(samples));
}

}  // namespace

TEST_CASE("grid construction", "[harmonic]") {
    auto t1 = GroupSpec::torus({Rational(1)}, 2);
    auto g1 = make_grid(t1, 1.0);
    REQUIRE(g1.node_count() == 5);
    for (double w : g1.weights) CHECK(w == Catch::Approx(0.2).margin(1e-15));

    auto g2 = make_grid(t1, 2.0);
    CHECK(g2.node_count() == 10);
    CHECK(g2.weights[0] == Catch::Approx(0.1).margin(1e-15));

    auto gsu2 = make_grid(GroupSpec::su2(2), 1.0);
    CHECK(gsu2.axis_nodes[1].size() == 3);  // Gauss-Legendre in cos β
    CHECK(gsu2.node_count() ==
          gsu2.axis_nodes[0].size() * gsu2.axis_nodes[1].size() * gsu2.axis_nodes[2].size());

    for (const auto& grid : {g1, g2, gsu2, make_grid(GroupSpec::so3(3), 1.5),
                             make_grid(GroupSpec::torus({Rational(1), Rational(2)}, 3), 1.0)}) {
        double sum = 0.0;
        for (double w : grid.weights) sum += w;
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }

    CHECK_THROWS_AS(make_grid(t1, 0.5), std::invalid_argument);
}

TEST_CASE("wigner recurrence matches closed forms", "[harmonic]") {
    for (double beta : {0.3, 1.1, 2.0, 2.9}) {
        WignerTable table(4, beta);
        for (int two_l : {0, 1, 2, 4}) {
            for (int two_m = -two_l; two_m <= two_l; two_m += 2) {
                for (int two_n = -two_l; two_n <= two_l; two_n += 2) {
                    double expected;
                    try {
                        expected = closed_d(two_l, two_m, two_n, beta);
                    } catch (const std::exception&) {
                        continue;
                    }
                    CHECK(table.d(two_l, two_m, two_n) == Catch::Approx(expected).margin(1e-13));
                }
            }
        }
    }
}

TEST_CASE("quadrature reproduces Schur orthogonality", "[harmonic]") {
    // Products of matrix entries of the retained representations, integrated
    // with the grid weights, against δ δ δ / d. Entries are evaluated from the
    // textbook closed forms, independent of the transform tables.
    auto spec = GroupSpec::su2(2);
    auto grid = make_grid(spec, 1.0);
    struct Entry {
        int two_l, two_m, two_n, dim;
    };
    std::vector<Entry> entries;
    for (int two_l : {0, 1, 2})
        for (int tm = -two_l; tm <= two_l; tm += 2)
            for (int tn = -two_l; tn <= two_l; tn += 2) entries.push_back({two_l, tm, tn, two_l + 1});

    double worst = 0.0;
    for (const auto& e1 : entries) {
        for (const auto& e2 : entries) {
            Complex acc(0.0, 0.0);
            std::size_t idx = 0;
            for (double a : grid.axis_nodes[0])
                for (double b : grid.axis_nodes[1])
                    for (double g : grid.axis_nodes[2]) {
                        acc += grid.weights[idx++] * closed_entry(e1.two_l, e1.two_m, e1.two_n, a, b, g) *
                               std::conj(closed_entry(e2.two_l, e2.two_m, e2.two_n, a, b, g));
                    }
            const bool same = e1.two_l == e2.two_l && e1.two_m == e2.two_m && e1.two_n == e2.two_n;
            const Complex expected = same ? Complex(1.0 / e1.dim, 0.0) : Complex(0.0, 0.0);
            worst = std::max(worst, std::abs(acc - expected));
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("forward transform", "[harmonic]") {
    SECTION("constant function lands on the trivial representation") {
        for (const auto& spec : {GroupSpec::torus({Rational(1)}, 3), GroupSpec::su2(3), GroupSpec::so3(2)}) {
            auto grid = make_grid(spec, 1.0);
            GridField one(grid, std::vector<Complex>(grid.node_count(), Complex(1.0, 0.0)));
            auto F = forward_gft(one);
            auto dual = enumerate_dual(spec);
            for (std::size_t i = 0; i < dual.size(); ++i) {
                for (std::size_t e = 0; e < F.coeffs[i].size(); ++e) {
                    const Complex expected =
                        dual[i].region == Region::R1 && e == 0 ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
                    CHECK(std::abs(F.coeffs[i][e] - expected) < 1e-12);
                }
            }
        }
    }
    SECTION("sqrt(2) cos x on the unit circle") {
        auto spec = GroupSpec::torus({Rational(1)}, 2);
        auto grid = make_grid(spec, 1.0);
        std::vector<Complex> samples(grid.node_count());
        for (std::size_t i = 0; i < samples.size(); ++i)
            samples[i] = std::sqrt(2.0) * std::cos(grid.axis_nodes[0][i]);
        auto F = forward_gft(GridField(grid, std::move(samples)));
        auto dual = enumerate_dual(spec);
        for (std::size_t i = 0; i < dual.size(); ++i) {
            const int k = dual[i].index.components[0];
            const Complex expected = std::abs(k) == 1 ? Complex(1.0 / std::sqrt(2.0), 0.0) : Complex(0.0, 0.0);
            CHECK(std::abs(F.coeffs[i][0] - expected) < 1e-12);
        }
    }
    SECTION("normalized Wigner entry obeys the Schur position rule") {
        // f = sqrt(d) ξ_{ij} for the spin-1/2 representation: the only nonzero
        // coefficient sits at (j, i) with modulus 1/sqrt(d).
        auto spec = GroupSpec::su2(2);
        auto grid = make_grid(spec, 1.0);
        // f built from the (i, j) = (0, 1) entry of the spin-1/2 block
        auto f = sample_function(grid, [&](double a, double b, double g) {
            return std::sqrt(2.0) * closed_entry(1, 1, -1, a, b, g);
        });
        auto F = forward_gft(f);
        auto dual = enumerate_dual(spec);
        for (std::size_t r = 0; r < dual.size(); ++r) {
            const int d = dual[r].dim;
            for (int row = 0; row < d; ++row) {
                for (int col = 0; col < d; ++col) {
                    const double v = std::abs(F.coeffs[r][static_cast<std::size_t>(row) * d + col]);
                    // (row, col) = (j, i) = (1, 0) of the two-dimensional block
                    if (dual[r].index.components[0] == 1 && row == 1 && col == 0)
                        CHECK(v == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
                    else
                        CHECK(v < 1e-12);
                }
            }
        }
    }
    SECTION("shape mismatch is rejected") {
        auto spec = GroupSpec::torus({Rational(1)}, 2);
        auto grid = make_grid(spec, 1.0);
        GridField f;
        f.grid = grid;
        f.samples.assign(3, Complex(0.0, 0.0));
        CHECK_THROWS_AS(forward_gft(f), std::invalid_argument);
    }
}

TEST_CASE("inverse transform", "[harmonic]") {
    SECTION("delta at the trivial representation is the constant 1") {
        for (const auto& spec : {GroupSpec::torus({Rational(1), Rational(1)}, 2), GroupSpec::su2(3)}) {
            auto grid = make_grid(spec, 1.0);
            auto f = inverse_gft(constant_field(spec), grid);
            for (const auto& z : f.samples) CHECK(std::abs(z - Complex(1.0, 0.0)) < 1e-12);
        }
    }
    SECTION("two half-coefficients synthesize sqrt(2) cos x") {
        auto spec = GroupSpec::torus({Rational(1)}, 2);
        auto grid = make_grid(spec, 2.0);
        auto f = inverse_gft(single_mode_field(spec, {1}), grid);
        for (std::size_t i = 0; i < f.samples.size(); ++i)
            CHECK(std::abs(f.samples[i] - std::sqrt(2.0) * std::cos(grid.axis_nodes[0][i])) < 1e-12);
    }
    SECTION("round trip is the identity within the bandlimit") {
        struct Case {
            GroupSpec spec;
            double oversample;
        };
        const Case cases[] = {{GroupSpec::torus({Rational(1)}, 8), 1.0},
                              {GroupSpec::torus({Rational(1), Rational(2)}, 3), 1.5},
                              {GroupSpec::su2(3), 1.0},
                              {GroupSpec::so3(2), 2.0}};
        for (const auto& c : cases) {
            HarmonicPlan plan(make_grid(c.spec, c.oversample));
            for (std::uint64_t seed : {7ull, 8ull}) {
                auto F = random_field(plan, seed, false);
                auto back = plan.forward(plan.inverse(F));
                double worst = 0.0;
                for (std::size_t i = 0; i < F.coeffs.size(); ++i)
                    for (std::size_t e = 0; e < F.coeffs[i].size(); ++e)
                        worst = std::max(worst, std::abs(back.coeffs[i][e] - F.coeffs[i][e]));
                CHECK(worst < 1e-10);
            }
        }
    }
}

TEST_CASE("plancherel identity", "[harmonic]") {
    auto spec = GroupSpec::torus({Rational(1)}, 2);
    CHECK(plancherel_norm(zero_spectral_field(spec)) == 0.0);
    CHECK(plancherel_norm(single_mode_field(spec, {1})) == Catch::Approx(1.0).margin(1e-14));

    for (const auto& s : {GroupSpec::torus({Rational(1)}, 8), GroupSpec::su2(4)}) {
        HarmonicPlan plan(make_grid(s, 1.0));
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            auto F = random_field(plan, seed, false);
            const double spectral = plancherel_norm(F);
            const double grid_l2 = lq_norm(plan.inverse(F), 2.0);
            CHECK(std::abs(spectral - grid_l2) < 1e-10);
        }
    }
}

TEST_CASE("sobolev multiplier", "[harmonic]") {
    auto spec = GroupSpec::torus({Rational(1)}, 2);
    auto cosx = single_mode_field(spec, {1});

    auto same = sobolev_apply(cosx, 2.0);  // λ² = 1 fixes the mode
    auto dual = enumerate_dual(spec);
    for (std::size_t i = 0; i < dual.size(); ++i)
        CHECK(std::abs(same.coeffs[i][0] - cosx.coeffs[i][0]) < 1e-15);

    auto k2 = single_mode_field(spec, {2});
    auto scaled = sobolev_apply(k2, 1.0);
    for (std::size_t i = 0; i < dual.size(); ++i)
        CHECK(std::abs(scaled.coeffs[i][0] - 2.0 * k2.coeffs[i][0]) < 1e-15);

    HarmonicPlan plan(make_grid(GroupSpec::su2(3), 1.0));
    auto F = random_field(plan, 3, false);
    auto identity = sobolev_apply(F, 0.0);
    auto twice = sobolev_apply(sobolev_apply(F, 0.7), 1.3);
    auto once = sobolev_apply(F, 2.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < F.coeffs.size(); ++i)
        for (std::size_t e = 0; e < F.coeffs[i].size(); ++e) {
            CHECK(identity.coeffs[i][e] == F.coeffs[i][e]);
            worst = std::max(worst, std::abs(twice.coeffs[i][e] - once.coeffs[i][e]));
        }
    CHECK(worst < 1e-12);
    CHECK_THROWS_AS(sobolev_apply(F, -1.0), std::invalid_argument);
}

TEST_CASE("dual sup norm and the L1 bound", "[harmonic]") {
    auto spec = GroupSpec::torus({Rational(1)}, 2);
    CHECK(linf_dual_norm(constant_field(spec)) == Catch::Approx(1.0));
    CHECK(linf_dual_norm(single_mode_field(spec, {1})) == Catch::Approx(1.0 / std::sqrt(2.0)));

    // ||f̂||_{ℓ∞} <= ||f||_{L¹} for random bandlimited fields
    for (const auto& s : {GroupSpec::torus({Rational(1)}, 8), GroupSpec::su2(3)}) {
        HarmonicPlan plan(make_grid(s, 2.0));
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            auto F = random_field(plan, seed, true);
            const double lhs = linf_dual_norm(F);
            const double rhs = lq_norm(plan.inverse(F), 1.0);
            CHECK(lhs <= rhs + 1e-10);
        }
    }
}

TEST_CASE("quadrature Lq norms", "[harmonic]") {
    auto spec = GroupSpec::torus({Rational(1)}, 2);
    auto grid = make_grid(spec, 2.0);

    GridField c(grid, std::vector<Complex>(grid.node_count(), Complex(-2.5, 0.0)));
    for (double q : {1.0, 2.0, 3.5, 7.0}) CHECK(lq_norm(c, q) == Catch::Approx(2.5).margin(1e-13));
    CHECK(lq_norm(c, std::numeric_limits<double>::infinity()) == Catch::Approx(2.5));

    std::vector<Complex> samples(grid.node_count());
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] = std::sqrt(2.0) * std::cos(grid.axis_nodes[0][i]);
    GridField f(grid, std::move(samples));
    CHECK(lq_norm(f, 2.0) == Catch::Approx(1.0).margin(1e-13));
    // ∫ (√2 cos)⁴ dθ/2π = 3/2
    CHECK(lq_norm(f, 4.0) == Catch::Approx(std::pow(1.5, 0.25)).margin(1e-13));

    CHECK_THROWS_AS(lq_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("transform linearity and conjugation symmetry", "[harmonic]") {
    auto spec = GroupSpec::torus({Rational(1), Rational(1)}, 3);
    HarmonicPlan plan(make_grid(spec, 1.0));
    auto Fa = random_field(plan, 11, false);
    auto Fb = random_field(plan, 12, false);

    auto ga = plan.inverse(Fa), gb = plan.inverse(Fb);
    std::vector<Complex> mixed(ga.samples.size());
    for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] = 2.0 * ga.samples[i] - 0.5 * gb.samples[i];
    auto Fmix = plan.forward(GridField(plan.grid(), std::move(mixed)));
    double worst = 0.0;
    for (std::size_t i = 0; i < Fmix.coeffs.size(); ++i)
        worst = std::max(worst, std::abs(Fmix.coeffs[i][0] - (2.0 * Fa.coeffs[i][0] - 0.5 * Fb.coeffs[i][0])));
    CHECK(worst < 1e-12);

    // real fields on tori: f̂(-k) = conj(f̂(k))
    auto Freal = random_field(plan, 13, true);
    auto dual = plan.dual();
    for (std::size_t i = 0; i < dual.size(); ++i) {
        std::vector<int> neg = dual[i].index.components;
        for (auto& v : neg) v = -v;
        for (std::size_t j = 0; j < dual.size(); ++j)
            if (dual[j].index.components == neg)
                CHECK(std::abs(Freal.coeffs[j][0] - std::conj(Freal.coeffs[i][0])) < 1e-12);
    }
}

TEST_CASE("parseval for real bandlimited fields", "[harmonic]") {
    HarmonicPlan plan(make_grid(GroupSpec::su2(4), 1.0));
    for (std::uint64_t seed = 30; seed < 40; ++seed) {
        auto F = random_field(plan, seed, true);
        CHECK(std::abs(plancherel_norm(F) - lq_norm(plan.inverse(F), 2.0)) < 1e-10);
    }
}

TEST_CASE("character presets on SU(2) and SO(3)", "[harmonic]") {
    for (const auto& spec : {GroupSpec::su2(3), GroupSpec::so3(2)}) {
        HarmonicPlan plan(make_grid(spec, 1.0));
        auto chi = single_mode_field(spec, {1});
        CHECK(plancherel_norm(chi) == Catch::Approx(1.0).margin(1e-14));
        auto g = plan.inverse(chi);
        // characters are real with zero mean
        Complex mean(0.0, 0.0);
        double imag_worst = 0.0;
        for (std::size_t i = 0; i < g.samples.size(); ++i) {
            mean += plan.grid().weights[i] * g.samples[i];
            imag_worst = std::max(imag_worst, std::abs(g.samples[i].imag()));
        }
        CHECK(std::abs(mean) < 1e-13);
        CHECK(imag_worst < 1e-13);
    }
    CHECK_THROWS_AS(single_mode_field(GroupSpec::su2(3), {4}), std::invalid_argument);
    CHECK_THROWS_AS(single_mode_field(GroupSpec::torus({Rational(1)}, 2), {3}), std::invalid_argument);
    CHECK_THROWS_AS(single_mode_field(GroupSpec::torus({Rational(1)}, 2), {1, 1}), std::invalid_argument);
}
