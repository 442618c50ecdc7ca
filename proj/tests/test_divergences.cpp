#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "finetti/divergences.hpp"

using namespace finetti;

namespace {

std::pair<CompositionDist, CompositionDist> urn22_pair() {
    Urn urn{{2, 2}};
    return {hypergeom_composition(urn, 2), multinom_composition(urn, 2)};
}

}  // namespace

TEST_CASE("total variation") {
    auto [h, b] = urn22_pair();
    CHECK(total_variation(h, h) == 0);
    CHECK(total_variation(h, b) == make_rat(1, 3));
    CHECK(total_variation(b, h) == make_rat(1, 3));

    // uniform urn n=3, k=2 at sequence level: the exact-identity value
    Urn uniform3{{1, 1, 1}};
    Rat tv = total_variation(to_sequence_level(hypergeom_composition(uniform3, 2)),
                             to_sequence_level(multinom_composition(uniform3, 2)));
    CHECK(tv == make_rat(2, 3));

    CompositionDist other = hypergeom_composition(Urn{{1, 1}}, 1);
    CHECK_THROWS_AS(total_variation(h, other), std::invalid_argument);
}

TEST_CASE("relative entropy") {
    auto [h, b] = urn22_pair();
    KLResult same = relative_entropy(h, h);
    CHECK_FALSE(same.infinite);
    CHECK(same.value.value == 0.0L);

    // independent oracle: (1/3) log(2/3) + (2/3) log(4/3)
    long double expect = (1.0L / 3) * std::log(2.0L / 3) + (2.0L / 3) * std::log(4.0L / 3);
    KLResult kl = relative_entropy(h, b);
    CHECK_FALSE(kl.infinite);
    CHECK(std::fabs(kl.value.value - expect) < 1e-12L);
    CHECK(std::fabs(kl.value.value - 0.056633L) < 1e-6L);

    // absolute-continuity failure: with replacement from a (1,1) urn can
    // repeat a colour, without replacement cannot
    CompositionDist h11 = hypergeom_composition(Urn{{1, 1}}, 2);
    CompositionDist b11 = multinom_composition(Urn{{1, 1}}, 2);
    KLResult inf = relative_entropy(b11, h11);
    CHECK(inf.infinite);
    CHECK_FALSE(relative_entropy(h11, b11).infinite);
}

TEST_CASE("pinsker slack") {
    auto [h, b] = urn22_pair();
    PinskerCheck same = pinsker_slack(h, h);
    CHECK(same.tv == 0);
    CHECK(same.kl.value.value == 0.0L);
    CHECK(same.holds);

    PinskerCheck pc = pinsker_slack(h, b);
    CHECK(pc.tv == make_rat(1, 3));
    CHECK(std::fabs(pc.sqrt_two_kl.value - 0.3366L) < 1e-3L);
    CHECK(pc.holds);
}

TEST_CASE("coarsening") {
    auto [h, b] = urn22_pair();

    // single cell: point mass
    std::vector<Composition> all{{2, 0}, {1, 1}, {0, 2}};
    auto point = coarsen(h, {all});
    CHECK(point == std::vector<Rat>{Rat(1)});

    // singleton cells: identity
    auto identity = coarsen(h, {{{0, 2}}, {{1, 1}}, {{2, 0}}});
    CHECK(identity == std::vector<Rat>{make_rat(1, 6), make_rat(2, 3), make_rat(1, 6)});

    // the example partition {doubles, mixed}
    auto coarse = coarsen(h, {{{2, 0}, {0, 2}}, {{1, 1}}});
    CHECK(coarse == std::vector<Rat>{make_rat(1, 3), make_rat(2, 3)});

    CHECK_THROWS_AS(coarsen(h, {{{2, 0}}, {{2, 0}, {1, 1}, {0, 2}}}), std::invalid_argument);
    CHECK_THROWS_AS(coarsen(h, {{{2, 0}}}), std::invalid_argument);
}

TEST_CASE("data processing under coarsening") {
    std::mt19937_64 g(11);
    for (int c = 2; c <= 3; ++c)
        for (long n = 2; n <= 6; ++n)
            for (const Composition& counts : enumerate_compositions(c, n)) {
                Urn urn{counts};
                for (long k = 1; k <= n; ++k) {
                    CompositionDist h = hypergeom_composition(urn, k);
                    CompositionDist b = multinom_composition(urn, k);
                    // random 2-cell partition of the union support
                    std::vector<std::vector<Composition>> cells(2);
                    for (const Composition& s : enumerate_compositions(c, k))
                        cells[g() % 2].push_back(s);
                    if (cells[0].empty() || cells[1].empty()) continue;
                    auto hc = coarsen(h, cells);
                    auto bc = coarsen(b, cells);
                    CHECK(total_variation(hc, bc) <= total_variation(h, b));
                    KLResult fine = relative_entropy(h, b);
                    KLResult coarse = relative_entropy(hc, bc);
                    REQUIRE_FALSE(fine.infinite);
                    if (!coarse.infinite)
                        CHECK(coarse.value.value <=
                              fine.value.value + fine.value.abs_error +
                                  coarse.value.abs_error);
                }
            }
}

TEST_CASE("joint convexity of relative entropy") {
    // KL(sum w H || sum w B) <= sum w KL(H||B) for random mixing weights
    std::mt19937_64 g(13);
    for (int trial = 0; trial < 30; ++trial) {
        long n = 4 + static_cast<long>(g() % 4);
        long k = 1 + static_cast<long>(g() % n);
        auto urns = enumerate_compositions(2, n);
        long w1 = 1 + static_cast<long>(g() % 9);
        long w2 = 1 + static_cast<long>(g() % 9);
        Rat a = make_rat(w1, w1 + w2), bw = make_rat(w2, w1 + w2);
        Urn u1{urns[g() % urns.size()]}, u2{urns[g() % urns.size()]};

        CompositionDist h1 = hypergeom_composition(u1, k), h2 = hypergeom_composition(u2, k);
        CompositionDist b1 = multinom_composition(u1, k), b2 = multinom_composition(u2, k);
        CompositionDist hm{2, n, k, {}}, bm{2, n, k, {}};
        for (const Composition& s : enumerate_compositions(2, k)) {
            auto get = [&](const CompositionDist& d) {
                auto it = d.prob.find(s);
                return it == d.prob.end() ? Rat(0) : it->second;
            };
            Rat hv = a * get(h1) + bw * get(h2);
            Rat bv = a * get(b1) + bw * get(b2);
            if (hv != 0) hm.prob[s] = hv;
            if (bv != 0) bm.prob[s] = bv;
        }
        KLResult mixed = relative_entropy(hm, bm);
        KLResult k1 = relative_entropy(h1, b1);
        KLResult k2 = relative_entropy(h2, b2);
        REQUIRE_FALSE(mixed.infinite);
        long double rhs = rat_to_ld(a) * k1.value.value + rat_to_ld(bw) * k2.value.value;
        long double widen = mixed.value.abs_error + k1.value.abs_error +
                            k2.value.abs_error + 1e-15L;
        CHECK(mixed.value.value <= rhs + widen);
    }
}

TEST_CASE("TV is a metric on the tested family") {
    std::mt19937_64 g(17);
    auto urns = enumerate_compositions(3, 6);
    for (int trial = 0; trial < 50; ++trial) {
        long k = 1 + static_cast<long>(g() % 6);
        CompositionDist a = hypergeom_composition(Urn{urns[g() % urns.size()]}, k);
        CompositionDist b = multinom_composition(Urn{urns[g() % urns.size()]}, k);
        CompositionDist c = hypergeom_composition(Urn{urns[g() % urns.size()]}, k);
        CHECK(total_variation(a, b) == total_variation(b, a));
        CHECK(total_variation(a, c) <= total_variation(a, b) + total_variation(b, c));
        CHECK(total_variation(a, b) >= 0);
        CHECK(total_variation(a, b) <= 2);
    }
}

TEST_CASE("entropy helper") {
    PrecFloat h = entropy({make_rat(1, 2), make_rat(1, 2)});
    CHECK(std::fabs(h.value - std::log(2.0L)) <= h.abs_error + 1e-15L);
    PrecFloat zero = entropy({Rat(1), Rat(0)});
    CHECK(zero.value == 0.0L);
}
