#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include "finetti/urn.hpp"

using namespace finetti;

namespace {

Rat dist_sum(const std::map<Composition, Rat>& m) {
    Rat total(0);
    for (const auto& [s, p] : m) total += p;
    return total;
}

}  // namespace

TEST_CASE("composition enumeration") {
    CHECK(enumerate_compositions(2, 2) ==
          std::vector<Composition>{{2, 0}, {1, 1}, {0, 2}});
    Composition caps{1, 1};
    CHECK(enumerate_compositions(2, 2, &caps) == std::vector<Composition>{{1, 1}});
    CHECK(enumerate_compositions(3, 2).size() == 6);  // C(4, 2)
    Composition small_caps{1, 0};
    CHECK(enumerate_compositions(2, 2, &small_caps).empty());
    CHECK(enumerate_compositions(3, 0) == std::vector<Composition>{{0, 0, 0}});
}

TEST_CASE("hypergeometric composition law") {
    Urn urn{{2, 2}};
    CompositionDist d = hypergeom_composition(urn, 2);
    CHECK(d.prob.at({2, 0}) == make_rat(1, 6));
    CHECK(d.prob.at({1, 1}) == make_rat(2, 3));
    CHECK(d.prob.at({0, 2}) == make_rat(1, 6));
    CHECK(dist_sum(d.prob) == 1);

    // k = 0: point mass on the zero composition
    CompositionDist empty = hypergeom_composition(urn, 0);
    CHECK(empty.prob.size() == 1);
    CHECK(empty.prob.at({0, 0}) == 1);

    // k = n: point mass on the urn itself
    CompositionDist all = hypergeom_composition(urn, 4);
    CHECK(all.prob.size() == 1);
    CHECK(all.prob.at({2, 2}) == 1);

    CHECK_THROWS_AS(hypergeom_composition(urn, 5), std::domain_error);
}

TEST_CASE("multinomial composition law") {
    Urn urn{{2, 2}};
    CompositionDist d = multinom_composition(urn, 2);
    CHECK(d.prob.at({2, 0}) == make_rat(1, 4));
    CHECK(d.prob.at({1, 1}) == make_rat(1, 2));
    CHECK(d.prob.at({0, 2}) == make_rat(1, 4));
    CHECK(dist_sum(d.prob) == 1);

    Urn single{{3, 0}};
    CompositionDist s = multinom_composition(single, 5);
    CHECK(s.prob.size() == 1);
    CHECK(s.prob.at({5, 0}) == 1);

    CHECK(multinom_composition(urn, 0).prob.at({0, 0}) == 1);
}

TEST_CASE("both laws sum to one on a grid") {
    for (int c = 1; c <= 3; ++c)
        for (long n = 1; n <= 6; ++n)
            for (const Composition& counts : enumerate_compositions(c, n)) {
                Urn urn{counts};
                for (long k = 0; k <= n; ++k) {
                    CHECK(dist_sum(hypergeom_composition(urn, k).prob) == 1);
                    CHECK(dist_sum(multinom_composition(urn, k).prob) == 1);
                    // hypergeometric support respects the caps
                    for (const auto& [s, p] : hypergeom_composition(urn, k).prob)
                        for (size_t j = 0; j < s.size(); ++j) CHECK(s[j] <= counts[j]);
                }
            }
}

TEST_CASE("sequence level laws") {
    Urn uniform3{{1, 1, 1}};
    SequenceTypeDist h = to_sequence_level(hypergeom_composition(uniform3, 2));
    CHECK(h.per_sequence.size() == 3);
    for (const auto& [s, p] : h.per_sequence) CHECK(p == make_rat(1, 6));
    CHECK(h.per_sequence.count({2, 0, 0}) == 0);  // doubles have probability zero

    SequenceTypeDist b = to_sequence_level(multinom_composition(uniform3, 2));
    CHECK(b.per_sequence.size() == 6);
    for (const auto& [s, p] : b.per_sequence) CHECK(p == make_rat(1, 9));

    // normalization invariant
    Rat total(0);
    for (const auto& [s, p] : h.per_sequence) total += Rat(multinomial_coeff(2, s)) * p;
    CHECK(total == 1);
}

TEST_CASE("sequence-level hypergeometric equals the falling-factorial form") {
    for (int c = 1; c <= 3; ++c)
        for (long n = 1; n <= 6; ++n)
            for (const Composition& counts : enumerate_compositions(c, n)) {
                Urn urn{counts};
                for (long k = 0; k <= n; ++k) {
                    SequenceTypeDist h = to_sequence_level(hypergeom_composition(urn, k));
                    Int denom = falling_factorial(static_cast<unsigned long>(n),
                                                  static_cast<unsigned long>(k));
                    for (const auto& [s, p] : h.per_sequence) {
                        Int num(1);
                        for (int j = 0; j < c; ++j)
                            num *= falling_factorial(static_cast<unsigned long>(counts[j]),
                                                     static_cast<unsigned long>(s[j]));
                        CHECK(p == make_rat(num, denom));
                    }
                }
            }
}

TEST_CASE("single draw: the two laws coincide") {
    for (int c = 1; c <= 3; ++c)
        for (long n = 1; n <= 7; ++n)
            for (const Composition& counts : enumerate_compositions(c, n)) {
                Urn urn{counts};
                CHECK(hypergeom_composition(urn, 1).prob ==
                      multinom_composition(urn, 1).prob);
            }
}

TEST_CASE("brute-force draw enumeration oracle") {
    // without replacement: every ordered draw of k labelled balls is equally
    // likely; tally compositions over all of them
    for (int c = 1; c <= 3; ++c)
        for (long n = 1; n <= 7; ++n)
            for (const Composition& counts : enumerate_compositions(c, n)) {
                Urn urn{counts};
                std::vector<int> balls;
                for (int j = 0; j < c; ++j)
                    for (long i = 0; i < counts[j]; ++i) balls.push_back(j);
                for (long k = 0; k <= n; ++k) {
                    std::map<Composition, long> tally;
                    std::vector<bool> used(balls.size(), false);
                    Composition draw(static_cast<size_t>(c), 0);
                    long total = 0;
                    std::function<void(long)> rec = [&](long depth) {
                        if (depth == k) {
                            ++tally[draw];
                            ++total;
                            return;
                        }
                        for (size_t b = 0; b < balls.size(); ++b) {
                            if (used[b]) continue;
                            used[b] = true;
                            ++draw[static_cast<size_t>(balls[b])];
                            rec(depth + 1);
                            --draw[static_cast<size_t>(balls[b])];
                            used[b] = false;
                        }
                    };
                    rec(0);
                    CompositionDist d = hypergeom_composition(urn, k);
                    CHECK(d.prob.size() == tally.size());
                    for (const auto& [s, cnt] : tally)
                        CHECK(d.prob.at(s) == make_rat(cnt, total));
                }
            }

    // with replacement on a smaller grid: n^k equally likely draws
    for (int c = 1; c <= 3; ++c)
        for (long n = 1; n <= 5; ++n)
            for (const Composition& counts : enumerate_compositions(c, n)) {
                Urn urn{counts};
                std::vector<int> balls;
                for (int j = 0; j < c; ++j)
                    for (long i = 0; i < counts[j]; ++i) balls.push_back(j);
                for (long k = 0; k <= std::min(n, 4L); ++k) {
                    std::map<Composition, long> tally;
                    Composition draw(static_cast<size_t>(c), 0);
                    long total = 0;
                    std::function<void(long)> rec = [&](long depth) {
                        if (depth == k) {
                            ++tally[draw];
                            ++total;
                            return;
                        }
                        for (size_t b = 0; b < balls.size(); ++b) {
                            ++draw[static_cast<size_t>(balls[b])];
                            rec(depth + 1);
                            --draw[static_cast<size_t>(balls[b])];
                        }
                    };
                    rec(0);
                    CompositionDist d = multinom_composition(urn, k);
                    CHECK(d.prob.size() == tally.size());
                    for (const auto& [s, cnt] : tally)
                        CHECK(d.prob.at(s) == make_rat(cnt, total));
                }
            }
}

TEST_CASE("urn from n-type") {
    Urn u1 = urn_from_ntype({make_rat(1, 2), make_rat(1, 2)}, 4);
    CHECK(u1.counts == Composition{2, 2});
    Urn u2 = urn_from_ntype({make_rat(1, 3), make_rat(2, 3)}, 3);
    CHECK(u2.counts == Composition{1, 2});
    CHECK_THROWS_AS(urn_from_ntype({make_rat(1, 2), make_rat(1, 2)}, 3), std::domain_error);
    CHECK_THROWS_AS(urn_from_ntype({make_rat(1, 2), make_rat(1, 4)}, 4), std::domain_error);
}
