#include <catch2/catch_amalgamated.hpp>

#include "votelab/core.hpp"

using namespace votelab;

namespace {

// 4 alternatives, 6 voters; margins below were tallied by hand.
Profile hand_profile() {
    return parse_profile("4;6;2,0,1,3|3,1,2,0|3,1,0,2|2,1,3,0|0,1,2,3|3,0,1,2");
}

}  // namespace

TEST_CASE("profile line round trip") {
    Profile p = hand_profile();
    REQUIRE(p.m == 4);
    REQUIRE(p.n() == 6);
    REQUIRE(p.rankings[0] == Ranking{2, 0, 1, 3});
    REQUIRE(p.rankings[5] == Ranking{3, 0, 1, 2});
    REQUIRE(format_profile(p) == "4;6;2,0,1,3|3,1,2,0|3,1,0,2|2,1,3,0|0,1,2,3|3,0,1,2");
    REQUIRE(format_profile(parse_profile(format_profile(p))) == format_profile(p));
}

TEST_CASE("profile parsing rejects malformed input") {
    REQUIRE_THROWS_AS(parse_profile("3;1;0,1"), std::invalid_argument);      // short ranking
    REQUIRE_THROWS_AS(parse_profile("3;1;0,1,1"), std::invalid_argument);    // repeated
    REQUIRE_THROWS_AS(parse_profile("3;1;0,1,3"), std::invalid_argument);    // out of range
    REQUIRE_THROWS_AS(parse_profile("3;2;0,1,2"), std::invalid_argument);    // count mismatch
    REQUIRE_THROWS_AS(parse_profile("3;1"), std::invalid_argument);          // missing field
    REQUIRE_THROWS_AS(parse_profile("3;1;0,1,x"), std::invalid_argument);    // junk
    REQUIRE_THROWS_AS(parse_profile("0;1;"), std::invalid_argument);         // no alternatives
}

TEST_CASE("margin matrix counts pairwise support") {
    MarginMatrix mm(hand_profile());
    REQUIRE(mm(0, 1) == 3);
    REQUIRE(mm(1, 0) == 3);
    REQUIRE(mm(0, 2) == 3);
    REQUIRE(mm(2, 0) == 3);
    REQUIRE(mm(3, 0) == 4);
    REQUIRE(mm(0, 3) == 2);
    REQUIRE(mm(1, 2) == 4);
    REQUIRE(mm(2, 1) == 2);
    REQUIRE(mm(1, 3) == 3);
    REQUIRE(mm(2, 3) == 3);
    REQUIRE(mm.beats(3, 0));
    REQUIRE_FALSE(mm.beats(0, 3));
    REQUIRE(mm.ties(0, 1));

    // Every pair's counts sum to n in a strict-order profile.
    for (int x = 0; x < 4; ++x)
        for (int y = x + 1; y < 4; ++y) REQUIRE(mm(x, y) + mm(y, x) == 6);
}

TEST_CASE("condorcet winner") {
    REQUIRE_FALSE(condorcet_winner(hand_profile()).has_value());

    // Unanimous profile: the common top wins.
    Profile p = parse_profile("3;2;1,0,2|1,0,2");
    REQUIRE(condorcet_winner(p) == 1);

    // One voter: their top is the Condorcet winner.
    REQUIRE(condorcet_winner(parse_profile("4;1;2,3,0,1")) == 2);

    // Three-cycle: none.
    REQUIRE_FALSE(condorcet_winner(parse_profile("3;3;0,1,2|1,2,0|2,0,1")).has_value());
}

TEST_CASE("kendall tau") {
    REQUIRE(kendall_tau({0, 1, 2, 3}, {0, 1, 2, 3}) == 0);
    REQUIRE(kendall_tau({0, 1, 2, 3}, {3, 2, 1, 0}) == 6);
    REQUIRE(kendall_tau({0, 1, 2}, {1, 0, 2}) == 1);
    REQUIRE(kendall_tau({2, 0, 1, 3}, {3, 1, 2, 0}) == kendall_tau({3, 1, 2, 0}, {2, 0, 1, 3}));
}

TEST_CASE("alternative and voter permutations") {
    std::vector<int> sigma{1, 2, 3, 0};
    REQUIRE(permute_alternatives(Ranking{2, 0, 1, 3}, sigma) == Ranking{3, 1, 2, 0});
    REQUIRE(permute_winners({1, 3}, sigma) == WinningSet{0, 2});

    Profile p = hand_profile();
    Profile q = permute_alternatives(p, sigma);
    // Pairwise counts carry over under relabeling.
    MarginMatrix a(p), b(q);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            if (x != y) REQUIRE(a(x, y) == b(sigma[x], sigma[y]));

    // Reordering voters leaves the margin matrix untouched.
    Profile r = permute_voters(p, {5, 3, 1, 0, 2, 4});
    MarginMatrix c(r);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            if (x != y) REQUIRE(a(x, y) == c(x, y));
    REQUIRE(r.rankings[0] == p.rankings[5]);
}

TEST_CASE("remove alternative renumbers the remainder") {
    Profile p = parse_profile("4;2;2,0,1,3|3,1,2,0");
    Profile q = remove_alternative(p, 1);
    REQUIRE(q.m == 3);
    REQUIRE(q.rankings[0] == Ranking{1, 0, 2});  // 2,0,3 with 2->1, 3->2
    REQUIRE(q.rankings[1] == Ranking{2, 1, 0});  // 3,2,0
}

TEST_CASE("winning set text format") {
    REQUIRE(format_winning_set({0, 2, 3}) == "0,2,3");
    REQUIRE(parse_winning_set("0,2,3") == WinningSet{0, 2, 3});
    REQUIRE(parse_winning_set("").empty());
    REQUIRE_THROWS_AS(parse_winning_set("2,0"), std::invalid_argument);
}

TEST_CASE("profile hash is stable and shape-sensitive") {
    Profile p = hand_profile();
    REQUIRE(hash_profile(p) == hash_profile(hand_profile()));
    Profile q = p;
    std::swap(q.rankings[0][0], q.rankings[0][1]);
    REQUIRE(hash_profile(p) != hash_profile(q));
}

TEST_CASE("permutation helpers") {
    auto perms = all_permutations(3);
    REQUIRE(perms.size() == 6);
    REQUIRE(perms.front() == std::vector<int>{0, 1, 2});
    REQUIRE(perms.back() == std::vector<int>{2, 1, 0});
    REQUIRE(factorial(5) == 120);
    REQUIRE(factorial(7) == 5040);
    REQUIRE(factorial(0) == 1);
}
