#include "doctest.h"

#include <vector>

#include "properties.hpp"
#include "reldev/blocking.hpp"
#include "reldev/errors.hpp"

using namespace reldev;

TEST_CASE("permutation examples") {
    const BlockPermutation p(12, 3);
    CHECK(p.block_count() == 4);
    const std::vector<std::size_t> expected{1, 4, 7, 10, 2};
    for (std::size_t k = 1; k <= expected.size(); ++k) {
        CHECK(permute_index(p, k) == expected[k - 1]);
    }
    CHECK(permuted_prefix(p, 1.0 / 3.0) == std::vector<std::size_t>{1, 4, 7, 10});
    CHECK(permuted_prefix(p, 1.0 / 12.0) == std::vector<std::size_t>{1});

    const BlockPermutation tail(10, 3);
    CHECK(tail.permute_index(10) == 10);

    const BlockPermutation single(17, 17);
    for (std::size_t k = 1; k <= 17; ++k) {
        CHECK(single.permute_index(k) == k);
    }
}

TEST_CASE("prefix lengths") {
    const BlockPermutation p(500, 20);
    CHECK(p.prefix_length(0.2) == 100);
    CHECK(p.prefix_length(1.0) == 500);
    CHECK(p.permuted_prefix(0.4).size() == 200);
    CHECK_THROWS_AS(p.prefix_length(0.0), ArgumentError);
    CHECK_THROWS_AS(p.prefix_length(1.5), ArgumentError);
}

TEST_CASE("invalid permutations") {
    CHECK_THROWS_AS(BlockPermutation(0, 1), ArgumentError);
    CHECK_THROWS_AS(BlockPermutation(10, 0), ArgumentError);
    CHECK_THROWS_AS(BlockPermutation(10, 11), ArgumentError);
    const BlockPermutation p(10, 2);
    CHECK_THROWS_AS(p.permute_index(0), ArgumentError);
    CHECK_THROWS_AS(p.permute_index(11), ArgumentError);
}

TEST_CASE("prefix at 0.2 interleaves block starts") {
    const BlockPermutation p(500, 20);
    const auto prefix = p.permuted_prefix(0.2);
    // 25 blocks, so the first 100 images are offsets 0..3 of every block.
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        CHECK((prefix[k] - 1) % 20 == k / 25);
    }
}

TEST_CASE("randomized bijectivity") {
    const auto r = props::permutation_bijectivity(20240611, 300);
    CHECK(r.cases == 300);
    CHECK(r.failures == 0);
}
