#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "finrank/error.hpp"
#include "finrank/multi_index.hpp"

using namespace finrank;

TEST_CASE("binomial coefficients")
{
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(7, 0) == 1);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(12, 3) == 220);
}

TEST_CASE("basis sizes")
{
    for (std::size_t d = 1; d <= 4; ++d) {
        for (int D = 0; D <= 6; ++D) {
            IndexBasis b(d, D);
            CHECK(b.size() == binomial(D + d, d));
        }
    }
}

TEST_CASE("graded lexicographic order in C^2")
{
    IndexBasis b(2, 2);
    const std::vector<std::vector<int>> expected = {{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
    REQUIRE(b.size() == expected.size());
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i].entries() == expected[i]);
    for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i - 1] < b[i]);
}

TEST_CASE("truncations are prefixes")
{
    IndexBasis small(3, 3), big(3, 5);
    REQUIRE(big.prefix_size(3) == small.size());
    for (std::size_t i = 0; i < small.size(); ++i) CHECK(small[i] == big[i]);
    CHECK(big.prefix_size(-1) == 0);
    CHECK(big.prefix_size(0) == 1);
    CHECK(big.prefix_size(5) == big.size());
}

TEST_CASE("parent and step axis")
{
    IndexBasis b(3, 4);
    for (std::size_t i = 1; i < b.size(); ++i) {
        const auto step = MultiIndex::unit(3, b.step_axis(i));
        CHECK(b[b.parent(i)] + step == b[i]);
        CHECK(b[b.parent(i)].degree() + 1 == b[i].degree());
    }
}

TEST_CASE("lookup")
{
    IndexBasis b(2, 3);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.index_of(b[i]) == i);
    CHECK_FALSE(b.find(MultiIndex({4, 0})).has_value());
    CHECK_THROWS_AS(b.index_of(MultiIndex({2, 2})), InvalidArgument);
}

TEST_CASE("drop and insert")
{
    MultiIndex a({2, 0, 3});
    CHECK(a.degree() == 5);
    CHECK(a.drop(0).entries() == std::vector<int>{0, 3});
    CHECK(a.drop(2).entries() == std::vector<int>{2, 0});
    CHECK(a.drop(1).insert(1, 0) == a);
    CHECK(MultiIndex({1}).insert(0, 4).entries() == std::vector<int>{4, 1});
}

TEST_CASE("invalid input")
{
    CHECK_THROWS_AS(MultiIndex({1, -1}), InvalidArgument);
    CHECK_THROWS_AS(IndexBasis(0, 2), InvalidArgument);
    CHECK_THROWS_AS(IndexBasis(2, -1), InvalidArgument);
}
