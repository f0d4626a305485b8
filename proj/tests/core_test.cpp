#include <gtest/gtest.h>

#include "trirec/dataset.hpp"
#include "trirec/error.hpp"
#include "trirec/random.hpp"

using namespace trirec;

namespace {

// Users u0..u2, items i0..i1, tags t0..t2 wired like the three-user example:
// u0-i0 (t0), u1-i0 (t1, t2), u2-i1 (t2).
Dataset toy_tripartite()
{
    RatingTable r(3, 2, 5.0, {{0, 0, 4.0}, {1, 0, 5.0}, {2, 1, 3.0}});
    TagTable t(3, 3, {{0, 0, 1}, {1, 1, 1}, {1, 2, 1}, {2, 2, 2}});
    return Dataset(std::move(r), std::move(t));
}

}  // namespace

TEST(Degrees, CountDistinctNeighbours)
{
    const auto d = toy_tripartite();
    EXPECT_EQ(d.degree_user_items(0), 1u);
    EXPECT_EQ(d.degree_user_items(1), 1u);
    EXPECT_EQ(d.degree_item(0), 2u);
    EXPECT_EQ(d.degree_item(1), 1u);
    EXPECT_EQ(d.degree_user_tags(1), 2u);
    EXPECT_EQ(d.degree_tag(2), 2u);  // u1 and u2; u2's count of 2 is one edge
    EXPECT_EQ(d.degree_tag(0), 1u);
}

TEST(Degrees, UserWithThreeRatingsAndUnusedTag)
{
    RatingTable r(2, 4, 5.0, {{0, 0, 1.0}, {0, 2, 2.0}, {0, 3, 3.0}});
    TagTable t(2, 2, {{1, 0, 1}});
    const Dataset d(std::move(r), std::move(t));
    EXPECT_EQ(d.degree_user_items(0), 3u);
    EXPECT_EQ(d.degree_user_items(1), 0u);
    EXPECT_EQ(d.degree_tag(1), 0u);
    EXPECT_EQ(d.degree_item(1), 0u);
}

TEST(Degrees, OutOfRangeIsInputError)
{
    const auto d = toy_tripartite();
    EXPECT_THROW(d.degree_user_items(3), InputError);
    EXPECT_THROW(d.degree_item(2), InputError);
    EXPECT_THROW(d.degree_tag(3), InputError);
    EXPECT_THROW(d.degree_user_tags(99), InputError);
}

TEST(Degrees, SumsMatchEntryCounts)
{
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rating> ratings;
        std::vector<TagCount> tags;
        for (UserId u = 0; u < 15; ++u) {
            for (ItemId i = 0; i < 12; ++i) {
                if (rng.uniform() < 0.3) ratings.push_back({u, i, 1.0 + static_cast<double>(rng.below(5))});
            }
            for (TagId t = 0; t < 9; ++t) {
                if (rng.uniform() < 0.2) tags.push_back({u, t, 1 + static_cast<std::uint32_t>(rng.below(3))});
            }
        }
        const Dataset d(RatingTable(15, 12, 5.0, ratings), TagTable(15, 9, tags));
        std::size_t items = 0, tagdeg = 0, users = 0;
        for (ItemId i = 0; i < 12; ++i) items += d.degree_item(i);
        for (TagId t = 0; t < 9; ++t) tagdeg += d.degree_tag(t);
        for (UserId u = 0; u < 15; ++u) users += d.degree_user_items(u);
        EXPECT_EQ(items, ratings.size());
        EXPECT_EQ(users, ratings.size());
        EXPECT_EQ(tagdeg, tags.size());
    }
}

TEST(RatingTable, RejectsBadRatings)
{
    EXPECT_THROW(RatingTable(2, 2, 5.0, {{0, 0, 0.0}}), InputError);
    EXPECT_THROW(RatingTable(2, 2, 5.0, {{0, 0, 5.5}}), InputError);
    EXPECT_THROW(RatingTable(2, 2, 0.0, {}), InputError);
    EXPECT_THROW(RatingTable(2, 2, 5.0, {{2, 0, 1.0}}), InputError);
    EXPECT_THROW(RatingTable(2, 2, 5.0, {{0, 1, 1.0}, {0, 1, 2.0}}), InputError);
    EXPECT_NO_THROW(RatingTable(2, 2, 5.0, {{0, 1, 5.0}}));
}

TEST(RatingTable, RowsSortedAndColumnsIndexed)
{
    RatingTable r(3, 3, 5.0, {{2, 0, 1.0}, {0, 2, 2.0}, {0, 0, 3.0}, {1, 0, 4.0}});
    ASSERT_EQ(r.row(0).size(), 2u);
    EXPECT_EQ(r.row(0)[0].col, 0u);
    EXPECT_EQ(r.row(0)[1].col, 2u);
    const auto col = r.column(0);
    ASSERT_EQ(col.size(), 3u);
    EXPECT_EQ(col[0].user, 0u);
    EXPECT_EQ(col[1].user, 1u);
    EXPECT_EQ(col[2].user, 2u);
    EXPECT_DOUBLE_EQ(r.entries()[col[2].entry].value, 1.0);
    EXPECT_EQ(r.entry_user(3), 2u);
    ASSERT_NE(r.find(1, 0), nullptr);
    EXPECT_DOUBLE_EQ(*r.find(1, 0), 4.0);
    EXPECT_EQ(r.find(1, 1), nullptr);
}

TEST(TagTable, RejectsZeroCounts)
{
    EXPECT_THROW(TagTable(1, 1, {{0, 0, 0}}), InputError);
    EXPECT_THROW(TagTable(1, 1, {{0, 0, 1}, {0, 0, 2}}), InputError);
}

TEST(DatasetCtor, UserUniverseMustMatch)
{
    EXPECT_THROW(Dataset(RatingTable(2, 1, 1.0, {}), TagTable(3, 1, {})), InputError);
}

TEST(Random, DerivedSeedsDifferPerStream)
{
    EXPECT_NE(derive_seed(1, "folds"), derive_seed(1, "init"));
    EXPECT_NE(derive_seed(1, "folds", 0), derive_seed(1, "folds", 1));
    EXPECT_EQ(derive_seed(5, "x", 2), derive_seed(5, "x", 2));
}

TEST(Random, BelowStaysInRange)
{
    Rng rng(3);
    std::vector<int> hits(7, 0);
    for (int k = 0; k < 7000; ++k) ++hits[rng.below(7)];
    for (const int h : hits) EXPECT_GT(h, 800);
}
