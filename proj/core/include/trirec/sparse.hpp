#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace trirec {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;
using TagId = std::uint32_t;

struct Rating {
    UserId user;
    ItemId item;
    double value;

    friend bool operator==(const Rating&, const Rating&) = default;
};

struct TagCount {
    UserId user;
    TagId tag;
    std::uint32_t count;

    friend bool operator==(const TagCount&, const TagCount&) = default;
};

/// Column entry of a user row: the column id plus the stored value.
template <typename Value>
struct RowEntry {
    std::uint32_t col;
    Value value;
};

/// Reverse-index entry: the user holding an edge to a column, and the
/// position of that edge in the row-major entry array.
struct ColumnEntry {
    UserId user;
    std::uint32_t entry;
};

/// Immutable sparse user x column matrix. Rows are stored CSR-style sorted
/// by column; a column index (users per column, sorted by user) is built at
/// construction so both directions are O(degree).
template <typename Value>
class SparseUserMatrix {
public:
    using Entry = RowEntry<Value>;

    SparseUserMatrix() : row_offsets_(1, 0), col_offsets_(1, 0) {}

    std::size_t user_count() const noexcept { return row_offsets_.size() - 1; }
    std::size_t col_count() const noexcept { return col_offsets_.size() - 1; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    std::span<const Entry> row(UserId u) const
    {
        return {entries_.data() + row_offsets_[u], entries_.data() + row_offsets_[u + 1]};
    }
    std::span<const ColumnEntry> column(std::uint32_t c) const
    {
        return {col_users_.data() + col_offsets_[c], col_users_.data() + col_offsets_[c + 1]};
    }

    std::size_t row_degree(UserId u) const { return row_offsets_[u + 1] - row_offsets_[u]; }
    std::size_t col_degree(std::uint32_t c) const { return col_offsets_[c + 1] - col_offsets_[c]; }

    /// Row-major flat view; entry k belongs to user `entry_user(k)`.
    std::span<const Entry> entries() const noexcept { return entries_; }
    UserId entry_user(std::size_t k) const;

    /// Value at (u, c) or nullptr when absent.
    const Value* find(UserId u, std::uint32_t c) const;

protected:
    /// Triplets must already be validated; they are sorted here.
    /// Throws InputError on a repeated (user, column) pair.
    void assign(std::size_t users, std::size_t cols,
                std::vector<std::uint32_t> row_of, std::vector<Entry> entries);

private:
    std::vector<std::size_t> row_offsets_;
    std::vector<Entry> entries_;
    std::vector<std::size_t> col_offsets_;
    std::vector<ColumnEntry> col_users_;
};

/// Sparse explicit ratings R over a fixed user/item universe.
/// Every stored rating r satisfies 0 < r <= r_max.
class RatingTable : public SparseUserMatrix<double> {
public:
    RatingTable() = default;

    /// Throws InputError for ids out of range, ratings outside (0, r_max],
    /// r_max <= 0, or duplicated (user, item) pairs.
    RatingTable(std::size_t user_count, std::size_t item_count, double r_max,
                std::vector<Rating> ratings);

    std::size_t item_count() const noexcept { return col_count(); }
    double r_max() const noexcept { return r_max_; }

    std::size_t user_degree(UserId u) const { return row_degree(u); }
    std::size_t item_degree(ItemId i) const { return col_degree(i); }

    /// Ratings in row-major (user, item) order.
    std::vector<Rating> triplets() const;

    double mean() const;

    friend bool operator==(const RatingTable& a, const RatingTable& b);

private:
    double r_max_ = 1.0;
};

/// Per-user tag assignment counts tf(u,t). Zero counts are never stored.
class TagTable : public SparseUserMatrix<std::uint32_t> {
public:
    TagTable() = default;

    /// Throws InputError for ids out of range, zero counts, or duplicated
    /// (user, tag) pairs.
    TagTable(std::size_t user_count, std::size_t tag_count, std::vector<TagCount> counts);

    std::size_t tag_count() const noexcept { return col_count(); }
    std::size_t user_degree(UserId u) const { return row_degree(u); }
    std::size_t tag_degree(TagId t) const { return col_degree(t); }

    std::vector<TagCount> triplets() const;

    friend bool operator==(const TagTable& a, const TagTable& b);
};

}  // namespace trirec
