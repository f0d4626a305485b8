#include "trirec/sparse.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "trirec/error.hpp"

namespace trirec {

template <typename Value>
void SparseUserMatrix<Value>::assign(std::size_t users, std::size_t cols,
                                     std::vector<std::uint32_t> row_of, std::vector<Entry> entries)
{
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (row_of[a] != row_of[b]) return row_of[a] < row_of[b];
        return entries[a].col < entries[b].col;
    });

    row_offsets_.assign(users + 1, 0);
    entries_.clear();
    entries_.reserve(entries.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto idx = order[k];
        if (k > 0) {
            const auto prev = order[k - 1];
            if (row_of[prev] == row_of[idx] && entries[prev].col == entries[idx].col) {
                throw InputError("duplicate entry for (" + std::to_string(row_of[idx]) + ", " +
                                 std::to_string(entries[idx].col) + ")");
            }
        }
        entries_.push_back(entries[idx]);
        ++row_offsets_[row_of[idx] + 1];
    }
    std::partial_sum(row_offsets_.begin(), row_offsets_.end(), row_offsets_.begin());

    col_offsets_.assign(cols + 1, 0);
    for (const auto& e : entries_) ++col_offsets_[e.col + 1];
    std::partial_sum(col_offsets_.begin(), col_offsets_.end(), col_offsets_.begin());

    col_users_.assign(entries_.size(), ColumnEntry{0, 0});
    std::vector<std::size_t> fill(col_offsets_.begin(), col_offsets_.end() - 1);
    for (std::size_t u = 0; u < users; ++u) {
        for (auto k = row_offsets_[u]; k < row_offsets_[u + 1]; ++k) {
            col_users_[fill[entries_[k].col]++] =
                ColumnEntry{static_cast<UserId>(u), static_cast<std::uint32_t>(k)};
        }
    }
}

template <typename Value>
UserId SparseUserMatrix<Value>::entry_user(std::size_t k) const
{
    const auto it = std::upper_bound(row_offsets_.begin(), row_offsets_.end(), k);
    return static_cast<UserId>(std::distance(row_offsets_.begin(), it) - 1);
}

template <typename Value>
const Value* SparseUserMatrix<Value>::find(UserId u, std::uint32_t c) const
{
    if (u >= user_count()) return nullptr;
    const auto r = row(u);
    const auto it = std::lower_bound(r.begin(), r.end(), c,
                                     [](const Entry& e, std::uint32_t col) { return e.col < col; });
    if (it == r.end() || it->col != c) return nullptr;
    return &it->value;
}

template class SparseUserMatrix<double>;
template class SparseUserMatrix<std::uint32_t>;

RatingTable::RatingTable(std::size_t user_count, std::size_t item_count, double r_max,
                         std::vector<Rating> ratings)
    : r_max_(r_max)
{
    if (!(r_max > 0.0)) throw InputError("r_max must be positive, got " + std::to_string(r_max));
    std::vector<std::uint32_t> rows;
    std::vector<Entry> entries;
    rows.reserve(ratings.size());
    entries.reserve(ratings.size());
    for (const auto& r : ratings) {
        if (r.user >= user_count || r.item >= item_count) {
            throw InputError("rating id out of range: (" + std::to_string(r.user) + ", " +
                             std::to_string(r.item) + ")");
        }
        if (!(r.value > 0.0 && r.value <= r_max)) {
            throw InputError("rating " + std::to_string(r.value) + " outside (0, " +
                             std::to_string(r_max) + "]");
        }
        rows.push_back(r.user);
        entries.push_back(Entry{r.item, r.value});
    }
    assign(user_count, item_count, std::move(rows), std::move(entries));
}

std::vector<Rating> RatingTable::triplets() const
{
    std::vector<Rating> out;
    out.reserve(size());
    for (UserId u = 0; u < user_count(); ++u) {
        for (const auto& e : row(u)) out.push_back(Rating{u, e.col, e.value});
    }
    return out;
}

double RatingTable::mean() const
{
    if (empty()) return 0.0;
    double sum = 0.0;
    for (const auto& e : entries()) sum += e.value;
    return sum / static_cast<double>(size());
}

bool operator==(const RatingTable& a, const RatingTable& b)
{
    return a.user_count() == b.user_count() && a.item_count() == b.item_count() &&
           a.r_max() == b.r_max() && a.triplets() == b.triplets();
}

TagTable::TagTable(std::size_t user_count, std::size_t tag_count, std::vector<TagCount> counts)
{
    std::vector<std::uint32_t> rows;
    std::vector<Entry> entries;
    rows.reserve(counts.size());
    entries.reserve(counts.size());
    for (const auto& c : counts) {
        if (c.user >= user_count || c.tag >= tag_count) {
            throw InputError("tag id out of range: (" + std::to_string(c.user) + ", " +
                             std::to_string(c.tag) + ")");
        }
        if (c.count == 0) throw InputError("tag counts must be positive");
        rows.push_back(c.user);
        entries.push_back(Entry{c.tag, c.count});
    }
    assign(user_count, tag_count, std::move(rows), std::move(entries));
}

std::vector<TagCount> TagTable::triplets() const
{
    std::vector<TagCount> out;
    out.reserve(size());
    for (UserId u = 0; u < user_count(); ++u) {
        for (const auto& e : row(u)) out.push_back(TagCount{u, e.col, e.value});
    }
    return out;
}

bool operator==(const TagTable& a, const TagTable& b)
{
    return a.user_count() == b.user_count() && a.tag_count() == b.tag_count() &&
           a.triplets() == b.triplets();
}

}  // namespace trirec
