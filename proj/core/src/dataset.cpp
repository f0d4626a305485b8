#include "trirec/dataset.hpp"

#include <string>

#include "trirec/error.hpp"

namespace trirec {

namespace {

std::vector<std::string> decimal_labels(std::size_t n)
{
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

void check_range(std::size_t id, std::size_t count, const char* what)
{
    if (id >= count) {
        throw InputError(std::string(what) + " id " + std::to_string(id) + " out of range (count " +
                         std::to_string(count) + ")");
    }
}

}  // namespace

Dataset::Dataset(RatingTable ratings, TagTable tags, std::vector<std::string> user_labels,
                 std::vector<std::string> item_labels, std::vector<std::string> tag_labels)
    : ratings_(std::move(ratings)),
      tags_(std::move(tags)),
      user_labels_(std::move(user_labels)),
      item_labels_(std::move(item_labels)),
      tag_labels_(std::move(tag_labels))
{
    if (ratings_.user_count() != tags_.user_count()) {
        throw InputError("rating and tag tables disagree on user count");
    }
    if (user_labels_.size() != ratings_.user_count() || item_labels_.size() != ratings_.item_count() ||
        tag_labels_.size() != tags_.tag_count()) {
        throw InputError("label maps do not match table dimensions");
    }
}

Dataset::Dataset(RatingTable ratings, TagTable tags)
    : Dataset(ratings, tags, decimal_labels(ratings.user_count()),
              decimal_labels(ratings.item_count()), decimal_labels(tags.tag_count()))
{}

std::size_t Dataset::degree_user_items(UserId u) const
{
    check_range(u, user_count(), "user");
    return ratings_.user_degree(u);
}

std::size_t Dataset::degree_user_tags(UserId u) const
{
    check_range(u, user_count(), "user");
    return tags_.user_degree(u);
}

std::size_t Dataset::degree_item(ItemId i) const
{
    check_range(i, item_count(), "item");
    return ratings_.item_degree(i);
}

std::size_t Dataset::degree_tag(TagId t) const
{
    check_range(t, tag_count(), "tag");
    return tags_.tag_degree(t);
}

}  // namespace trirec
