#pragma once

#include <string>
#include <vector>

#include "trirec/sparse.hpp"

namespace trirec {

/// Ratings plus tagging side information over a shared user universe,
/// with the external labels each dense id came from.
class Dataset {
public:
    Dataset() = default;

    /// Throws InputError if the two tables disagree on user_count or a label
    /// vector does not match its table dimension.
    Dataset(RatingTable ratings, TagTable tags, std::vector<std::string> user_labels,
            std::vector<std::string> item_labels, std::vector<std::string> tag_labels);

    /// Labels default to the decimal ids.
    Dataset(RatingTable ratings, TagTable tags);

    const RatingTable& ratings() const noexcept { return ratings_; }
    const TagTable& tags() const noexcept { return tags_; }

    std::size_t user_count() const noexcept { return ratings_.user_count(); }
    std::size_t item_count() const noexcept { return ratings_.item_count(); }
    std::size_t tag_count() const noexcept { return tags_.tag_count(); }

    const std::vector<std::string>& user_labels() const noexcept { return user_labels_; }
    const std::vector<std::string>& item_labels() const noexcept { return item_labels_; }
    const std::vector<std::string>& tag_labels() const noexcept { return tag_labels_; }

    // Distinct-neighbour counts in each bipartite layer. Out-of-range ids
    // throw InputError.
    std::size_t degree_user_items(UserId u) const;
    std::size_t degree_user_tags(UserId u) const;
    std::size_t degree_item(ItemId i) const;
    std::size_t degree_tag(TagId t) const;

private:
    RatingTable ratings_;
    TagTable tags_;
    std::vector<std::string> user_labels_;
    std::vector<std::string> item_labels_;
    std::vector<std::string> tag_labels_;
};

}  // namespace trirec
