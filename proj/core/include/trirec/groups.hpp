#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trirec/eval.hpp"

namespace trirec {

/// Two-dimensional binning of users by (training rating count, tag
/// assignment count). With edges e0 < e1 < ... a count n falls in the first
/// bin whose edge satisfies n <= e_j; counts above the last edge fall in an
/// overflow bin labelled ">e_last".
class UserGroupSpec {
public:
    UserGroupSpec(std::vector<std::size_t> rating_edges, std::vector<std::size_t> tag_edges);

    /// Bins covering the usual Movielens user classes, from (5,10) up to
    /// the open-ended (>65, >100) corner.
    static UserGroupSpec movielens();

    std::size_t rating_bins() const noexcept { return rating_edges_.size() + 1; }
    std::size_t tag_bins() const noexcept { return tag_edges_.size() + 1; }
    std::size_t cell_count() const noexcept { return rating_bins() * tag_bins(); }

    std::size_t rating_bin(std::size_t n) const;
    std::size_t tag_bin(std::size_t n) const;
    std::size_t cell(std::size_t n_ratings, std::size_t n_tags) const
    {
        return rating_bin(n_ratings) * tag_bins() + tag_bin(n_tags);
    }

    std::string rating_label(std::size_t bin) const;
    std::string tag_label(std::size_t bin) const;

    const std::vector<std::size_t>& rating_edges() const noexcept { return rating_edges_; }
    const std::vector<std::size_t>& tag_edges() const noexcept { return tag_edges_; }

private:
    std::vector<std::size_t> rating_edges_;
    std::vector<std::size_t> tag_edges_;
};

/// Cell index of every user given training ratings and tag assignments.
std::vector<std::size_t> assign_groups(const RatingTable& train, const TagTable& tags, const UserGroupSpec& spec);

struct NamedModel {
    std::string name;
    ModelSpec spec;
    TrainConfig cfg;
};

struct GroupCell {
    std::string rating_label;
    std::string tag_label;
    std::size_t test_users = 0;    ///< summed over runs
    std::size_t test_ratings = 0;  ///< summed over runs
    std::vector<std::optional<double>> rmse;  ///< per model; nullopt when the cell is empty
};

struct GroupReport {
    std::vector<std::string> models;
    std::vector<GroupCell> cells;
    std::vector<double> overall_rmse;  ///< pooled over all test ratings of all runs
};

/// Cross-validates each model and pools squared test errors per user group.
/// A test rating's group is decided by its user's counts in that run's
/// training split and the (unsplit) tag table.
GroupReport group_report(const Dataset& d, const std::vector<NamedModel>& models, const UserGroupSpec& spec,
                         const CvParams& cv);

/// `rating_bin,tag_bin,test_users,test_ratings,rmse_<model>...`; empty cells
/// print NA.
void write_group_csv(std::ostream& out, const GroupReport& r, const ConfigEcho& config);

}  // namespace trirec
