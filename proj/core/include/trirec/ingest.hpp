#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trirec/dataset.hpp"

namespace trirec {

enum class RatingMode {
    explicit_numeric,  ///< use the rating column as-is
    implicit_binary,   ///< any interaction becomes 1.0, r_max = 1
};

/// Column layout and parsing options for delimited rating/tag files.
/// Column indices are 0-based. Lines starting with '#' are comments, except
/// a leading "# r_max=<value>" directive which sets the rating ceiling when
/// `r_max` is not given explicitly.
struct LoadOptions {
    char delimiter = '\t';
    bool skip_header = false;
    RatingMode mode = RatingMode::explicit_numeric;
    /// Rating ceiling; when absent, the directive or the largest rating seen.
    std::optional<double> r_max;

    int rating_user_col = 0;
    int rating_item_col = 1;
    int rating_value_col = 2;  ///< ignored in implicit_binary mode

    int tag_user_col = 0;
    int tag_item_col = 1;  ///< -1 when the file has no item column
    int tag_tag_col = 2;
    int tag_count_col = -1;  ///< -1: every row is one assignment
};

struct LoadResult {
    Dataset dataset;
    std::vector<std::string> warnings;
};

/// Reads ratings and (optionally empty) tags into a Dataset with dense ids.
/// Ids are assigned in natural label order: numerically when every label of
/// an entity class is a non-negative integer, lexicographically otherwise.
/// A repeated (user, item) pair keeps its last occurrence and adds a warning.
/// Throws ParseError (with path:line) or InputError.
LoadResult load_tsv(const std::filesystem::path& ratings_path,
                    const std::optional<std::filesystem::path>& tags_path,
                    const LoadOptions& options = {});

/// Writes the canonical dump: `<prefix>ratings.tsv` (user item rating, with an
/// r_max directive) and `<prefix>tags.tsv` (user tag count), dense ids,
/// row-major order, 17 significant digits. Output is a pure function of the
/// dataset.
void write_canonical(const Dataset& d, const std::filesystem::path& ratings_out,
                     const std::filesystem::path& tags_out);

/// LoadOptions matching write_canonical's layout.
LoadOptions canonical_options();

/// Random balanced assignment of rating entries (row-major order) to folds.
struct FoldPlan {
    std::uint64_t seed = 0;
    std::size_t n_folds = 10;
    std::vector<std::uint32_t> assignments;
    double validation_fraction = 0.1;

    std::vector<std::size_t> fold_sizes() const;
};

/// Throws InputError when n_folds < 2 or there are fewer ratings than folds,
/// and ConfigError when validation_fraction is outside [0, 1).
FoldPlan make_folds(const Dataset& d, std::size_t n_folds, std::uint64_t seed,
                    double validation_fraction = 0.1);

struct Split {
    RatingTable train;
    RatingTable validation;
    RatingTable test;
};

/// test = entries of `test_fold`; validation = a seeded validation_fraction
/// of the rest (rounded to nearest); train = remainder. Tags are not split.
Split split(const Dataset& d, const FoldPlan& plan, std::size_t test_fold);

}  // namespace trirec
