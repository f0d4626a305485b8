#include "trirec/groups.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "trirec/error.hpp"

namespace trirec {

namespace {

void check_edges(const std::vector<std::size_t>& edges, const char* what)
{
    if (edges.empty()) throw ConfigError(std::string(what) + " bin edges are empty");
    if (!std::is_sorted(edges.begin(), edges.end()) ||
        std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw ConfigError(std::string(what) + " bin edges must be strictly increasing");
    }
}

std::size_t bin_of(const std::vector<std::size_t>& edges, std::size_t n)
{
    return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), n) - edges.begin());
}

std::string label_of(const std::vector<std::size_t>& edges, std::size_t bin)
{
    if (bin < edges.size()) return std::to_string(edges[bin]);
    return ">" + std::to_string(edges.back());
}

}  // namespace

UserGroupSpec::UserGroupSpec(std::vector<std::size_t> rating_edges, std::vector<std::size_t> tag_edges)
    : rating_edges_(std::move(rating_edges)), tag_edges_(std::move(tag_edges))
{
    check_edges(rating_edges_, "rating");
    check_edges(tag_edges_, "tag");
}

UserGroupSpec UserGroupSpec::movielens()
{
    return UserGroupSpec({5, 10, 15, 20, 25, 30, 35, 50, 65}, {10, 20, 30, 40, 50, 100});
}

std::size_t UserGroupSpec::rating_bin(std::size_t n) const { return bin_of(rating_edges_, n); }
std::size_t UserGroupSpec::tag_bin(std::size_t n) const { return bin_of(tag_edges_, n); }
std::string UserGroupSpec::rating_label(std::size_t bin) const { return label_of(rating_edges_, bin); }
std::string UserGroupSpec::tag_label(std::size_t bin) const { return label_of(tag_edges_, bin); }

std::vector<std::size_t> assign_groups(const RatingTable& train, const TagTable& tags, const UserGroupSpec& spec)
{
    if (train.user_count() != tags.user_count()) throw InputError("rating and tag tables disagree on user count");
    std::vector<std::size_t> cells(train.user_count());
    for (UserId u = 0; u < train.user_count(); ++u) {
        std::size_t assignments = 0;
        for (const auto& e : tags.row(u)) assignments += e.value;
        cells[u] = spec.cell(train.user_degree(u), assignments);
    }
    return cells;
}

GroupReport group_report(const Dataset& d, const std::vector<NamedModel>& models, const UserGroupSpec& spec,
                         const CvParams& cv)
{
    cv.validate();
    if (models.empty()) throw ConfigError("group report needs at least one model");

    const auto n_cells = spec.cell_count();
    std::vector<std::size_t> users(n_cells, 0), ratings(n_cells, 0);
    std::vector<std::vector<double>> sq(models.size(), std::vector<double>(n_cells, 0.0));
    std::vector<double> total_sq(models.size(), 0.0);
    std::size_t total = 0;

    for (std::size_t repeat = 0; repeat < cv.repeats; ++repeat) {
        for (std::size_t fold = 0; fold < cv.folds; ++fold) {
            for (std::size_t m = 0; m < models.size(); ++m) {
                const auto fit = fit_fold(d, models[m].spec, models[m].cfg, cv, repeat, fold);
                const auto& test = fit.split.test;
                const auto cells = assign_groups(fit.split.train, d.tags(), spec);
                for (UserId u = 0; u < test.user_count(); ++u) {
                    const auto row = test.row(u);
                    if (row.empty()) continue;
                    if (m == 0) {
                        ++users[cells[u]];
                        ratings[cells[u]] += row.size();
                        total += row.size();
                    }
                    for (const auto& e : row) {
                        const double err = e.value - predict(fit.trained.model, u, e.col);
                        sq[m][cells[u]] += err * err;
                        total_sq[m] += err * err;
                    }
                }
            }
        }
    }

    GroupReport report;
    for (const auto& m : models) report.models.push_back(m.name);
    for (std::size_t c = 0; c < n_cells; ++c) {
        GroupCell cell;
        cell.rating_label = spec.rating_label(c / spec.tag_bins());
        cell.tag_label = spec.tag_label(c % spec.tag_bins());
        cell.test_users = users[c];
        cell.test_ratings = ratings[c];
        for (std::size_t m = 0; m < models.size(); ++m) {
            if (ratings[c] == 0) {
                cell.rmse.emplace_back(std::nullopt);
            } else {
                cell.rmse.emplace_back(std::sqrt(sq[m][c] / static_cast<double>(ratings[c])));
            }
        }
        report.cells.push_back(std::move(cell));
    }
    for (std::size_t m = 0; m < models.size(); ++m) {
        report.overall_rmse.push_back(std::sqrt(total_sq[m] / static_cast<double>(total)));
    }
    return report;
}

void write_group_csv(std::ostream& out, const GroupReport& r, const ConfigEcho& config)
{
    for (const auto& [k, v] : config) out << "# " << k << '=' << v << '\n';
    out << "rating_bin,tag_bin,test_users,test_ratings";
    for (const auto& m : r.models) out << ",rmse_" << m;
    out << '\n';
    char buf[40];
    for (const auto& c : r.cells) {
        out << c.rating_label << ',' << c.tag_label << ',' << c.test_users << ',' << c.test_ratings;
        for (const auto& v : c.rmse) {
            if (v) {
                std::snprintf(buf, sizeof buf, "%.12g", *v);
                out << ',' << buf;
            } else {
                out << ",NA";
            }
        }
        out << '\n';
    }
    out << "all,all,,";
    std::size_t total = 0;
    for (const auto& c : r.cells) total += c.test_ratings;
    out << total;
    for (const double v : r.overall_rmse) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        out << ',' << buf;
    }
    out << '\n';
}

}  // namespace trirec
