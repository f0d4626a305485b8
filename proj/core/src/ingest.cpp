#include "trirec/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <string_view>
#include <unordered_map>

#include "trirec/error.hpp"
#include "trirec/random.hpp"

namespace trirec {

namespace {

constexpr std::string_view kRmaxDirective = "# r_max=";

std::vector<std::string_view> split_fields(std::string_view line, char delim)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view s)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<std::uint64_t> parse_count(std::string_view s)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

bool is_decimal(std::string_view s)
{
    return !s.empty() && s.size() < 19 &&
           std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

/// Collects labels of one entity class, then assigns dense ids in natural order.
class LabelIndex {
public:
    void add(std::string_view label)
    {
        if (seen_.emplace(std::string(label), 0).second) labels_.emplace_back(label);
    }

    void finalize()
    {
        const bool numeric = std::all_of(labels_.begin(), labels_.end(),
                                         [](const std::string& s) { return is_decimal(s); });
        if (numeric) {
            std::sort(labels_.begin(), labels_.end(), [](const std::string& a, const std::string& b) {
                return std::stoull(a) != std::stoull(b) ? std::stoull(a) < std::stoull(b) : a < b;
            });
        } else {
            std::sort(labels_.begin(), labels_.end());
        }
        for (std::size_t i = 0; i < labels_.size(); ++i) seen_[labels_[i]] = static_cast<std::uint32_t>(i);
    }

    std::uint32_t id(std::string_view label) const { return seen_.at(std::string(label)); }
    std::vector<std::string> take() { return std::move(labels_); }

private:
    std::unordered_map<std::string, std::uint32_t> seen_;
    std::vector<std::string> labels_;
};

struct RawRating {
    std::string user, item;
    double value;
    std::size_t line;
};

struct RawTag {
    std::string user, tag;
    std::uint64_t count;
};

std::string_view strip_cr(std::string_view line)
{
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

std::string_view field_at(const std::vector<std::string_view>& fields, int col,
                          const std::string& path, std::size_t line_no, const char* what)
{
    if (col < 0 || static_cast<std::size_t>(col) >= fields.size()) {
        throw ParseError(path, line_no,
                         std::string("missing ") + what + " column " + std::to_string(col) + " (found " +
                             std::to_string(fields.size()) + " fields)");
    }
    const auto f = fields[static_cast<std::size_t>(col)];
    if (f.empty()) throw ParseError(path, line_no, std::string("empty ") + what + " field");
    return f;
}

std::ifstream open_input(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot open " + p.string());
    return in;
}

}  // namespace

LoadResult load_tsv(const std::filesystem::path& ratings_path,
                    const std::optional<std::filesystem::path>& tags_path, const LoadOptions& options)
{
    LoadResult result;
    const std::string rpath = ratings_path.string();
    std::vector<RawRating> raw_ratings;
    std::optional<double> directive_rmax;

    {
        auto in = open_input(ratings_path);
        std::string buf;
        std::size_t line_no = 0;
        bool header_pending = options.skip_header;
        while (std::getline(in, buf)) {
            ++line_no;
            const auto line = strip_cr(buf);
            if (line.starts_with(kRmaxDirective) && raw_ratings.empty()) {
                directive_rmax = parse_double(line.substr(kRmaxDirective.size()));
                if (!directive_rmax) throw ParseError(rpath, line_no, "bad r_max directive");
                continue;
            }
            if (line.empty() || line.front() == '#') continue;
            if (header_pending) {
                header_pending = false;
                continue;
            }
            const auto fields = split_fields(line, options.delimiter);
            RawRating r;
            r.user = field_at(fields, options.rating_user_col, rpath, line_no, "user");
            r.item = field_at(fields, options.rating_item_col, rpath, line_no, "item");
            r.line = line_no;
            if (options.mode == RatingMode::implicit_binary) {
                r.value = 1.0;
            } else {
                const auto text = field_at(fields, options.rating_value_col, rpath, line_no, "rating");
                const auto v = parse_double(text);
                if (!v) throw ParseError(rpath, line_no, "rating is not a number: '" + std::string(text) + "'");
                r.value = *v;
            }
            raw_ratings.push_back(std::move(r));
        }
    }
    if (raw_ratings.empty()) throw InputError(rpath + ": no ratings");

    double r_max = 0.0;
    if (options.mode == RatingMode::implicit_binary) {
        r_max = 1.0;
    } else if (options.r_max) {
        r_max = *options.r_max;
    } else if (directive_rmax) {
        r_max = *directive_rmax;
    } else {
        for (const auto& r : raw_ratings) r_max = std::max(r_max, r.value);
    }
    if (!(r_max > 0.0)) throw InputError(rpath + ": r_max must be positive");
    for (const auto& r : raw_ratings) {
        if (!(r.value > 0.0 && r.value <= r_max)) {
            throw ParseError(rpath, r.line,
                             "rating " + std::to_string(r.value) + " outside (0, " + std::to_string(r_max) + "]");
        }
    }

    std::vector<RawTag> raw_tags;
    if (tags_path) {
        const std::string tpath = tags_path->string();
        auto in = open_input(*tags_path);
        std::string buf;
        std::size_t line_no = 0;
        bool header_pending = options.skip_header;
        while (std::getline(in, buf)) {
            ++line_no;
            const auto line = strip_cr(buf);
            if (line.empty() || line.front() == '#') continue;
            if (header_pending) {
                header_pending = false;
                continue;
            }
            const auto fields = split_fields(line, options.delimiter);
            RawTag t;
            t.user = field_at(fields, options.tag_user_col, tpath, line_no, "user");
            if (options.tag_item_col >= 0) field_at(fields, options.tag_item_col, tpath, line_no, "item");
            t.tag = field_at(fields, options.tag_tag_col, tpath, line_no, "tag");
            t.count = 1;
            if (options.tag_count_col >= 0) {
                const auto text = field_at(fields, options.tag_count_col, tpath, line_no, "count");
                const auto c = parse_count(text);
                if (!c || *c == 0) throw ParseError(tpath, line_no, "tag count must be a positive integer");
                t.count = *c;
            }
            raw_tags.push_back(std::move(t));
        }
    }

    LabelIndex users, items, tags;
    for (const auto& r : raw_ratings) {
        users.add(r.user);
        items.add(r.item);
    }
    for (const auto& t : raw_tags) {
        users.add(t.user);
        tags.add(t.tag);
    }
    users.finalize();
    items.finalize();
    tags.finalize();

    // Keep the last occurrence of a repeated (user, item) pair.
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> latest;
    for (std::size_t k = 0; k < raw_ratings.size(); ++k) {
        const auto key = std::pair{users.id(raw_ratings[k].user), items.id(raw_ratings[k].item)};
        const auto [it, inserted] = latest.emplace(key, k);
        if (!inserted) {
            result.warnings.push_back(rpath + ":" + std::to_string(raw_ratings[k].line) +
                                      ": duplicate rating for (" + raw_ratings[k].user + ", " +
                                      raw_ratings[k].item + "); keeping the later row (line " +
                                      std::to_string(raw_ratings[it->second].line) + " dropped)");
            it->second = k;
        }
    }
    std::vector<Rating> ratings;
    ratings.reserve(latest.size());
    for (const auto& [key, k] : latest) ratings.push_back(Rating{key.first, key.second, raw_ratings[k].value});

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> tag_totals;
    for (const auto& t : raw_tags) tag_totals[{users.id(t.user), tags.id(t.tag)}] += t.count;
    std::vector<TagCount> tag_counts;
    tag_counts.reserve(tag_totals.size());
    for (const auto& [key, c] : tag_totals) {
        if (c > std::numeric_limits<std::uint32_t>::max()) throw InputError("tag count overflow");
        tag_counts.push_back(TagCount{key.first, key.second, static_cast<std::uint32_t>(c)});
    }

    auto user_labels = users.take();
    auto item_labels = items.take();
    auto tag_labels = tags.take();
    RatingTable rt(user_labels.size(), item_labels.size(), r_max, std::move(ratings));
    TagTable tt(user_labels.size(), tag_labels.size(), std::move(tag_counts));
    result.dataset = Dataset(std::move(rt), std::move(tt), std::move(user_labels), std::move(item_labels),
                             std::move(tag_labels));
    return result;
}

void write_canonical(const Dataset& d, const std::filesystem::path& ratings_out,
                     const std::filesystem::path& tags_out)
{
    char buf[64];
    {
        std::ofstream out(ratings_out, std::ios::binary);
        if (!out) throw InputError("cannot write " + ratings_out.string());
        std::snprintf(buf, sizeof buf, "%.17g", d.ratings().r_max());
        out << kRmaxDirective << buf << '\n';
        for (const auto& r : d.ratings().triplets()) {
            std::snprintf(buf, sizeof buf, "%.17g", r.value);
            out << r.user << '\t' << r.item << '\t' << buf << '\n';
        }
    }
    {
        std::ofstream out(tags_out, std::ios::binary);
        if (!out) throw InputError("cannot write " + tags_out.string());
        for (const auto& t : d.tags().triplets()) out << t.user << '\t' << t.tag << '\t' << t.count << '\n';
    }
}

LoadOptions canonical_options()
{
    LoadOptions o;
    o.tag_user_col = 0;
    o.tag_item_col = -1;
    o.tag_tag_col = 1;
    o.tag_count_col = 2;
    return o;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const
{
    std::vector<std::size_t> sizes(n_folds, 0);
    for (const auto f : assignments) ++sizes[f];
    return sizes;
}

FoldPlan make_folds(const Dataset& d, std::size_t n_folds, std::uint64_t seed, double validation_fraction)
{
    if (n_folds < 2) throw InputError("need at least 2 folds");
    const auto n = d.ratings().size();
    if (n < n_folds) {
        throw InputError("dataset has " + std::to_string(n) + " ratings, fewer than " +
                         std::to_string(n_folds) + " folds");
    }
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
        throw ConfigError("validation_fraction must lie in [0, 1)");
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(derive_seed(seed, "folds"));
    rng.shuffle(order);

    FoldPlan plan;
    plan.seed = seed;
    plan.n_folds = n_folds;
    plan.validation_fraction = validation_fraction;
    plan.assignments.assign(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos) {
        plan.assignments[order[pos]] = static_cast<std::uint32_t>(pos % n_folds);
    }
    return plan;
}

Split split(const Dataset& d, const FoldPlan& plan, std::size_t test_fold)
{
    if (test_fold >= plan.n_folds) throw InputError("test fold out of range");
    const auto& table = d.ratings();
    if (plan.assignments.size() != table.size()) throw InputError("fold plan does not match dataset");

    const auto all = table.triplets();
    std::vector<Rating> test, rest;
    for (std::size_t k = 0; k < all.size(); ++k) {
        (plan.assignments[k] == test_fold ? test : rest).push_back(all[k]);
    }

    const auto n_val = static_cast<std::size_t>(
        std::llround(plan.validation_fraction * static_cast<double>(rest.size())));
    std::vector<std::uint32_t> order(rest.size());
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(derive_seed(plan.seed, "validation", test_fold));
    rng.shuffle(order);
    std::vector<char> is_val(rest.size(), 0);
    for (std::size_t k = 0; k < n_val; ++k) is_val[order[k]] = 1;

    std::vector<Rating> train, validation;
    for (std::size_t k = 0; k < rest.size(); ++k) (is_val[k] ? validation : train).push_back(rest[k]);

    const auto users = table.user_count();
    const auto items = table.item_count();
    const auto r_max = table.r_max();
    return Split{RatingTable(users, items, r_max, std::move(train)),
                 RatingTable(users, items, r_max, std::move(validation)),
                 RatingTable(users, items, r_max, std::move(test))};
}

}  // namespace trirec
