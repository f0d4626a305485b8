#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "trirec/error.hpp"

namespace trirec::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v)
{
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(x)) {
        throw std::invalid_argument("expected a number, got '" + v + "'");
    }
    return x;
}

std::uint64_t to_unsigned(const std::string& v)
{
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
        throw std::invalid_argument("expected a non-negative integer, got '" + v + "'");
    }
    return x;
}

int to_column(const std::string& v)
{
    if (v == "-1" || v == "none") return -1;
    const auto x = to_unsigned(v);
    if (x > 1000) throw std::invalid_argument("column index too large");
    return static_cast<int>(x);
}

bool to_bool(const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("expected true/false, got '" + v + "'");
}

template <typename T, typename Parse>
std::vector<T> to_list(const std::string& v, Parse parse)
{
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(static_cast<T>(parse(item)));
    }
    if (out.empty()) throw std::invalid_argument("expected a comma-separated list");
    return out;
}

/// Shortest text that round-trips to the same double.
std::string fmt(double x)
{
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

template <typename T>
std::string join(const std::vector<T>& v)
{
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) s += ',';
        if constexpr (std::is_floating_point_v<T>) {
            s += fmt(v[k]);
        } else {
            s += std::to_string(v[k]);
        }
    }
    return s;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct KeySpec {
    KeyInfo info;
    Setter set;
    Getter get;
    bool echoed = true;
};

std::string bool_str(bool b) { return b ? "true" : "false"; }

void apply_format(RunConfig& c, const std::string& v)
{
    if (v == "custom") {
        c.load = LoadOptions{};
    } else if (v == "canonical") {
        c.load = canonical_options();
    } else if (v == "hetrec-movielens") {
        // user_ratedmovies.dat / user_taggedmovies.dat
        c.load = LoadOptions{};
        c.load.skip_header = true;
    } else if (v == "hetrec-lastfm" || v == "hetrec-delicious") {
        // user_artists.dat / user_taggedartists.dat (and the bookmark analogues)
        c.load = LoadOptions{};
        c.load.skip_header = true;
        c.load.mode = RatingMode::implicit_binary;
    } else {
        throw std::invalid_argument("unknown format '" + v +
                                    "' (custom, canonical, hetrec-movielens, hetrec-lastfm, hetrec-delicious)");
    }
    c.format = v;
}

std::string delimiter_name(char d)
{
    switch (d) {
    case '\t': return "tab";
    case ' ': return "space";
    default: return std::string(1, d);
    }
}

const std::vector<KeySpec>& key_specs()
{
    static const std::vector<KeySpec> specs = {
        {{"ratings", false, "ratings file"},
         [](RunConfig& c, const std::string& v) { c.ratings = v; },
         [](const RunConfig& c) { return c.ratings ? c.ratings->string() : std::string(); }},
        {{"tags", false, "tag assignment file (optional)"},
         [](RunConfig& c, const std::string& v) { c.tags = v; },
         [](const RunConfig& c) { return c.tags ? c.tags->string() : std::string(); }},
        {{"format", false, "column preset: custom|canonical|hetrec-movielens|hetrec-lastfm|hetrec-delicious"},
         apply_format, [](const RunConfig& c) { return c.format; }},
        {{"delimiter", false, "field separator: tab|space|<char>"},
         [](RunConfig& c, const std::string& v) {
             if (v == "tab") c.load.delimiter = '\t';
             else if (v == "space") c.load.delimiter = ' ';
             else if (v.size() == 1) c.load.delimiter = v[0];
             else throw std::invalid_argument("delimiter must be tab, space or one character");
         },
         [](const RunConfig& c) { return delimiter_name(c.load.delimiter); }},
        {{"skip_header", true, "skip the first non-comment line of each file"},
         [](RunConfig& c, const std::string& v) { c.load.skip_header = to_bool(v); },
         [](const RunConfig& c) { return bool_str(c.load.skip_header); }},
        {{"rating_mode", false, "explicit|implicit"},
         [](RunConfig& c, const std::string& v) {
             if (v == "explicit") c.load.mode = RatingMode::explicit_numeric;
             else if (v == "implicit") c.load.mode = RatingMode::implicit_binary;
             else throw std::invalid_argument("rating_mode must be explicit or implicit");
         },
         [](const RunConfig& c) {
             return std::string(c.load.mode == RatingMode::implicit_binary ? "implicit" : "explicit");
         }},
        {{"r_max", false, "rating ceiling (default: inferred)"},
         [](RunConfig& c, const std::string& v) { c.load.r_max = to_double(v); },
         [](const RunConfig& c) { return c.load.r_max ? fmt(*c.load.r_max) : std::string("auto"); }},
        {{"rating_user_col", false, "ratings: user column"},
         [](RunConfig& c, const std::string& v) { c.load.rating_user_col = to_column(v); },
         [](const RunConfig& c) { return std::to_string(c.load.rating_user_col); }},
        {{"rating_item_col", false, "ratings: item column"},
         [](RunConfig& c, const std::string& v) { c.load.rating_item_col = to_column(v); },
         [](const RunConfig& c) { return std::to_string(c.load.rating_item_col); }},
        {{"rating_value_col", false, "ratings: value column"},
         [](RunConfig& c, const std::string& v) { c.load.rating_value_col = to_column(v); },
         [](const RunConfig& c) { return std::to_string(c.load.rating_value_col); }},
        {{"tag_user_col", false, "tags: user column"},
         [](RunConfig& c, const std::string& v) { c.load.tag_user_col = to_column(v); },
         [](const RunConfig& c) { return std::to_string(c.load.tag_user_col); }},
        {{"tag_item_col", false, "tags: item column or -1"},
         [](RunConfig& c, const std::string& v) { c.load.tag_item_col = to_column(v); },
         [](const RunConfig& c) { return std::to_string(c.load.tag_item_col); }},
        {{"tag_tag_col", false, "tags: tag column"},
         [](RunConfig& c, const std::string& v) { c.load.tag_tag_col = to_column(v); },
         [](const RunConfig& c) { return std::to_string(c.load.tag_tag_col); }},
        {{"tag_count_col", false, "tags: count column or -1"},
         [](RunConfig& c, const std::string& v) { c.load.tag_count_col = to_column(v); },
         [](const RunConfig& c) { return std::to_string(c.load.tag_count_col); }},
        {{"model", false, "rmf|wudiff_rmf"},
         [](RunConfig& c, const std::string& v) {
             const auto k = parse_model_kind(v);
             if (!k) throw std::invalid_argument("model must be rmf or wudiff_rmf");
             c.model.kind = *k;
         },
         [](const RunConfig& c) { return std::string(to_string(c.model.kind)); }},
        {{"factors", false, "latent dimension f"},
         [](RunConfig& c, const std::string& v) { c.train.factors = to_unsigned(v); },
         [](const RunConfig& c) { return std::to_string(c.train.factors); }},
        {{"alpha", false, "similar-user regularisation strength"},
         [](RunConfig& c, const std::string& v) { c.train.alpha = to_double(v); },
         [](const RunConfig& c) { return fmt(c.train.alpha); }},
        {{"lambda_u", false, "user factor regularisation"},
         [](RunConfig& c, const std::string& v) { c.train.lambda_u = to_double(v); },
         [](const RunConfig& c) { return fmt(c.train.lambda_u); }},
        {{"lambda_i", false, "item factor regularisation"},
         [](RunConfig& c, const std::string& v) { c.train.lambda_i = to_double(v); },
         [](const RunConfig& c) { return fmt(c.train.lambda_i); }},
        {{"gamma1", false, "user learning rate"},
         [](RunConfig& c, const std::string& v) { c.train.gamma1 = to_double(v); },
         [](const RunConfig& c) { return fmt(c.train.gamma1); }},
        {{"gamma2", false, "item learning rate"},
         [](RunConfig& c, const std::string& v) { c.train.gamma2 = to_double(v); },
         [](const RunConfig& c) { return fmt(c.train.gamma2); }},
        {{"max_epochs", false, "epoch cap"},
         [](RunConfig& c, const std::string& v) { c.train.max_epochs = to_unsigned(v); },
         [](const RunConfig& c) { return std::to_string(c.train.max_epochs); }},
        {{"patience", false, "epochs without validation improvement before stopping"},
         [](RunConfig& c, const std::string& v) { c.train.patience = to_unsigned(v); },
         [](const RunConfig& c) { return std::to_string(c.train.patience); }},
        {{"shuffle", true, "shuffle ratings every epoch"},
         [](RunConfig& c, const std::string& v) { c.train.shuffle = to_bool(v); },
         [](const RunConfig& c) { return bool_str(c.train.shuffle); }},
        {{"single_sided_reg", true, "apply the neighbour pull once per step"},
         [](RunConfig& c, const std::string& v) { c.train.single_sided_reg = to_bool(v); },
         [](const RunConfig& c) { return bool_str(c.train.single_sided_reg); }},
        {{"lambda", false, "rating/tag diffusion mix in [0,1]"},
         [](RunConfig& c, const std::string& v) { c.model.neighbors.lambda = to_double(v); },
         [](const RunConfig& c) { return fmt(c.model.neighbors.lambda); }},
        {{"k_neighbors", false, "neighbours per user"},
         [](RunConfig& c, const std::string& v) { c.model.neighbors.k = to_unsigned(v); },
         [](const RunConfig& c) { return std::to_string(c.model.neighbors.k); }},
        {{"clamp_nonneg", true, "exclude negative similarities"},
         [](RunConfig& c, const std::string& v) { c.model.neighbors.clamp_nonneg = to_bool(v); },
         [](const RunConfig& c) { return bool_str(c.model.neighbors.clamp_nonneg); }},
        {{"bm25_k1", false, "BM25 k1"},
         [](RunConfig& c, const std::string& v) { c.model.bm25.k1 = to_double(v); },
         [](const RunConfig& c) { return fmt(c.model.bm25.k1); }},
        {{"bm25_b", false, "BM25 b"},
         [](RunConfig& c, const std::string& v) { c.model.bm25.b = to_double(v); },
         [](const RunConfig& c) { return fmt(c.model.bm25.b); }},
        {{"folds", false, "cross-validation folds"},
         [](RunConfig& c, const std::string& v) { c.cv.folds = to_unsigned(v); },
         [](const RunConfig& c) { return std::to_string(c.cv.folds); }},
        {{"repeats", false, "independent fold assignments"},
         [](RunConfig& c, const std::string& v) { c.cv.repeats = to_unsigned(v); },
         [](const RunConfig& c) { return std::to_string(c.cv.repeats); }},
        {{"seed", false, "root random seed"},
         [](RunConfig& c, const std::string& v) { c.cv.seed = to_unsigned(v); },
         [](const RunConfig& c) { return std::to_string(c.cv.seed); }},
        {{"validation_fraction", false, "share of each training split held out for early stopping"},
         [](RunConfig& c, const std::string& v) { c.cv.validation_fraction = to_double(v); },
         [](const RunConfig& c) { return fmt(c.cv.validation_fraction); }},
        {{"jobs", false, "parallel (repeat, fold) runs"},
         [](RunConfig& c, const std::string& v) { c.cv.jobs = static_cast<unsigned>(to_unsigned(v)); },
         [](const RunConfig& c) { return std::to_string(c.cv.jobs); }, false},
        {{"out", false, "output directory"},
         [](RunConfig& c, const std::string& v) { c.out = v; },
         [](const RunConfig& c) { return c.out.string(); }, false},
        {{"test_fold", false, "train: fold held out for testing"},
         [](RunConfig& c, const std::string& v) { c.test_fold = to_unsigned(v); },
         [](const RunConfig& c) { return std::to_string(c.test_fold); }},
        {{"dump_neighbors", true, "train: also write neighbors.tsv"},
         [](RunConfig& c, const std::string& v) { c.dump_neighbors = to_bool(v); },
         [](const RunConfig& c) { return bool_str(c.dump_neighbors); }},
        {{"sweep_param", false, "sweep: lambda|k_neighbors|alpha"},
         [](RunConfig& c, const std::string& v) {
             const auto p = parse_sweep_param(v);
             if (!p) throw std::invalid_argument("sweep_param must be lambda, k_neighbors or alpha");
             c.sweep_param = *p;
         },
         [](const RunConfig& c) { return std::string(to_string(c.sweep_param)); }},
        {{"sweep_values", false, "sweep: comma-separated grid"},
         [](RunConfig& c, const std::string& v) { c.sweep_values = to_list<double>(v, to_double); },
         [](const RunConfig& c) { return join(c.sweep_values); }},
        {{"rating_bins", false, "groups: rating-count bin edges"},
         [](RunConfig& c, const std::string& v) { c.rating_bins = to_list<std::size_t>(v, to_unsigned); },
         [](const RunConfig& c) { return join(c.rating_bins); }},
        {{"tag_bins", false, "groups: tag-count bin edges"},
         [](RunConfig& c, const std::string& v) { c.tag_bins = to_list<std::size_t>(v, to_unsigned); },
         [](const RunConfig& c) { return join(c.tag_bins); }},
    };
    return specs;
}

const KeySpec* find_key(const std::string& name)
{
    for (const auto& k : key_specs()) {
        if (k.info.name == name) return &k;
    }
    return nullptr;
}

std::vector<std::string> required_keys(const std::string& command)
{
    if (command == "synth") return {"out"};
    std::vector<std::string> req{"ratings", "out"};
    if (command == "sweep") req.emplace_back("sweep_values");
    return req;
}

}  // namespace

const std::vector<KeyInfo>& known_keys()
{
    static const std::vector<KeyInfo> infos = [] {
        std::vector<KeyInfo> v;
        for (const auto& k : key_specs()) v.push_back(k.info);
        return v;
    }();
    return infos;
}

RawConfig read_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    RawConfig out;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> problems;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) {
            problems.push_back(where + "expected key=value");
            continue;
        }
        const auto key = trim(line.substr(0, eq));
        if (!find_key(key)) {
            problems.push_back(where + "unknown key '" + key + "'");
            continue;
        }
        out[key] = trim(line.substr(eq + 1));
    }
    if (!problems.empty()) {
        std::string msg = "config file errors:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ConfigError(msg);
    }
    return out;
}

RunConfig resolve_config(const std::string& command, const RawConfig& file_values, const RawConfig& overrides)
{
    RunConfig cfg;
    cfg.command = command;
    std::vector<std::string> problems;

    RawConfig merged = file_values;
    for (const auto& [k, v] : overrides) merged[k] = v;

    // The format preset resets column options, so it goes first.
    std::vector<std::pair<std::string, std::string>> ordered;
    if (const auto it = merged.find("format"); it != merged.end()) ordered.emplace_back(*it);
    for (const auto& [k, v] : merged) {
        if (k != "format") ordered.emplace_back(k, v);
    }
    for (const auto& [k, v] : ordered) {
        const auto* spec = find_key(k);
        if (!spec) {
            problems.push_back("unknown key '" + k + "'");
            continue;
        }
        try {
            spec->set(cfg, v);
            cfg.provided.insert(k);
        } catch (const std::exception& e) {
            problems.push_back(k + ": " + e.what());
        }
    }

    for (const auto& req : required_keys(command)) {
        if (!cfg.provided.count(req)) problems.push_back("missing required --" + req);
    }

    const auto check = [&](auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            problems.emplace_back(e.what());
        }
    };
    check([&] { cfg.train.validate(); });
    check([&] { cfg.model.neighbors.validate(); });
    check([&] { cfg.model.bm25.validate(); });
    check([&] { cfg.cv.validate(); });
    if (cfg.load.r_max && !(*cfg.load.r_max > 0.0)) problems.emplace_back("r_max must be positive");
    if (cfg.test_fold >= cfg.cv.folds) problems.emplace_back("test_fold must be < folds");
    check([&] { UserGroupSpec(cfg.rating_bins, cfg.tag_bins); });

    if (!problems.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ConfigError(msg);
    }
    return cfg;
}

ConfigEcho echo(const RunConfig& cfg)
{
    ConfigEcho out;
    out.emplace_back("command", cfg.command);
    for (const auto& k : key_specs()) {
        if (k.echoed) out.emplace_back(k.info.name, k.get(cfg));
    }
    return out;
}

}  // namespace trirec::cli
