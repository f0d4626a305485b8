#include "app.hpp"

#include <functional>
#include <map>
#include <ostream>

#include "CLI11.hpp"

#include "commands.hpp"
#include "trirec/error.hpp"

namespace trirec::cli {

namespace {

std::string flag_name(const std::string& key)
{
    std::string s = "--" + key;
    for (auto& c : s) {
        if (c == '_') c = '-';
    }
    return s;
}

using Command = std::function<void(const RunConfig&, std::ostream&, std::ostream&)>;

struct CommandDef {
    const char* name;
    const char* help;
    Command run;
};

const std::vector<CommandDef>& commands()
{
    static const std::vector<CommandDef> defs = {
        {"ingest", "parse a dataset and write its canonical dump and summary", cmd_ingest},
        {"train", "train one model on one fold and save it", cmd_train},
        {"eval", "cross-validate a model (report.csv, report.json)", cmd_eval},
        {"sweep", "cross-validate over a parameter grid (sweep.csv)", cmd_sweep},
        {"groups", "per user-group RMSE of rmf vs wudiff_rmf (groups.csv)", cmd_groups},
        {"synth", "write a planted-factor synthetic dataset", cmd_synth},
    };
    return defs;
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"trirec: matrix factorisation regularised by tripartite-graph diffusion neighbours"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("trirec ") + TRIREC_VERSION);

    std::map<std::string, RawConfig> overrides;
    std::map<std::string, std::string> config_paths;
    std::map<std::string, CLI::App*> subs;
    for (const auto& def : commands()) {
        auto* sub = app.add_subcommand(def.name, def.help);
        subs[def.name] = sub;
        auto& ov = overrides[def.name];
        sub->add_option("--config", config_paths[def.name], "key=value config file");
        for (const auto& key : known_keys()) {
            const auto name = flag_name(key.name);
            if (key.is_flag) {
                sub->add_flag_callback(
                    name, [&ov, k = key.name] { ov[k] = "true"; }, key.help);
                sub->add_flag_callback(
                    flag_name("no_" + key.name), [&ov, k = key.name] { ov[k] = "false"; }, "disable " + key.name);
            } else {
                sub->add_option_function<std::string>(
                        name, [&ov, k = key.name](const std::string& v) { ov[k] = v; }, key.help)
                    ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
            }
        }
    }

    try {
        std::vector<std::string> args;
        for (int k = argc - 1; k > 0; --k) args.emplace_back(argv[k]);
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    for (const auto& def : commands()) {
        if (!subs[def.name]->parsed()) continue;
        try {
            RawConfig file_values;
            if (!config_paths[def.name].empty()) file_values = read_config_file(config_paths[def.name]);
            const auto cfg = resolve_config(def.name, file_values, overrides[def.name]);
            def.run(cfg, out, err);
            return kOk;
        } catch (const ConfigError& e) {
            err << "config error: " << e.what() << '\n';
            return kUsage;
        } catch (const DivergenceError& e) {
            err << "training diverged: " << e.what() << '\n';
            return kDiverged;
        } catch (const InputError& e) {
            err << "data error: " << e.what() << '\n';
            return kDataError;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kInternal;
        }
    }
    return kUsage;
}

}  // namespace trirec::cli
