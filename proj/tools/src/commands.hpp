#pragma once

#include <iosfwd>

#include "run_config.hpp"

namespace trirec::cli {

// Each command writes its artifacts under cfg.out (created if missing) and a
// short human-readable summary to `out`.
void cmd_ingest(const RunConfig& cfg, std::ostream& out, std::ostream& err);
void cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& err);
void cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err);
void cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
void cmd_groups(const RunConfig& cfg, std::ostream& out, std::ostream& err);
void cmd_synth(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace trirec::cli
