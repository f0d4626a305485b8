#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "trirec/error.hpp"
#include "trirec/mf.hpp"

namespace trirec {

namespace {

constexpr const char* kMagic = "trirec-model";
constexpr int kFormatVersion = 1;

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_row(std::ostream& out, bool known, std::span<const double> row)
{
    out << (known ? 1 : 0);
    for (const double x : row) out << ' ' << fmt17(x);
    out << '\n';
}

std::string expect_line(std::istream& in, const char* what)
{
    std::string line;
    if (!std::getline(in, line)) throw InputError(std::string("model file truncated before ") + what);
    return line;
}

template <typename T>
T header_value(std::istream& in, const std::string& key)
{
    std::istringstream ss(expect_line(in, key.c_str()));
    std::string k;
    T v{};
    if (!(ss >> k >> v) || k != key) throw InputError("model file: expected '" + key + "' header");
    return v;
}

double parse_exact(const std::string& token)
{
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') throw InputError("model file: bad number '" + token + "'");
    return v;
}

}  // namespace

void save_model(std::ostream& out, const FactorModel& m,
                const std::vector<std::pair<std::string, std::string>>& config_echo)
{
    out << kMagic << ' ' << kFormatVersion << '\n';
    out << "factors " << m.factors() << '\n';
    out << "users " << m.user_count() << '\n';
    out << "items " << m.item_count() << '\n';
    out << "r_max " << fmt17(m.r_max()) << '\n';
    out << "global_mean " << fmt17(m.global_mean()) << '\n';
    out << "config " << config_echo.size() << '\n';
    for (const auto& [k, v] : config_echo) out << k << '=' << v << '\n';
    out << "P\n";
    for (UserId u = 0; u < m.user_count(); ++u) write_row(out, m.user_known(u), m.user(u));
    out << "Q\n";
    for (ItemId i = 0; i < m.item_count(); ++i) write_row(out, m.item_known(i), m.item(i));
}

FactorModel load_model(std::istream& in)
{
    {
        std::istringstream ss(expect_line(in, "magic"));
        std::string magic;
        int version = 0;
        if (!(ss >> magic >> version) || magic != kMagic || version != kFormatVersion) {
            throw InputError("not a trirec model file (version " + std::to_string(kFormatVersion) + ")");
        }
    }
    const auto factors = header_value<std::size_t>(in, "factors");
    const auto users = header_value<std::size_t>(in, "users");
    const auto items = header_value<std::size_t>(in, "items");
    const auto r_max = parse_exact(header_value<std::string>(in, "r_max"));
    const auto mean = parse_exact(header_value<std::string>(in, "global_mean"));
    const auto n_config = header_value<std::size_t>(in, "config");
    for (std::size_t k = 0; k < n_config; ++k) expect_line(in, "config entries");

    FactorModel m(users, items, factors, r_max, mean);
    const auto read_block = [&](const char* name, std::size_t rows, auto&& row_of, auto&& set_known) {
        if (expect_line(in, name) != name) throw InputError(std::string("model file: expected ") + name);
        for (std::size_t r = 0; r < rows; ++r) {
            std::istringstream ss(expect_line(in, name));
            int known = 0;
            if (!(ss >> known)) throw InputError("model file: bad row");
            set_known(static_cast<std::uint32_t>(r), known != 0);
            auto row = row_of(static_cast<std::uint32_t>(r));
            for (auto& x : row) {
                std::string tok;
                if (!(ss >> tok)) throw InputError("model file: short row");
                x = parse_exact(tok);
            }
        }
    };
    read_block("P", users, [&](std::uint32_t u) { return m.user(u); },
               [&](std::uint32_t u, bool k) { m.set_user_known(u, k); });
    read_block("Q", items, [&](std::uint32_t i) { return m.item(i); },
               [&](std::uint32_t i, bool k) { m.set_item_known(i, k); });
    return m;
}

}  // namespace trirec
