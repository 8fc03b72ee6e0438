#include "ims/config.hpp"
#include "ims/analytic_map.hpp"
#include "ims/errors.hpp"

#include <atomic>
#include <fstream>
#include <ostream>
#include <thread>

namespace ims {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }
int max_threads_configured() { return g_max_threads.load(); }

namespace detail {
int max_threads() {
    int n = g_max_threads.load();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}
} // namespace detail

static std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void RunConfig::apply_entry(const std::string& key, const std::string& value) {
    try {
        if (key == "k_min") k_min = std::stoi(value);
        else if (key == "k_max") k_max = std::stoi(value);
        else if (key == "window") window = std::stoi(value);
        else if (key == "rtol") rtol = std::stod(value);
        else if (key == "density") density = std::stod(value);
        else if (key == "cache") cache_path = value;
        else if (key == "format") {
            if (value != "csv" && value != "json")
                throw RangeError("format must be csv or json");
            format = value;
        } else if (key == "threads") threads = std::stoi(value);
        else if (key == "seed") seed = std::stoull(value);
        else throw RangeError("unknown configuration key: " + key);
    } catch (const std::invalid_argument&) {
        throw RangeError("bad value for configuration key " + key + ": " + value);
    }
}

void RunConfig::apply_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RangeError("cannot open config file " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw RangeError("config line is not 'key = value': " + line);
        apply_entry(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

std::map<std::string, std::string> RunConfig::entries() const {
    return {
        {"ladder", std::to_string(k_min) + ":" + std::to_string(k_max)},
        {"window", std::to_string(window)},
        {"rtol", detail::format_double(rtol)},
        {"density", detail::format_double(density)},
        {"cache", cache_path.empty() ? "(none)" : cache_path},
        {"format", format},
        {"threads", std::to_string(threads)},
        {"seed", std::to_string(seed)},
    };
}

void RunConfig::write_header(std::ostream& out, const std::string& subcommand) const {
    out << "# ims " << subcommand << "\n";
    for (const auto& [k, v] : entries()) out << "# " << k << " = " << v << "\n";
}

} // namespace ims
