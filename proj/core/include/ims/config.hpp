#ifndef IMS_CONFIG_HPP
#define IMS_CONFIG_HPP

#include "ims/ladder.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace ims {

// Caps the worker count used by all concurrent loops. 0 restores the
// hardware default. Reported values never depend on this setting.
void set_max_threads(int n);
int max_threads_configured();

// Run-wide configuration. Fully serialized into every output header so each
// result file can be reproduced from itself.
struct RunConfig {
    int k_min = 3;
    int k_max = 13;
    int window = 6;
    double rtol = 1e-8;
    double density = 64.0;      // circle points per boundary peak width
    std::string cache_path;     // empty: no persistent cache
    std::string format = "csv"; // csv | json
    int threads = 0;            // 0: hardware default
    std::uint64_t seed = 20240901;

    RadiusLadder ladder() const { return RadiusLadder(k_min, k_max); }

    // "key = value" lines; unknown keys are rejected.
    void apply_file(const std::string& path);
    void apply_entry(const std::string& key, const std::string& value);

    // Header block echoed at the top of every output, lines starting with '#'.
    void write_header(std::ostream& out, const std::string& subcommand) const;

    std::map<std::string, std::string> entries() const;
};

} // namespace ims

#endif
