#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace membench {

/// One level of the memory hierarchy as declared by a device profile.
/// `shared` distinguishes a resource all cores compete for (DRAM, shared
/// LLC) from a per-core resource (private L1/L2).
struct MemoryLevel {
    std::string name;             // L1, L2, L3, DRAM ... no commas or underscores
    std::uint64_t capacity_bytes = 0;
    bool shared = false;
};

/// Declared description of a machine: core count plus its memory levels
/// ordered fastest to slowest with strictly increasing capacities.
///
/// Profiles are user-supplied files, not probed: cache topology probing is
/// not portable across the device classes this suite targets.
struct DeviceProfile {
    std::string name;
    int core_count = 1;
    std::vector<MemoryLevel> levels;

    /// Throws ParameterError when any invariant is violated.
    void validate() const;

    /// The next-faster level (previous in declaration order), or nullptr
    /// for the fastest level. `index` must be < levels.size().
    const MemoryLevel* next_faster(std::size_t index) const;

    /// Slowest (largest) level; typically DRAM.
    const MemoryLevel& last_level() const;

    bool is_last_level(std::size_t index) const { return index + 1 == levels.size(); }
};

DeviceProfile parse_device_profile(const std::string& json_text);
DeviceProfile load_device_profile(const std::string& path);
std::string device_profile_to_json(const DeviceProfile& profile);

/// Default transpose block side: largest power of two such that two blocks
/// (tile plus mirror) of doubles occupy at most half the smallest cache.
/// Falls back to a 32 KB cache assumption when the profile declares no
/// cache level above DRAM.
std::size_t default_block_elems(const DeviceProfile& profile);

}  // namespace membench
