#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace porodiff {

enum class Errc {
    bad_magic,
    unsupported_version,
    dim_mismatch,
    io_failure,
    invalid_config,
    target_unreachable,
    insufficient_volume,
    empty_input,
    overflow,
    degenerate_row,
    invalid_distribution,
    shape_mismatch,
    non_scalar_output,
    non_finite_loss,
    disconnected,
    no_convergence,
    lag_out_of_range,
    too_few_samples,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::bad_magic: return "BadMagic";
        case Errc::unsupported_version: return "UnsupportedVersion";
        case Errc::dim_mismatch: return "DimMismatch";
        case Errc::io_failure: return "IoFailure";
        case Errc::invalid_config: return "InvalidConfig";
        case Errc::target_unreachable: return "TargetUnreachable";
        case Errc::insufficient_volume: return "InsufficientVolume";
        case Errc::empty_input: return "EmptyInput";
        case Errc::overflow: return "Overflow";
        case Errc::degenerate_row: return "DegenerateRow";
        case Errc::invalid_distribution: return "InvalidDistribution";
        case Errc::shape_mismatch: return "ShapeMismatch";
        case Errc::non_scalar_output: return "NonScalarOutput";
        case Errc::non_finite_loss: return "NonFiniteLoss";
        case Errc::disconnected: return "Disconnected";
        case Errc::no_convergence: return "NoConvergence";
        case Errc::lag_out_of_range: return "LagOutOfRange";
        case Errc::too_few_samples: return "TooFewSamples";
    }
    return "Unknown";
}

/// Library-wide exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

/// FNV-1a over a byte range; used for content hashes in run manifests.
inline std::uint64_t fnv1a(const void* bytes, std::size_t n, std::uint64_t seed = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t seed = 14695981039346656037ull) {
    return fnv1a(s.data(), s.size(), seed);
}

}  // namespace porodiff
