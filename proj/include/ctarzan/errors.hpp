#pragma once

#include <stdexcept>
#include <string>

namespace ctarzan {

struct DegenerateNetwork : std::runtime_error {
    explicit DegenerateNetwork(const std::string& what) : std::runtime_error(what) {}
};

struct NoSharedCycle : std::runtime_error {
    explicit NoSharedCycle(const std::string& what) : std::runtime_error(what) {}
};

struct TunnelUnbuildable : std::runtime_error {
    explicit TunnelUnbuildable(const std::string& what) : std::runtime_error(what) {}
};

struct ParityMismatch : std::runtime_error {
    explicit ParityMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NonIntegralK : std::runtime_error {
    explicit NonIntegralK(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownKey : std::runtime_error {
    explicit UnknownKey(const std::string& what) : std::runtime_error(what) {}
};

struct EquivalenceViolation : std::runtime_error {
    explicit EquivalenceViolation(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownPreset : std::runtime_error {
    explicit UnknownPreset(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctarzan
