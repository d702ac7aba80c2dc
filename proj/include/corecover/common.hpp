#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace corecover {

inline constexpr const char* kVersion = "1.0.0";

// Thrown on malformed input files; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// All randomness flows through mt19937_64 so a given seed reproduces the same
// graph on every platform. Bounded draws use modulo on the raw 64-bit output,
// which keeps the stream independent of the standard library's distribution
// implementations; the bias is negligible at the ranges used here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t next() { return eng_(); }
    std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

// Per-trial seed derivation: mixes the base seed with the cell coordinates so
// any single trial of a sweep can be re-run in isolation.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t model_tag,
                                double avg_degree, std::uint64_t trial) {
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ model_tag);
    h = splitmix64(h ^ static_cast<std::uint64_t>(avg_degree * 1000.0 + 0.5));
    h = splitmix64(h ^ trial);
    return h;
}

} // namespace corecover
