#pragma once

#include <cstdint>
#include <string>

#include "fvote/graph.hpp"

namespace fvote {

enum class Family { Gnp, RandomRegular, CompleteSelfLoop, FromFile };

std::string to_string(Family f);
Family parse_family(const std::string& name);

struct GeneratorSpec {
    Family family = Family::Gnp;
    std::size_t n = 0;
    double p = 0.0;          // edge probability, Gnp only
    std::uint32_t d = 0;     // degree, RandomRegular only
    std::uint64_t seed = 0;
    unsigned retry_budget = 100;
    std::string path;        // FromFile only
};

/// Throws InvalidParam when the spec's parameters are out of range.
void validate(const GeneratorSpec& spec);

/// Connected graph drawn from the spec's family, deterministic in the seed.
///
/// Gnp samples every pair independently and resamples the whole graph when it
/// is disconnected. RandomRegular uses the pairing model and discards the
/// whole matching on any self-loop or repeated pair. Each discarded sample
/// consumes one unit of the retry budget; RetryExhausted is thrown when the
/// budget runs out.
Graph generate(const GeneratorSpec& spec);

} // namespace fvote
