// selfcheck.hpp - Quick oracle-equivalence sweep used by `afdm_sim selfcheck`

#pragma once

#include <cstdint>
#include <iosfwd>

namespace afdm {

struct SelfcheckOptions {
    std::uint64_t seed = 2026;
    std::size_t cases = 50;
};

// Prints one PASS/FAIL line per check; returns true when all pass.
bool run_selfcheck(std::ostream& out, const SelfcheckOptions& options = {});

}  // namespace afdm
