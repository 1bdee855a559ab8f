#pragma once

// Randomized law checks over the corpus, shared by the property test suite
// and the acceptance runner.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace proptest {

struct Outcome {
    std::string name;
    int cases = 0;
    int failures = 0;
    /// Cases where the law's premise held or the value was nonzero.
    int nontrivial = 0;
    /// Description of the first counterexample, if any.
    std::string counterexample;
    bool ok() const { return failures == 0; }
};

std::vector<std::string> names();

/// Runs `cases` random instances of one law with a fixed seed.
Outcome run(const std::string& name, const std::filesystem::path& corpus, int cases = 200,
            std::uint64_t seed = 0x7e57ab1e);

} // namespace proptest
