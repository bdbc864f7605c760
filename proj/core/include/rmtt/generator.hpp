#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmtt/model.hpp"

namespace rmtt::gen {

/// Deterministic dataset shape. The same config always produces the same
/// byte-identical file.
struct GenConfig {
    std::uint64_t seed = 42;
    std::uint32_t universities = 8;
    std::uint32_t departments_per_university = 3;
    std::uint32_t students_per_department = 400;
    std::uint32_t professors_per_department = 12;
    std::uint32_t courses_per_department = 25;

    /// Throws std::invalid_argument when too small to host the fixed
    /// entities the query suite references.
    void validate() const;
};

/// University-domain triples wired so every query in the shipped fourteen
/// query suite has at least one answer at the default config. Emission is
/// phase-ordered: class assertions, organization edges, person attributes,
/// enrollment, and finally the person-referencing edges.
std::vector<Triple> generate(const GenConfig& config);

/// N-Triples rendering of generate(), one line per triple.
void generate_to(std::ostream& out, const GenConfig& config);
std::size_t generate_file(const std::string& path, const GenConfig& config);

}  // namespace rmtt::gen
