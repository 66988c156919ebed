#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finrank/io.hpp"
#include "finrank/measure.hpp"
#include "finrank/recovery.hpp"

namespace finrank {

struct MeasureComparison {
    bool same_count = false;
    bool bijective = false;           // every true atom has its own nearest recovered atom
    double max_location_error = 0.0;
    double max_weight_error = 0.0;
};

/// Matches each atom of `truth` to its nearest atom of `recovered`.
MeasureComparison compare_measures(const DiscreteMeasure& truth, const DiscreteMeasure& recovered);

struct TheoremVerdict {
    bool atomic = true;
    std::vector<int> degrees;
    std::vector<std::size_t> ranks;
    bool passed = true;
    std::vector<std::string> failures;
    std::optional<RecoveryReport> recovery;
    std::optional<MeasureComparison> comparison;
};

/// Atomic input: ranks never exceed the atom count N, equal N once D >= N - 1,
/// never decrease with D, and recovery at the largest degree reproduces the
/// atoms. Density input: ranks equal binomial(D + d, d) at every degree for
/// positive densities, and strictly increase with D otherwise.
TheoremVerdict verify_theorem(const DiscreteMeasure& m, const std::vector<int>& degrees,
                              const RecoveryConfig& cfg = {});
TheoremVerdict verify_theorem(const DensityMeasure& m, const std::vector<int>& degrees,
                              const RecoveryConfig& cfg = {});

io::json to_json(const TheoremVerdict& v);

struct Check {
    std::string name;
    bool passed = false;
    io::json measured;
};

struct Verdict {
    std::vector<Check> checks;
    std::vector<std::string> skipped;
    bool passed = true;
};

/// Runs rank saturation or growth, Galerkin-versus-moment rank equality for
/// both kernels, mu_g rank monotonicity, submatrix/pushforward consistency
/// and the recovery round trip, for degrees up to `max_degree`.
Verdict run_battery(const io::AnyMeasure& input, int max_degree, std::uint64_t seed,
                    const RecoveryConfig& cfg = {});

io::json to_json(const Verdict& v);

/// Smallest polydisk centered at the origin whose closure keeps a margin
/// around every atom.
Polydisk enclosing_polydisk(const DiscreteMeasure& m);

}  // namespace finrank
