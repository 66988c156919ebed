#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "finrank/measure.hpp"
#include "finrank/moments.hpp"
#include "finrank/operators.hpp"
#include "finrank/recovery.hpp"

namespace finrank::io {

using json = nlohmann::ordered_json;

// Complex numbers are [re, im] pairs of doubles throughout.
json to_json(cplx z);
cplx complex_from_json(const json& j);

json to_json(const ComplexPoint& p);
ComplexPoint point_from_json(const json& j);

/// {"dimension": d, "atoms": [{"location": [[re,im],...], "weight": [re,im]}]}
json to_json(const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(const json& j);

json to_json(const Polydisk& p);
Polydisk polydisk_from_json(const json& j);

json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const json& j);

/// {"dimension": d, "domain": {"center": ..., "radii": [...]}, "density": {"type": "uniform"}}
json to_json(const DensityMeasure& m);
DensityMeasure density_from_json(const json& j);

using AnyMeasure = std::variant<DiscreteMeasure, DensityMeasure>;

/// A document with "atoms" is a discrete measure, one with "density" a density.
AnyMeasure any_measure_from_json(const json& j);

/// {"dimension": d, "max_degree": D, "order": "grlex", "entries": [[[re,im],...],...]}
json to_json(const MomentMatrix& a);
MomentMatrix moment_matrix_from_json(const json& j);

json to_json(const KernelSpec& k);
KernelSpec kernel_from_json(const json& j);

/// Moment-matrix schema plus a "kernel" field.
json to_json(const GalerkinMatrix& g);

/// {"atoms": ..., "residual": x, "detected_rank": n, "retries_used": r,
///  "rotation_seed_used": s, "retry_log": [...]}
json to_json(const RecoveryReport& r);

/// "index,re,im,modulus" per eigenvalue, descending modulus.
void write_spectrum_csv(std::ostream& out, const std::vector<cplx>& eigenvalues);

json read_json_file(const std::string& path);
/// Writes `j` pretty-printed with a trailing newline.
void write_json_file(const std::string& path, const json& j);

}  // namespace finrank::io
