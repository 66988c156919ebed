#include "finrank/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "finrank/error.hpp"
#include "finrank/generate.hpp"
#include "finrank/moments.hpp"
#include "finrank/operators.hpp"

namespace finrank {

MeasureComparison compare_measures(const DiscreteMeasure& truth, const DiscreteMeasure& recovered)
{
    MeasureComparison c;
    c.same_count = truth.size() == recovered.size();
    c.bijective = c.same_count;
    std::vector<bool> used(recovered.size(), false);
    for (const auto& t : truth.atoms()) {
        std::size_t best = recovered.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < recovered.size(); ++k) {
            const double dk = distance(t.location, recovered[k].location);
            if (dk < best_d) {
                best_d = dk;
                best = k;
            }
        }
        if (best == recovered.size()) {
            c.bijective = false;
            c.max_location_error = std::numeric_limits<double>::infinity();
            c.max_weight_error = std::numeric_limits<double>::infinity();
            continue;
        }
        if (used[best]) c.bijective = false;
        used[best] = true;
        c.max_location_error = std::max(c.max_location_error, best_d);
        c.max_weight_error = std::max(c.max_weight_error, std::abs(t.weight - recovered[best].weight));
    }
    return c;
}

namespace {

void require_degrees(const std::vector<int>& degrees)
{
    if (degrees.empty()) throw InvalidArgument("degree list must be nonempty");
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        if (degrees[i] < 0) throw InvalidArgument("degrees must be nonnegative");
        if (i > 0 && degrees[i] <= degrees[i - 1]) throw InvalidArgument("degree list must be increasing");
    }
}

}  // namespace

TheoremVerdict verify_theorem(const DiscreteMeasure& m, const std::vector<int>& degrees,
                              const RecoveryConfig& cfg)
{
    require_degrees(degrees);
    TheoremVerdict v;
    v.atomic = true;
    v.degrees = degrees;
    const std::size_t n_atoms = m.size();
    auto fail = [&](std::string why) {
        v.passed = false;
        v.failures.push_back(std::move(why));
    };
    for (int deg : degrees) {
        const auto r = numerical_rank(moment_matrix(m, deg), cfg.rank_tol).rank;
        v.ranks.push_back(r);
        if (r > n_atoms) fail("rank " + std::to_string(r) + " exceeds the atom count at degree " + std::to_string(deg));
        if (deg + 1 >= static_cast<int>(n_atoms) && r != n_atoms) {
            fail("rank " + std::to_string(r) + " did not saturate at " + std::to_string(n_atoms) +
                 " atoms at degree " + std::to_string(deg));
        }
        if (v.ranks.size() > 1 && r < v.ranks[v.ranks.size() - 2]) {
            fail("rank decreased at degree " + std::to_string(deg));
        }
    }
    const int top = degrees.back();
    if (top >= static_cast<int>(n_atoms)) {
        try {
            v.recovery = recover_atoms(moment_matrix(m, top), cfg);
            v.comparison = compare_measures(m, v.recovery->atoms);
            const auto& c = *v.comparison;
            if (!c.bijective || c.max_location_error > kResidualLimit || c.max_weight_error > kResidualLimit) {
                fail("recovered atoms do not match the input measure");
            }
        } catch (const Error& e) {
            fail(std::string("recovery failed: ") + e.what());
        }
    }
    return v;
}

TheoremVerdict verify_theorem(const DensityMeasure& m, const std::vector<int>& degrees,
                              const RecoveryConfig& cfg)
{
    require_degrees(degrees);
    TheoremVerdict v;
    v.atomic = false;
    v.degrees = degrees;
    for (int deg : degrees) {
        const auto r = numerical_rank(moment_matrix(m, deg), cfg.rank_tol).rank;
        v.ranks.push_back(r);
        const auto full = binomial(static_cast<std::size_t>(deg) + m.dimension(), m.dimension());
        if (m.is_positive() && r != full) {
            v.passed = false;
            v.failures.push_back("rank " + std::to_string(r) + " below the full basis size " +
                                 std::to_string(full) + " at degree " + std::to_string(deg));
        }
        if (!m.is_positive() && v.ranks.size() > 1 && r <= v.ranks[v.ranks.size() - 2]) {
            v.passed = false;
            v.failures.push_back("rank did not grow at degree " + std::to_string(deg));
        }
    }
    return v;
}

io::json to_json(const TheoremVerdict& v)
{
    io::json j = {{"atomic", v.atomic}, {"degrees", v.degrees}, {"ranks", v.ranks}, {"passed", v.passed},
                  {"failures", v.failures}};
    if (v.recovery) j["recovery"] = io::to_json(*v.recovery);
    if (v.comparison) {
        j["max_location_error"] = v.comparison->max_location_error;
        j["max_weight_error"] = v.comparison->max_weight_error;
    }
    return j;
}

Polydisk enclosing_polydisk(const DiscreteMeasure& m)
{
    std::vector<double> radii(m.dimension(), 1.0);
    for (const auto& a : m.atoms()) {
        for (std::size_t j = 0; j < m.dimension(); ++j) {
            radii[j] = std::max(radii[j], 1.25 * std::abs(a.location[j]) + 0.25);
        }
    }
    return Polydisk(ComplexPoint(std::vector<cplx>(m.dimension())), std::move(radii));
}

namespace {

std::vector<int> degree_range(int max_degree)
{
    std::vector<int> d;
    for (int k = 1; k <= max_degree; ++k) d.push_back(k);
    if (d.empty()) d.push_back(0);
    return d;
}

Check galerkin_check(const std::string& name, const KernelSpec& kernel, const std::vector<int>& degrees,
                     double rank_tol, const auto& moments_at, const auto& galerkin_at)
{
    Check c{name, true, io::json::object()};
    io::json per = io::json::array();
    for (int deg : degrees) {
        const auto rm = numerical_rank(moments_at(deg), rank_tol).rank;
        const auto rg = numerical_rank(galerkin_at(deg), rank_tol).rank;
        per.push_back({{"degree", deg}, {"moment_rank", rm}, {"galerkin_rank", rg}});
        if (rm != rg) c.passed = false;
    }
    c.measured = {{"kernel", io::to_json(kernel)}, {"per_degree", std::move(per)}};
    return c;
}

Verdict battery_discrete(const DiscreteMeasure& m, int max_degree, std::uint64_t seed, const RecoveryConfig& cfg)
{
    Verdict v;
    const auto degrees = degree_range(max_degree);
    const std::size_t d = m.dimension();

    {
        TheoremVerdict t = verify_theorem(m, degrees, cfg);
        Check c{"rank_saturation", true, io::json::object()};
        io::json per = io::json::array();
        for (std::size_t i = 0; i < degrees.size(); ++i) per.push_back({{"degree", degrees[i]}, {"rank", t.ranks[i]}});
        c.measured = {{"atoms", m.size()}, {"per_degree", std::move(per)}};
        for (const auto& f : t.failures) {
            if (f.rfind("rank", 0) == 0) c.passed = false;
        }
        v.checks.push_back(std::move(c));

        if (t.recovery || !t.failures.empty()) {
            Check r{"recovery_round_trip", true, io::json::object()};
            if (t.recovery) {
                r.measured = {{"degree", degrees.back()},
                              {"recovered_atoms", t.recovery->atoms.size()},
                              {"residual", t.recovery->residual},
                              {"retries_used", t.recovery->retries_used},
                              {"max_location_error", t.comparison->max_location_error},
                              {"max_weight_error", t.comparison->max_weight_error}};
                r.passed = t.comparison->bijective && t.comparison->max_location_error <= kResidualLimit &&
                           t.comparison->max_weight_error <= kResidualLimit &&
                           t.recovery->residual <= kResidualLimit;
            } else {
                for (const auto& f : t.failures) {
                    if (f.rfind("recovery", 0) == 0) {
                        r.passed = false;
                        r.measured = {{"error", f}};
                    }
                }
            }
            if (t.recovery || !r.passed) v.checks.push_back(std::move(r));
        }
        if (!t.recovery && degrees.back() < static_cast<int>(m.size())) {
            v.skipped.push_back("recovery_round_trip: degree " + std::to_string(degrees.back()) +
                                " is below the atom count");
        }
    }

    const KernelSpec bargmann = KernelSpec::bargmann();
    v.checks.push_back(galerkin_check(
        "galerkin_rank_bargmann", bargmann, degrees, cfg.rank_tol,
        [&](int deg) { return moment_matrix(m, deg).entries; },
        [&](int deg) { return galerkin_matrix(bargmann, m, deg).entries; }));
    const KernelSpec bergman = KernelSpec::bergman(enclosing_polydisk(m));
    v.checks.push_back(galerkin_check(
        "galerkin_rank_bergman", bergman, degrees, cfg.rank_tol,
        [&](int deg) { return moment_matrix(m, deg).entries; },
        [&](int deg) { return galerkin_matrix(bergman, m, deg).entries; }));

    {
        Check c{"reweight_monotonicity", true, io::json::object()};
        io::json per = io::json::array();
        std::vector<Polynomial> weights;
        for (std::uint64_t k = 0; k < 3; ++k) weights.push_back(perturb_weight(seed + k, 0.5, d));
        if (!m.empty()) weights.push_back(linear_vanishing_at(m[0].location, seed + 3));
        for (const auto& g : weights) {
            double min_g = std::numeric_limits<double>::infinity();
            for (const auto& a : m.atoms()) min_g = std::min(min_g, std::abs(g(a.location)));
            const auto rank_mu = numerical_rank(moment_matrix(m, max_degree), cfg.rank_tol).rank;
            const auto rank_mug = numerical_rank(moment_matrix(weight_by_g(m, g), max_degree), cfg.rank_tol).rank;
            bool ok = rank_mug <= rank_mu;
            if (min_g > 1e-6 && rank_mug != rank_mu) ok = false;
            c.passed = c.passed && ok;
            per.push_back({{"rank_mu", rank_mu},
                           {"rank_mu_g", rank_mug},
                           {"min_abs_g", m.empty() ? 0.0 : min_g},
                           {"passed", ok}});
        }
        c.measured = {{"degree", max_degree}, {"pairs", std::move(per)}};
        v.checks.push_back(std::move(c));
    }

    if (d >= 2) {
        const MomentMatrix full = moment_matrix(m, max_degree);
        const MomentMatrix sub = submatrix_drop_first(full);
        const MomentMatrix pushed = moment_matrix(pushforward_drop_coord(m, 0), max_degree);
        const double diff = sub.size() == 0 ? 0.0 : (sub.entries - pushed.entries).cwiseAbs().maxCoeff();
        v.checks.push_back({"submatrix_consistency", diff <= 1e-12, {{"degree", max_degree}, {"max_abs_difference", diff}}});
    } else {
        v.skipped.push_back("submatrix_consistency: dimension 1");
    }
    return v;
}

Verdict battery_density(const DensityMeasure& m, int max_degree, const RecoveryConfig& cfg)
{
    Verdict v;
    const auto degrees = degree_range(max_degree);
    {
        TheoremVerdict t = verify_theorem(m, degrees, cfg);
        Check c{"rank_growth", t.passed, io::json::object()};
        io::json per = io::json::array();
        for (std::size_t i = 0; i < degrees.size(); ++i) {
            per.push_back({{"degree", degrees[i]},
                           {"rank", t.ranks[i]},
                           {"basis_size", binomial(static_cast<std::size_t>(degrees[i]) + m.dimension(), m.dimension())}});
        }
        c.measured = {{"per_degree", std::move(per)}, {"failures", t.failures}};
        v.checks.push_back(std::move(c));
    }
    {
        const DensityMoments dm = density_moments(m, max_degree);
        v.checks.push_back({"quadrature_error", dm.error_estimate <= 1e-10,
                            {{"degree", max_degree},
                             {"error_estimate", dm.error_estimate},
                             {"radial_nodes", dm.radial_nodes},
                             {"angular_nodes", dm.angular_nodes}}});
        if (m.is_positive()) {
            const double asym = (dm.matrix.entries - dm.matrix.entries.adjoint()).cwiseAbs().maxCoeff();
            v.checks.push_back({"hermitian", asym <= 1e-14, {{"max_abs_asymmetry", asym}}});
        }
    }
    const KernelSpec bargmann = KernelSpec::bargmann();
    v.checks.push_back(galerkin_check(
        "galerkin_rank_bargmann", bargmann, degrees, cfg.rank_tol,
        [&](int deg) { return moment_matrix(m, deg).entries; },
        [&](int deg) { return galerkin_from_moments(bargmann, moment_matrix(m, deg)).entries; }));
    bool centered = true;
    for (const auto& c : m.domain().center().coords()) centered = centered && c == cplx{0.0, 0.0};
    if (centered) {
        const KernelSpec bergman = KernelSpec::bergman(m.domain());
        v.checks.push_back(galerkin_check(
            "galerkin_rank_bergman", bergman, degrees, cfg.rank_tol,
            [&](int deg) { return moment_matrix(m, deg).entries; },
            [&](int deg) { return galerkin_from_moments(bergman, moment_matrix(m, deg)).entries; }));
    } else {
        v.skipped.push_back("galerkin_rank_bergman: polydisk not centered at the origin");
    }
    v.skipped.push_back("reweight_monotonicity: atomic measures only");
    v.skipped.push_back("recovery_round_trip: atomic measures only");
    return v;
}

}  // namespace

Verdict run_battery(const io::AnyMeasure& input, int max_degree, std::uint64_t seed, const RecoveryConfig& cfg)
{
    if (max_degree < 0) throw InvalidArgument("max degree must be nonnegative");
    cfg.validate();
    Verdict v = std::visit(
        [&](const auto& m) -> Verdict {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, DiscreteMeasure>) {
                return battery_discrete(m, max_degree, seed, cfg);
            } else {
                return battery_density(m, max_degree, cfg);
            }
        },
        input);
    v.passed = std::all_of(v.checks.begin(), v.checks.end(), [](const Check& c) { return c.passed; });
    return v;
}

io::json to_json(const Verdict& v)
{
    io::json checks = io::json::array();
    for (const auto& c : v.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}});
    return {{"checks", std::move(checks)}, {"skipped", v.skipped}, {"passed", v.passed}};
}

}  // namespace finrank
