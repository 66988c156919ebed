#include "finrank/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "finrank/error.hpp"

namespace finrank::io {

json to_json(cplx z)
{
    return json::array({z.real(), z.imag()});
}

cplx complex_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InvalidArgument("complex numbers must be [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const ComplexPoint& p)
{
    json a = json::array();
    for (const auto& c : p.coords()) a.push_back(to_json(c));
    return a;
}

ComplexPoint point_from_json(const json& j)
{
    if (!j.is_array()) throw InvalidArgument("a point must be an array of complex numbers");
    std::vector<cplx> c;
    for (const auto& e : j) c.push_back(complex_from_json(e));
    return ComplexPoint(std::move(c));
}

namespace {

std::size_t dimension_of(const json& j)
{
    if (!j.contains("dimension") || !j["dimension"].is_number_integer() || j["dimension"].get<long long>() < 1) {
        throw InvalidArgument("\"dimension\" must be a positive integer");
    }
    return j["dimension"].get<std::size_t>();
}

json matrix_to_json(const CMatrix& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

json to_json(const DiscreteMeasure& m)
{
    json atoms = json::array();
    for (const auto& a : m.atoms()) {
        atoms.push_back({{"location", to_json(a.location)}, {"weight", to_json(a.weight)}});
    }
    return {{"dimension", m.dimension()}, {"atoms", std::move(atoms)}};
}

DiscreteMeasure measure_from_json(const json& j)
{
    const std::size_t d = dimension_of(j);
    if (!j.contains("atoms") || !j["atoms"].is_array()) throw InvalidArgument("measure needs an \"atoms\" array");
    std::vector<Atom> atoms;
    for (const auto& a : j["atoms"]) {
        atoms.push_back({point_from_json(a.at("location")), complex_from_json(a.at("weight"))});
    }
    return DiscreteMeasure(d, std::move(atoms));
}

json to_json(const Polydisk& p)
{
    return {{"center", to_json(p.center())}, {"radii", p.radii()}};
}

Polydisk polydisk_from_json(const json& j)
{
    return Polydisk(point_from_json(j.at("center")), j.at("radii").get<std::vector<double>>());
}

json to_json(const Polynomial& p)
{
    json terms = json::array();
    for (const auto& [alpha, c] : p.terms()) terms.push_back({{"alpha", alpha.entries()}, {"coef", to_json(c)}});
    return {{"dimension", p.dimension()}, {"terms", std::move(terms)}};
}

Polynomial polynomial_from_json(const json& j)
{
    const std::size_t d = dimension_of(j);
    std::map<MultiIndex, cplx> terms;
    for (const auto& t : j.at("terms")) {
        terms[MultiIndex(t.at("alpha").get<std::vector<int>>())] += complex_from_json(t.at("coef"));
    }
    return Polynomial(d, std::move(terms));
}

json to_json(const DensityMeasure& m)
{
    json density = {{"type", to_string(m.density().kind)}};
    if (m.density().kind == DensityKind::gaussian) density["scale"] = m.density().scale;
    if (m.density().kind == DensityKind::polynomial) density["terms"] = to_json(m.density().poly)["terms"];
    return {{"dimension", m.dimension()}, {"domain", to_json(m.domain())}, {"density", std::move(density)}};
}

DensityMeasure density_from_json(const json& j)
{
    const std::size_t d = dimension_of(j);
    Polydisk domain = polydisk_from_json(j.at("domain"));
    if (domain.dimension() != d) throw InvalidArgument("domain dimension does not match \"dimension\"");
    const auto& spec = j.at("density");
    const auto type = spec.at("type").get<std::string>();
    if (type == "uniform") return DensityMeasure(std::move(domain), DensitySpec::uniform());
    if (type == "gaussian") return DensityMeasure(std::move(domain), DensitySpec::gaussian(spec.value("scale", 1.0)));
    if (type == "polynomial") {
        json pj = {{"dimension", d}, {"terms", spec.at("terms")}};
        return DensityMeasure(std::move(domain), DensitySpec::polynomial(polynomial_from_json(pj)));
    }
    throw InvalidArgument("unknown density type \"" + type + "\"");
}

AnyMeasure any_measure_from_json(const json& j)
{
    if (j.contains("atoms")) return measure_from_json(j);
    if (j.contains("density")) return density_from_json(j);
    throw InvalidArgument("input is neither a discrete measure nor a density");
}

json to_json(const MomentMatrix& a)
{
    return {{"dimension", a.dimension()},
            {"max_degree", a.max_degree()},
            {"order", "grlex"},
            {"entries", matrix_to_json(a.entries)}};
}

MomentMatrix moment_matrix_from_json(const json& j)
{
    const std::size_t d = dimension_of(j);
    if (j.value("order", std::string("grlex")) != "grlex") throw InvalidArgument("only grlex order is supported");
    IndexBasis basis(d, j.at("max_degree").get<int>());
    const auto& rows = j.at("entries");
    const auto n = static_cast<Eigen::Index>(basis.size());
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
        throw InvalidArgument("moment matrix size does not match the basis");
    }
    CMatrix e(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw InvalidArgument("moment matrix row has the wrong length");
        }
        for (Eigen::Index k = 0; k < n; ++k) e(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    return {std::move(basis), std::move(e)};
}

json to_json(const KernelSpec& k)
{
    if (k.kind() == KernelKind::bargmann) return {{"kind", "bargmann"}};
    return {{"kind", "bergman"}, {"domain", to_json(*k.domain())}};
}

KernelSpec kernel_from_json(const json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "bargmann") return KernelSpec::bargmann();
    if (kind == "bergman") return KernelSpec::bergman(polydisk_from_json(j.at("domain")));
    throw InvalidArgument("unknown kernel \"" + kind + "\"");
}

json to_json(const GalerkinMatrix& g)
{
    return {{"dimension", g.basis.dimension()},
            {"max_degree", g.basis.max_degree()},
            {"order", "grlex"},
            {"kernel", to_json(g.kernel)},
            {"entries", matrix_to_json(g.entries)}};
}

json to_json(const RecoveryReport& r)
{
    return {{"atoms", to_json(r.atoms)},
            {"residual", r.residual},
            {"detected_rank", r.detected_rank},
            {"retries_used", r.retries_used},
            {"rotation_seed_used", r.rotation_seed_used},
            {"retry_log", r.retry_log}};
}

void write_spectrum_csv(std::ostream& out, const std::vector<cplx>& eigenvalues)
{
    const auto old_precision = out.precision(17);
    out << "index,re,im,modulus\n";
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        const auto& z = eigenvalues[i];
        out << i << ',' << z.real() << ',' << z.imag() << ',' << std::abs(z) << '\n';
    }
    out.precision(old_precision);
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace finrank::io
