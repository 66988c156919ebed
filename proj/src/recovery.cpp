#include "finrank/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "finrank/error.hpp"

namespace finrank {

void RecoveryConfig::validate() const
{
    if (!(rank_tol > 0.0 && rank_tol < 1.0)) throw InvalidArgument("rank_tol must lie in (0, 1)");
    if (!(match_tol > 0.0)) throw InvalidArgument("match_tol must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    if (max_retries < 1) throw InvalidArgument("max_retries must be at least 1");
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag)
{
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<ComplexPoint> locations_of(const DiscreteMeasure& m)
{
    std::vector<ComplexPoint> out;
    out.reserve(m.size());
    for (const auto& a : m.atoms()) out.push_back(a.location);
    return out;
}

DiscreteMeasure assemble(std::size_t d, const std::vector<ComplexPoint>& locs, const std::vector<cplx>& w)
{
    std::vector<Atom> atoms;
    atoms.reserve(locs.size());
    for (std::size_t k = 0; k < locs.size(); ++k) atoms.push_back({locs[k], w[k]});
    return DiscreteMeasure(d, std::move(atoms));
}

// Least squares for the weights over every entry of the moment matrix.
std::vector<cplx> solve_weights(const MomentMatrix& a, const std::vector<ComplexPoint>& locs)
{
    const auto n = static_cast<Eigen::Index>(a.size());
    const auto nk = static_cast<Eigen::Index>(locs.size());
    const CMatrix v = monomial_table(a.basis, locs);
    CMatrix sys(n * n, nk);
    CVector rhs(n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Eigen::Index row = i * n + j;
            for (Eigen::Index k = 0; k < nk; ++k) sys(row, k) = v(i, k) * std::conj(v(j, k));
            rhs(row) = a.entries(i, j);
        }
    }
    const CVector sol = sys.colPivHouseholderQr().solve(rhs);
    return {sol.data(), sol.data() + sol.size()};
}

// Drops atoms with |lambda| < rel * max |lambda|; returns true if any were dropped.
bool prune_small(std::vector<ComplexPoint>& locs, std::vector<cplx>& w, double rel)
{
    double wmax = 0.0;
    for (const auto& x : w) wmax = std::max(wmax, std::abs(x));
    std::vector<ComplexPoint> kl;
    std::vector<cplx> kw;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (std::abs(w[k]) >= rel * wmax && wmax > 0.0) {
            kl.push_back(locs[k]);
            kw.push_back(w[k]);
        }
    }
    const bool dropped = kl.size() != locs.size();
    locs = std::move(kl);
    w = std::move(kw);
    return dropped;
}

}  // namespace

double moment_residual(const MomentMatrix& a, const DiscreteMeasure& m, int max_degree)
{
    if (m.dimension() != a.dimension()) throw InvalidArgument("measure and moments differ in dimension");
    const auto nc = static_cast<Eigen::Index>(a.basis.prefix_size(max_degree));
    std::vector<cplx> w;
    for (const auto& at : m.atoms()) w.push_back(at.weight);
    const CMatrix v = monomial_table(a.basis, locations_of(m)).topRows(nc);
    const CMatrix g = kernels::weighted_gram(v, w);
    if (nc == 0) return 0.0;
    return (g - a.entries.topLeftCorner(nc, nc)).cwiseAbs().maxCoeff();
}

DiscreteMeasure refine_atoms(const MomentMatrix& a, const DiscreteMeasure& m, int max_iterations)
{
    const std::size_t d = a.dimension();
    const std::size_t nk = m.size();
    if (nk == 0) return m;
    if (m.dimension() != d) throw InvalidArgument("measure and moments differ in dimension");
    const auto& basis = a.basis;
    const auto n = static_cast<Eigen::Index>(basis.size());
    const auto per_atom = static_cast<Eigen::Index>(2 * (d + 1));
    const Eigen::Index np = per_atom * static_cast<Eigen::Index>(nk);

    // pred[i][j] = index of alpha_i - e_j, or -1 when alpha_i has no e_j component.
    std::vector<std::vector<Eigen::Index>> pred(basis.size(), std::vector<Eigen::Index>(d, -1));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (basis[i][j] == 0) continue;
            std::vector<int> e = basis[i].entries();
            --e[j];
            pred[i][j] = static_cast<Eigen::Index>(basis.index_of(MultiIndex(std::move(e))));
        }
    }

    std::vector<ComplexPoint> locs = locations_of(m);
    std::vector<cplx> w;
    for (const auto& at : m.atoms()) w.push_back(at.weight);

    auto mismatch = [&](const std::vector<ComplexPoint>& l, const std::vector<cplx>& wt) {
        const CMatrix v = monomial_table(basis, l);
        return CMatrix(kernels::weighted_gram(v, wt) - a.entries);
    };

    CMatrix r = mismatch(locs, w);
    double cost = r.squaredNorm();
    const cplx I{0.0, 1.0};

    for (int iter = 0; iter < max_iterations && cost > 0.0; ++iter) {
        const CMatrix v = monomial_table(basis, locs);
        CMatrix jac(n * n, np);
#pragma omp parallel for
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(nk); ++k) {
            const auto uk = static_cast<std::size_t>(k);
            const Eigen::Index base = k * per_atom;
            CVector dv(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    const cplx vij = v(i, k) * std::conj(v(j, k));
                    jac(i * n + j, base) = vij;
                    jac(i * n + j, base + 1) = I * vij;
                }
            }
            for (std::size_t c = 0; c < d; ++c) {
                for (Eigen::Index i = 0; i < n; ++i) {
                    const Eigen::Index p = pred[static_cast<std::size_t>(i)][c];
                    dv(i) = p < 0 ? cplx{0.0, 0.0}
                                  : static_cast<double>(basis[static_cast<std::size_t>(i)][c]) * v(p, k);
                }
                const auto col = base + 2 + 2 * static_cast<Eigen::Index>(c);
                for (Eigen::Index i = 0; i < n; ++i) {
                    for (Eigen::Index j = 0; j < n; ++j) {
                        const cplx t1 = dv(i) * std::conj(v(j, k));
                        const cplx t2 = v(i, k) * std::conj(dv(j));
                        jac(i * n + j, col) = w[uk] * (t1 + t2);
                        jac(i * n + j, col + 1) = w[uk] * I * (t1 - t2);
                    }
                }
            }
        }
        // Jacobian rows are ordered i n + j.
        CVector rrow(n * n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) rrow(i * n + j) = r(i, j);
        }
        Eigen::MatrixXd normal = (jac.adjoint() * jac).real();
        Eigen::VectorXd grad = (jac.adjoint() * rrow).real();
        Eigen::VectorXd scale(np);
        for (Eigen::Index p = 0; p < np; ++p) {
            const double s = std::sqrt(normal(p, p));
            scale(p) = s > 0.0 ? 1.0 / s : 1.0;
        }
        const Eigen::MatrixXd scaled = scale.asDiagonal() * normal * scale.asDiagonal();
        const Eigen::VectorXd step =
            scale.asDiagonal() * Eigen::VectorXd(scaled.colPivHouseholderQr().solve(-(scale.asDiagonal() * grad)));
        if (!step.allFinite()) break;

        bool accepted = false;
        double t = 1.0;
        for (int halving = 0; halving < 10 && !accepted; ++halving, t *= 0.5) {
            std::vector<ComplexPoint> tl;
            std::vector<cplx> tw(nk);
            for (std::size_t k = 0; k < nk; ++k) {
                const Eigen::Index base = static_cast<Eigen::Index>(k) * per_atom;
                tw[k] = w[k] + t * cplx{step(base), step(base + 1)};
                std::vector<cplx> z(locs[k].coords());
                for (std::size_t c = 0; c < d; ++c) {
                    const auto col = base + 2 + 2 * static_cast<Eigen::Index>(c);
                    z[c] += t * cplx{step(col), step(col + 1)};
                }
                tl.emplace_back(std::move(z));
            }
            CMatrix tr = mismatch(tl, tw);
            const double tc = tr.squaredNorm();
            if (tc < cost) {
                accepted = true;
                const double gain = cost - tc;
                locs = std::move(tl);
                w = std::move(tw);
                r = std::move(tr);
                const bool converged = gain <= 1e-30 * std::max(1.0, cost) || t * step.cwiseAbs().maxCoeff() <= 1e-16;
                cost = tc;
                if (converged) iter = max_iterations;
            }
        }
        if (!accepted) break;
    }
    return assemble(d, locs, w);
}

DiscreteMeasure recover_1d(const MomentMatrix& a, const RecoveryConfig& cfg)
{
    cfg.validate();
    if (a.dimension() != 1) throw InvalidArgument("recover_1d needs a one-dimensional moment matrix");
    const RankResult rank = numerical_rank(a, cfg.rank_tol);
    const auto nr = static_cast<Eigen::Index>(rank.rank);
    if (nr == 0) return DiscreteMeasure(1);
    const Eigen::Index deg = a.max_degree();
    if (deg < nr) {
        std::ostringstream msg;
        msg << "degree " << deg << " is below the detected rank " << nr;
        throw InvalidArgument(msg.str());
    }

    // Rows 0..D-1 and the shifted rows 1..D share the column space; compress
    // the pencil (H1, H0) onto the leading singular subspace of H0.
    const CMatrix h0 = a.entries.topRows(deg);
    const CMatrix h1 = a.entries.bottomRows(deg);
    Eigen::JacobiSVD<CMatrix> svd(h0, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericalError("pencil SVD failed");
    const auto& sv = svd.singularValues();
    if (!(sv(nr - 1) > 0.0)) throw NumericalError("pencil compression is singular");
    const CMatrix un = svd.matrixU().leftCols(nr);
    CMatrix vn = svd.matrixV().leftCols(nr);
    for (Eigen::Index k = 0; k < nr; ++k) vn.col(k) /= sv(k);
    const CMatrix pencil = un.adjoint() * h1 * vn;
    Eigen::ComplexEigenSolver<CMatrix> es(pencil, false);
    if (es.info() != Eigen::Success) throw NumericalError("pencil eigenproblem failed");

    std::vector<ComplexPoint> locs;
    for (Eigen::Index k = 0; k < nr; ++k) locs.push_back(ComplexPoint{es.eigenvalues()(k)});

    auto vandermonde_weights = [&](const std::vector<ComplexPoint>& l) {
        const CMatrix vdm = monomial_table(a.basis, l);
        const CVector sol = vdm.colPivHouseholderQr().solve(CVector(a.entries.col(0)));
        return std::vector<cplx>(sol.data(), sol.data() + sol.size());
    };
    std::vector<cplx> w = vandermonde_weights(locs);
    if (prune_small(locs, w, cfg.rank_tol)) w = vandermonde_weights(locs);

    DiscreteMeasure m = refine_atoms(a, assemble(1, locs, w));
    const double res = moment_residual(a, m, a.max_degree());
    if (!(res <= kResidualLimit)) {
        std::ostringstream msg;
        msg << "recovery failed: residual " << res << " above " << kResidualLimit << " (rank " << nr
            << ", degree " << deg << ", " << m.size() << " atoms)";
        throw RecoveryFailed(msg.str());
    }
    return m;
}

namespace {

struct Located {
    std::vector<ComplexPoint> points;
    std::uint64_t rotation_seed = 0;
};

// Intersections of the planes z' = f (front) and z'' = b (back).
std::vector<ComplexPoint> candidate_grid(const std::vector<ComplexPoint>& front,
                                         const std::vector<ComplexPoint>& back, std::size_t d,
                                         double match_tol)
{
    std::vector<ComplexPoint> grid;
    for (const auto& b : back) {
        for (const auto& f : front) {
            // b = (z_1, ..., z_{d-1}), f = (z_2, ..., z_d); they share z_2 .. z_{d-1}.
            double gap = 0.0;
            for (std::size_t c = 1; c + 1 < d; ++c) gap += std::norm(b[c] - f[c - 1]);
            if (std::sqrt(gap) > match_tol) continue;
            std::vector<cplx> z(d);
            z[0] = b[0];
            for (std::size_t c = 1; c + 1 < d; ++c) z[c] = 0.5 * (b[c] + f[c - 1]);
            z[d - 1] = f[d - 2];
            grid.emplace_back(std::move(z));
        }
    }
    return grid;
}

ComplexPoint transform_point(const CMatrix& u, const ComplexPoint& z)
{
    std::vector<cplx> w(z.dimension(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            w[i] += u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * z[j];
        }
    }
    return ComplexPoint(std::move(w));
}

Located locate(const MomentMatrix& work, std::size_t rank, const RecoveryConfig& cfg, int attempt,
               std::vector<std::string>& log)
{
    const std::size_t d = work.dimension();
    const MomentMatrix front = submatrix_drop_axis(work, 0);
    const MomentMatrix back = submatrix_drop_axis(work, d - 1);
    // Projections squeeze atoms together, so they are ranked more finely.
    RecoveryConfig proj = cfg;
    proj.rank_tol = std::min(cfg.rank_tol, kProjectionRankTolerance);
    const std::size_t front_rank = numerical_rank(front, proj.rank_tol).rank;
    const std::size_t back_rank = numerical_rank(back, proj.rank_tol).rank;
    if (front_rank < rank || back_rank < rank) {
        std::ostringstream msg;
        msg << "attempt " << attempt << ": projection rank below " << rank << " (front " << front_rank
            << ", back " << back_rank << ")";
        log.push_back(msg.str());
    }

    auto project = [&](const MomentMatrix& sub, std::uint64_t tag) {
        RecoveryConfig inner = proj;
        inner.seed = mix_seed(cfg.seed, tag);
        return locations_of(recover_atoms(sub, inner).atoms);
    };
    const auto tag = static_cast<std::uint64_t>(attempt) * 1024;
    const auto front_pts = project(front, tag + 1);
    const auto back_pts = project(back, tag + 2);
    const auto grid = candidate_grid(front_pts, back_pts, d, cfg.match_tol);
    if (grid.size() < rank) {
        std::ostringstream msg;
        msg << "candidate grid has " << grid.size() << " points but the matrix has rank " << rank;
        throw InconsistentRank(msg.str());
    }

    for (int rot = 0; rot < cfg.max_retries; ++rot) {
        const std::uint64_t rotation_seed = cfg.seed + 1000003ULL * static_cast<std::uint64_t>(attempt) +
                                            static_cast<std::uint64_t>(rot);
        const CMatrix u = random_unitary(d, rotation_seed);
        const MomentMatrix rotated = rotate_moments(work, u);
        const auto omega = project(submatrix_drop_axis(rotated, 0), tag + 3 + static_cast<std::uint64_t>(rot));

        std::vector<int> hits(omega.size(), 0);
        std::vector<ComplexPoint> kept;
        for (const auto& q : grid) {
            const ComplexPoint image = transform_point(u, q).drop(0);
            for (std::size_t l = 0; l < omega.size(); ++l) {
                if (distance(image, omega[l]) <= cfg.match_tol) {
                    ++hits[l];
                    kept.push_back(q);
                    break;
                }
            }
        }
        if (std::any_of(hits.begin(), hits.end(), [](int h) { return h > 1; })) {
            std::ostringstream msg;
            msg << "attempt " << attempt << ": rotation seed " << rotation_seed
                << " left candidates ambiguous; drawing a new rotation";
            log.push_back(msg.str());
            continue;
        }
        return {std::move(kept), rotation_seed};
    }
    throw RecoveryFailed("no rotation separated the candidate grid");
}

}  // namespace

RecoveryReport recover_atoms(const MomentMatrix& a, const RecoveryConfig& cfg)
{
    cfg.validate();
    const std::size_t d = a.dimension();
    RecoveryReport rep;
    rep.atoms = DiscreteMeasure(d);
    rep.rotation_seed_used = cfg.seed;
    const std::size_t rank = numerical_rank(a, cfg.rank_tol).rank;
    rep.detected_rank = rank;
    if (rank == 0) {
        rep.residual = moment_residual(a, rep.atoms, a.max_degree());
        return rep;
    }
    if (a.max_degree() < static_cast<int>(rank)) {
        std::ostringstream msg;
        msg << "recovery failed: degree " << a.max_degree() << " is below the detected rank " << rank;
        throw RecoveryFailed(msg.str());
    }
    if (d == 1) {
        rep.atoms = recover_1d(a, cfg);
        rep.residual = moment_residual(a, rep.atoms, a.max_degree());
        if (rep.atoms.size() != rank) {
            std::ostringstream msg;
            msg << "recovered " << rep.atoms.size() << " atoms from a matrix of rank " << rank;
            throw InconsistentRank(msg.str());
        }
        return rep;
    }

    bool last_inconsistent = false;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        MomentMatrix work = a;
        int consumed = 0;
        if (attempt > 0) {
            const Polynomial g = perturb_weight(cfg.seed + static_cast<std::uint64_t>(attempt), cfg.epsilon, d);
            if (a.max_degree() - g.degree() < static_cast<int>(rank)) {
                rep.retry_log.push_back("no degree headroom left for a reweighted retry");
                break;
            }
            work = reweight_moments(a, g);
            consumed = g.degree();
            std::ostringstream msg;
            msg << "attempt " << attempt << ": retrying on |g|^2-weighted moments (g seed "
                << cfg.seed + static_cast<std::uint64_t>(attempt) << ", epsilon " << cfg.epsilon << ")";
            rep.retry_log.push_back(msg.str());
        }
        // From the second retry on, g alone has not helped, so the coordinates
        // are also rotated: locations do not depend on g, but a near-collision
        // of two atoms in a coordinate projection does depend on the frame.
        std::optional<CMatrix> frame;
        if (attempt >= 2) {
            frame = random_unitary(d, mix_seed(cfg.seed, 0xF7A3E000ULL + static_cast<std::uint64_t>(attempt)));
            work = rotate_moments(work, *frame);
            rep.retry_log.push_back("attempt " + std::to_string(attempt) + ": working in a rotated frame");
        }
        try {
            Located found = locate(work, rank, cfg, attempt, rep.retry_log);
            std::vector<ComplexPoint> locs;
            for (const auto& p : found.points) locs.push_back(frame ? transform_point(CMatrix(frame->adjoint()), p) : p);
            std::vector<cplx> w = solve_weights(a, locs);
            if (prune_small(locs, w, cfg.rank_tol)) w = solve_weights(a, locs);
            DiscreteMeasure m = refine_atoms(a, assemble(d, locs, w));
            const double res = moment_residual(a, m, a.max_degree() - consumed);
            if (m.size() != rank) {
                std::ostringstream msg;
                msg << "recovered " << m.size() << " atoms from a matrix of rank " << rank;
                throw InconsistentRank(msg.str());
            }
            if (!(res <= kResidualLimit)) {
                std::ostringstream msg;
                msg << "residual " << res << " above " << kResidualLimit;
                throw RecoveryFailed(msg.str());
            }
            rep.atoms = std::move(m);
            rep.residual = res;
            rep.retries_used = attempt;
            rep.rotation_seed_used = found.rotation_seed;
            return rep;
        } catch (const InconsistentRank& e) {
            last_inconsistent = true;
            rep.retry_log.push_back("attempt " + std::to_string(attempt) + " failed: " + e.what());
        } catch (const Error& e) {
            last_inconsistent = false;
            rep.retry_log.push_back("attempt " + std::to_string(attempt) + " failed: " + e.what());
        }
    }
    std::string detail;
    for (const auto& line : rep.retry_log) detail += "\n  " + line;
    if (last_inconsistent) throw InconsistentRank("inconsistent ranks after retries:" + detail);
    throw RecoveryFailed("recovery failed, retries exhausted:" + detail);
}

}  // namespace finrank
