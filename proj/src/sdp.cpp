#include "oskit/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oskit/kernels.hpp"
#include "oskit/numerics.hpp"

namespace oskit::sdp {

std::string to_string(Status s) {
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::unbounded: return "unbounded";
        default: return "numerical-failure";
    }
}

int SdpProblem::total_dim() const {
    int t = 0;
    for (int d : block_dims) t += d;
    return t;
}

void SdpProblem::validate() const {
    const int nb = static_cast<int>(block_dims.size());
    for (int d : block_dims)
        if (d <= 0) throw std::invalid_argument("SdpProblem: nonpositive block dimension");
    auto check = [&](const BlockMatrix& bm, const char* what) {
        if (bm.block < 0 || bm.block >= nb)
            throw std::invalid_argument(std::string("SdpProblem: bad block index in ") + what);
        if (bm.matrix.dim != block_dims[bm.block])
            throw std::invalid_argument(std::string("SdpProblem: coefficient dim mismatch in ") + what);
        if (bm.matrix.hermiticity_defect() >= 1e-12)
            throw std::invalid_argument(std::string("SdpProblem: non-Hermitian coefficient in ") + what);
    };
    for (const auto& bm : objective) check(bm, "objective");
    for (const auto& c : constraints)
        for (const auto& bm : c.coeffs) check(bm, "constraints");
    // bound measured against the realified variable dimension (2x per block)
    const long long td = 2 * total_dim();
    if (static_cast<long long>(constraints.size()) > td * td)
        throw std::invalid_argument("SdpProblem: more constraints than total variable dimension squared");
}

namespace detail {

ComplexMatrix embed_real(const ComplexMatrix& M) {
    const int n = M.dim;
    ComplexMatrix R(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Cx z = M(i, j);
            R(i, j) = Cx{z.real(), 0.0};
            R(n + i, n + j) = Cx{z.real(), 0.0};
            R(i, n + j) = Cx{-z.imag(), 0.0};
            R(n + i, j) = Cx{z.imag(), 0.0};
        }
    return R;
}

ComplexMatrix restrict_complex(const ComplexMatrix& R) {
    const int n = R.dim / 2;
    ComplexMatrix M(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double re = 0.5 * (R(i, j).real() + R(n + i, n + j).real());
            double im = 0.5 * (R(n + i, j).real() - R(i, n + j).real());
            M(i, j) = Cx{re, im};
        }
    return M.hermitized();
}

}  // namespace detail

namespace {

using detail::embed_real;
using detail::restrict_complex;

struct RealProblem {
    std::vector<int> dims;
    std::vector<BlockMatrix> C;
    std::vector<Constraint> cons;
};

double trace_prod_re(const ComplexMatrix& A, const ComplexMatrix& B) {
    // Re tr(A B) for Hermitian A, B
    double s = 0.0;
    const int n = A.dim;
    for (int i = 0; i < n; ++i) {
        const Cx* ar = &A.a[static_cast<size_t>(i) * n];
        for (int j = 0; j < n; ++j) {
            const Cx b = B(j, i);
            s += ar[j].real() * b.real() - ar[j].imag() * b.imag();
        }
    }
    return s;
}

double max_entry(const ComplexMatrix& M) {
    double v = 0.0;
    for (const Cx& z : M.a) v = std::max(v, std::abs(z));
    return v;
}

double con_apply(const Constraint& c, const std::vector<ComplexMatrix>& X) {
    double s = 0.0;
    for (const auto& bm : c.coeffs) s += trace_prod_re(bm.matrix, X[bm.block]);
    return s;
}

void axpy_block(std::vector<ComplexMatrix>& acc, const Constraint& c, double w) {
    for (const auto& bm : c.coeffs) {
        ComplexMatrix& t = acc[bm.block];
        const Cx wc{w, 0.0};
        for (size_t q = 0; q < t.a.size(); ++q) t.a[q] += wc * bm.matrix.a[q];
    }
}

bool cholesky(std::vector<double>& S, int m) {
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = S[static_cast<size_t>(i) * m + j];
            for (int k = 0; k < j; ++k)
                sum -= S[static_cast<size_t>(i) * m + k] * S[static_cast<size_t>(j) * m + k];
            if (i == j) {
                if (sum <= 0.0) return false;
                S[static_cast<size_t>(i) * m + i] = std::sqrt(sum);
            } else {
                S[static_cast<size_t>(i) * m + j] = sum / S[static_cast<size_t>(j) * m + j];
            }
        }
    }
    return true;
}

void chol_solve(const std::vector<double>& L, int m, std::vector<double>& x) {
    for (int i = 0; i < m; ++i) {
        double s = x[i];
        for (int k = 0; k < i; ++k) s -= L[static_cast<size_t>(i) * m + k] * x[k];
        x[i] = s / L[static_cast<size_t>(i) * m + i];
    }
    for (int i = m - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < m; ++k) s -= L[static_cast<size_t>(k) * m + i] * x[k];
        x[i] = s / L[static_cast<size_t>(i) * m + i];
    }
}

struct BlockEig {
    ComplexMatrix sqrt;      // Q L^{1/2} Q*
    ComplexMatrix inv;       // Q L^{-1} Q*
    ComplexMatrix inv_sqrt;  // Q L^{-1/2} Q*
};

ComplexMatrix assemble(const EigenResult& e, const std::vector<double>& f) {
    const int n = e.vectors.dim;
    ComplexMatrix T(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) T(i, j) = e.vectors(i, j) * f[j];
    return kernels::mul_adjR(T, e.vectors);
}

BlockEig block_eig(const ComplexMatrix& M) {
    BlockEig be;
    EigenResult e = hermitian_eigen(M, 1e-6);
    const int n = M.dim;
    double lmax = 0.0;
    for (double v : e.values) lmax = std::max(lmax, std::fabs(v));
    const double floor_ = std::max(1e-14 * std::max(lmax, 1.0), 1e-290);
    std::vector<double> s(n), iv(n), is(n);
    for (int i = 0; i < n; ++i) {
        double v = std::max(e.values[i], floor_);
        s[i] = std::sqrt(v);
        iv[i] = 1.0 / v;
        is[i] = 1.0 / s[i];
    }
    be.sqrt = assemble(e, s);
    be.inv = assemble(e, iv);
    be.inv_sqrt = assemble(e, is);
    return be;
}

double max_step(const BlockEig& m, const ComplexMatrix& D) {
    ComplexMatrix B = kernels::mul(kernels::mul(m.inv_sqrt, D), m.inv_sqrt).hermitized();
    double lmin = lambda_min(B);
    if (lmin >= -1e-13) return 1e30;
    return 1.0 / (-lmin);
}

struct IpmOutcome {
    Status status = Status::numerical_failure;
    std::vector<ComplexMatrix> X, Z;
    std::vector<double> y;  // original constraint indexing
    double pobj = 0.0, dobj = 0.0;
    double prp = 0.0, prd = 0.0;
    int iters = 0;
    std::string msg;
    std::optional<std::vector<double>> ray_y;
};

struct Presolved {
    bool inconsistent = false;
    std::vector<double> bad_combo;
    std::vector<Constraint> cons;
    std::vector<double> rhs;
    std::vector<std::vector<double>> recovery;  // reduced i -> original weights
};

Presolved presolve(const RealProblem& rp) {
    Presolved out;
    const int m = static_cast<int>(rp.cons.size());
    const int nb = static_cast<int>(rp.dims.size());

    // Gram over shared blocks; coefficient lists are kept sorted by block.
    ComplexMatrix G(m);
    for (int j = 0; j < m; ++j)
        for (int k = j; k < m; ++k) {
            double s = 0.0;
            const auto& cj = rp.cons[j].coeffs;
            const auto& ck = rp.cons[k].coeffs;
            size_t a = 0, b = 0;
            while (a < cj.size() && b < ck.size()) {
                if (cj[a].block < ck[b].block)
                    ++a;
                else if (cj[a].block > ck[b].block)
                    ++b;
                else {
                    s += trace_prod_re(cj[a].matrix, ck[b].matrix);
                    ++a;
                    ++b;
                }
            }
            G(j, k) = Cx{s, 0.0};
            G(k, j) = Cx{s, 0.0};
        }
    EigenResult eg = hermitian_eigen(G, 1e-6);
    double lmax = 0.0;
    for (double v : eg.values) lmax = std::max(lmax, v);
    const double cutoff = 1e-16 * std::max(lmax, 1e-30);

    double bmax = 1.0;
    for (const auto& c : rp.cons) bmax = std::max(bmax, std::fabs(c.rhs));

    for (int i = 0; i < m; ++i) {
        std::vector<double> combo(m);
        for (int k = 0; k < m; ++k) combo[k] = eg.vectors(k, i).real();
        double bt = 0.0;
        for (int k = 0; k < m; ++k) bt += combo[k] * rp.cons[k].rhs;
        if (eg.values[i] <= cutoff) {
            if (std::fabs(bt) > 1e-9 * bmax) {
                out.inconsistent = true;
                out.bad_combo = combo;
                if (bt < 0)
                    for (double& v : out.bad_combo) v = -v;
                return out;
            }
            continue;  // redundant constraint dropped
        }
        const double inv_sigma = 1.0 / std::sqrt(eg.values[i]);
        Constraint cc;
        cc.rhs = bt * inv_sigma;
        std::vector<ComplexMatrix> acc(nb);
        std::vector<bool> used(nb, false);
        for (int k = 0; k < m; ++k) {
            if (combo[k] == 0.0) continue;
            for (const auto& bm : rp.cons[k].coeffs) {
                if (!used[bm.block]) {
                    acc[bm.block] = ComplexMatrix(rp.dims[bm.block]);
                    used[bm.block] = true;
                }
                ComplexMatrix& t = acc[bm.block];
                const Cx w{combo[k] * inv_sigma, 0.0};
                for (size_t q = 0; q < t.a.size(); ++q) t.a[q] += w * bm.matrix.a[q];
            }
        }
        for (int b = 0; b < nb; ++b)
            if (used[b] && max_entry(acc[b]) > 1e-300) cc.coeffs.push_back({b, std::move(acc[b])});
        std::vector<double> rec(m);
        for (int k = 0; k < m; ++k) rec[k] = combo[k] * inv_sigma;
        out.recovery.push_back(std::move(rec));
        out.rhs.push_back(cc.rhs);
        out.cons.push_back(std::move(cc));
    }
    return out;
}

IpmOutcome ipm_solve(const RealProblem& rp, double tol, int max_iter) {
    IpmOutcome out;
    const int nb = static_cast<int>(rp.dims.size());
    const int m_orig = static_cast<int>(rp.cons.size());

    if (m_orig == 0) {
        out.msg = "problem has no constraints";
        return out;
    }

    Presolved ps = presolve(rp);
    if (ps.inconsistent) {
        out.status = Status::infeasible;
        out.msg = "equality constraints are linearly inconsistent";
        out.ray_y = ps.bad_combo;
        out.y.assign(m_orig, 0.0);
        return out;
    }
    const int m = static_cast<int>(ps.cons.size());
    if (m == 0) {
        out.msg = "all constraints vanished in presolve";
        return out;
    }

    int ntot = 0;
    for (int d : rp.dims) ntot += d;

    double cmax = 0.0;
    for (const auto& bm : rp.C) cmax = std::max(cmax, max_entry(bm.matrix));
    double rmax = 0.0;
    for (double v : ps.rhs) rmax = std::max(rmax, std::fabs(v));

    const double init_scale = std::max({1.0, rmax, cmax});
    std::vector<ComplexMatrix> X(nb), Z(nb);
    for (int b = 0; b < nb; ++b) {
        X[b] = ComplexMatrix::identity(rp.dims[b]);
        X[b] *= Cx{10.0 * init_scale, 0.0};
        Z[b] = ComplexMatrix::identity(rp.dims[b]);
        Z[b] *= Cx{10.0 * init_scale, 0.0};
    }
    std::vector<double> y(m, 0.0);

    auto recover_y = [&](const std::vector<double>& yr) {
        std::vector<double> yo(m_orig, 0.0);
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m_orig; ++k) yo[k] += ps.recovery[i][k] * yr[i];
        return yo;
    };

    // block -> list of (reduced constraint index, coefficient)
    std::vector<std::vector<std::pair<int, const ComplexMatrix*>>> by_block(nb);
    for (int k = 0; k < m; ++k)
        for (const auto& bm : ps.cons[k].coeffs) by_block[bm.block].push_back({k, &bm.matrix});

    std::vector<ComplexMatrix> Rd(nb), W(nb), Zi(nb), Gd(nb), dZ(nb), dX(nb), Rc(nb);
    std::vector<ComplexMatrix> T(static_cast<size_t>(m));
    std::vector<BlockEig> ex(nb), ez(nb);
    int stall = 0;
    double gap_checkpoint = 1e300;

    for (int it = 1; it <= max_iter; ++it) {
        out.iters = it;
        double pobj = 0.0;
        for (const auto& bm : rp.C) pobj += trace_prod_re(bm.matrix, X[bm.block]);
        double dobj = 0.0;
        for (int k = 0; k < m; ++k) dobj += ps.rhs[k] * y[k];

        std::vector<double> rpv(m);
        double prp = 0.0;
        for (int k = 0; k < m; ++k) {
            rpv[k] = ps.rhs[k] - con_apply(ps.cons[k], X);
            prp = std::max(prp, std::fabs(rpv[k]));
        }
        for (int b = 0; b < nb; ++b) {
            Rd[b] = ComplexMatrix(rp.dims[b]);
            Rd[b] -= Z[b];
        }
        for (const auto& bm : rp.C) Rd[bm.block] -= bm.matrix;
        for (int k = 0; k < m; ++k) axpy_block(Rd, ps.cons[k], y[k]);
        double prd = 0.0;
        for (int b = 0; b < nb; ++b) prd = std::max(prd, max_entry(Rd[b]));

        double mu = 0.0;
        for (int b = 0; b < nb; ++b) mu += trace_prod_re(X[b], Z[b]);
        mu /= ntot;

        const double gap = std::fabs(pobj - dobj);
        out.pobj = pobj;
        out.dobj = dobj;
        out.prp = prp;
        out.prd = prd;

        if (gap <= tol && prp <= tol * (1.0 + rmax) && prd <= tol * (1.0 + cmax)) {
            out.status = Status::optimal;
            out.X = X;
            out.Z = Z;
            out.y = recover_y(y);
            return out;
        }

        // degenerate optimal faces make the gap crawl; bail out once progress
        // over a 30-iteration window falls below a factor of two
        if (it % 30 == 0) {
            if (gap > 0.5 * gap_checkpoint && prp <= 100.0 * tol * (1.0 + rmax) &&
                prd <= 100.0 * tol * (1.0 + cmax)) {
                out.msg = "gap stagnated on a degenerate face";
                break;
            }
            gap_checkpoint = gap;
        }

        // sound test: any y with <y,b> = 1 and sum y_k A_k < 0 certifies
        // primal infeasibility (1 = <sum y A, X> <= 0 for feasible X)
        if (-dobj > 1e-4 * (1.0 + std::fabs(pobj))) {
            const double c = -dobj;
            std::vector<ComplexMatrix> M(nb);
            for (int b = 0; b < nb; ++b) M[b] = ComplexMatrix(rp.dims[b]);
            for (int k = 0; k < m; ++k) axpy_block(M, ps.cons[k], -y[k] / c);
            double lmx = -1e300, scale = 0.0;
            for (int b = 0; b < nb; ++b) {
                scale = std::max(scale, max_entry(M[b]));
                lmx = std::max(lmx, lambda_max(M[b].hermitized()));
            }
            if (lmx <= -1e-9 * (1.0 + scale)) {
                std::vector<double> yr(m);
                for (int k = 0; k < m; ++k) yr[k] = -y[k] / c;
                out.status = Status::infeasible;
                out.msg = "dual ray detected";
                out.ray_y = recover_y(yr);
                out.X = X;
                out.Z = Z;
                out.y = recover_y(y);
                return out;
            }
        }

        {
            double xn = 0.0;
            for (int b = 0; b < nb; ++b) xn += X[b].frobenius_norm();
            if (xn > 1e8 * init_scale) {
                double cx = pobj / xn;
                double ax = 0.0;
                for (int k = 0; k < m; ++k)
                    ax = std::max(ax, std::fabs(con_apply(ps.cons[k], X)) / xn);
                if (cx > 1e-7 * (1.0 + cmax) && ax <= 1e-9 * (1.0 + rmax)) {
                    out.status = Status::unbounded;
                    out.msg = "primal ray detected";
                    out.X = X;
                    out.Z = Z;
                    out.y = recover_y(y);
                    return out;
                }
            }
        }

        // Nesterov-Todd scaling point per block: W Z W = X
        try {
            for (int b = 0; b < nb; ++b) {
                ex[b] = block_eig(X[b]);
                ez[b] = block_eig(Z[b]);
                ComplexMatrix Mb =
                    kernels::mul(kernels::mul(ex[b].sqrt, Z[b]), ex[b].sqrt).hermitized();
                BlockEig em = block_eig(Mb);
                W[b] = kernels::mul(kernels::mul(ex[b].sqrt, em.inv_sqrt), ex[b].sqrt).hermitized();
                Zi[b] = ez[b].inv;
            }
        } catch (const std::exception& e) {
            out.msg = std::string("scaling failure: ") + e.what();
            break;
        }

        // Schur complement S[j][k] = sum_b tr(A_j W A_k W)
        std::vector<double> S(static_cast<size_t>(m) * m, 0.0);
        for (int b = 0; b < nb; ++b) {
            const auto& touch = by_block[b];
            for (const auto& [k, A] : touch) T[k] = kernels::mul(kernels::mul(W[b], *A), W[b]);
            for (size_t a1 = 0; a1 < touch.size(); ++a1)
                for (size_t a2 = a1; a2 < touch.size(); ++a2) {
                    const int j = touch[a1].first, k = touch[a2].first;
                    const double v = trace_prod_re(*touch[a1].second, T[k]);
                    S[static_cast<size_t>(j) * m + k] += v;
                    if (j != k) S[static_cast<size_t>(k) * m + j] += v;
                }
        }

        std::vector<double> L = S;
        bool ok = cholesky(L, m);
        if (!ok) {
            double dmax = 0.0;
            for (int k = 0; k < m; ++k) dmax = std::max(dmax, S[static_cast<size_t>(k) * m + k]);
            double ridge = 1e-12;
            for (int attempt = 0; attempt < 3 && !ok; ++attempt, ridge *= 1e3) {
                L = S;
                for (int k = 0; k < m; ++k) L[static_cast<size_t>(k) * m + k] += ridge * dmax;
                ok = cholesky(L, m);
            }
            if (!ok) {
                out.msg = "Schur complement Cholesky breakdown";
                break;
            }
        }

        for (int b = 0; b < nb; ++b) Gd[b] = kernels::mul(kernels::mul(W[b], Rd[b]), W[b]);

        // S dy = A(Rc) - A(W Rd W) - rp ; dZ = sum dy A + Rd ; dX = Rc - W dZ W
        auto solve_direction = [&](const std::vector<ComplexMatrix>& Rcv, std::vector<double>& dy) {
            dy.assign(m, 0.0);
            for (int k = 0; k < m; ++k) {
                double s = -rpv[k];
                for (const auto& bm : ps.cons[k].coeffs) {
                    s += trace_prod_re(bm.matrix, Rcv[bm.block]);
                    s -= trace_prod_re(bm.matrix, Gd[bm.block]);
                }
                dy[k] = s;
            }
            chol_solve(L, m, dy);
            for (int b = 0; b < nb; ++b) dZ[b] = Rd[b];
            for (int k = 0; k < m; ++k) axpy_block(dZ, ps.cons[k], dy[k]);
            for (int b = 0; b < nb; ++b) {
                dX[b] = Rcv[b] - kernels::mul(kernels::mul(W[b], dZ[b]), W[b]);
                dX[b] = dX[b].hermitized();
                dZ[b] = dZ[b].hermitized();
            }
        };

        std::vector<double> dy;
        for (int b = 0; b < nb; ++b) {
            Rc[b] = ComplexMatrix(rp.dims[b]);
            Rc[b] -= X[b];
        }
        solve_direction(Rc, dy);
        double ap = 1e30, ad = 1e30;
        for (int b = 0; b < nb; ++b) {
            ap = std::min(ap, max_step(ex[b], dX[b]));
            ad = std::min(ad, max_step(ez[b], dZ[b]));
        }
        const double probe_p = std::min(1.0, ap), probe_d = std::min(1.0, ad);
        double mu_aff = 0.0;
        for (int b = 0; b < nb; ++b) {
            ComplexMatrix Xa = X[b];
            ComplexMatrix Za = Z[b];
            for (size_t q = 0; q < Xa.a.size(); ++q) {
                Xa.a[q] += probe_p * dX[b].a[q];
                Za.a[q] += probe_d * dZ[b].a[q];
            }
            mu_aff += trace_prod_re(Xa, Za);
        }
        mu_aff = std::max(mu_aff / ntot, 0.0);
        double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
        sigma = std::clamp(sigma, 1e-8, 0.9999);

        for (int b = 0; b < nb; ++b) {
            Rc[b] = Zi[b];
            Rc[b] *= Cx{sigma * mu, 0.0};
            Rc[b] -= X[b];
        }
        solve_direction(Rc, dy);
        ap = 1e30;
        ad = 1e30;
        for (int b = 0; b < nb; ++b) {
            ap = std::min(ap, max_step(ex[b], dX[b]));
            ad = std::min(ad, max_step(ez[b], dZ[b]));
        }
        ap = std::min(1.0, 0.98 * ap);
        ad = std::min(1.0, 0.98 * ad);

        for (int b = 0; b < nb; ++b) {
            for (size_t q = 0; q < X[b].a.size(); ++q) {
                X[b].a[q] += ap * dX[b].a[q];
                Z[b].a[q] += ad * dZ[b].a[q];
            }
            X[b] = X[b].hermitized();
            Z[b] = Z[b].hermitized();
        }
        for (int k = 0; k < m; ++k) y[k] += ad * dy[k];

        if (ap < 1e-5 && ad < 1e-5)
            ++stall;
        else
            stall = 0;
        if (stall >= 4) {
            out.msg = "step sizes collapsed";
            break;
        }
    }

    if (out.msg.empty()) out.msg = "iteration limit reached without certificate";
    out.status = Status::numerical_failure;
    out.X = X;
    out.Z = Z;
    out.y = recover_y(y);
    return out;
}

RealProblem realify(const SdpProblem& p) {
    RealProblem rp;
    rp.dims.reserve(p.block_dims.size());
    for (int d : p.block_dims) rp.dims.push_back(2 * d);
    for (const auto& bm : p.objective) rp.C.push_back({bm.block, embed_real(bm.matrix)});
    for (const auto& c : p.constraints) {
        Constraint rc;
        rc.rhs = 2.0 * c.rhs;
        for (const auto& bm : c.coeffs) rc.coeffs.push_back({bm.block, embed_real(bm.matrix)});
        std::sort(rc.coeffs.begin(), rc.coeffs.end(),
                  [](const BlockMatrix& a, const BlockMatrix& b) { return a.block < b.block; });
        rp.cons.push_back(std::move(rc));
    }
    return rp;
}

}  // namespace

Certificate verify_certificate(const SdpProblem& p, const std::vector<double>& y) {
    Certificate c;
    c.y = y;
    const int nb = static_cast<int>(p.block_dims.size());
    std::vector<ComplexMatrix> M(nb);
    for (int b = 0; b < nb; ++b) M[b] = ComplexMatrix(p.block_dims[b]);
    double bd = 0.0;
    for (size_t k = 0; k < p.constraints.size(); ++k) {
        const double w = (k < y.size()) ? y[k] : 0.0;
        bd += w * p.constraints[k].rhs;
        for (const auto& bm : p.constraints[k].coeffs) {
            ComplexMatrix& t = M[bm.block];
            const Cx wc{w, 0.0};
            for (size_t q = 0; q < t.a.size(); ++q) t.a[q] += wc * bm.matrix.a[q];
        }
    }
    double lmx = -1e300, scale = 0.0;
    for (int b = 0; b < nb; ++b) {
        scale = std::max(scale, max_entry(M[b]));
        lmx = std::max(lmx, lambda_max(M[b].hermitized()));
    }
    c.b_dot_y = bd;
    c.eps = -lmx;
    c.verified = (bd > 1e-10 * (1.0 + scale)) && (lmx <= 1e-9 * (1.0 + scale));
    return c;
}

SdpResult solve(const SdpProblem& p, double tol) {
    if (!(tol >= 1e-10 && tol <= 1e-4))
        throw std::invalid_argument("sdp::solve: tol must lie in [1e-10, 1e-4]");
    p.validate();

    RealProblem rp = realify(p);
    IpmOutcome o = ipm_solve(rp, tol, 200);

    SdpResult r;
    r.status = o.status;
    r.iterations = o.iters;
    r.message = o.msg;
    r.dual = o.y;
    r.primal_objective = 0.5 * o.pobj;
    r.dual_objective = 0.5 * o.dobj;
    r.gap = std::fabs(r.primal_objective - r.dual_objective);
    r.dual_residual = 0.5 * o.prd;

    if (!o.X.empty()) {
        r.primal.resize(p.block_dims.size());
        double me = 1e300, pres = 0.0;
        for (size_t b = 0; b < p.block_dims.size(); ++b) {
            r.primal[b] = detail::restrict_complex(o.X[b]);
            me = std::min(me, lambda_min(r.primal[b]));
        }
        for (const auto& c : p.constraints) {
            double v = -c.rhs;
            for (const auto& bm : c.coeffs) v += trace_prod_re(bm.matrix, r.primal[bm.block]);
            pres = std::max(pres, std::fabs(v));
        }
        r.min_primal_eig = me;
        r.primal_residual = pres;
    }
    if (o.ray_y) {
        Certificate c = verify_certificate(p, *o.ray_y);
        if (o.status == Status::infeasible && !c.verified) {
            r.status = Status::numerical_failure;
            r.message = "infeasibility ray failed independent verification";
        }
        r.certificate = c;
    }
    return r;
}

FeasibilityResult feasibility(const SdpProblem& p, double tol) {
    if (!(tol >= 1e-10 && tol <= 1e-4))
        throw std::invalid_argument("sdp::feasibility: tol must lie in [1e-10, 1e-4]");
    p.validate();

    RealProblem rp = realify(p);
    const int nb = static_cast<int>(p.block_dims.size());
    const int m = static_cast<int>(p.constraints.size());

    // maximize t = t+ - t- with Y + t I in the affine slice and t+ + s = 1
    RealProblem ph = rp;
    const int bt_plus = nb, bt_minus = nb + 1, bs = nb + 2;
    ph.dims.push_back(1);
    ph.dims.push_back(1);
    ph.dims.push_back(1);
    auto one = [](double v) {
        ComplexMatrix u(1);
        u(0, 0) = Cx{v, 0.0};
        return u;
    };
    for (auto& c : ph.cons) {
        double tr = 0.0;
        for (const auto& bm : c.coeffs) tr += bm.matrix.trace().real();
        if (tr != 0.0) {
            c.coeffs.push_back({bt_plus, one(tr)});
            c.coeffs.push_back({bt_minus, one(-tr)});
        }
    }
    Constraint cap;
    cap.rhs = 1.0;
    cap.coeffs.push_back({bt_plus, one(1.0)});
    cap.coeffs.push_back({bs, one(1.0)});
    ph.cons.push_back(std::move(cap));
    ph.C.clear();
    ph.C.push_back({bt_plus, one(1.0)});
    ph.C.push_back({bt_minus, one(-1.0)});

    const double ipm_tol = std::clamp(0.1 * tol, 1e-10, 1e-8);
    IpmOutcome o = ipm_solve(ph, ipm_tol, 200);

    FeasibilityResult fr;
    fr.phase1.status = o.status;
    fr.phase1.iterations = o.iters;
    fr.phase1.message = o.msg;
    fr.phase1.primal_objective = o.pobj;
    fr.phase1.dual_objective = o.dobj;
    fr.phase1.gap = std::fabs(o.pobj - o.dobj);
    fr.phase1.primal_residual = o.prp;
    fr.phase1.dual_residual = o.prd;
    fr.phase1.dual = o.y;

    if (o.status == Status::infeasible) {
        fr.definitive = true;
        fr.feasible = false;
        fr.slack = -1e300;
        if (o.ray_y) {
            std::vector<double> yc(o.ray_y->begin(),
                                   o.ray_y->begin() + std::min<size_t>(m, o.ray_y->size()));
            Certificate c = verify_certificate(p, yc);
            if (!c.verified && c.b_dot_y < 0) {
                for (double& v : yc) v = -v;
                c = verify_certificate(p, yc);
            }
            fr.certificate = c;
            fr.definitive = c.verified;
        }
        return fr;
    }
    if (o.status != Status::optimal) {
        fr.definitive = false;
        return fr;
    }

    const double t = o.pobj;
    fr.slack = t;
    fr.definitive = true;
    if (t >= -tol) {
        fr.feasible = true;
        fr.witness.resize(nb);
        for (int b = 0; b < nb; ++b) {
            ComplexMatrix Y = detail::restrict_complex(o.X[b]);
            for (int i = 0; i < Y.dim; ++i) Y(i, i) += t;
            fr.witness[b] = std::move(Y);
        }
    } else {
        fr.feasible = false;
        std::vector<double> yc(m);
        for (int k = 0; k < m; ++k) yc[k] = -o.y[k];
        Certificate c = verify_certificate(p, yc);
        fr.certificate = c;
        if (!c.verified) fr.definitive = false;
    }
    return fr;
}

}  // namespace oskit::sdp
