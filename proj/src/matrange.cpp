#include "oskit/matrange.hpp"

#include <algorithm>
#include <cmath>

#include "oskit/kernels.hpp"
#include "oskit/numerics.hpp"

namespace oskit::matrange {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<ComplexMatrix> hermitian_basis(int k) {
    std::vector<ComplexMatrix> fs;
    fs.reserve(static_cast<size_t>(k) * k);
    for (int r = 0; r < k; ++r) {
        ComplexMatrix d(k);
        d(r, r) = 1.0;
        fs.push_back(std::move(d));
        for (int c = r + 1; c < k; ++c) {
            ComplexMatrix re(k);
            re(r, c) = 1.0;
            re(c, r) = 1.0;
            fs.push_back(std::move(re));
            ComplexMatrix im(k);
            im(r, c) = Cx{0.0, 1.0};
            im(c, r) = Cx{0.0, -1.0};
            fs.push_back(std::move(im));
        }
    }
    return fs;
}

ComplexMatrix embed_topleft(const ComplexMatrix& F, int out) {
    ComplexMatrix G(out);
    for (int r = 0; r < F.dim; ++r)
        for (int c = 0; c < F.dim; ++c) G(r, c) = F(r, c);
    return G;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        default: return "inconclusive";
    }
}

std::string to_string(EquivVerdict v) {
    switch (v) {
        case EquivVerdict::equivalent: return "equivalent";
        case EquivVerdict::s_to_r_only: return "s-to-r-only";
        case EquivVerdict::r_to_s_only: return "r-to-s-only";
        case EquivVerdict::neither: return "neither";
        default: return "inconclusive";
    }
}

ChoiProgramBuilder::ChoiProgramBuilder(const OperatorTuple& s, int out_dim)
    : s_(s), out_(out_dim) {
    if (out_dim < 1) throw std::invalid_argument("ChoiProgramBuilder: out_dim >= 1");
    const int bd = s.block_dim;
    prob_.block_dims.assign(s.num_blocks, bd * out_dim);

    // Hermitian and anti-Hermitian parts of each operator, per block
    herm_parts_.resize(static_cast<size_t>(s.arity()) * 2);
    for (int i = 0; i < s.arity(); ++i) {
        auto& re = herm_parts_[2 * i];
        auto& im = herm_parts_[2 * i + 1];
        re.resize(s.num_blocks);
        im.resize(s.num_blocks);
        for (int b = 0; b < s.num_blocks; ++b) {
            const ComplexMatrix& m = s.entries[i][b];
            ComplexMatrix a1(bd), a2(bd);
            for (int r = 0; r < bd; ++r)
                for (int c = 0; c < bd; ++c) {
                    const Cx z = m(r, c), w = std::conj(m(c, r));
                    a1(r, c) = 0.5 * (z + w);
                    a2(r, c) = Cx{0.0, -0.5} * (z - w);
                }
            re[b] = std::move(a1);
            im[b] = std::move(a2);
        }
    }

    // joint unitality: sum_b Phi_b(I) = I_out
    std::vector<ComplexMatrix> ones(s.num_blocks, ComplexMatrix::identity(bd));
    for (const ComplexMatrix& F : hermitian_basis(out_)) add_pin(ones, F, F.trace().real());
}

void ChoiProgramBuilder::add_pin(const std::vector<ComplexMatrix>& part_blocks,
                                 const ComplexMatrix& F, double rhs) {
    sdp::Constraint con;
    con.rhs = rhs;
    for (int b = 0; b < s_.num_blocks; ++b) {
        const ComplexMatrix& A = part_blocks[b];
        bool zero = true;
        for (const Cx& z : A.a)
            if (std::abs(z) > 1e-300) {
                zero = false;
                break;
            }
        if (zero) continue;
        con.coeffs.push_back({b, kron(A.conj(), F)});
    }
    prob_.constraints.push_back(std::move(con));
}

void ChoiProgramBuilder::pin_values(const std::vector<ComplexMatrix>& targets, int sub_dim) {
    if (static_cast<int>(targets.size()) != s_.arity())
        throw std::invalid_argument("pin_values: one target per operator");
    if (sub_dim < 1 || sub_dim > out_)
        throw std::invalid_argument("pin_values: bad compression dimension");
    const auto basis = hermitian_basis(sub_dim);
    for (int i = 0; i < s_.arity(); ++i) {
        const ComplexMatrix& T = targets[i];
        if (T.dim != sub_dim) throw std::invalid_argument("pin_values: target dimension mismatch");
        ComplexMatrix t_re(sub_dim), t_im(sub_dim);
        for (int r = 0; r < sub_dim; ++r)
            for (int c = 0; c < sub_dim; ++c) {
                const Cx z = T(r, c), w = std::conj(T(c, r));
                t_re(r, c) = 0.5 * (z + w);
                t_im(r, c) = Cx{0.0, -0.5} * (z - w);
            }
        for (const ComplexMatrix& F : basis) {
            const ComplexMatrix Fo = embed_topleft(F, out_);
            double rhs_re = 0.0, rhs_im = 0.0;
            for (int r = 0; r < sub_dim; ++r)
                for (int c = 0; c < sub_dim; ++c) {
                    rhs_re += (F(c, r) * t_re(r, c)).real();
                    rhs_im += (F(c, r) * t_im(r, c)).real();
                }
            add_pin(herm_parts_[2 * i], Fo, rhs_re);
            add_pin(herm_parts_[2 * i + 1], Fo, rhs_im);
        }
    }
}

void ChoiProgramBuilder::set_objective(const std::vector<ComplexMatrix>& B) {
    if (static_cast<int>(B.size()) != s_.arity())
        throw std::invalid_argument("set_objective: one direction matrix per operator");
    std::vector<ComplexMatrix> obj(s_.num_blocks);
    for (int b = 0; b < s_.num_blocks; ++b) obj[b] = ComplexMatrix(s_.block_dim * out_);
    for (int i = 0; i < s_.arity(); ++i) {
        const ComplexMatrix& Bi = B[i];
        if (Bi.dim != out_) throw std::invalid_argument("set_objective: direction dim mismatch");
        ComplexMatrix f1(out_), f2(out_);
        for (int r = 0; r < out_; ++r)
            for (int c = 0; c < out_; ++c) {
                const Cx z = Bi(r, c), w = std::conj(Bi(c, r));
                f1(r, c) = 0.5 * (z + w);
                f2(r, c) = Cx{0.0, -0.5} * (z - w);
            }
        for (int b = 0; b < s_.num_blocks; ++b) {
            obj[b] += kron(herm_parts_[2 * i][b].conj(), f1);
            obj[b] += kron(herm_parts_[2 * i + 1][b].conj(), f2);
        }
    }
    prob_.objective.clear();
    for (int b = 0; b < s_.num_blocks; ++b) {
        bool zero = true;
        for (const Cx& z : obj[b].a)
            if (std::abs(z) > 1e-300) {
                zero = false;
                break;
            }
        if (!zero) prob_.objective.push_back({b, std::move(obj[b])});
    }
}

ComplexMatrix ChoiProgramBuilder::map_apply(const std::vector<ComplexMatrix>& choi_blocks,
                                            const ComplexMatrix& X) const {
    if (s_.num_blocks != 1)
        throw std::invalid_argument("map_apply: dense sources only");
    const int bd = s_.block_dim;
    if (X.dim != bd) throw std::invalid_argument("map_apply: dimension mismatch");
    ComplexMatrix Y(out_);
    const ComplexMatrix& C = choi_blocks[0];
    for (int i = 0; i < bd; ++i)
        for (int j = 0; j < bd; ++j) {
            const Cx x = X(i, j);
            if (x == Cx{0.0, 0.0}) continue;
            for (int k = 0; k < out_; ++k)
                for (int l = 0; l < out_; ++l) Y(k, l) += x * C(i * out_ + k, j * out_ + l);
        }
    return Y;
}

std::vector<ComplexMatrix> ChoiProgramBuilder::map_values(
    const std::vector<ComplexMatrix>& choi_blocks) const {
    if (static_cast<int>(choi_blocks.size()) != s_.num_blocks)
        throw std::invalid_argument("map_values: one Choi block per source block");
    const int bd = s_.block_dim;
    std::vector<ComplexMatrix> vals;
    vals.reserve(s_.arity());
    for (int i = 0; i < s_.arity(); ++i) {
        ComplexMatrix Y(out_);
        for (int b = 0; b < s_.num_blocks; ++b) {
            const ComplexMatrix& C = choi_blocks[b];
            const ComplexMatrix& Xb = s_.entries[i][b];
            for (int p = 0; p < bd; ++p)
                for (int q = 0; q < bd; ++q) {
                    const Cx x = Xb(p, q);
                    if (x == Cx{0.0, 0.0}) continue;
                    for (int k = 0; k < out_; ++k)
                        for (int l = 0; l < out_; ++l) Y(k, l) += x * C(p * out_ + k, q * out_ + l);
                }
        }
        vals.push_back(std::move(Y));
    }
    return vals;
}

UcpReport ucp_exists(const OperatorTuple& s, const std::vector<ComplexMatrix>& targets,
                     double tol) {
    if (targets.empty() || static_cast<int>(targets.size()) != s.arity())
        throw std::invalid_argument("ucp_exists: one target per operator");
    const int out = targets.front().dim;
    for (const auto& t : targets)
        if (t.dim != out) throw std::invalid_argument("ucp_exists: target dims differ");

    ChoiProgramBuilder builder(s, out);
    builder.pin_values(targets, out);

    UcpReport rep;
    rep.tol = tol;
    rep.feasibility = sdp::feasibility(builder.problem(), tol);
    if (!rep.feasibility.definitive) {
        rep.verdict = Verdict::inconclusive;
        return rep;
    }
    rep.verdict = rep.feasibility.feasible ? Verdict::yes : Verdict::no;
    if (rep.feasibility.feasible) rep.witness_values = builder.map_values(rep.feasibility.witness);
    return rep;
}

UcpReport membership(const OperatorTuple& s, const std::vector<ComplexMatrix>& A, double tol) {
    return ucp_exists(s, A, tol);
}

SupportResult support(const OperatorTuple& s, int level, const std::vector<ComplexMatrix>& B,
                      double tol) {
    ChoiProgramBuilder builder(s, level);
    builder.set_objective(B);
    SupportResult res;
    if (builder.problem().objective.empty()) {
        // zero direction: the supremum is 0 over the (nonempty) UCP set
        res.status = Verdict::yes;
        res.value = 0.0;
        return res;
    }
    res.sdp = sdp::solve(builder.problem(), tol);
    if (res.sdp.status == sdp::Status::optimal) {
        res.status = Verdict::yes;
        res.value = res.sdp.primal_objective;
    } else {
        res.status = Verdict::inconclusive;
    }
    return res;
}

double support_level1(const OperatorTuple& s, const std::vector<Cx>& direction) {
    if (static_cast<int>(direction.size()) != s.arity())
        throw std::invalid_argument("support_level1: one coefficient per operator");
    double best = -1e300;
    for (int b = 0; b < s.num_blocks; ++b) {
        ComplexMatrix H(s.block_dim);
        for (int i = 0; i < s.arity(); ++i) {
            const ComplexMatrix& m = s.entries[i][b];
            const Cx c = direction[i];
            for (int r = 0; r < s.block_dim; ++r)
                for (int col = 0; col < s.block_dim; ++col) {
                    H(r, col) += 0.5 * std::conj(c) * m(r, col);
                    H(r, col) += 0.5 * c * std::conj(m(col, r));
                }
        }
        best = std::max(best, lambda_max(H.hermitized()));
    }
    return best;
}

std::vector<std::vector<double>> direction_fan(int k, int count, std::uint64_t seed) {
    if (k < 1 || count < 1) throw std::invalid_argument("direction_fan: bad parameters");
    std::vector<std::vector<double>> fan;
    fan.reserve(count);
    if (k == 1) {
        for (int j = 0; j < count; ++j) fan.push_back({j % 2 == 0 ? 1.0 : -1.0});
        return fan;
    }
    if (k == 2) {
        const double off = seed == 0 ? 0.0 : (kTwoPi * 0.6180339887498949 * (seed % 1024)) / 1024.0;
        for (int j = 0; j < count; ++j) {
            const double t = off + kTwoPi * j / count;
            fan.push_back({std::cos(t), std::sin(t)});
        }
        return fan;
    }
    // Kronecker sequence on [0,1)^k pushed through Box-Muller, normalized
    const int pairs = (k + 1) / 2;
    std::vector<double> alpha(2 * pairs);
    // generalized golden ratio for dimension 2*pairs
    double g = 1.0;
    for (int it = 0; it < 64; ++it) g = std::pow(1.0 + g, 1.0 / (2 * pairs + 1));
    double a = 1.0 / g;
    for (int i = 0; i < 2 * pairs; ++i) {
        alpha[i] = a;
        a /= g;
    }
    const double shift = (seed % 100003) / 100003.0;
    for (int j = 0; j < count; ++j) {
        std::vector<double> u(2 * pairs);
        for (int i = 0; i < 2 * pairs; ++i) {
            double x = shift + alpha[i] * (j + 1);
            u[i] = x - std::floor(x);
        }
        std::vector<double> v(k);
        for (int p = 0; p < pairs; ++p) {
            const double r = std::sqrt(-2.0 * std::log(std::max(u[2 * p], 1e-12)));
            const double t = kTwoPi * u[2 * p + 1];
            if (2 * p < k) v[2 * p] = r * std::cos(t);
            if (2 * p + 1 < k) v[2 * p + 1] = r * std::sin(t);
        }
        double nrm = 0.0;
        for (double x : v) nrm += x * x;
        nrm = std::sqrt(std::max(nrm, 1e-300));
        for (double& x : v) x /= nrm;
        fan.push_back(std::move(v));
    }
    return fan;
}

namespace {

bool tuple_self_adjoint(const OperatorTuple& s) {
    for (int i = 0; i < s.arity(); ++i)
        for (int b = 0; b < s.num_blocks; ++b)
            if (s.entries[i][b].hermiticity_defect() >= 1e-12) return false;
    return true;
}

std::vector<Cx> to_complex_direction(const std::vector<double>& c, bool self_adjoint, int d) {
    std::vector<Cx> out(d);
    if (self_adjoint)
        for (int i = 0; i < d; ++i) out[i] = Cx{c[i], 0.0};
    else
        for (int i = 0; i < d; ++i) out[i] = Cx{c[2 * i], c[2 * i + 1]};
    return out;
}

}  // namespace

BoundaryResult numerical_range_boundary(const OperatorTuple& s, int directions,
                                        std::uint64_t seed) {
    if (directions < 3) throw std::invalid_argument("numerical_range_boundary: directions >= 3");
    BoundaryResult res;
    res.seed = seed;
    res.self_adjoint = tuple_self_adjoint(s);
    const int k = res.self_adjoint ? s.arity() : 2 * s.arity();
    res.directions = direction_fan(k, directions, seed);
    res.values.reserve(directions);
    for (const auto& c : res.directions)
        res.values.push_back(support_level1(s, to_complex_direction(c, res.self_adjoint, s.arity())));
    return res;
}

EquivalenceReport one_order_equivalent(const OperatorTuple& s, const OperatorTuple& r,
                                       int directions, double tol, std::uint64_t seed) {
    if (s.arity() != r.arity())
        throw std::invalid_argument("one_order_equivalent: arity mismatch");
    EquivalenceReport rep;
    rep.level1_only = true;
    rep.tol = tol;
    rep.directions = directions;
    rep.seed = seed;
    const bool sa = tuple_self_adjoint(s) && tuple_self_adjoint(r);
    const int k = sa ? s.arity() : 2 * s.arity();
    auto fan = direction_fan(k, directions, seed);
    rep.resolution = (k == 2) ? kTwoPi / directions : 0.0;
    double dev_r_in_s = 0.0, dev_s_in_r = 0.0;
    for (const auto& c : fan) {
        auto dir = to_complex_direction(c, sa, s.arity());
        const double hs = support_level1(s, dir);
        const double hr = support_level1(r, dir);
        dev_r_in_s = std::max(dev_r_in_s, hr - hs);
        dev_s_in_r = std::max(dev_s_in_r, hs - hr);
    }
    rep.max_dev_r_in_s = dev_r_in_s;
    rep.max_dev_s_in_r = dev_s_in_r;
    const bool rs = dev_r_in_s <= tol;  // W1(r) within W1(s): s -> r direction
    const bool sr = dev_s_in_r <= tol;
    if (rs && sr)
        rep.verdict = EquivVerdict::equivalent;
    else if (rs)
        rep.verdict = EquivVerdict::s_to_r_only;
    else if (sr)
        rep.verdict = EquivVerdict::r_to_s_only;
    else
        rep.verdict = EquivVerdict::neither;
    return rep;
}

EquivalenceReport completely_order_equivalent(const OperatorTuple& s, const OperatorTuple& r,
                                              double tol) {
    if (s.arity() != r.arity())
        throw std::invalid_argument("completely_order_equivalent: arity mismatch");
    EquivalenceReport rep;
    rep.tol = tol;
    rep.cert_s_to_r = ucp_exists(s, r.dense_all(), tol);
    rep.cert_r_to_s = ucp_exists(r, s.dense_all(), tol);
    const Verdict a = rep.cert_s_to_r->verdict, b = rep.cert_r_to_s->verdict;
    if (a == Verdict::inconclusive || b == Verdict::inconclusive) {
        rep.verdict = EquivVerdict::inconclusive;
        return rep;
    }
    if (a == Verdict::yes && b == Verdict::yes)
        rep.verdict = EquivVerdict::equivalent;
    else if (a == Verdict::yes)
        rep.verdict = EquivVerdict::s_to_r_only;
    else if (b == Verdict::yes)
        rep.verdict = EquivVerdict::r_to_s_only;
    else
        rep.verdict = EquivVerdict::neither;
    if (rep.verdict == EquivVerdict::equivalent && s.unitarity_defect() < 1e-10 &&
        r.unitarity_defect() < 1e-10)
        rep.star_isomorphic = true;  // unitary tuples: equivalence extends to a *-isomorphism
    return rep;
}

LevelLinkResult level_link_check(const OperatorTuple& s, int N, int directions,
                                 std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("level_link_check: N >= 1");
    LevelLinkResult res;
    const bool sa = tuple_self_adjoint(s);
    const int k = sa ? s.arity() : 2 * s.arity();
    auto fan = direction_fan(k, directions, seed);
    for (const auto& c : fan) {
        auto dir = to_complex_direction(c, sa, s.arity());
        const double h1 = support_level1(s, dir);
        if (N == 1) continue;  // identical formulations
        std::vector<ComplexMatrix> B;
        B.reserve(s.arity());
        for (int i = 0; i < s.arity(); ++i) {
            ComplexMatrix Bi(N);
            Bi(0, 0) = dir[i];
            B.push_back(std::move(Bi));
        }
        SupportResult sup = support(s, N, B, 1e-8);
        if (sup.status != Verdict::yes) {
            ++res.failures;
            continue;
        }
        res.max_deviation = std::max(res.max_deviation, std::fabs(h1 - sup.value));
    }
    return res;
}

DiskTuple disk_tuple(int radial, int angular) {
    if (radial < 2 || angular < 3) throw std::invalid_argument("disk_tuple: mesh too coarse");
    OperatorTuple t;
    t.block_dim = 1;
    t.num_blocks = radial * angular;
    t.entries.resize(2);
    for (int ri = 0; ri < radial; ++ri) {
        const double rad = static_cast<double>(ri) / (radial - 1);
        for (int ai = 0; ai < angular; ++ai) {
            const double th = kTwoPi * ai / angular;
            ComplexMatrix x(1), y(1);
            x(0, 0) = Cx{rad * std::cos(th), 0.0};
            y(0, 0) = Cx{rad * std::sin(th), 0.0};
            t.entries[0].push_back(std::move(x));
            t.entries[1].push_back(std::move(y));
        }
    }
    DiskTuple d;
    d.tuple = std::move(t);
    d.resolution = std::max(1.0 / (radial - 1), kTwoPi / angular);
    return d;
}

}  // namespace oskit::matrange
