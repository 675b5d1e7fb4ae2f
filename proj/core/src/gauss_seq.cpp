#include "pmbm/gauss_seq.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pmbm {

namespace {

void symmetrize(Eigen::MatrixXd& P) {
    Eigen::MatrixXd t = 0.5 * (P + P.transpose());
    P = std::move(t);
}

Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& A, const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
        throw NumericalError(std::string(what) + " is not positive definite");
    }
    return llt;
}

void require_nx(int have, int want) {
    if (have != want) throw std::invalid_argument("state dimension mismatch between sequence and model");
}

void require_z(const ModelLG& m, const Eigen::VectorXd& z) {
    if (z.size() != m.nz()) throw std::invalid_argument("measurement dimension mismatch");
}

// Covariance of the steps of `cov` after dropping the first `drop`, extended by one predicted step.
Eigen::MatrixXd extend_cov(const Eigen::MatrixXd& cov, int nx, int drop, const ModelLG& m) {
    const int steps = static_cast<int>(cov.rows()) / nx;
    const int n = (steps - drop) * nx;
    const int off = drop * nx;
    const int last = (steps - 1) * nx;
    Eigen::MatrixXd out(n + nx, n + nx);
    out.topLeftCorner(n, n) = cov.bottomRightCorner(n, n);
    Eigen::MatrixXd cross = cov.block(off, last, n, nx) * m.F().transpose();
    out.topRightCorner(n, nx) = cross;
    out.bottomLeftCorner(nx, n) = cross.transpose();
    Eigen::MatrixXd corner = m.F() * cov.block(last, last, nx, nx) * m.F().transpose() + m.Q();
    symmetrize(corner);
    out.bottomRightCorner(nx, nx) = corner;
    return out;
}

Eigen::VectorXd extend_mean(const Eigen::VectorXd& mean, int nx, const ModelLG& m) {
    Eigen::VectorXd out(mean.size() + nx);
    out.head(mean.size()) = mean;
    out.tail(nx) = m.F() * mean.tail(nx);
    return out;
}

// Conditions a jointly Gaussian block of steps on a measurement of its last step.
double condition_on_last(Eigen::Ref<Eigen::VectorXd> mean, Eigen::MatrixXd& cov, int nx,
                         const ModelLG& m, const Eigen::VectorXd& z) {
    const Eigen::Index last = cov.rows() - nx;
    Eigen::MatrixXd HP = m.H() * cov.middleRows(last, nx);
    Eigen::MatrixXd S = HP.middleCols(last, nx) * m.H().transpose() + m.R();
    symmetrize(S);
    const auto llt = checked_llt(S, "innovation covariance");
    const Eigen::VectorXd resid = z - m.H() * mean.segment(last, nx);
    const Eigen::MatrixXd Kt = llt.solve(HP);
    mean += Kt.transpose() * resid;
    cov.noalias() -= Kt.transpose() * HP;
    symmetrize(cov);
    return gaussian_log_density(resid, llt);
}

// Forward block elimination of a block tridiagonal information matrix.
struct Elimination {
    std::vector<Eigen::LLT<Eigen::MatrixXd>> S;
    std::vector<Eigen::MatrixXd> A;  // A_i = -S_i^{-1} U_i
    std::vector<Eigen::VectorXd> g;
};

constexpr double kMaxCondition = 1e14;

Elimination eliminate(const InfoSeq& s) {
    const int nx = s.nx;
    const std::size_t nu = s.diag.size();
    Elimination e;
    e.S.reserve(nu);
    e.A.reserve(nu);
    e.g.reserve(nu);
    Eigen::MatrixXd Si = s.diag[0];
    Eigen::VectorXd gi = s.ivec.head(nx);
    double pmin = std::numeric_limits<double>::infinity();
    double pmax = 0.0;
    for (std::size_t i = 0; i < nu; ++i) {
        Eigen::LLT<Eigen::MatrixXd> llt(Si);
        if (llt.info() != Eigen::Success) throw NumericalError("information matrix is singular");
        const Eigen::VectorXd d = Eigen::MatrixXd(llt.matrixL()).diagonal();
        pmin = std::min(pmin, d.minCoeff() * d.minCoeff());
        pmax = std::max(pmax, d.maxCoeff() * d.maxCoeff());
        e.S.push_back(llt);
        e.g.push_back(gi);
        if (i + 1 < nu) {
            Eigen::MatrixXd Ai = -e.S.back().solve(s.upper[i]);
            Eigen::MatrixXd next = s.diag[i + 1] + s.upper[i].transpose() * Ai;
            symmetrize(next);
            Eigen::VectorXd gnext = s.ivec.segment(static_cast<Eigen::Index>(i + 1) * nx, nx) +
                                    Ai.transpose() * e.g.back();
            e.A.push_back(std::move(Ai));
            Si = std::move(next);
            gi = std::move(gnext);
        }
    }
    if (!(pmin > 0.0) || pmax / pmin > kMaxCondition) {
        throw NumericalError("information matrix is numerically singular");
    }
    return e;
}

std::vector<Eigen::VectorXd> back_substitute(const Elimination& e) {
    const std::size_t nu = e.S.size();
    std::vector<Eigen::VectorXd> x(nu);
    x[nu - 1] = e.S[nu - 1].solve(e.g[nu - 1]);
    for (std::size_t i = nu - 1; i-- > 0;) {
        x[i] = e.S[i].solve(e.g[i]) + e.A[i] * x[i + 1];
    }
    return x;
}

template <class Seq>
void require_inside(const Seq& s, TimeWindow w) {
    if (w.alpha < s.first() || w.gamma > s.last()) {
        throw std::invalid_argument("requested steps are outside the sequence window");
    }
}

}  // namespace

double gaussian_log_density(const Eigen::VectorXd& residual, const Eigen::LLT<Eigen::MatrixXd>& S_llt) {
    const Eigen::MatrixXd L = S_llt.matrixL();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < L.rows(); ++i) logdet += 2.0 * std::log(L(i, i));
    const Eigen::VectorXd w = L.triangularView<Eigen::Lower>().solve(residual);
    return -0.5 * (w.squaredNorm() + logdet +
                   static_cast<double>(residual.size()) * std::log(2.0 * std::numbers::pi));
}

ModelLG::ModelLG(Eigen::MatrixXd F, Eigen::MatrixXd Q, Eigen::MatrixXd H, Eigen::MatrixXd R)
    : F_(std::move(F)), Q_(std::move(Q)), H_(std::move(H)), R_(std::move(R)) {
    const auto nx = F_.rows();
    if (F_.cols() != nx || Q_.rows() != nx || Q_.cols() != nx || H_.cols() != nx ||
        R_.rows() != H_.rows() || R_.cols() != H_.rows() || nx == 0 || H_.rows() == 0) {
        throw std::invalid_argument("inconsistent linear Gaussian model dimensions");
    }
    symmetrize(Q_);
    symmetrize(R_);
    const auto q_llt = checked_llt(Q_, "process noise covariance Q");
    const auto r_llt = checked_llt(R_, "measurement noise covariance R");
    Q_inv_ = q_llt.solve(Eigen::MatrixXd::Identity(nx, nx));
    symmetrize(Q_inv_);
    Ft_Qinv_F_ = F_.transpose() * Q_inv_ * F_;
    symmetrize(Ft_Qinv_F_);
    neg_Ft_Qinv_ = -F_.transpose() * Q_inv_;
    Ht_Rinv_ = r_llt.solve(H_).transpose();
    Ht_Rinv_H_ = Ht_Rinv_ * H_;
    symmetrize(Ht_Rinv_H_);
}

ModelLG constant_velocity_2d(double T, double sigma_v, double sigma_r) {
    if (!(T > 0.0) || !(sigma_v > 0.0) || !(sigma_r > 0.0)) {
        throw std::invalid_argument("constant velocity model needs positive T, sigma_v, sigma_r");
    }
    const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    Eigen::MatrixXd F = Eigen::MatrixXd::Identity(4, 4);
    F.topRightCorner(2, 2) = T * I;
    Eigen::MatrixXd Q(4, 4);
    Q << (T * T * T / 3.0) * I, (T * T / 2.0) * I, (T * T / 2.0) * I, T * I;
    Q *= sigma_v * sigma_v;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2, 4);
    H.leftCols(2) = I;
    Eigen::MatrixXd R = sigma_r * sigma_r * Eigen::MatrixXd::Identity(2, 2);
    return ModelLG(F, Q, H, R);
}

MomentSeq MomentSeq::single(TimeStep k, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
    if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
        throw std::invalid_argument("mean/covariance dimension mismatch");
    }
    MomentSeq s;
    s.begin = s.end = k;
    s.nx = static_cast<int>(mean.size());
    s.mean = mean;
    s.cov = cov;
    symmetrize(s.cov);
    return s;
}

InfoSeq InfoSeq::single(TimeStep k, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
    if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
        throw std::invalid_argument("mean/covariance dimension mismatch");
    }
    InfoSeq s;
    s.begin = s.end = k;
    s.nx = static_cast<int>(mean.size());
    const auto llt = checked_llt(cov, "state covariance");
    Eigen::MatrixXd Y = llt.solve(Eigen::MatrixXd::Identity(s.nx, s.nx));
    symmetrize(Y);
    s.ivec = llt.solve(mean);
    s.diag.push_back(std::move(Y));
    s.last_mean = mean;
    s.last_cov = cov;
    symmetrize(s.last_cov);
    return s;
}

LScanSeq LScanSeq::single(TimeStep k, int L, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
    if (L < 1) throw std::invalid_argument("L-scan depth must be at least 1");
    if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
        throw std::invalid_argument("mean/covariance dimension mismatch");
    }
    LScanSeq s;
    s.begin = s.end = k;
    s.nx = static_cast<int>(mean.size());
    s.L = L;
    s.mean = mean;
    s.tail_cov = cov;
    symmetrize(s.tail_cov);
    return s;
}

MomentSeq predict_moment(const MomentSeq& s, const ModelLG& m) {
    require_nx(s.nx, m.nx());
    MomentSeq out;
    out.begin = s.begin;
    out.end = s.end + 1;
    out.nx = s.nx;
    out.mean = extend_mean(s.mean, s.nx, m);
    out.cov = extend_cov(s.cov, s.nx, 0, m);
    return out;
}

MomentUpdate update_moment(const MomentSeq& s, const ModelLG& m, const Eigen::VectorXd& z) {
    require_nx(s.nx, m.nx());
    require_z(m, z);
    MomentSeq out = s;
    const double ll = condition_on_last(out.mean, out.cov, s.nx, m, z);
    return {std::move(out), ll};
}

InfoSeq predict_info(const InfoSeq& s, const ModelLG& m) {
    require_nx(s.nx, m.nx());
    const int nx = s.nx;
    InfoSeq out = s;
    out.end = s.end + 1;
    out.diag.back() += m.Ft_Qinv_F();
    symmetrize(out.diag.back());
    out.upper.push_back(m.neg_Ft_Qinv());
    out.diag.push_back(m.Q_inv());
    out.ivec.conservativeResize(s.ivec.size() + nx);
    out.ivec.tail(nx).setZero();
    out.last_mean = m.F() * s.last_mean;
    out.last_cov = m.F() * s.last_cov * m.F().transpose() + m.Q();
    symmetrize(out.last_cov);
    return out;
}

InfoUpdate update_info(const InfoSeq& s, const ModelLG& m, const Eigen::VectorXd& z) {
    require_nx(s.nx, m.nx());
    require_z(m, z);
    const int nx = s.nx;
    InfoSeq out = s;
    out.ivec.tail(nx) += m.Ht_Rinv() * z;
    out.diag.back() += m.Ht_Rinv_H();
    symmetrize(out.diag.back());
    const double ll = condition_on_last(out.last_mean, out.last_cov, nx, m, z);
    return {std::move(out), ll};
}

LScanSeq predict_lscan(const LScanSeq& s, const ModelLG& m) {
    require_nx(s.nx, m.nx());
    LScanSeq out;
    out.begin = s.begin;
    out.end = s.end + 1;
    out.nx = s.nx;
    out.L = s.L;
    out.mean = extend_mean(s.mean, s.nx, m);
    out.old_blocks = s.old_blocks;
    if (s.tail_steps() < s.L) {
        out.tail_cov = extend_cov(s.tail_cov, s.nx, 0, m);
    } else {
        out.old_blocks.push_back(s.tail_cov.topLeftCorner(s.nx, s.nx));
        out.tail_cov = extend_cov(s.tail_cov, s.nx, 1, m);
    }
    return out;
}

LScanUpdate update_lscan(const LScanSeq& s, const ModelLG& m, const Eigen::VectorXd& z) {
    require_nx(s.nx, m.nx());
    require_z(m, z);
    LScanSeq out = s;
    const Eigen::Index n = out.tail_cov.rows();
    const double ll = condition_on_last(out.mean.tail(n), out.tail_cov, s.nx, m, z);
    return {std::move(out), ll};
}

GaussianBlock recover_moments(const InfoSeq& s, TimeWindow steps) {
    require_inside(s, steps);
    const int nx = s.nx;
    const Elimination e = eliminate(s);
    const auto x = back_substitute(e);
    const auto t1 = static_cast<std::size_t>(steps.alpha - s.begin);
    const auto t2 = static_cast<std::size_t>(steps.gamma - s.begin);
    const std::size_t nu = e.S.size();
    const std::size_t w = t2 - t1 + 1;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(nx, nx);

    Eigen::MatrixXd diag_next = e.S[nu - 1].solve(I);
    for (std::size_t i = nu - 1; i-- > t2;) {
        diag_next = e.S[i].solve(I) + e.A[i] * diag_next * e.A[i].transpose();
    }
    GaussianBlock out;
    out.mean.resize(static_cast<Eigen::Index>(w) * nx);
    out.cov.resize(static_cast<Eigen::Index>(w) * nx, static_cast<Eigen::Index>(w) * nx);
    auto blk = [&](std::size_t a, std::size_t b) {
        return out.cov.block(static_cast<Eigen::Index>(a) * nx, static_cast<Eigen::Index>(b) * nx, nx, nx);
    };
    blk(w - 1, w - 1) = diag_next;
    for (std::size_t ii = w - 1; ii-- > 0;) {
        const std::size_t i = t1 + ii;
        for (std::size_t jj = ii + 1; jj < w; ++jj) {
            Eigen::MatrixXd c = e.A[i] * blk(ii + 1, jj);
            blk(ii, jj) = c;
            blk(jj, ii) = c.transpose();
        }
        Eigen::MatrixXd d = e.S[i].solve(I) + e.A[i] * blk(ii + 1, ii + 1) * e.A[i].transpose();
        blk(ii, ii) = d;
    }
    symmetrize(out.cov);
    for (std::size_t ii = 0; ii < w; ++ii) {
        out.mean.segment(static_cast<Eigen::Index>(ii) * nx, nx) = x[t1 + ii];
    }
    return out;
}

Eigen::VectorXd recover_mean(const InfoSeq& s) {
    const auto x = back_substitute(eliminate(s));
    Eigen::VectorXd out(static_cast<Eigen::Index>(x.size()) * s.nx);
    for (std::size_t i = 0; i < x.size(); ++i) out.segment(static_cast<Eigen::Index>(i) * s.nx, s.nx) = x[i];
    return out;
}

Eigen::MatrixXd implied_covariance(const LScanSeq& s) {
    const Eigen::Index n = static_cast<Eigen::Index>(s.steps()) * s.nx;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < s.old_blocks.size(); ++i) {
        const auto o = static_cast<Eigen::Index>(i) * s.nx;
        P.block(o, o, s.nx, s.nx) = s.old_blocks[i];
    }
    const Eigen::Index t = s.tail_cov.rows();
    P.bottomRightCorner(t, t) = s.tail_cov;
    return P;
}

MomentSeq marginalize_steps(const MomentSeq& s, TimeWindow keep) {
    require_inside(s, keep);
    if (keep.alpha == s.begin && keep.gamma == s.end) return s;
    const int nx = s.nx;
    const auto o = static_cast<Eigen::Index>(keep.alpha - s.begin) * nx;
    const auto n = static_cast<Eigen::Index>(keep.length()) * nx;
    MomentSeq out;
    out.begin = keep.alpha;
    out.end = keep.gamma;
    out.nx = nx;
    out.mean = s.mean.segment(o, n);
    out.cov = s.cov.block(o, o, n, n);
    return out;
}

MomentSeq marginalize_steps(const InfoSeq& s, TimeWindow keep) {
    GaussianBlock b = recover_moments(s, keep);
    MomentSeq out;
    out.begin = keep.alpha;
    out.end = keep.gamma;
    out.nx = s.nx;
    out.mean = std::move(b.mean);
    out.cov = std::move(b.cov);
    return out;
}

SeqDensity marginalize_steps(const LScanSeq& s, TimeWindow keep) {
    require_inside(s, keep);
    if (keep.alpha == s.begin && keep.gamma == s.end) return SeqDensity(s);
    const int nx = s.nx;
    const auto o = static_cast<Eigen::Index>(keep.alpha - s.begin) * nx;
    const auto n = static_cast<Eigen::Index>(keep.length()) * nx;
    if (keep.gamma == s.end) {
        LScanSeq out;
        out.begin = keep.alpha;
        out.end = s.end;
        out.nx = nx;
        out.L = s.L;
        out.mean = s.mean.segment(o, n);
        const TimeStep tail_first = s.end - s.tail_steps() + 1;
        if (keep.alpha >= tail_first) {
            out.tail_cov = s.tail_cov.bottomRightCorner(n, n);
        } else {
            out.old_blocks.assign(s.old_blocks.begin() + (keep.alpha - s.begin), s.old_blocks.end());
            out.tail_cov = s.tail_cov;
        }
        return SeqDensity(std::move(out));
    }
    MomentSeq out;
    out.begin = keep.alpha;
    out.end = keep.gamma;
    out.nx = nx;
    out.mean = s.mean.segment(o, n);
    out.cov = implied_covariance(s).block(o, o, n, n);
    return SeqDensity(std::move(out));
}

SeqDensity::SeqDensity(MomentSeq s) : impl_(std::make_shared<const Variant>(std::move(s))) {}
SeqDensity::SeqDensity(InfoSeq s) : impl_(std::make_shared<const Variant>(std::move(s))) {}
SeqDensity::SeqDensity(LScanSeq s) : impl_(std::make_shared<const Variant>(std::move(s))) {}

SeqDensity SeqDensity::single(SeqBackend backend, int L, TimeStep k, const Eigen::VectorXd& mean,
                              const Eigen::MatrixXd& cov) {
    switch (backend) {
        case SeqBackend::moment: return SeqDensity(MomentSeq::single(k, mean, cov));
        case SeqBackend::info: return SeqDensity(InfoSeq::single(k, mean, cov));
        case SeqBackend::lscan: return SeqDensity(LScanSeq::single(k, L, mean, cov));
    }
    throw std::invalid_argument("unknown sequence backend");
}

SeqBackend SeqDensity::backend() const {
    switch (variant().index()) {
        case 0: return SeqBackend::moment;
        case 1: return SeqBackend::info;
        default: return SeqBackend::lscan;
    }
}

TimeStep SeqDensity::first() const {
    return std::visit([](const auto& s) { return s.first(); }, variant());
}
TimeStep SeqDensity::last() const {
    return std::visit([](const auto& s) { return s.last(); }, variant());
}
int SeqDensity::nx() const {
    return std::visit([](const auto& s) { return s.nx; }, variant());
}

SeqDensity predict(const SeqDensity& s, const ModelLG& m) {
    return std::visit(
        [&](const auto& x) -> SeqDensity {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, MomentSeq>) return predict_moment(x, m);
            else if constexpr (std::is_same_v<T, InfoSeq>) return predict_info(x, m);
            else return predict_lscan(x, m);
        },
        s.variant());
}

SeqUpdate update(const SeqDensity& s, const ModelLG& m, const Eigen::VectorXd& z) {
    return std::visit(
        [&](const auto& x) -> SeqUpdate {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, MomentSeq>) {
                auto r = update_moment(x, m, z);
                return {SeqDensity(std::move(r.seq)), r.loglik};
            } else if constexpr (std::is_same_v<T, InfoSeq>) {
                auto r = update_info(x, m, z);
                return {SeqDensity(std::move(r.seq)), r.loglik};
            } else {
                auto r = update_lscan(x, m, z);
                return {SeqDensity(std::move(r.seq)), r.loglik};
            }
        },
        s.variant());
}

GaussianBlock last_state(const SeqDensity& s) {
    return std::visit(
        [](const auto& x) -> GaussianBlock {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, InfoSeq>) {
                return {x.last_mean, x.last_cov};
            } else if constexpr (std::is_same_v<T, MomentSeq>) {
                return {x.mean.tail(x.nx), x.cov.bottomRightCorner(x.nx, x.nx)};
            } else {
                return {x.mean.tail(x.nx), x.tail_cov.bottomRightCorner(x.nx, x.nx)};
            }
        },
        s.variant());
}

GaussianBlock block_moments(const SeqDensity& s, TimeWindow steps) {
    return std::visit(
        [&](const auto& x) -> GaussianBlock {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, InfoSeq>) {
                return recover_moments(x, steps);
            } else if constexpr (std::is_same_v<T, MomentSeq>) {
                MomentSeq y = marginalize_steps(x, steps);
                return {std::move(y.mean), std::move(y.cov)};
            } else {
                require_inside(x, steps);
                const auto o = static_cast<Eigen::Index>(steps.alpha - x.begin) * x.nx;
                const auto n = static_cast<Eigen::Index>(steps.length()) * x.nx;
                return {x.mean.segment(o, n), implied_covariance(x).block(o, o, n, n)};
            }
        },
        s.variant());
}

Eigen::VectorXd mean_sequence(const SeqDensity& s) {
    return std::visit(
        [](const auto& x) -> Eigen::VectorXd {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, InfoSeq>) return recover_mean(x);
            else return x.mean;
        },
        s.variant());
}

SeqDensity marginalize_steps(const SeqDensity& s, TimeWindow keep) {
    if (keep.alpha == s.first() && keep.gamma == s.last()) return s;
    return std::visit([&](const auto& x) -> SeqDensity { return marginalize_steps(x, keep); },
                      s.variant());
}

Innovation innovation(const GaussianBlock& last, const ModelLG& m, const Eigen::VectorXd& z) {
    require_z(m, z);
    if (last.mean.size() != m.nx()) throw std::invalid_argument("state dimension mismatch");
    Eigen::MatrixXd S = m.H() * last.cov * m.H().transpose() + m.R();
    symmetrize(S);
    Innovation out;
    out.S_llt = checked_llt(S, "innovation covariance");
    out.residual = z - m.H() * last.mean;
    out.mahalanobis2 = out.residual.dot(out.S_llt.solve(out.residual));
    out.log_density = gaussian_log_density(out.residual, out.S_llt);
    return out;
}

double log_predictive_likelihood(const SeqDensity& s, const ModelLG& m, const Eigen::VectorXd& z) {
    return innovation(last_state(s), m, z).log_density;
}

double predictive_likelihood(const SeqDensity& s, const ModelLG& m, const Eigen::VectorXd& z) {
    return std::exp(log_predictive_likelihood(s, m, z));
}

double innovation_distance2(const SeqDensity& s, const ModelLG& m, const Eigen::VectorXd& z) {
    return innovation(last_state(s), m, z).mahalanobis2;
}

std::size_t nonzero_count(const MomentSeq& s) {
    const auto n = static_cast<std::size_t>(s.nx) * static_cast<std::size_t>(s.steps());
    return n * n;
}

std::size_t nonzero_count(const InfoSeq& s) {
    const auto b = static_cast<std::size_t>(s.nx) * static_cast<std::size_t>(s.nx);
    return b * (s.diag.size() + 2 * s.upper.size());
}

std::size_t nonzero_count(const LScanSeq& s) {
    const auto b = static_cast<std::size_t>(s.nx) * static_cast<std::size_t>(s.nx);
    const auto t = static_cast<std::size_t>(s.tail_steps());
    return b * (s.old_blocks.size() + t * t);
}

std::size_t nonzero_count(const SeqDensity& s) {
    return std::visit([](const auto& x) { return nonzero_count(x); }, s.variant());
}

}  // namespace pmbm
