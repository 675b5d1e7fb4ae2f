#pragma once

#include "pmbm/trajectory.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

namespace pmbm {

/// Raised when a matrix that must be positive definite fails its Cholesky factorization.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Linear Gaussian motion and measurement model x' = F x + q, z = H x + r.
class ModelLG {
  public:
    ModelLG(Eigen::MatrixXd F, Eigen::MatrixXd Q, Eigen::MatrixXd H, Eigen::MatrixXd R);

    [[nodiscard]] int nx() const { return static_cast<int>(F_.rows()); }
    [[nodiscard]] int nz() const { return static_cast<int>(H_.rows()); }

    [[nodiscard]] const Eigen::MatrixXd& F() const { return F_; }
    [[nodiscard]] const Eigen::MatrixXd& Q() const { return Q_; }
    [[nodiscard]] const Eigen::MatrixXd& H() const { return H_; }
    [[nodiscard]] const Eigen::MatrixXd& R() const { return R_; }

    // cached products for the information form
    [[nodiscard]] const Eigen::MatrixXd& Q_inv() const { return Q_inv_; }
    [[nodiscard]] const Eigen::MatrixXd& Ft_Qinv_F() const { return Ft_Qinv_F_; }
    [[nodiscard]] const Eigen::MatrixXd& neg_Ft_Qinv() const { return neg_Ft_Qinv_; }
    [[nodiscard]] const Eigen::MatrixXd& Ht_Rinv() const { return Ht_Rinv_; }
    [[nodiscard]] const Eigen::MatrixXd& Ht_Rinv_H() const { return Ht_Rinv_H_; }

  private:
    Eigen::MatrixXd F_, Q_, H_, R_;
    Eigen::MatrixXd Q_inv_, Ft_Qinv_F_, neg_Ft_Qinv_, Ht_Rinv_, Ht_Rinv_H_;
};

/// Nearly constant velocity model in 2-D with state [x, y, vx, vy] and position measurements.
ModelLG constant_velocity_2d(double T, double sigma_v, double sigma_r);

/// Gaussian over a contiguous block of steps.
struct GaussianBlock {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

/// Full moment form of a state sequence density.
struct MomentSeq {
    TimeStep begin = 0;
    TimeStep end = 0;
    int nx = 0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    static MomentSeq single(TimeStep k, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);
    [[nodiscard]] TimeStep first() const { return begin; }
    [[nodiscard]] TimeStep last() const { return end; }
    [[nodiscard]] std::int64_t steps() const { return end - begin + 1; }
};

/// Information form with a block tridiagonal information matrix stored as diagonal blocks
/// diag[i] = Y^[i,i] and super-diagonal blocks upper[i] = Y^[i,i+1].
/// The current-state moments are cached for likelihood evaluation.
struct InfoSeq {
    TimeStep begin = 0;
    TimeStep end = 0;
    int nx = 0;
    Eigen::VectorXd ivec;
    std::vector<Eigen::MatrixXd> diag;
    std::vector<Eigen::MatrixXd> upper;
    Eigen::VectorXd last_mean;
    Eigen::MatrixXd last_cov;

    static InfoSeq single(TimeStep k, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);
    [[nodiscard]] TimeStep first() const { return begin; }
    [[nodiscard]] TimeStep last() const { return end; }
    [[nodiscard]] std::int64_t steps() const { return end - begin + 1; }
};

/// L-scan approximation: steps older than the most recent L are independent of the tail and
/// of each other, each kept only through its marginal covariance.
struct LScanSeq {
    TimeStep begin = 0;
    TimeStep end = 0;
    int nx = 0;
    int L = 1;
    Eigen::VectorXd mean;
    std::vector<Eigen::MatrixXd> old_blocks;
    Eigen::MatrixXd tail_cov;

    static LScanSeq single(TimeStep k, int L, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);
    [[nodiscard]] TimeStep first() const { return begin; }
    [[nodiscard]] TimeStep last() const { return end; }
    [[nodiscard]] std::int64_t steps() const { return end - begin + 1; }
    [[nodiscard]] int tail_steps() const { return static_cast<int>(tail_cov.rows()) / nx; }
};

struct MomentUpdate {
    MomentSeq seq;
    double loglik;
};
struct InfoUpdate {
    InfoSeq seq;
    double loglik;
};
struct LScanUpdate {
    LScanSeq seq;
    double loglik;
};

MomentSeq predict_moment(const MomentSeq& s, const ModelLG& m);
MomentUpdate update_moment(const MomentSeq& s, const ModelLG& m, const Eigen::VectorXd& z);
InfoSeq predict_info(const InfoSeq& s, const ModelLG& m);
InfoUpdate update_info(const InfoSeq& s, const ModelLG& m, const Eigen::VectorXd& z);
LScanSeq predict_lscan(const LScanSeq& s, const ModelLG& m);
LScanUpdate update_lscan(const LScanSeq& s, const ModelLG& m, const Eigen::VectorXd& z);

/// Mean and covariance of the requested steps, computed by block tridiagonal elimination
/// without forming the inverse of the information matrix.
GaussianBlock recover_moments(const InfoSeq& s, TimeWindow steps);
/// Full mean sequence Y^{-1} y.
Eigen::VectorXd recover_mean(const InfoSeq& s);

enum class SeqBackend { moment, info, lscan };

/// Immutable handle to a state sequence density of any backend. Copies share storage.
class SeqDensity {
  public:
    using Variant = std::variant<MomentSeq, InfoSeq, LScanSeq>;

    SeqDensity() = default;
    SeqDensity(MomentSeq s);
    SeqDensity(InfoSeq s);
    SeqDensity(LScanSeq s);

    /// Single-step density in the requested backend.
    static SeqDensity single(SeqBackend backend, int L, TimeStep k, const Eigen::VectorXd& mean,
                             const Eigen::MatrixXd& cov);

    [[nodiscard]] bool valid() const { return static_cast<bool>(impl_); }
    [[nodiscard]] SeqBackend backend() const;
    [[nodiscard]] TimeStep first() const;
    [[nodiscard]] TimeStep last() const;
    [[nodiscard]] int nx() const;
    [[nodiscard]] TimeWindow window() const { return {first(), last()}; }
    [[nodiscard]] const Variant& variant() const { return *impl_; }
    template <class T>
    [[nodiscard]] const T* get_if() const {
        return impl_ ? std::get_if<T>(impl_.get()) : nullptr;
    }
    /// True when both handles refer to the same stored density.
    [[nodiscard]] bool shares_storage(const SeqDensity& o) const { return impl_ == o.impl_; }

  private:
    std::shared_ptr<const Variant> impl_;
};

struct SeqUpdate {
    SeqDensity seq;
    double loglik;
};

SeqDensity predict(const SeqDensity& s, const ModelLG& m);
SeqUpdate update(const SeqDensity& s, const ModelLG& m, const Eigen::VectorXd& z);

/// Marginal of the current (last) state.
GaussianBlock last_state(const SeqDensity& s);
/// Marginal of an arbitrary contiguous block of steps.
GaussianBlock block_moments(const SeqDensity& s, TimeWindow steps);
/// Mean of the whole sequence, stacked.
Eigen::VectorXd mean_sequence(const SeqDensity& s);

MomentSeq marginalize_steps(const MomentSeq& s, TimeWindow keep);
MomentSeq marginalize_steps(const InfoSeq& s, TimeWindow keep);
SeqDensity marginalize_steps(const LScanSeq& s, TimeWindow keep);
SeqDensity marginalize_steps(const SeqDensity& s, TimeWindow keep);

/// Gaussian evidence N(z; H m, H P H' + R) of the last state, without detection probability.
double predictive_likelihood(const SeqDensity& s, const ModelLG& m, const Eigen::VectorXd& z);
double log_predictive_likelihood(const SeqDensity& s, const ModelLG& m, const Eigen::VectorXd& z);
/// Squared Mahalanobis distance of the innovation of z.
double innovation_distance2(const SeqDensity& s, const ModelLG& m, const Eigen::VectorXd& z);

/// Structural nonzero count of the covariance (moment, L-scan) or information matrix.
std::size_t nonzero_count(const SeqDensity& s);
std::size_t nonzero_count(const MomentSeq& s);
std::size_t nonzero_count(const InfoSeq& s);
std::size_t nonzero_count(const LScanSeq& s);

/// Dense covariance implied by an L-scan density (block diagonal old part plus tail).
Eigen::MatrixXd implied_covariance(const LScanSeq& s);

/// Innovation statistics for a Gaussian last state.
struct Innovation {
    Eigen::VectorXd residual;
    Eigen::LLT<Eigen::MatrixXd> S_llt;
    double mahalanobis2 = 0.0;
    double log_density = 0.0;
};
Innovation innovation(const GaussianBlock& last, const ModelLG& m, const Eigen::VectorXd& z);

/// log N(x; 0, S) given the residual and the Cholesky factor of S.
double gaussian_log_density(const Eigen::VectorXd& residual, const Eigen::LLT<Eigen::MatrixXd>& S_llt);

}  // namespace pmbm
