#pragma once

// Straight-line scalar reference implementations. Nested std::vector storage,
// explicit loops, no use of the library's Matrix arithmetic or tape.

#include <map>
#include <optional>
#include <vector>

#include "scrnn/params.hpp"
#include "scrnn/sc_gru.hpp"

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row-major, Mat[r][c]

Mat from(const scrnn::Matrix& m);
Vec flat(const scrnn::Matrix& m);  // column vectors / row vectors as a flat list
scrnn::Matrix to_matrix(const Mat& m);
scrnn::Matrix to_column(const Vec& v);

Mat zeros(std::size_t r, std::size_t c);
Vec matvec(const Mat& A, const Vec& x);
Mat matmul(const Mat& A, const Mat& B);
double sigmoid(double x);
Vec softmax(const Vec& s, double tau);

struct SkeletonAttentionOut {
  Vec alphas;
  Mat attended;
  Vec context;
};
SkeletonAttentionOut skeleton_attention(const Mat& F, const Vec& h_prev, const Mat& U_eh, const Mat& U_ef,
                                        const Vec& w_e, const Vec& b_e, double tau1);
SkeletonAttentionOut skeleton_attention_factors(const Mat& F, const Vec& alphas);

Vec joint_attention(const Mat& F_tp, int k, const Mat& U_cb, const Mat& U_cm, const Vec& w_c, const Vec& b_l,
                    double tau2);
Mat coattention_map(const Mat& F_a, const Mat& F_tp, int k, const Vec& alphas);
Mat coattention_context(const Mat& F_co, int k);

struct SkeletonGru {
  Mat W_zx, W_zh, W_za, W_rx, W_rh, W_ra, W_cx, W_ch;
  Vec b_z, b_r, b_c;
};
Vec skeleton_gru_step(const Vec& x, const Vec& h, const Vec& h_a, const SkeletonGru& w);

struct SpatialGru {
  Mat W_zm, W_zq, W_zo, W_rm, W_rq, W_ro, W_cm, W_cq;
  Mat B_z, B_r, B_c;
};
Mat spatial_gru_step(const Mat& M, const Mat& Q, const Mat& O, const SpatialGru& w);

struct Gate {
  Mat W_fh, W_fm;
  Vec b_h, b_m;
};
Vec confidence_gate(const Vec& h_joint, const Vec& m_joint, const Gate& w, double rho);

Mat coefficient_matrix(const std::vector<Vec>& truth, double tau);
Mat weighted_gram(const std::vector<Vec>& frames, const Mat& coeffs);
double gram_loss(const std::vector<Vec>& pred, const std::vector<Vec>& truth, double tau, double divisor);
double mse_loss(const std::vector<Vec>& pred, const std::vector<Vec>& truth);

// Whole-model reference.

struct Params {
  Mat U_eh, U_ef;
  Vec w_e, b_e;
  Mat U_cb, U_cm;
  Vec w_c, b_l;
  SkeletonGru skel;
  SpatialGru spat;
  Gate gate;
  std::optional<Mat> P_out;
};
Params from(const scrnn::ParameterSet& p);

/// Factors to use instead of the computed ones; empty means compute.
struct Factors {
  std::optional<Vec> skeleton;
  std::map<int, Vec> joint;
};

struct StepOut {
  Vec x_next;
  Vec h;
  Vec gamma;
  std::vector<Mat> Q;  // per joint, last visit
};

StepOut sc_gru_step(const Params& p, double tau1, double tau2, double rho, const std::vector<int>& order,
                    const Mat& F, const Vec& x, const Vec& h_prev, const Factors& factors);

/// Encoder over columns 1..T-1 (unless zero init), then `horizon` self-fed steps.
std::vector<Vec> rollout(const Params& p, double tau1, double tau2, double rho, const std::vector<int>& order,
                         bool encoder_init, const Mat& F, int horizon, bool unit_skeleton, bool unit_joint);

}  // namespace oracle
