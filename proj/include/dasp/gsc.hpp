// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DASP_GSC_HPP
#define DASP_GSC_HPP

#include <vector>

#include "dasp/geometry.hpp"
#include "dasp/stft.hpp"
#include "dasp/types.hpp"

namespace dasp {

/// Distortionless delay-and-sum branch: per-bin weights
/// w_c = a(theta) / (a^H a) = a(theta) / M, so w_c^H a(theta) = 1.
struct FixedBeamformer {
  CMat weights;  // M x bins
};

FixedBeamformer make_fixed_beamformer(const ArrayGeometry& geom, Scalar theta_deg,
                                      const StftConfig& cfg);

/// Projection blocking matrix per bin: full = I - a a^H / (a^H a), a
/// Hermitian idempotent projector of rank M - 1. `reduced` drops the last
/// column, leaving M-1 independent columns; reduced^H a(theta) = 0, so the
/// lower branch carries no target component and the RLS state stays
/// full-rank.
struct BlockingMatrix {
  std::vector<CMat> full;     // per bin, M x M
  std::vector<CMat> reduced;  // per bin, M x (M-1)
};

BlockingMatrix make_blocking_matrix(const ArrayGeometry& geom, Scalar theta_deg,
                                    const StftConfig& cfg);

struct RlsParams {
  Scalar lambda = 0.995;    // forgetting factor, (0, 1]
  Scalar delta_reg = 0.01;  // P(0) = delta_reg^-1 I
  void validate() const;
};

/// Per-bin adaptive noise canceller state.
struct RlsBinState {
  CVec w;  // adaptive weights, dim M-1
  CMat p;  // inverse covariance, Hermitian positive definite
  Scalar lambda = 0.995;
};

RlsBinState make_rls_state(Index dim, const RlsParams& params);

struct RlsStep {
  Complex e;   // a posteriori error, the enhanced coefficient
  Complex xi;  // a priori error
};

/// One recursion of the exponentially weighted RLS:
///   xi  = d - w^H u
///   k   = P u / (lambda + u^H P u)
///   w  += k xi*
///   P   = (P - k u^H P) / lambda, re-Hermitianized
///   e   = d - w^H u
/// Throws DivergenceError when the recursion produces non-finite values.
RlsStep rls_step(RlsBinState& state, Complex d, const CVec& u);

struct GscDiagnostics {
  Scalar theta_deg = 0.0;
  Vec frame_output_power;    // mean |e|^2 over bins, per frame
  Vec frame_apriori_power;   // mean |xi|^2 over bins, per frame
  Vec final_weight_norms;    // ||w_a|| per bin
};

struct GscResult {
  MultichannelSignal enhanced;  // single channel, same length as the input
  GscDiagnostics diagnostics;
};

/// Full front end over a multichannel signal: per frame and bin,
/// d = w_c^H x (upper branch), u = B_reduced^H x (lower branch), e from the
/// RLS recursion; the a posteriori errors are resynthesized to one channel.
GscResult gsc_process(const MultichannelSignal& signal, Scalar theta_deg,
                      const ArrayGeometry& geom, const StftConfig& cfg,
                      const RlsParams& params);

/// Same recursion on an existing tensor; returns the single-channel output
/// tensor instead of resynthesizing.
struct GscTensorResult {
  SpectrogramTensor output;
  GscDiagnostics diagnostics;
};

GscTensorResult gsc_process_tensor(const SpectrogramTensor& spec, Scalar theta_deg,
                                   const ArrayGeometry& geom, const StftConfig& cfg,
                                   const RlsParams& params);

}  // namespace dasp

#endif  // DASP_GSC_HPP
