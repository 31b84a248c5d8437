// Copyright 2026 The dasp authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "dasp/gsc.hpp"

#include <cmath>

namespace dasp {

FixedBeamformer make_fixed_beamformer(const ArrayGeometry& geom, Scalar theta_deg,
                                      const StftConfig& cfg) {
  FixedBeamformer bf;
  const CMat a = steering_matrix(geom, theta_deg, cfg);
  // Unit-modulus entries make a^H a = M at every bin.
  bf.weights = a / static_cast<Scalar>(geom.mic_count());
  return bf;
}

BlockingMatrix make_blocking_matrix(const ArrayGeometry& geom, Scalar theta_deg,
                                    const StftConfig& cfg) {
  const CMat table = steering_matrix(geom, theta_deg, cfg);
  const Index mics = geom.mic_count();
  BlockingMatrix bm;
  bm.full.reserve(table.cols());
  bm.reduced.reserve(table.cols());
  for (Index k = 0; k < table.cols(); ++k) {
    const CVec a = table.col(k);
    CMat full = CMat::Identity(mics, mics) - (a * a.adjoint()) / a.squaredNorm();
    bm.reduced.push_back(full.leftCols(mics - 1));
    bm.full.push_back(std::move(full));
  }
  return bm;
}

void RlsParams::validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw InvalidArgument("rls lambda must be in (0, 1], got " + std::to_string(lambda));
  if (!(delta_reg > 0.0))
    throw InvalidArgument("rls delta_reg must be positive, got " + std::to_string(delta_reg));
}

RlsBinState make_rls_state(Index dim, const RlsParams& params) {
  params.validate();
  RlsBinState s;
  s.w = CVec::Zero(dim);
  s.p = CMat::Identity(dim, dim) / params.delta_reg;
  s.lambda = params.lambda;
  return s;
}

RlsStep rls_step(RlsBinState& state, Complex d, const CVec& u) {
  const CVec pu = state.p * u;
  const Scalar denom = state.lambda + (u.dot(pu)).real();
  const CVec gain = pu / denom;

  const Complex xi = d - state.w.dot(u);
  state.w += gain * std::conj(xi);
  state.p = (state.p - gain * pu.adjoint()) / state.lambda;
  state.p = 0.5 * (state.p + state.p.adjoint()).eval();

  const Complex e = d - state.w.dot(u);
  if (!std::isfinite(e.real()) || !std::isfinite(e.imag()) || !state.p.allFinite())
    throw DivergenceError("rls recursion produced non-finite values");
  return {e, xi};
}

namespace {

GscTensorResult run_gsc(const SpectrogramTensor& spec, Scalar theta_deg,
                        const ArrayGeometry& geom, const StftConfig& cfg,
                        const RlsParams& params) {
  if (spec.channel_count() != geom.mic_count())
    throw DataError("gsc: signal has " + std::to_string(spec.channel_count()) +
                    " channels but geometry has " + std::to_string(geom.mic_count()) +
                    " microphones");
  params.validate();

  const Index mics = geom.mic_count();
  const Index bins = spec.bins();
  const Index frames = spec.frames();
  const FixedBeamformer fixed = make_fixed_beamformer(geom, theta_deg, cfg);
  const BlockingMatrix blocking = make_blocking_matrix(geom, theta_deg, cfg);

  std::vector<RlsBinState> states;
  states.reserve(bins);
  for (Index k = 0; k < bins; ++k) states.push_back(make_rls_state(mics - 1, params));

  GscTensorResult res;
  res.output.sample_rate = spec.sample_rate;
  res.output.channels.assign(1, CMat::Zero(bins, frames));
  CMat& out = res.output.channels.front();

  GscDiagnostics& diag = res.diagnostics;
  diag.theta_deg = wrap_azimuth_deg(theta_deg);
  diag.frame_output_power = Vec::Zero(frames);
  diag.frame_apriori_power = Vec::Zero(frames);
  diag.final_weight_norms = Vec::Zero(bins);

  CVec x(mics);
  for (Index l = 0; l < frames; ++l) {
    for (Index k = 0; k < bins; ++k) {
      for (Index m = 0; m < mics; ++m) x[m] = spec.channels[m](k, l);
      const Complex d = fixed.weights.col(k).dot(x);
      const CVec u = blocking.reduced[k].adjoint() * x;
      RlsStep step;
      try {
        step = rls_step(states[k], d, u);
      } catch (const DivergenceError& err) {
        throw DivergenceError("gsc diverged at bin " + std::to_string(k) + ", frame " +
                              std::to_string(l) + ": " + err.what(), k);
      }
      out(k, l) = step.e;
      diag.frame_output_power[l] += std::norm(step.e);
      diag.frame_apriori_power[l] += std::norm(step.xi);
    }
    diag.frame_output_power[l] /= static_cast<Scalar>(bins);
    diag.frame_apriori_power[l] /= static_cast<Scalar>(bins);
  }
  for (Index k = 0; k < bins; ++k) diag.final_weight_norms[k] = states[k].w.norm();
  return res;
}

}  // namespace

GscTensorResult gsc_process_tensor(const SpectrogramTensor& spec, Scalar theta_deg,
                                   const ArrayGeometry& geom, const StftConfig& cfg,
                                   const RlsParams& params) {
  return run_gsc(spec, theta_deg, geom, cfg, params);
}

GscResult gsc_process(const MultichannelSignal& signal, Scalar theta_deg,
                      const ArrayGeometry& geom, const StftConfig& cfg,
                      const RlsParams& params) {
  if (signal.channel_count() != geom.mic_count())
    throw DataError("gsc: signal has " + std::to_string(signal.channel_count()) +
                    " channels but geometry has " + std::to_string(geom.mic_count()) +
                    " microphones");
  const SpectrogramTensor spec = analyze(signal, cfg);
  GscTensorResult tensor_res = run_gsc(spec, theta_deg, geom, cfg, params);
  GscResult res;
  res.enhanced = synthesize(tensor_res.output, cfg, signal.length());
  res.diagnostics = std::move(tensor_res.diagnostics);
  return res;
}

}  // namespace dasp
