#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "sarjam/signal_model.hpp"

namespace sarjam {

// Real vector of length 2N-1, zero on the lags counted as mainlobe. The
// default excludes only the zero lag.
VectorXd sidelobe_mask(int n, int mainlobe_halfwidth = 0);

struct CostWeights {
    std::array<double, 4> alpha{0.2, 0.4, 0.3, 0.1};
    double r_isl_db = -60.0;
    double beta2 = 0.0;  // gain target; the constructors set it to N
    VectorXd mask;

    double beta1() const;
    void validate(int n) const;

    static CostWeights standard(int n);
    static CostWeights make(int n, const std::array<double, 4>& alpha, double r_isl_db = -60.0,
                            int mainlobe_halfwidth = 0);
};

struct CostTerms {
    double total = 0.0;
    std::array<double, 4> terms{};
};

// Sidelobe energy, jamming energy, ISL ratio deviation and gain deviation.
// jammed_ext is the extension matrix of the jammed sequence.
CostTerms cost(const VectorXcd& s, const VectorXcd& h, const CostWeights& w,
               const MatrixXcd& jammed_ext, const MatrixXcd& s_ext);

// How the rank-one s*s^H coefficient is grouped: alpha3*beta1^2 + alpha4 is the
// one consistent with the cost; kBracketed folds alpha4 inside alpha3 (beta1^2 + alpha4).
enum class RankOneGrouping { kExpanded, kBracketed };

// f(x) = x^H M x + Re(x^H v) + constant, M Hermitian.
struct QuadraticForm {
    MatrixXcd matrix;
    VectorXcd linear;
    double constant = 0.0;

    double value(const VectorXcd& x) const;
    // Gradient with respect to conj(x) in the 2*d/dx^* convention: 2Mx + v.
    VectorXcd gradient(const VectorXcd& x) const;
};

MatrixXcd hermitian_part(const MatrixXcd& m);

// Cost as a quadratic in h with s fixed.
QuadraticForm build_Z_z(const VectorXcd& s, const CostWeights& w, const MatrixXcd& jammed_ext,
                        const MatrixXcd& s_ext,
                        RankOneGrouping grouping = RankOneGrouping::kExpanded);
// Same, with the jammer term given as its Gram matrix.
QuadraticForm build_Z_z_gram(const VectorXcd& s, const CostWeights& w, const MatrixXcd& jam_gram,
                             const MatrixXcd& s_ext,
                             RankOneGrouping grouping = RankOneGrouping::kExpanded);

// Cost as a quadratic in s with h fixed; jammer maps s to the jammed sequence
// and is frozen for this step.
QuadraticForm build_Y_y(const VectorXcd& h, const CostWeights& w, const MatrixXcd& jammer,
                        const MatrixXcd& h_ext,
                        RankOneGrouping grouping = RankOneGrouping::kExpanded);

// Largest absolute row sum.
double majorizer_coeff(const MatrixXcd& m);

// Tangent upper bound of the quadratic model around h_k with curvature lambda.
double surrogate_g1(const QuadraticForm& q, const VectorXcd& h, const VectorXcd& h_k, double lambda);

// kMajorized minimizes the tangent bound exactly (curvature bound taken on the
// Hessian 2M, step against 2Mx + v). kScaled uses a fixed scaling:
// curvature from M and a step of 4(Mx + v) for h, (lambda - 4M)x - 4v for s.
enum class StepRule { kMajorized, kScaled };

struct StepResult {
    VectorXcd next;
    double lambda = 0.0;
    bool degenerate = false;  // numerator vanished; previous iterate kept
};

StepResult update_h(const VectorXcd& h, const QuadraticForm& z, StepRule rule = StepRule::kMajorized);

// Components with a zero argument keep their previous value (zeros included,
// so inactive entries of a masked variable stay inactive).
StepResult update_s(const VectorXcd& s, const QuadraticForm& y, StepRule rule = StepRule::kMajorized);

// kSequence: the transmit-domain sequence s is the waveform variable and the
// jammer acts as a fixed linear map of s. kJammerCode: the compensated target
// history s is fixed and the waveform update acts on the code differential
// the jammer carries, jammed = diag(gain .* code) s.
enum class WaveformUpdate { kSequence, kJammerCode };

struct OptimizerState {
    int iteration = 0;
    const VectorXcd* s = nullptr;
    const VectorXcd* h = nullptr;
    const VectorXcd* code = nullptr;
    CostTerms cost;
    const QuadraticForm* z = nullptr;
    const QuadraticForm* y = nullptr;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    StepRule rule = StepRule::kMajorized;
};

struct WmAmmfaOptions {
    double tolerance = 1e-6;
    int max_iterations = 200;
    StepRule rule = StepRule::kMajorized;
    RankOneGrouping grouping = RankOneGrouping::kExpanded;
    WaveformUpdate waveform = WaveformUpdate::kSequence;
    std::function<void(const OptimizerState&)> observer;
};

struct WmAmmfaProblem {
    VectorXcd s;
    VectorXcd h;
    CostWeights weights;
    MatrixXcd jammer;        // kSequence only
    VectorXcd jammer_gain;   // kJammerCode only
    VectorXcd jammer_code;   // kJammerCode only, initial code differential
    // kJammerCode only: Doppler modulations of the replay; the jammer term is
    // averaged over them. Empty means a single unmodulated replay.
    std::vector<VectorXcd> jammer_doppler;
};

struct TraceRow {
    int iteration = 0;
    CostTerms cost;
};

struct WmAmmfaResult {
    VectorXcd s;
    VectorXcd h;
    VectorXcd code;  // empty in kSequence mode
    std::vector<TraceRow> trace;
    bool converged = false;
    int degenerate_steps = 0;
};

WmAmmfaResult run_wm_ammfa(const WmAmmfaProblem& problem, const WmAmmfaOptions& options);

// Jammed sequence for the problem's current variables.
VectorXcd jammed_sequence(const WmAmmfaProblem& problem, WaveformUpdate mode);

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     const std::string& header = "");

}  // namespace sarjam
