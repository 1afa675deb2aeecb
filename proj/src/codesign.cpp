#include "sarjam/codesign.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sarjam/errors.hpp"

namespace sarjam {

VectorXd sidelobe_mask(int n, int mainlobe_halfwidth) {
    if (n < 1) throw DimensionError("sidelobe mask needs N >= 1");
    if (mainlobe_halfwidth < 0) throw ParameterError("mainlobe half-width must be >= 0");
    VectorXd d = VectorXd::Ones(2 * n - 1);
    for (int k = -mainlobe_halfwidth; k <= mainlobe_halfwidth; ++k) {
        const int idx = n - 1 + k;
        if (idx >= 0 && idx < 2 * n - 1) d[idx] = 0.0;
    }
    return d;
}

double CostWeights::beta1() const { return std::pow(10.0, r_isl_db / 10.0); }

void CostWeights::validate(int n) const {
    for (double a : alpha)
        if (!(a >= 0.0) || !std::isfinite(a)) throw ParameterError("cost weights must be >= 0");
    if (mask.size() != 2 * n - 1) throw DimensionError("sidelobe mask must have length 2N-1");
    if (mask[n - 1] != 0.0) throw ParameterError("sidelobe mask must be zero at the zero lag");
    if (!std::isfinite(r_isl_db) || !std::isfinite(beta2))
        throw ParameterError("R_ISL and beta2 must be finite");
}

CostWeights CostWeights::standard(int n) { return make(n, {0.2, 0.4, 0.3, 0.1}, -60.0, 0); }

CostWeights CostWeights::make(int n, const std::array<double, 4>& alpha, double r_isl_db,
                              int mainlobe_halfwidth) {
    CostWeights w;
    w.alpha = alpha;
    w.r_isl_db = r_isl_db;
    w.beta2 = static_cast<double>(n);
    w.mask = sidelobe_mask(n, mainlobe_halfwidth);
    w.validate(n);
    return w;
}

namespace {
void check_square(const MatrixXcd& m, Eigen::Index n, const char* what) {
    if (m.rows() != m.cols() || m.rows() != n)
        throw DimensionError(std::string(what) + " must be " + std::to_string(n) + "x" +
                             std::to_string(n));
}

void check_ext(const MatrixXcd& m, Eigen::Index n, const char* what) {
    if (m.rows() != 2 * n - 1 || m.cols() != n)
        throw DimensionError(std::string(what) + " must be (2N-1)xN");
}
}  // namespace

CostTerms cost(const VectorXcd& s, const VectorXcd& h, const CostWeights& w,
               const MatrixXcd& jammed_ext, const MatrixXcd& s_ext) {
    const Eigen::Index n = s.size();
    if (h.size() != n) throw DimensionError("cost: s and h differ in length");
    check_ext(s_ext, n, "S");
    check_ext(jammed_ext, n, "jammed extension");
    if (w.mask.size() != 2 * n - 1) throw DimensionError("cost: mask length");

    const VectorXcd sh = s_ext * h;
    const cd inner = s.dot(h);  // s^H h
    CostTerms c;
    c.terms[0] = w.alpha[0] * (w.mask.array() * sh.array().abs2()).sum();
    c.terms[1] = w.alpha[1] * (jammed_ext * h).squaredNorm();
    const cd isl = (w.mask.cast<cd>().array() * sh.array()).sum() - w.beta1() * inner;
    c.terms[2] = w.alpha[2] * std::norm(isl);
    c.terms[3] = w.alpha[3] * std::norm(std::conj(inner) - w.beta2);
    c.total = c.terms[0] + c.terms[1] + c.terms[2] + c.terms[3];
    return c;
}

double QuadraticForm::value(const VectorXcd& x) const {
    return x.dot(matrix * x).real() + x.dot(linear).real() + constant;
}

VectorXcd QuadraticForm::gradient(const VectorXcd& x) const { return 2.0 * (matrix * x) + linear; }

MatrixXcd hermitian_part(const MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

namespace {
// Assembles the common structure shared by the h- and s-quadratics:
//   a1 E^H diag(m) E + a2 P + a3 |m^T E x - b1 v^H x|^2 + a4 |v^H x - b2|^2
// where v is the fixed partner sequence.
QuadraticForm assemble(const MatrixXcd& e, const VectorXd& m, const MatrixXcd& jam_gram,
                       const VectorXcd& partner, const CostWeights& w, RankOneGrouping grouping) {
    const double b1 = w.beta1();
    const auto& a = w.alpha;
    const Eigen::RowVectorXcd r = m.cast<cd>().transpose() * e;
    MatrixXcd z = a[0] * (e.adjoint() * m.cast<cd>().asDiagonal() * e);
    z += a[1] * jam_gram;
    const MatrixXcd cross = partner * r;
    z -= a[2] * b1 * (cross + cross.adjoint());
    z += a[2] * (r.adjoint() * r);
    const double rank_one =
        grouping == RankOneGrouping::kExpanded ? a[2] * b1 * b1 + a[3] : a[2] * (b1 * b1 + a[3]);
    z += rank_one * (partner * partner.adjoint());

    QuadraticForm q;
    q.matrix = hermitian_part(z);
    q.linear = -2.0 * a[3] * w.beta2 * partner;
    q.constant = a[3] * w.beta2 * w.beta2;
    return q;
}
}  // namespace

QuadraticForm build_Z_z(const VectorXcd& s, const CostWeights& w, const MatrixXcd& jammed_ext,
                        const MatrixXcd& s_ext, RankOneGrouping grouping) {
    check_ext(jammed_ext, s.size(), "jammed extension");
    return build_Z_z_gram(s, w, jammed_ext.adjoint() * jammed_ext, s_ext, grouping);
}

QuadraticForm build_Z_z_gram(const VectorXcd& s, const CostWeights& w, const MatrixXcd& jam_gram,
                             const MatrixXcd& s_ext, RankOneGrouping grouping) {
    const Eigen::Index n = s.size();
    check_ext(s_ext, n, "S");
    check_square(jam_gram, n, "jammer Gram matrix");
    w.validate(static_cast<int>(n));
    return assemble(s_ext, w.mask, jam_gram, s, w, grouping);
}

QuadraticForm build_Y_y(const VectorXcd& h, const CostWeights& w, const MatrixXcd& jammer,
                        const MatrixXcd& h_ext, RankOneGrouping grouping) {
    const Eigen::Index n = h.size();
    check_ext(h_ext, n, "H");
    check_square(jammer, n, "jammer operator");
    w.validate(static_cast<int>(n));
    // With s as the variable the correlation runs the other way, so the mask
    // is applied in reversed lag order.
    const VectorXd reversed = w.mask.reverse();
    const MatrixXcd hj = h_ext * jammer;
    return assemble(h_ext, reversed, hj.adjoint() * hj, h, w, grouping);
}

double majorizer_coeff(const MatrixXcd& m) {
    if (m.rows() != m.cols()) throw DimensionError("majorizer_coeff needs a square matrix");
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double surrogate_g1(const QuadraticForm& q, const VectorXcd& h, const VectorXcd& h_k, double lambda) {
    const VectorXcd delta = h - h_k;
    return q.value(h_k) + q.gradient(h_k).dot(delta).real() + 0.5 * lambda * delta.squaredNorm();
}

StepResult update_h(const VectorXcd& h, const QuadraticForm& z, StepRule rule) {
    check_square(z.matrix, h.size(), "Z");
    StepResult out;
    VectorXcd v;
    if (rule == StepRule::kMajorized) {
        out.lambda = majorizer_coeff(2.0 * z.matrix);
        v = out.lambda * h - z.gradient(h);
    } else {
        out.lambda = majorizer_coeff(z.matrix);
        v = out.lambda * h - 4.0 * (z.matrix * h + z.linear);
    }
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        out.next = h;
        out.degenerate = true;
        return out;
    }
    out.next = std::sqrt(static_cast<double>(h.size())) * v / norm;
    return out;
}

StepResult update_s(const VectorXcd& s, const QuadraticForm& y, StepRule rule) {
    check_square(y.matrix, s.size(), "Y");
    StepResult out;
    out.lambda = majorizer_coeff(2.0 * y.matrix);
    VectorXcd v;
    if (rule == StepRule::kMajorized)
        v = out.lambda * s - y.gradient(s);
    else
        v = out.lambda * s - 4.0 * (y.matrix * s) - 4.0 * y.linear;
    out.next = s;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > 0.0 && std::isfinite(mag))
            out.next[i] = v[i] / mag;
        else
            out.degenerate = true;
    }
    return out;
}

VectorXcd jammed_sequence(const WmAmmfaProblem& p, WaveformUpdate mode) {
    if (mode == WaveformUpdate::kSequence) return p.jammer * p.s;
    return p.jammer_gain.cwiseProduct(p.jammer_code).cwiseProduct(p.s);
}

namespace {
// Jammer operators seen by the code variable, one per Doppler modulation.
std::vector<VectorXcd> code_operators(const WmAmmfaProblem& p) {
    const VectorXcd base = p.jammer_gain.cwiseProduct(p.s);
    if (p.jammer_doppler.empty()) return {base};
    std::vector<VectorXcd> ops;
    for (const auto& d : p.jammer_doppler) ops.push_back(base.cwiseProduct(d));
    return ops;
}

MatrixXcd code_jam_gram(const std::vector<VectorXcd>& ops, const VectorXcd& code) {
    const Eigen::Index n = code.size();
    MatrixXcd g = MatrixXcd::Zero(n, n);
    for (const auto& op : ops) {
        const MatrixXcd e = build_extension_matrix(op.cwiseProduct(code));
        g += e.adjoint() * e;
    }
    return g / static_cast<double>(ops.size());
}
}  // namespace

namespace {
std::string dump_state(int k, const VectorXcd& s, const VectorXcd& h, const CostTerms& c) {
    std::ostringstream os;
    os << "non-finite cost at iteration " << k << ": f=" << c.total << " terms=[" << c.terms[0]
       << ", " << c.terms[1] << ", " << c.terms[2] << ", " << c.terms[3] << "] |h|^2="
       << h.squaredNorm() << " max|s|=" << s.cwiseAbs().maxCoeff()
       << " min|s|=" << s.cwiseAbs().minCoeff();
    return os.str();
}

bool finite(const CostTerms& c) {
    if (!std::isfinite(c.total)) return false;
    for (double t : c.terms)
        if (!std::isfinite(t)) return false;
    return true;
}
}  // namespace

WmAmmfaResult run_wm_ammfa(const WmAmmfaProblem& problem, const WmAmmfaOptions& opt) {
    WmAmmfaProblem p = problem;
    const Eigen::Index n = p.s.size();
    const int ni = static_cast<int>(n);
    if (p.h.size() != n) throw DimensionError("run_wm_ammfa: s and h differ in length");
    p.weights.validate(ni);
    const bool code_mode = opt.waveform == WaveformUpdate::kJammerCode;
    if (code_mode) {
        if (p.jammer_gain.size() != n || p.jammer_code.size() != n)
            throw DimensionError("run_wm_ammfa: jammer gain/code must have length N");
    } else {
        check_square(p.jammer, n, "jammer operator");
    }
    if (std::abs(p.h.squaredNorm() - n) > 1e-9 * n)
        throw ParameterError("run_wm_ammfa: initial h must satisfy |h|^2 = N");

    if (code_mode)
        for (const auto& d : p.jammer_doppler)
            if (d.size() != n) throw DimensionError("run_wm_ammfa: Doppler modulation length");

    CostWeights code_weights = p.weights;
    code_weights.alpha = {0.0, p.weights.alpha[1], 0.0, 0.0};
    const std::vector<VectorXcd> ops = code_mode ? code_operators(p) : std::vector<VectorXcd>{};

    auto evaluate = [&]() {
        CostTerms c = cost(p.s, p.h, p.weights, build_extension_matrix(jammed_sequence(p, opt.waveform)),
                           build_extension_matrix(p.s));
        if (code_mode && ops.size() > 1) {
            c.total -= c.terms[1];
            c.terms[1] = p.weights.alpha[1] * p.h.dot(code_jam_gram(ops, p.jammer_code) * p.h).real();
            c.total += c.terms[1];
        }
        return c;
    };

    WmAmmfaResult res;
    CostTerms current = evaluate();
    if (!finite(current)) throw NumericalError(dump_state(0, p.s, p.h, current));
    res.trace.push_back({0, current});

    for (int k = 1; k <= opt.max_iterations; ++k) {
        const MatrixXcd s_ext = build_extension_matrix(p.s);
        QuadraticForm zq;
        if (code_mode) {
            zq = build_Z_z_gram(p.s, p.weights, code_jam_gram(ops, p.jammer_code), s_ext, opt.grouping);
        } else {
            const MatrixXcd jam_ext = build_extension_matrix(jammed_sequence(p, opt.waveform));
            zq = build_Z_z(p.s, p.weights, jam_ext, s_ext, opt.grouping);
        }
        const StepResult hs = update_h(p.h, zq, opt.rule);
        p.h = hs.next;
        res.degenerate_steps += hs.degenerate;

        const MatrixXcd h_ext = build_extension_matrix(p.h);
        QuadraticForm yq;
        StepResult ss;
        if (code_mode) {
            for (const auto& op : ops) {
                const QuadraticForm part =
                    build_Y_y(p.h, code_weights, MatrixXcd(op.asDiagonal()), h_ext, opt.grouping);
                if (yq.matrix.size() == 0) {
                    yq = part;
                } else {
                    yq.matrix += part.matrix;
                    yq.linear += part.linear;
                    yq.constant += part.constant;
                }
            }
            const double inv = 1.0 / static_cast<double>(ops.size());
            yq.matrix *= inv;
            yq.linear *= inv;
            yq.constant *= inv;
            ss = update_s(p.jammer_code, yq, opt.rule);
            p.jammer_code = ss.next;
        } else {
            yq = build_Y_y(p.h, p.weights, p.jammer, h_ext, opt.grouping);
            ss = update_s(p.s, yq, opt.rule);
            p.s = ss.next;
        }
        res.degenerate_steps += ss.degenerate && !code_mode;

        const CostTerms next = evaluate();
        if (!finite(next)) throw NumericalError(dump_state(k, p.s, p.h, next));
        if (opt.observer) {
            OptimizerState st;
            st.iteration = k;
            st.s = &p.s;
            st.h = &p.h;
            st.code = code_mode ? &p.jammer_code : nullptr;
            st.cost = next;
            st.z = &zq;
            st.y = &yq;
            st.lambda1 = hs.lambda;
            st.lambda2 = ss.lambda;
            st.rule = opt.rule;
            opt.observer(st);
        }
        res.trace.push_back({k, next});
        const double change = std::abs(next.total - current.total);
        current = next;
        if (change < opt.tolerance) {
            res.converged = true;
            break;
        }
    }
    if (res.degenerate_steps > 0)
        std::cerr << "warning: " << res.degenerate_steps
                  << " update(s) had a vanishing direction; previous iterate kept\n";
    res.s = p.s;
    res.h = p.h;
    if (code_mode) res.code = p.jammer_code;
    return res;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace,
                     const std::string& header) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    std::istringstream lines(header);
    std::string line;
    while (std::getline(lines, line)) f << "# " << line << '\n';
    f << "iter,f,term1,term2,term3,term4\n";
    char buf[256];
    for (const auto& row : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.iteration,
                      row.cost.total, row.cost.terms[0], row.cost.terms[1], row.cost.terms[2],
                      row.cost.terms[3]);
        f << buf;
    }
}

}  // namespace sarjam
