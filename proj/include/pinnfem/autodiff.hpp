#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "pinnfem/errors.hpp"
#include "pinnfem/net.hpp"

namespace pinnfem::ad {

class Tape;

// Value handle on a Tape. idx < 0 marks a constant (not recorded).
// Operator arithmetic records local partial derivatives; Tape::backward
// replays them in reverse together with the network evaluation records.
struct Var {
    double val = 0.0;
    int idx = -1;
    Tape* tape = nullptr;

    double value() const { return val; }
    bool is_const() const { return idx < 0; }
};

// Reverse-accumulation tape over a fixed (spec, theta) pair. Scalar glue
// arithmetic is recorded node by node; each net_value /
// net_value_and_jacobian call stores one layer-level evaluation record whose
// reverse sweep pushes output adjoints directly into the parameter gradient.
class Tape {
public:
    Tape(const MlpSpec& spec, std::span<const double> theta)
        : spec_(&spec), theta_(theta) {
        spec.validate();
    }

    const MlpSpec& spec() const { return *spec_; }
    std::span<const double> theta() const { return theta_; }

    Var constant(double v) { return Var{v, -1, this}; }

    Var unary(double value, Var a, double da) {
        if (a.is_const()) return constant(value);
        nodes_.push_back({a.idx, -1, da, 0.0});
        return Var{value, static_cast<int>(nodes_.size()) - 1, this};
    }

    Var binary(double value, Var a, double da, Var b, double db) {
        if (a.is_const() && b.is_const()) return constant(value);
        nodes_.push_back({a.idx, b.idx, da, db});
        return Var{value, static_cast<int>(nodes_.size()) - 1, this};
    }

    // Network value at x; outputs become tape leaves.
    std::vector<Var> net_value(std::span<const double> x) {
        return eval(x, false, nullptr);
    }

    // Network value and spatial Jacobian at x. jac_out is filled row-major
    // (out x in).
    std::vector<Var> net_value_and_jacobian(std::span<const double> x,
                                            std::vector<Var>& jac_out) {
        return eval(x, true, &jac_out);
    }

    // Evaluates the recorded loss and accumulates d loss / d theta into grad
    // (which must be zeroed by the caller and sized spec().param_count()).
    double backward(Var loss, std::span<double> grad) {
        if (!std::isfinite(loss.val))
            throw NonFiniteLossError("loss is not finite");
        if (loss.is_const()) return loss.val;

        adj_.assign(nodes_.size(), 0.0);
        adj_[loss.idx] = 1.0;
        for (int n = static_cast<int>(nodes_.size()) - 1; n >= 0; --n) {
            const double a = adj_[n];
            if (a == 0.0) continue;
            const Node& nd = nodes_[n];
            if (nd.p1 >= 0) adj_[nd.p1] += nd.d1 * a;
            if (nd.p2 >= 0) adj_[nd.p2] += nd.d2 * a;
        }

        const int nin = spec_->input_dim(), nout = spec_->output_dim();
        std::vector<double> ubar(nout), jbar;
        for (const EvalRecord& ev : evals_) {
            for (int o = 0; o < nout; ++o) ubar[o] = adj_[ev.out_base + o];
            const double* jb = nullptr;
            if (ev.state.with_jac) {
                jbar.assign(nout * nin, 0.0);
                for (int k = 0; k < nout * nin; ++k)
                    jbar[k] = adj_[ev.out_base + nout + k];
                jb = jbar.data();
            }
            detail::backprop_eval(*spec_, theta_, ev.state, ubar.data(), jb, grad);
        }
        return loss.val;
    }

    size_t num_nodes() const { return nodes_.size(); }
    size_t num_evals() const { return evals_.size(); }

private:
    struct Node {
        int p1, p2;
        double d1, d2;
    };
    struct EvalRecord {
        detail::EvalState state;
        int out_base = -1;  // leaf nodes: u values, then Jacobian row-major
    };

    std::vector<Var> eval(std::span<const double> x, bool with_jac,
                          std::vector<Var>* jac_out) {
        const int nin = spec_->input_dim(), nout = spec_->output_dim();
        if (static_cast<int>(x.size()) != nin)
            throw ConfigError("net evaluation point has wrong dimension");

        EvalRecord rec;
        std::vector<double> u(nout), jac(with_jac ? nout * nin : 0);
        detail::run_forward(*spec_, theta_, x, with_jac, rec.state, u.data(), jac.data());

        for (double v : u)
            if (!std::isfinite(v))
                throw NonFiniteLossError("network value is not finite at evaluation point",
                                         x[0], nin > 1 ? x[1] : 0.0);
        for (double v : jac)
            if (!std::isfinite(v))
                throw NonFiniteLossError(
                    "network Jacobian is not finite at evaluation point", x[0],
                    nin > 1 ? x[1] : 0.0);

        rec.out_base = static_cast<int>(nodes_.size());
        std::vector<Var> out(nout);
        for (int o = 0; o < nout; ++o) {
            nodes_.push_back({-1, -1, 0.0, 0.0});  // leaf
            out[o] = Var{u[o], static_cast<int>(nodes_.size()) - 1, this};
        }
        if (with_jac) {
            jac_out->resize(nout * nin);
            for (int k = 0; k < nout * nin; ++k) {
                nodes_.push_back({-1, -1, 0.0, 0.0});
                (*jac_out)[k] = Var{jac[k], static_cast<int>(nodes_.size()) - 1, this};
            }
        }
        evals_.push_back(std::move(rec));
        return out;
    }

    const MlpSpec* spec_;
    std::span<const double> theta_;
    std::vector<Node> nodes_;
    std::vector<EvalRecord> evals_;
    std::vector<double> adj_;
};

inline Var operator+(Var a, Var b) {
    Tape* t = a.tape ? a.tape : b.tape;
    return t->binary(a.val + b.val, a, 1.0, b, 1.0);
}
inline Var operator-(Var a, Var b) {
    Tape* t = a.tape ? a.tape : b.tape;
    return t->binary(a.val - b.val, a, 1.0, b, -1.0);
}
inline Var operator*(Var a, Var b) {
    Tape* t = a.tape ? a.tape : b.tape;
    return t->binary(a.val * b.val, a, b.val, b, a.val);
}
inline Var operator/(Var a, Var b) {
    Tape* t = a.tape ? a.tape : b.tape;
    return t->binary(a.val / b.val, a, 1.0 / b.val, b, -a.val / (b.val * b.val));
}
inline Var operator-(Var a) { return a.tape->unary(-a.val, a, -1.0); }

inline Var operator+(Var a, double c) { return a.tape->unary(a.val + c, a, 1.0); }
inline Var operator+(double c, Var a) { return a + c; }
inline Var operator-(Var a, double c) { return a.tape->unary(a.val - c, a, 1.0); }
inline Var operator-(double c, Var a) { return a.tape->unary(c - a.val, a, -1.0); }
inline Var operator*(Var a, double c) { return a.tape->unary(a.val * c, a, c); }
inline Var operator*(double c, Var a) { return a * c; }
inline Var operator/(Var a, double c) { return a.tape->unary(a.val / c, a, 1.0 / c); }

inline Var sq(Var a) { return a.tape->unary(a.val * a.val, a, 2.0 * a.val); }
inline Var sqrt(Var a) {
    const double r = std::sqrt(a.val);
    return a.tape->unary(r, a, 0.5 / r);
}

// Evaluates `build(tape)` and returns (loss value, d loss / d theta).
// The builder may only combine tape arithmetic with net_value /
// net_value_and_jacobian outputs, which is exactly what the energy
// assemblies do.
template <class Builder>
std::pair<double, std::vector<double>> loss_gradient(const MlpSpec& spec,
                                                     std::span<const double> theta,
                                                     Builder&& build) {
    Tape tape(spec, theta);
    Var loss = build(tape);
    std::vector<double> grad(spec.param_count(), 0.0);
    const double value = tape.backward(loss, grad);
    return {value, std::move(grad)};
}

}  // namespace pinnfem::ad
