#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pinnfem/errors.hpp"
#include "pinnfem/geometry.hpp"

namespace pinnfem {

enum class Activation { Tanh, Identity };

// Fully connected network: widths.front() inputs, widths.back() outputs,
// `activation` on hidden layers, identity on the output layer.
struct MlpSpec {
    std::vector<int> widths;
    Activation activation = Activation::Tanh;

    static MlpSpec mlp(int in, int out, int hidden_layers, int hidden_width) {
        MlpSpec s;
        s.widths.push_back(in);
        for (int i = 0; i < hidden_layers; ++i) s.widths.push_back(hidden_width);
        s.widths.push_back(out);
        return s;
    }

    int num_layers() const { return static_cast<int>(widths.size()) - 1; }
    int input_dim() const { return widths.front(); }
    int output_dim() const { return widths.back(); }

    int param_count() const {
        int n = 0;
        for (int l = 1; l < static_cast<int>(widths.size()); ++l)
            n += widths[l - 1] * widths[l] + widths[l];
        return n;
    }

    // Layout: per layer, W row-major [out x in] then b [out].
    int layer_offset(int layer) const {
        int off = 0;
        for (int l = 1; l < layer; ++l) off += widths[l - 1] * widths[l] + widths[l];
        return off;
    }

    void validate() const {
        if (widths.size() < 3) throw ConfigError("network needs at least one hidden layer");
        for (int w : widths)
            if (w < 1) throw ConfigError("network widths must be positive");
    }
};

// Glorot-uniform weights, zero biases, from a seeded deterministic generator.
// The uniform draw maps raw mt19937_64 output to [0,1) directly, so the same
// (spec, seed) pair gives the same vector on every platform.
inline std::vector<double> init_params(const MlpSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    std::vector<double> theta(spec.param_count(), 0.0);
    for (int l = 1; l <= spec.num_layers(); ++l) {
        const int in = spec.widths[l - 1], out = spec.widths[l];
        const double bound = std::sqrt(6.0 / (in + out));
        double* w = theta.data() + spec.layer_offset(l);
        for (int k = 0; k < in * out; ++k) w[k] = bound * (2.0 * unit() - 1.0);
        // biases stay zero
    }
    return theta;
}

namespace detail {

// Per-point forward state: activations of every layer and, when the spatial
// Jacobian is requested, the pre-activation directional derivatives for each
// input coordinate. Enough to run an exact reverse sweep later.
struct EvalState {
    std::vector<double> x;   // input
    std::vector<double> a;   // activations, layers 0..L concatenated
    std::vector<double> s;   // d z_l / d x_c, layers 1..L, per input dim c
    bool with_jac = false;
};

inline int a_offset(const MlpSpec& spec, int layer) {
    int off = 0;
    for (int l = 0; l < layer; ++l) off += spec.widths[l];
    return off;
}

inline int s_stride(const MlpSpec& spec) {
    int n = 0;
    for (int l = 1; l <= spec.num_layers(); ++l) n += spec.widths[l];
    return n;
}

inline int s_offset(const MlpSpec& spec, int layer) {
    int off = 0;
    for (int l = 1; l < layer; ++l) off += spec.widths[l];
    return off;
}

// Forward pass; fills state.a (and state.s if with_jac). u_out gets the
// network value; jac_out (row-major out x in) the spatial Jacobian.
inline void run_forward(const MlpSpec& spec, std::span<const double> theta,
                        std::span<const double> x, bool with_jac, EvalState& state,
                        double* u_out, double* jac_out) {
    const int L = spec.num_layers();
    const int nin = spec.input_dim(), nout = spec.output_dim();
    const bool tanh_hidden = spec.activation == Activation::Tanh;

    state.x.assign(x.begin(), x.end());
    state.with_jac = with_jac;
    state.a.assign(a_offset(spec, L) + spec.widths[L], 0.0);
    state.s.assign(with_jac ? nin * s_stride(spec) : 0, 0.0);

    std::copy(x.begin(), x.end(), state.a.begin());

    std::vector<double> d_prev, d_cur;  // post-activation directional derivs
    for (int l = 1; l <= L; ++l) {
        const int in = spec.widths[l - 1], out = spec.widths[l];
        const double* W = theta.data() + spec.layer_offset(l);
        const double* b = W + in * out;
        const double* ap = state.a.data() + a_offset(spec, l - 1);
        double* ac = state.a.data() + a_offset(spec, l);
        const bool act = tanh_hidden && l < L;

        for (int o = 0; o < out; ++o) {
            double z = b[o];
            const double* wrow = W + o * in;
            for (int i = 0; i < in; ++i) z += wrow[i] * ap[i];
            ac[o] = act ? std::tanh(z) : z;
        }

        if (with_jac) {
            for (int c = 0; c < nin; ++c) {
                double* sl = state.s.data() + c * s_stride(spec) + s_offset(spec, l);
                if (l == 1) {
                    for (int o = 0; o < out; ++o) sl[o] = W[o * in + c];
                } else {
                    const double* dp = d_prev.data() + c * in;
                    for (int o = 0; o < out; ++o) {
                        double v = 0.0;
                        const double* wrow = W + o * in;
                        for (int i = 0; i < in; ++i) v += wrow[i] * dp[i];
                        sl[o] = v;
                    }
                }
            }
            d_cur.assign(nin * out, 0.0);
            for (int c = 0; c < nin; ++c) {
                const double* sl = state.s.data() + c * s_stride(spec) + s_offset(spec, l);
                double* dc = d_cur.data() + c * out;
                if (act)
                    for (int o = 0; o < out; ++o) dc[o] = (1.0 - ac[o] * ac[o]) * sl[o];
                else
                    for (int o = 0; o < out; ++o) dc[o] = sl[o];
            }
            d_prev.swap(d_cur);
        }
    }

    const double* aL = state.a.data() + a_offset(spec, L);
    if (u_out) std::copy(aL, aL + nout, u_out);
    if (with_jac && jac_out)
        for (int r = 0; r < nout; ++r)
            for (int c = 0; c < nin; ++c) jac_out[r * nin + c] = d_prev[c * nout + r];
}

// Reverse sweep over the (value, Jacobian) computation of run_forward.
// ubar has size nout; jbar is row-major nout x nin (may be null when the
// state was built without the Jacobian). Accumulates into grad.
inline void backprop_eval(const MlpSpec& spec, std::span<const double> theta,
                          const EvalState& state, const double* ubar, const double* jbar,
                          std::span<double> grad) {
    const int L = spec.num_layers();
    const int nin = spec.input_dim(), nout = spec.output_dim();
    const bool tanh_hidden = spec.activation == Activation::Tanh;
    const bool wj = state.with_jac;

    std::vector<double> abar(state.a.size(), 0.0);  // adjoint of activations
    std::vector<double> gbar(wj ? state.s.size() : 0, 0.0);  // adjoint of s

    {
        double* aL = abar.data() + a_offset(spec, L);
        for (int o = 0; o < nout; ++o) aL[o] = ubar ? ubar[o] : 0.0;
        if (wj && jbar)
            for (int c = 0; c < nin; ++c) {
                double* gL = gbar.data() + c * s_stride(spec) + s_offset(spec, L);
                for (int o = 0; o < nout; ++o) gL[o] = jbar[o * nin + c];
            }
    }

    std::vector<double> zbar, sbar;
    for (int l = L; l >= 1; --l) {
        const int in = spec.widths[l - 1], out = spec.widths[l];
        const double* W = theta.data() + spec.layer_offset(l);
        double* Wg = grad.data() + spec.layer_offset(l);
        double* bg = Wg + in * out;
        const double* ac = state.a.data() + a_offset(spec, l);
        const double* ap = state.a.data() + a_offset(spec, l - 1);
        const double* al_bar = abar.data() + a_offset(spec, l);
        const bool act = tanh_hidden && l < L;

        zbar.assign(out, 0.0);
        if (act) {
            for (int o = 0; o < out; ++o) {
                const double p = 1.0 - ac[o] * ac[o];
                double mixed = 0.0;
                if (wj)
                    for (int c = 0; c < nin; ++c) {
                        const double s =
                            state.s[c * s_stride(spec) + s_offset(spec, l) + o];
                        const double db =
                            gbar[c * s_stride(spec) + s_offset(spec, l) + o];
                        mixed += s * db;
                    }
                zbar[o] = p * (al_bar[o] - 2.0 * ac[o] * mixed);
            }
        } else {
            for (int o = 0; o < out; ++o) zbar[o] = al_bar[o];
        }

        // s_l adjoint: d_l = phi'(z_l) * s_l (identity phi' = 1)
        if (wj) {
            sbar.assign(nin * out, 0.0);
            for (int c = 0; c < nin; ++c) {
                const double* db = gbar.data() + c * s_stride(spec) + s_offset(spec, l);
                double* sb = sbar.data() + c * out;
                if (act)
                    for (int o = 0; o < out; ++o) sb[o] = (1.0 - ac[o] * ac[o]) * db[o];
                else
                    for (int o = 0; o < out; ++o) sb[o] = db[o];
            }
        }

        // d_{l-1}: basis vectors at l == 1, else phi'(z_{l-1}) * s_{l-1}
        std::vector<double> dprev;
        if (wj) {
            dprev.assign(nin * in, 0.0);
            for (int c = 0; c < nin; ++c)
                for (int i = 0; i < in; ++i) {
                    if (l == 1) {
                        dprev[c * in + i] = c == i ? 1.0 : 0.0;
                    } else {
                        const double s =
                            state.s[c * s_stride(spec) + s_offset(spec, l - 1) + i];
                        dprev[c * in + i] = tanh_hidden ? (1.0 - ap[i] * ap[i]) * s : s;
                    }
                }
        }

        for (int o = 0; o < out; ++o) {
            double* wrow = Wg + o * in;
            const double zb = zbar[o];
            for (int i = 0; i < in; ++i) wrow[i] += zb * ap[i];
            if (wj)
                for (int c = 0; c < nin; ++c) {
                    const double sb = sbar[c * out + o];
                    if (sb == 0.0) continue;
                    const double* dp = dprev.data() + c * in;
                    for (int i = 0; i < in; ++i) wrow[i] += sb * dp[i];
                }
            bg[o] += zb;
        }

        if (l > 1) {
            double* ap_bar = abar.data() + a_offset(spec, l - 1);
            for (int o = 0; o < out; ++o) {
                const double zb = zbar[o];
                if (zb == 0.0) continue;
                const double* wrow = W + o * in;
                for (int i = 0; i < in; ++i) ap_bar[i] += wrow[i] * zb;
            }
            if (wj) {
                for (int c = 0; c < nin; ++c) {
                    double* gp = gbar.data() + c * s_stride(spec) + s_offset(spec, l - 1);
                    const double* sb = sbar.data() + c * out;
                    for (int o = 0; o < out; ++o) {
                        if (sb[o] == 0.0) continue;
                        const double* wrow = W + o * in;
                        for (int i = 0; i < in; ++i) gp[i] += wrow[i] * sb[o];
                    }
                }
            }
        }
    }
}

}  // namespace detail

inline void forward(const MlpSpec& spec, std::span<const double> theta,
                    std::span<const double> x, std::span<double> u_out) {
    detail::EvalState st;
    detail::run_forward(spec, theta, x, false, st, u_out.data(), nullptr);
}

inline Vec2 forward(const MlpSpec& spec, std::span<const double> theta, Vec2 x) {
    double u[2];
    const double xin[2] = {x.x, x.y};
    forward(spec, theta, std::span<const double>(xin, 2), std::span<double>(u, 2));
    return {u[0], u[1]};
}

// Exact spatial Jacobian by forward-propagated directional derivatives.
inline void forward_with_jacobian(const MlpSpec& spec, std::span<const double> theta,
                                  std::span<const double> x, std::span<double> u_out,
                                  std::span<double> jac_out) {
    detail::EvalState st;
    detail::run_forward(spec, theta, x, true, st, u_out.data(), jac_out.data());
}

inline std::pair<Vec2, Mat2> forward_with_jacobian(const MlpSpec& spec,
                                                   std::span<const double> theta, Vec2 x) {
    double u[2], j[4];
    const double xin[2] = {x.x, x.y};
    forward_with_jacobian(spec, theta, std::span<const double>(xin, 2),
                          std::span<double>(u, 2), std::span<double>(j, 4));
    return {Vec2{u[0], u[1]}, Mat2{{{j[0], j[1]}, {j[2], j[3]}}}};
}

}  // namespace pinnfem
