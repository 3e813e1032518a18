// SPDX-License-Identifier: Apache-2.0

#include "metaopt/meta.hpp"

#include <Eigen/SVD>
#include <bit>
#include <memory>
#include <cmath>
#include <cstring>
#include <numbers>

namespace metaopt {

namespace {

const double kInvLn2 = 1.0 / std::numbers::ln2;

std::uint64_t vec_hash(const RealVector& v) {
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(v[i]);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffULL;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

struct TapeAllocOps {
    Tape* tape;
    RealVar add(RealVar a, RealVar b) const { return tape->add(a, b); }
    RealVar sub(RealVar a, RealVar b) const { return tape->sub(a, b); }
    RealVar scale(RealVar a, double s) const { return tape->scale(a, s); }
    double val(RealVar a) const { return tape->value(a); }
    RealVar constant(double v) const { return tape->scalar(v); }
};

// Constant masks and per-sample channel adjoints shared by the H-RSMA and
// ISAC objectives; built once per problem, captured by the closures.
struct HrsmaContext {
    Eigen::Index nt, k, g, d;
    std::vector<ComplexMatrix> channel_adj; // H_m^H, K x N_t
    RealMatrix sel_global;                  // D x 1, picks column 0
    RealMatrix sel_all_but_global;          // D x 1
    RealMatrix ones_d;                      // D x 1
    RealMatrix num_group, den_group;        // K x D masks
    RealMatrix num_priv, den_priv;          // K x D masks
    std::vector<RealMatrix> group_pick;     // K_g x K selectors
    UserGroupLayout layout;
    double noise_power;
};

HrsmaContext make_hrsma_context(const CsitEnsemble& ensemble,
                                const UserGroupLayout& layout,
                                double noise_power) {
    layout.validate();
    HrsmaContext c;
    c.layout = layout;
    c.noise_power = noise_power;
    c.k = layout.num_users;
    c.g = layout.num_groups;
    c.nt = ensemble.csit.rows();
    c.d = c.k + c.g + 1;
    c.channel_adj.reserve(ensemble.samples.size());
    for (const auto& h : ensemble.samples)
        c.channel_adj.push_back(h.adjoint());

    c.sel_global = RealMatrix::Zero(c.d, 1);
    c.sel_global(0, 0) = 1.0;
    c.sel_all_but_global = RealMatrix::Ones(c.d, 1);
    c.sel_all_but_global(0, 0) = 0.0;
    c.ones_d = RealMatrix::Ones(c.d, 1);

    c.num_group = RealMatrix::Zero(c.k, c.d);
    c.den_group = RealMatrix::Zero(c.k, c.d);
    c.num_priv = RealMatrix::Zero(c.k, c.d);
    c.den_priv = RealMatrix::Zero(c.k, c.d);
    for (Eigen::Index u = 0; u < c.k; ++u) {
        const Eigen::Index grp = layout.group_of(u);
        c.num_group(u, 1 + grp) = 1.0;
        c.num_priv(u, 1 + c.g + u) = 1.0;
        for (Eigen::Index j = 0; j < c.g; ++j)
            if (j != grp) {
                c.den_group(u, 1 + j) = 1.0;
                c.den_priv(u, 1 + j) = 1.0;
            }
        for (Eigen::Index j = 0; j < c.k; ++j) {
            c.den_group(u, 1 + c.g + j) = 1.0;
            if (j != u)
                c.den_priv(u, 1 + c.g + j) = 1.0;
        }
    }
    for (Eigen::Index grp = 0; grp < c.g; ++grp) {
        const auto members = layout.group_members(grp);
        RealMatrix pick = RealMatrix::Zero(
            static_cast<Eigen::Index>(members.size()), c.k);
        for (std::size_t i = 0; i < members.size(); ++i)
            pick(static_cast<Eigen::Index>(i), members[i]) = 1.0;
        c.group_pick.push_back(std::move(pick));
    }
    return c;
}

struct SafVars {
    RealVar global_common; // K x 1
    RealVar group_common;  // K x 1
    RealVar private_rate;  // K x 1
    RealVar committed_global;           // scalar
    std::vector<RealVar> committed_group; // per group
    RealVar asr;                        // scalar
};

RealVar rate_from_ratio(Tape& t, RealVar num, RealVar den) {
    return t.scale(t.log1p(t.div(num, den)), kInvLn2);
}

SafVars build_saf(Tape& t, const HrsmaContext& c, ComplexVar p) {
    const RealVar e0 = t.constant(c.sel_global);
    const RealVar e_rest = t.constant(c.sel_all_but_global);
    const RealVar ones = t.constant(c.ones_d);

    RealVar acc_c{}, acc_g{}, acc_p{};
    const std::size_t m = c.channel_adj.size();
    for (std::size_t s = 0; s < m; ++s) {
        const ComplexVar a = t.cmatmul(c.channel_adj[s], p);
        const RealVar q = t.abs2(a); // K x D stream powers at each user

        const RealVar num_c = t.matmul(q, e0);
        const RealVar den_c = t.add_scalar(t.matmul(q, e_rest), c.noise_power);
        const RealVar num_g = t.matmul(t.cwise_mul(q, c.num_group), ones);
        const RealVar den_g =
            t.add_scalar(t.matmul(t.cwise_mul(q, c.den_group), ones), c.noise_power);
        const RealVar num_p = t.matmul(t.cwise_mul(q, c.num_priv), ones);
        const RealVar den_p =
            t.add_scalar(t.matmul(t.cwise_mul(q, c.den_priv), ones), c.noise_power);

        const RealVar rc = rate_from_ratio(t, num_c, den_c);
        const RealVar rg = rate_from_ratio(t, num_g, den_g);
        const RealVar rp = rate_from_ratio(t, num_p, den_p);
        if (s == 0) {
            acc_c = rc;
            acc_g = rg;
            acc_p = rp;
        } else {
            acc_c = t.add(acc_c, rc);
            acc_g = t.add(acc_g, rg);
            acc_p = t.add(acc_p, rp);
        }
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    SafVars v;
    v.global_common = t.scale(acc_c, inv_m);
    v.group_common = t.scale(acc_g, inv_m);
    v.private_rate = t.scale(acc_p, inv_m);

    v.committed_global = t.min_coeff(v.global_common);
    RealVar asr = v.committed_global;
    for (Eigen::Index grp = 0; grp < c.g; ++grp) {
        const RealVar picked =
            t.matmul(t.constant(c.group_pick[grp]), v.group_common);
        v.committed_group.push_back(t.min_coeff(picked));
        asr = t.add(asr, v.committed_group.back());
    }
    asr = t.add(asr, t.sum(v.private_rate));
    v.asr = asr;
    return v;
}

// x -> complex precoder node in full [p_c | p_c,g | p_k] layout, with the
// power projection applied. SDMA variables cover the private columns only.
struct PrecoderNodes {
    ComplexVar full;      // N_t x D, projected
    ComplexVar projected; // variable-space matrix (equals `full` in H-RSMA mode)
};

ComplexVar project_power_node(Tape& t, ComplexVar p, double budget) {
    const RealVar tr = t.sum_abs2(p);
    if (t.value(tr) <= budget)
        return p;
    const RealVar factor = t.sqrt(t.div(t.scalar(budget), tr));
    return t.scale_by(p, factor);
}

PrecoderNodes build_precoder(Tape& t, RealVar x, Eigen::Index nt, Eigen::Index k,
                             Eigen::Index g, PrecoderMode mode, double budget) {
    PrecoderNodes out;
    if (mode == PrecoderMode::Hrsma) {
        const Eigen::Index n = nt * (k + g + 1);
        const ComplexVar p = t.complex_from_pair(t.segment(x, 0, n),
                                                 t.segment(x, n, n), nt, k + g + 1);
        out.full = project_power_node(t, p, budget);
        out.projected = out.full;
    } else {
        const Eigen::Index n = nt * k;
        const ComplexVar priv = t.complex_from_pair(t.segment(x, 0, n),
                                                    t.segment(x, n, n), nt, k);
        const ComplexVar priv_proj = project_power_node(t, priv, budget);
        ComplexMatrix embed = ComplexMatrix::Zero(k, k + g + 1);
        for (Eigen::Index u = 0; u < k; ++u)
            embed(u, 1 + g + u) = 1.0;
        out.full = t.cmatmul(priv_proj, t.constant(embed));
        out.projected = priv_proj;
    }
    return out;
}

RealVar qos_penalty(Tape& t, const HrsmaContext& c, const SafVars& saf,
                    const RealVector& thresholds) {
    std::vector<RealVar> groups;
    for (auto cg : saf.committed_group)
        groups.push_back(cg);
    std::vector<RealVar> privates;
    for (Eigen::Index u = 0; u < c.k; ++u)
        privates.push_back(t.element(saf.private_rate, u));
    std::vector<double> th(thresholds.begin(), thresholds.end());
    const std::vector<RealVar> alloc = allocate_common_generic(
        saf.committed_global, groups, privates, th, c.layout, TapeAllocOps{&t});

    // Sum of (alloc - th) over users below threshold; empty sum is absent.
    bool any = false;
    RealVar pen{};
    for (Eigen::Index u = 0; u < c.k; ++u) {
        if (t.value(alloc[u]) >= thresholds[u])
            continue;
        const RealVar deficit = t.add_scalar(alloc[u], -thresholds[u]);
        pen = any ? t.add(pen, deficit) : deficit;
        any = true;
    }
    return any ? pen : RealVar{-1};
}

} // namespace

// ----- ScatteringParams ---------------------------------------------------

ComplexMatrix ScatteringParams::materialize() const {
    const Eigen::Index b = num_elements;
    if (mode == RisMode::Diagonal) {
        if (values.size() != b)
            throw DimensionMismatchError("ScatteringParams: expected B phases");
        ComplexMatrix phi = ComplexMatrix::Zero(b, b);
        for (Eigen::Index i = 0; i < b; ++i)
            phi(i, i) = Complex(std::cos(values[i]), std::sin(values[i]));
        return phi;
    }
    const Eigen::Index ntri = b * (b + 1) / 2;
    if (values.size() != 2 * ntri)
        throw DimensionMismatchError("ScatteringParams: expected B(B+1) reals");
    ComplexMatrix phi(b, b);
    Eigen::Index idx = 0;
    for (Eigen::Index j = 0; j < b; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i, ++idx) {
            const Complex z(values[idx], values[ntri + idx]);
            phi(i, j) = z;
            phi(j, i) = z;
        }
    }
    return phi;
}

ScatteringParams ScatteringParams::identity_diagonal(Eigen::Index b) {
    ScatteringParams s;
    s.mode = RisMode::Diagonal;
    s.num_elements = b;
    s.values = RealVector::Zero(b);
    return s;
}

ScatteringParams ScatteringParams::embed_fully_connected() const {
    if (mode != RisMode::Diagonal)
        throw std::logic_error("embed_fully_connected: source must be diagonal");
    const Eigen::Index b = num_elements;
    const Eigen::Index ntri = b * (b + 1) / 2;
    ScatteringParams s;
    s.mode = RisMode::FullyConnected;
    s.num_elements = b;
    s.values = RealVector::Zero(2 * ntri);
    Eigen::Index idx = 0;
    for (Eigen::Index j = 0; j < b; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i, ++idx) {
            if (i == j) {
                s.values[idx] = std::cos(values[j]);
                s.values[ntri + idx] = std::sin(values[j]);
            }
        }
    }
    return s;
}

PrecoderMatrix project_power(const PrecoderMatrix& p) {
    if (p.power_budget <= 0.0)
        throw std::invalid_argument("project_power: power budget must be positive");
    const double tr = p.power();
    if (tr <= p.power_budget)
        return p;
    PrecoderMatrix out = p;
    out.data *= std::sqrt(p.power_budget / tr);
    return out;
}

// ----- Objective factories ------------------------------------------------

Eigen::Index precoder_dim(Eigen::Index num_tx, Eigen::Index num_users,
                          Eigen::Index num_groups, PrecoderMode mode) {
    return mode == PrecoderMode::Hrsma
               ? 2 * num_tx * (num_users + num_groups + 1)
               : 2 * num_tx * num_users;
}

Eigen::Index ris_variable_dim(Eigen::Index num_elements, RisMode mode) {
    return mode == RisMode::Diagonal ? num_elements
                                     : num_elements * (num_elements + 1);
}

ObjectiveFn hrsma_objective(const CsitEnsemble& ensemble,
                            const UserGroupLayout& layout, PrecoderMode mode,
                            double noise_power, double power_budget,
                            const RealVector& thresholds, double qos_lambda) {
    if (qos_lambda < 0.0)
        throw std::invalid_argument("hrsma_objective: lambda must be >= 0");
    if (thresholds.size() != layout.num_users)
        throw DimensionMismatchError("hrsma_objective: one threshold per user");
    auto ctx = std::make_shared<HrsmaContext>(
        make_hrsma_context(ensemble, layout, noise_power));
    const RealVector th = thresholds;
    return [ctx, mode, power_budget, th, qos_lambda](
               Tape& t, RealVar x, RealVector& realized) -> RealVar {
        const PrecoderNodes p = build_precoder(t, x, ctx->nt, ctx->k, ctx->g,
                                               mode, power_budget);
        realized = to_real_pairs(t.cvalue(p.projected));
        const SafVars saf = build_saf(t, *ctx, p.full);
        RealVar loss = t.neg(saf.asr);
        if (qos_lambda > 0.0) {
            const RealVar pen = qos_penalty(t, *ctx, saf, th);
            if (pen.idx >= 0)
                loss = t.sub(loss, t.scale(pen, qos_lambda));
        }
        return loss;
    };
}

ObjectiveFn isac_objective(const CsitEnsemble& ensemble,
                           const UserGroupLayout& layout, PrecoderMode mode,
                           double noise_power, double power_budget,
                           const std::vector<double>& targets,
                           const AntennaArray& array, double lambda) {
    if (targets.empty())
        throw std::invalid_argument("isac_objective: need at least one target");
    if (lambda < 0.0)
        throw std::invalid_argument("isac_objective: lambda must be >= 0");
    auto ctx = std::make_shared<HrsmaContext>(
        make_hrsma_context(ensemble, layout, noise_power));
    ComplexMatrix steer_adj(static_cast<Eigen::Index>(targets.size()), ctx->nt);
    for (std::size_t n = 0; n < targets.size(); ++n)
        steer_adj.row(static_cast<Eigen::Index>(n)) =
            steering_vector(array, targets[n]).adjoint();
    return [ctx, mode, power_budget, steer_adj, lambda](
               Tape& t, RealVar x, RealVector& realized) -> RealVar {
        const PrecoderNodes p = build_precoder(t, x, ctx->nt, ctx->k, ctx->g,
                                               mode, power_budget);
        realized = to_real_pairs(t.cvalue(p.projected));
        const SafVars saf = build_saf(t, *ctx, p.full);
        const RealVar probing = t.sum_abs2(t.cmatmul(steer_adj, p.full));
        return t.sub(t.neg(saf.asr), t.scale(probing, lambda));
    };
}

DualObjectiveFn ris_objective(const RisLink& link, RisMode mode,
                              double power_budget, double lambda,
                              bool literal_diagonal_penalty) {
    if (lambda < 0.0)
        throw std::invalid_argument("ris_objective: lambda must be >= 0");
    const Eigen::Index b = link.tx_ris.rows();
    const Eigen::Index nt = link.tx_ris.cols();
    const Eigen::Index k = static_cast<Eigen::Index>(link.ris_user.size());
    ComplexMatrix users_adj(k, b); // rows h_k^H
    for (Eigen::Index u = 0; u < k; ++u)
        users_adj.row(u) = link.ris_user[u].adjoint();
    const ComplexMatrix tx_ris = link.tx_ris;
    const double noise = link.noise_power;
    const RealMatrix eye = RealMatrix::Identity(k, k);
    const RealMatrix not_eye = RealMatrix::Ones(k, k) - eye;
    const RealMatrix ones_k = RealMatrix::Ones(k, 1);

    return [=](Tape& t, RealVar xa, RealVar xb, RealVector& realized_a,
               RealVector& realized_b) -> RealVar {
        const Eigen::Index n = nt * k;
        const ComplexVar p_raw = t.complex_from_pair(
            t.segment(xa, 0, n), t.segment(xa, n, n), nt, k);
        const ComplexVar p = project_power_node(t, p_raw, power_budget);
        realized_a = to_real_pairs(t.cvalue(p));

        ComplexVar phi;
        RealVar f2{-1};
        if (mode == RisMode::Diagonal) {
            const ComplexVar unit =
                t.complex_from_pair(t.cos(xb), t.sin(xb), b, 1);
            phi = t.diag(unit);
            if (literal_diagonal_penalty)
                f2 = t.sum_abs2(t.csub(unit, ComplexMatrix::Ones(b, 1)));
        } else {
            const Eigen::Index ntri = b * (b + 1) / 2;
            phi = t.sym_from_upper_tri(t.segment(xb, 0, ntri),
                                       t.segment(xb, ntri, ntri), b);
            const ComplexVar gram = t.cmatmul(t.adjoint(phi), phi);
            f2 = t.sum_abs2(t.csub(gram, ComplexMatrix::Identity(b, b)));
        }
        realized_b = Eigen::Map<const RealVector>(t.rvalue(xb).data(),
                                                  t.rvalue(xb).size());

        const ComplexVar eff = t.cmatmul(t.cmatmul(users_adj, phi),
                                         t.constant(tx_ris)); // K x N_t
        const ComplexVar a = t.cmatmul(eff, p);               // K x K
        const RealVar q = t.abs2(a);
        const RealVar num = t.matmul(t.cwise_mul(q, eye), t.constant(ones_k));
        const RealVar den = t.add_scalar(
            t.matmul(t.cwise_mul(q, not_eye), t.constant(ones_k)), noise);
        const RealVar sum_rate = t.sum(rate_from_ratio(t, num, den));
        RealVar loss = t.neg(sum_rate);
        if (f2.idx >= 0 && lambda > 0.0)
            loss = t.add(loss, t.scale(f2, lambda));
        return loss;
    };
}

// ----- Optimization loops -------------------------------------------------

MetaResult meta_optimize_single(const ObjectiveFn& objective, const RealVector& x0,
                                const MlpSpec& spec, int iterations,
                                double learning_rate, SeededRng& rng,
                                const AdamHyper& hyper) {
    if (iterations < 1)
        throw std::invalid_argument("meta_optimize_single: need T >= 1");
    spec.validate();
    if (spec.input_width != x0.size() || spec.output_width != x0.size())
        throw DimensionMismatchError("meta_optimize_single: spec width != variable dim");

    MetaResult res;
    RealVector fixed_grad;
    {
        Tape t;
        const RealVar x = t.param(x0);
        RealVector realized;
        const RealVar loss = objective(t, x, realized);
        res.initial_loss = t.value(loss);
        if (!std::isfinite(res.initial_loss))
            throw NonFiniteLossError("meta_optimize_single: initial loss", -1);
        res.best_loss = res.initial_loss;
        res.best_x = realized;
        t.backward(loss);
        fixed_grad = t.grad(x);
    }
    const std::uint64_t grad_hash = vec_hash(fixed_grad);

    MlpParams params = mlp_init(spec, rng);
    RealVector theta = params.flatten();
    AdamState adam = AdamState::create(theta.size(), learning_rate);
    adam.beta1 = hyper.beta1;
    adam.beta2 = hyper.beta2;
    adam.epsilon = hyper.epsilon;

    res.loss_trace.reserve(iterations);
    RealVector grad(theta.size());
    for (int it = 0; it < iterations; ++it) {
        Tape t;
        const MlpVars vars = mlp_vars(t, params);
        const RealVar delta = mlp_forward(t, vars, spec, t.constant(RealMatrix{fixed_grad}));
        const RealVar x = t.add(t.constant(RealMatrix{x0}), delta);
        RealVector realized;
        const RealVar loss = objective(t, x, realized);
        const double value = t.value(loss);
        if (!std::isfinite(value))
            throw NonFiniteLossError("meta_optimize_single: loss", it);
        res.loss_trace.push_back(value);
        if (value < res.best_loss) {
            res.best_loss = value;
            res.best_x = realized;
        }
        t.backward(loss);
        Eigen::Index off = 0;
        for (std::size_t l = 0; l < vars.weights.size(); ++l) {
            const RealVector gw = t.grad(vars.weights[l]);
            grad.segment(off, gw.size()) = gw;
            off += gw.size();
            const RealVector gb = t.grad(vars.biases[l]);
            grad.segment(off, gb.size()) = gb;
            off += gb.size();
        }
        adam_step(adam, theta, grad);
        params.set_from_flat(theta);
    }
    if (vec_hash(fixed_grad) != grad_hash)
        throw std::logic_error("meta_optimize_single: fixed input gradient mutated");
    return res;
}

DualMetaResult meta_optimize_dual(const DualObjectiveFn& objective,
                                  const RealVector& x0a, const RealVector& x0b,
                                  const MlpSpec& spec_a, const MlpSpec& spec_b,
                                  int iterations, double learning_rate_a,
                                  double learning_rate_b, SeededRng& rng,
                                  const AdamHyper& hyper) {
    if (iterations < 1)
        throw std::invalid_argument("meta_optimize_dual: need T >= 1");
    spec_a.validate();
    spec_b.validate();
    if (spec_a.input_width != x0a.size() || spec_b.input_width != x0b.size())
        throw DimensionMismatchError("meta_optimize_dual: spec width != variable dim");

    DualMetaResult res;
    RealVector grad_a0, grad_b0;
    {
        Tape t;
        const RealVar xa = t.param(x0a);
        const RealVar xb = t.param(x0b);
        RealVector ra, rb;
        const RealVar loss = objective(t, xa, xb, ra, rb);
        res.initial_loss = t.value(loss);
        if (!std::isfinite(res.initial_loss))
            throw NonFiniteLossError("meta_optimize_dual: initial loss", -1);
        res.best_loss = res.initial_loss;
        res.best_a = ra;
        res.best_b = rb;
        t.backward(loss);
        grad_a0 = t.grad(xa);
        grad_b0 = t.grad(xb);
    }

    MlpParams params_a = mlp_init(spec_a, rng);
    MlpParams params_b = mlp_init(spec_b, rng);
    RealVector theta_a = params_a.flatten();
    RealVector theta_b = params_b.flatten();
    AdamState adam_a = AdamState::create(theta_a.size(), learning_rate_a);
    AdamState adam_b = AdamState::create(theta_b.size(), learning_rate_b);
    for (AdamState* s : {&adam_a, &adam_b}) {
        s->beta1 = hyper.beta1;
        s->beta2 = hyper.beta2;
        s->epsilon = hyper.epsilon;
    }

    res.loss_trace.reserve(iterations);
    RealVector ga(theta_a.size()), gb(theta_b.size());
    for (int it = 0; it < iterations; ++it) {
        Tape t;
        const MlpVars vars_a = mlp_vars(t, params_a);
        const MlpVars vars_b = mlp_vars(t, params_b);
        const RealVar xa =
            t.add(t.constant(RealMatrix{x0a}),
                  mlp_forward(t, vars_a, spec_a, t.constant(RealMatrix{grad_a0})));
        const RealVar xb =
            t.add(t.constant(RealMatrix{x0b}),
                  mlp_forward(t, vars_b, spec_b, t.constant(RealMatrix{grad_b0})));
        RealVector ra, rb;
        const RealVar loss = objective(t, xa, xb, ra, rb);
        const double value = t.value(loss);
        if (!std::isfinite(value))
            throw NonFiniteLossError("meta_optimize_dual: loss", it);
        res.loss_trace.push_back(value);
        if (value < res.best_loss) {
            res.best_loss = value;
            res.best_a = ra;
            res.best_b = rb;
        }
        t.backward(loss);
        auto gather = [&t](const MlpVars& vars, RealVector& out) {
            Eigen::Index off = 0;
            for (std::size_t l = 0; l < vars.weights.size(); ++l) {
                const RealVector gw = t.grad(vars.weights[l]);
                out.segment(off, gw.size()) = gw;
                off += gw.size();
                const RealVector gbv = t.grad(vars.biases[l]);
                out.segment(off, gbv.size()) = gbv;
                off += gbv.size();
            }
        };
        gather(vars_a, ga);
        gather(vars_b, gb);
        adam_step(adam_a, theta_a, ga);
        adam_step(adam_b, theta_b, gb);
        params_a.set_from_flat(theta_a);
        params_b.set_from_flat(theta_b);
    }
    return res;
}

// ----- Initializations ----------------------------------------------------

PrecoderMatrix svd_mrt_init(const CsitEnsemble& ensemble,
                            const UserGroupLayout& layout, double power_budget,
                            PrecoderMode mode, const PowerSplit& split) {
    layout.validate();
    const Eigen::Index nt = ensemble.csit.rows();
    const Eigen::Index k = layout.num_users;
    const Eigen::Index g = layout.num_groups;
    if (ensemble.csit.cols() != k)
        throw DimensionMismatchError("svd_mrt_init: CSIT/user count mismatch");
    for (Eigen::Index u = 0; u < k; ++u)
        if (ensemble.csit.col(u).norm() == 0.0)
            throw RankDeficientChannelError("svd_mrt_init: zero channel column");

    PrecoderMatrix p;
    p.mode = mode;
    p.num_users = k;
    p.num_groups = g;
    p.power_budget = power_budget;
    p.data = ComplexMatrix::Zero(nt, k + g + 1);

    if (mode == PrecoderMode::Hrsma) {
        const double total = split.global + split.group + split.private_;
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("svd_mrt_init: power split must sum to 1");
        Eigen::JacobiSVD<ComplexMatrix> svd(ensemble.csit, Eigen::ComputeThinU);
        p.data.col(0) =
            svd.matrixU().col(0) * std::sqrt(split.global * power_budget);
        for (Eigen::Index grp = 0; grp < g; ++grp) {
            const auto members = layout.group_members(grp);
            ComplexMatrix sub(nt, static_cast<Eigen::Index>(members.size()));
            for (std::size_t i = 0; i < members.size(); ++i)
                sub.col(static_cast<Eigen::Index>(i)) = ensemble.csit.col(members[i]);
            Eigen::JacobiSVD<ComplexMatrix> gsvd(sub, Eigen::ComputeThinU);
            p.data.col(1 + grp) =
                gsvd.matrixU().col(0) *
                std::sqrt(split.group * power_budget / static_cast<double>(g));
        }
        const double priv_power = split.private_ * power_budget / static_cast<double>(k);
        for (Eigen::Index u = 0; u < k; ++u)
            p.data.col(1 + g + u) = ensemble.csit.col(u) /
                                    ensemble.csit.col(u).norm() *
                                    std::sqrt(priv_power);
    } else {
        const double priv_power = power_budget / static_cast<double>(k);
        for (Eigen::Index u = 0; u < k; ++u)
            p.data.col(1 + g + u) = ensemble.csit.col(u) /
                                    ensemble.csit.col(u).norm() *
                                    std::sqrt(priv_power);
    }
    return p;
}

ComplexMatrix ris_mrt_init(const RisLink& link, double power_budget) {
    const Eigen::Index nt = link.tx_ris.cols();
    const Eigen::Index k = static_cast<Eigen::Index>(link.ris_user.size());
    ComplexMatrix p(nt, k);
    const double col_power = power_budget / static_cast<double>(k);
    for (Eigen::Index u = 0; u < k; ++u) {
        const ComplexVector eff = link.tx_ris.adjoint() * link.ris_user[u];
        const double norm = eff.norm();
        if (norm == 0.0)
            throw RankDeficientChannelError("ris_mrt_init: zero effective channel");
        p.col(u) = eff / norm * std::sqrt(col_power);
    }
    return p;
}

ScatteringParams ris_warm_start(const RisLink& link, const ComplexMatrix& p0,
                                double power_budget, int warm_iterations,
                                double learning_rate_p, double learning_rate_phi,
                                SeededRng& rng, Eigen::Index hidden_width) {
    const Eigen::Index b = link.tx_ris.rows();
    const DualObjectiveFn objective =
        ris_objective(link, RisMode::Diagonal, power_budget, 0.0);
    const RealVector x0a = to_real_pairs(p0);
    const RealVector x0b = RealVector::Zero(b);
    const MlpSpec spec_a = MlpSpec::ris_learner(x0a.size(), hidden_width);
    const MlpSpec spec_b = MlpSpec::ris_learner(b, hidden_width);
    const DualMetaResult warm = meta_optimize_dual(
        objective, x0a, x0b, spec_a, spec_b, warm_iterations, learning_rate_p,
        learning_rate_phi, rng);
    ScatteringParams diag;
    diag.mode = RisMode::Diagonal;
    diag.num_elements = b;
    diag.values = warm.best_b;
    return diag.embed_fully_connected();
}

RealVector precoder_to_variable(const PrecoderMatrix& p) {
    if (p.mode == PrecoderMode::Hrsma)
        return to_real_pairs(p.data);
    return to_real_pairs(p.data.rightCols(p.num_users));
}

PrecoderMatrix variable_to_precoder(const RealVector& x, Eigen::Index num_tx,
                                    Eigen::Index num_users, Eigen::Index num_groups,
                                    PrecoderMode mode, double power_budget) {
    PrecoderMatrix p;
    p.mode = mode;
    p.num_users = num_users;
    p.num_groups = num_groups;
    p.power_budget = power_budget;
    if (mode == PrecoderMode::Hrsma) {
        p.data = from_real_pairs(x, num_tx, num_users + num_groups + 1);
    } else {
        p.data = ComplexMatrix::Zero(num_tx, num_users + num_groups + 1);
        p.data.rightCols(num_users) = from_real_pairs(x, num_tx, num_users);
    }
    return p;
}

} // namespace metaopt
