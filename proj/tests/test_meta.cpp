// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "metaopt/allocation.hpp"
#include "metaopt/channel.hpp"
#include "metaopt/linalg.hpp"
#include "metaopt/meta.hpp"
#include "metaopt/rates.hpp"

using namespace metaopt;

namespace {

struct HrsmaFixture {
    UserGroupLayout layout;
    AntennaArray array;
    CsitEnsemble ensemble;
    double power = 10.0;
    double noise = 1.0;

    explicit HrsmaFixture(std::uint64_t seed, Eigen::Index nt = 4,
                          Eigen::Index k = 3, Eigen::Index g = 1, int m = 4,
                          double s2 = 0.5) {
        layout = UserGroupLayout::equal_groups(k, g, std::vector<double>(g, 0.2),
                                               std::vector<double>(g, 0.12));
        array = AntennaArray::uniform_linear(nt, 0.5);
        SeededRng rng(seed);
        ensemble = sample_csit_ensemble(rng, layout, array, s2, m);
    }
};

double objective_value(const ObjectiveFn& f, const RealVector& x) {
    Tape t;
    RealVector realized;
    return t.value(f(t, t.param(RealMatrix{x}), realized));
}

double dual_objective_value(const DualObjectiveFn& f, const RealVector& xa,
                            const RealVector& xb) {
    Tape t;
    RealVector ra, rb;
    return t.value(
        f(t, t.param(RealMatrix{xa}), t.param(RealMatrix{xb}), ra, rb));
}

} // namespace

TEST_CASE("project_power branches") {
    PrecoderMatrix p;
    p.num_users = 1;
    p.num_groups = 1;
    p.power_budget = 8.0;
    p.data = ComplexMatrix::Zero(2, 3);
    p.data(0, 0) = 2.0; // trace 4 = P_t/2: interior point
    CHECK((project_power(p).data - p.data).norm() == 0.0);

    p.data(0, 0) = Complex(0.0, std::sqrt(32.0)); // trace = 4 P_t
    const PrecoderMatrix scaled = project_power(p);
    CHECK(std::abs(scaled.data(0, 0) - Complex(0.0, std::sqrt(8.0))) < 1e-12);
    CHECK(scaled.power() == doctest::Approx(8.0).epsilon(1e-12));

    SeededRng rng(2);
    for (int i = 0; i < 50; ++i) {
        p.data = rng.complex_gaussian_matrix(2, 3) * rng.uniform(0.1, 4.0);
        CHECK(project_power(p).power() <= p.power_budget * (1.0 + 1e-12));
    }
}

TEST_CASE("hrsma objective with zero thresholds equals minus ASR") {
    const HrsmaFixture fx(42);
    const ObjectiveFn f =
        hrsma_objective(fx.ensemble, fx.layout, PrecoderMode::Hrsma, fx.noise,
                        fx.power, RealVector::Zero(3), 0.0);
    const PrecoderMatrix init =
        svd_mrt_init(fx.ensemble, fx.layout, fx.power);
    const RealVector x = precoder_to_variable(init);
    const double loss = objective_value(f, x);
    const double asr =
        saf_rates(fx.ensemble, init, fx.layout, fx.noise).average_sum_rate();
    CHECK(loss == doctest::Approx(-asr).epsilon(1e-12));
}

TEST_CASE("hrsma objective QoS penalty matches the plain allocation deficit") {
    const HrsmaFixture fx(43);
    RealVector thresholds = RealVector::Constant(3, 1.5); // deliberately high
    const double lambda = 10.0;
    const ObjectiveFn with = hrsma_objective(
        fx.ensemble, fx.layout, PrecoderMode::Hrsma, fx.noise, fx.power,
        thresholds, lambda);
    const ObjectiveFn without = hrsma_objective(
        fx.ensemble, fx.layout, PrecoderMode::Hrsma, fx.noise, fx.power,
        thresholds, 0.0);
    const PrecoderMatrix init = svd_mrt_init(fx.ensemble, fx.layout, fx.power);
    const RealVector x = precoder_to_variable(init);

    const SafRates saf = saf_rates(fx.ensemble, init, fx.layout, fx.noise);
    AllocationInput in;
    in.global_common = saf.committed_global;
    in.group_common = saf.committed_group;
    in.private_saf = saf.private_rate;
    in.thresholds = thresholds;
    const AllocationResult alloc = allocate_common_rates(in, fx.layout);
    double deficit = 0.0;
    for (Eigen::Index u = 0; u < 3; ++u)
        if (alloc.allocated[u] < thresholds[u])
            deficit += thresholds[u] - alloc.allocated[u];
    REQUIRE(deficit > 0.0); // penalty active in this configuration

    CHECK(objective_value(with, x) - objective_value(without, x) ==
          doctest::Approx(lambda * deficit).epsilon(1e-10));
}

TEST_CASE("sdma objective optimizes private columns only") {
    const HrsmaFixture fx(44);
    const ObjectiveFn f =
        hrsma_objective(fx.ensemble, fx.layout, PrecoderMode::Sdma, fx.noise,
                        fx.power, RealVector::Zero(3), 0.0);
    const PrecoderMatrix init =
        svd_mrt_init(fx.ensemble, fx.layout, fx.power, PrecoderMode::Sdma);
    const RealVector x = precoder_to_variable(init);
    CHECK(x.size() == 2 * 4 * 3);
    const double asr =
        saf_rates(fx.ensemble, init, fx.layout, fx.noise).average_sum_rate();
    CHECK(objective_value(f, x) == doctest::Approx(-asr).epsilon(1e-12));
}

TEST_CASE("isac objective lambda linearity") {
    const HrsmaFixture fx(45);
    const std::vector<double> targets = {-0.5, 0.6};
    const PrecoderMatrix init = svd_mrt_init(fx.ensemble, fx.layout, fx.power);
    const RealVector x = precoder_to_variable(init);
    const double l1 = 1e-1, l2 = 1e-5;
    const ObjectiveFn f1 = isac_objective(fx.ensemble, fx.layout,
                                          PrecoderMode::Hrsma, fx.noise, fx.power,
                                          targets, fx.array, l1);
    const ObjectiveFn f2 = isac_objective(fx.ensemble, fx.layout,
                                          PrecoderMode::Hrsma, fx.noise, fx.power,
                                          targets, fx.array, l2);
    const double pp = probing_power(init, targets, fx.array);
    CHECK(objective_value(f2, x) - objective_value(f1, x) ==
          doctest::Approx((l1 - l2) * pp).epsilon(1e-10));
}

TEST_CASE("scattering parameterizations") {
    // diagonal phases: unit modulus exactly
    ScatteringParams diag;
    diag.mode = RisMode::Diagonal;
    diag.num_elements = 4;
    diag.values = RealVector::LinSpaced(4, -1.0, 2.0);
    const ComplexMatrix phi = diag.materialize();
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(std::abs(std::abs(phi(i, i)) - 1.0) < 1e-15);
    CHECK((phi * phi.adjoint() - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);

    // fully-connected: symmetric by construction
    SeededRng rng(6);
    ScatteringParams fc;
    fc.mode = RisMode::FullyConnected;
    fc.num_elements = 4;
    fc.values = Eigen::Map<const RealVector>(
        rng.uniform_matrix(20, 1, -1.0, 1.0).data(), 20);
    const ComplexMatrix full = fc.materialize();
    CHECK((full - full.transpose()).norm() == 0.0);

    // diagonal embeds into the FC form with zero off-diagonals
    const ScatteringParams embedded = diag.embed_fully_connected();
    const ComplexMatrix back = embedded.materialize();
    CHECK((back - phi).norm() < 1e-15);
    CHECK((back.adjoint() * back - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("ris objective penalty arithmetic") {
    SeededRng rng(7);
    RisLink link;
    link.tx_ris = rng.complex_gaussian_matrix(4, 3);
    link.ris_user.clear();
    for (int u = 0; u < 2; ++u)
        link.ris_user.push_back(rng.complex_gaussian_matrix(4, 1));
    link.noise_power = 0.5;
    const double power = 5.0;

    // FC identity: f2 = 0, loss = -SR
    ScatteringParams identity = ScatteringParams::identity_diagonal(4);
    const ScatteringParams fc_identity = identity.embed_fully_connected();
    const ComplexMatrix p0 = ris_mrt_init(link, power);
    const DualObjectiveFn f =
        ris_objective(link, RisMode::FullyConnected, power, 1.0);
    const double loss =
        dual_objective_value(f, to_real_pairs(p0), fc_identity.values);
    const double sr =
        ris_user_rates(link, fc_identity.materialize(), p0).sum();
    CHECK(loss == doctest::Approx(-sr).epsilon(1e-12));

    // Phi = 2I, B=4: f2 = sum (4-1)^2 = 36
    ScatteringParams twice = fc_identity;
    twice.values *= 2.0;
    const double loss2 =
        dual_objective_value(f, to_real_pairs(p0), twice.values);
    const double sr2 = ris_user_rates(link, twice.materialize(), p0).sum();
    CHECK(loss2 - (-sr2) == doctest::Approx(36.0).epsilon(1e-10));
}

TEST_CASE("meta_optimize_single on a quadratic toy") {
    SeededRng rng(100);
    RealVector target(6);
    target << 1.0, -2.0, 0.5, 3.0, -1.0, 0.25;
    const ObjectiveFn quad = [&target](Tape& t, RealVar x,
                                       RealVector& realized) {
        realized = t.rvalue(x).col(0);
        const RealVar diff = t.add_scalar(x, 0.0);
        RealVar acc = t.sum(t.square(t.sub(diff, t.constant(RealMatrix{target}))));
        return acc;
    };
    MlpSpec spec;
    spec.input_width = 6;
    spec.hidden_widths = {32, 32};
    spec.hidden_activations = {Activation::Sigmoid, Activation::Tanh};
    spec.output_width = 6;
    const MetaResult res = meta_optimize_single(quad, RealVector::Zero(6), spec,
                                                500, 1e-2, rng);
    CHECK(res.initial_loss == doctest::Approx(target.squaredNorm()));
    CHECK(res.best_loss <= res.initial_loss);
    CHECK(res.best_loss < 1e-3 * target.squaredNorm());
    CHECK(static_cast<int>(res.loss_trace.size()) == 500);
    CHECK(res.best_loss ==
          *std::min_element(res.loss_trace.begin(), res.loss_trace.end()));
}

TEST_CASE("meta_optimize_single determinism") {
    const HrsmaFixture fx(46);
    const ObjectiveFn f =
        hrsma_objective(fx.ensemble, fx.layout, PrecoderMode::Hrsma, fx.noise,
                        fx.power, RealVector::Zero(3), 0.0);
    const RealVector x0 =
        precoder_to_variable(svd_mrt_init(fx.ensemble, fx.layout, fx.power));
    const MlpSpec spec = MlpSpec::precoder_learner(x0.size(), 64);
    SeededRng a(9), b(9);
    const MetaResult ra = meta_optimize_single(f, x0, spec, 30, 1e-3, a);
    const MetaResult rb = meta_optimize_single(f, x0, spec, 30, 1e-3, b);
    REQUIRE(ra.loss_trace.size() == rb.loss_trace.size());
    for (std::size_t i = 0; i < ra.loss_trace.size(); ++i)
        CHECK(ra.loss_trace[i] == rb.loss_trace[i]);
    CHECK((ra.best_x - rb.best_x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("meta_optimize_single buffers feasible precoders") {
    const HrsmaFixture fx(47);
    const ObjectiveFn f =
        hrsma_objective(fx.ensemble, fx.layout, PrecoderMode::Hrsma, fx.noise,
                        fx.power, RealVector::Zero(3), 0.0);
    const RealVector x0 =
        precoder_to_variable(svd_mrt_init(fx.ensemble, fx.layout, fx.power));
    const MlpSpec spec = MlpSpec::precoder_learner(x0.size(), 64);
    SeededRng rng(10);
    const MetaResult res = meta_optimize_single(f, x0, spec, 50, 1e-3, rng);
    const PrecoderMatrix best = variable_to_precoder(
        res.best_x, 4, 3, 1, PrecoderMode::Hrsma, fx.power);
    CHECK(best.power() <= fx.power * (1.0 + 1e-9));
    CHECK(res.best_loss <= res.initial_loss);
}

TEST_CASE("meta_optimize_dual on a separable toy") {
    SeededRng rng(200);
    RealVector a(3), b(4);
    a << 1.0, -1.0, 2.0;
    b << 0.5, 0.5, -0.5, 1.5;
    const DualObjectiveFn f = [&](Tape& t, RealVar xa, RealVar xb,
                                  RealVector& ra, RealVector& rb) {
        ra = t.rvalue(xa).col(0);
        rb = t.rvalue(xb).col(0);
        return t.add(t.sum(t.square(t.sub(xa, t.constant(RealMatrix{a})))),
                     t.sum(t.square(t.sub(xb, t.constant(RealMatrix{b})))));
    };
    MlpSpec sa, sb;
    sa.input_width = sa.output_width = 3;
    sa.hidden_widths = {24};
    sa.hidden_activations = {Activation::Tanh};
    sb.input_width = sb.output_width = 4;
    sb.hidden_widths = {24};
    sb.hidden_activations = {Activation::Tanh};
    const DualMetaResult res = meta_optimize_dual(
        f, RealVector::Zero(3), RealVector::Zero(4), sa, sb, 600, 1e-2, 1e-2, rng);
    CHECK(res.best_loss <= res.initial_loss);
    CHECK(res.best_loss < 1e-3 * res.initial_loss);
}

TEST_CASE("svd_mrt_init structure") {
    // K=1, G=1: all three directions collinear with h / ||h||
    const UserGroupLayout single =
        UserGroupLayout::equal_groups(1, 1, {0.0}, {0.1});
    SeededRng rng(14);
    CsitEnsemble e;
    e.csit = rng.complex_gaussian_matrix(4, 1);
    e.samples = {e.csit};
    const PrecoderMatrix p = svd_mrt_init(e, single, 9.0);
    const ComplexVector dir = e.csit.col(0) / e.csit.col(0).norm();
    for (Eigen::Index c = 0; c < 3; ++c) {
        const ComplexVector col = p.data.col(c) / p.data.col(c).norm();
        // collinear up to a unit phase
        CHECK(std::abs(std::abs(dir.dot(col)) - 1.0) < 1e-9);
    }
    CHECK(p.power() == doctest::Approx(9.0).epsilon(1e-9));

    // orthogonal two-user channel: p_c aligns with the stronger column
    const UserGroupLayout two = UserGroupLayout::equal_groups(2, 1, {0.0}, {0.1});
    CsitEnsemble o;
    o.csit = ComplexMatrix::Zero(2, 2);
    o.csit(0, 0) = 3.0;
    o.csit(1, 1) = 1.0;
    o.samples = {o.csit};
    const PrecoderMatrix q = svd_mrt_init(o, two, 4.0);
    CHECK(std::abs(q.data(0, 0)) > 1e-9);
    CHECK(std::abs(q.data(1, 0)) < 1e-9);

    // zero column rejected
    CsitEnsemble z;
    z.csit = ComplexMatrix::Zero(2, 2);
    z.csit(0, 0) = 1.0;
    z.samples = {z.csit};
    CHECK_THROWS_AS(svd_mrt_init(z, two, 1.0), RankDeficientChannelError);
}

TEST_CASE("ris_warm_start embeds a unitary diagonal") {
    SeededRng rng(15);
    RisLink link;
    link.tx_ris = rng.complex_gaussian_matrix(3, 2) * 0.1;
    link.ris_user = {rng.complex_gaussian_matrix(3, 1) * 0.1,
                     rng.complex_gaussian_matrix(3, 1) * 0.1};
    link.noise_power = 1e-4;
    const ComplexMatrix p0 = ris_mrt_init(link, 4.0);
    SeededRng warm_rng(16);
    const ScatteringParams warm =
        ris_warm_start(link, p0, 4.0, 20, 1e-3, 1e-3, warm_rng, 32);
    CHECK(warm.mode == RisMode::FullyConnected);
    const ComplexMatrix phi = warm.materialize();
    CHECK((phi.adjoint() * phi - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);
    CHECK((phi - phi.transpose()).norm() == 0.0);
}
