// SPDX-License-Identifier: Apache-2.0

#include "metaopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "metaopt/allocation.hpp"
#include "metaopt/meta.hpp"

namespace metaopt {

namespace {

struct ItemOutput {
    ResultRecord record;
    PrecoderMatrix precoder; // buffered iterate, precoder suites only
};

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

AntennaArray make_array(const ScenarioConfig& c) {
    return c.geometry == ArrayGeometry::UniformLinear
               ? AntennaArray::uniform_linear(c.num_tx, c.spacing)
               : AntennaArray::uniform_circular(c.num_tx);
}

ItemOutput run_precoder_item(const ScenarioConfig& c, const UserGroupLayout& layout,
                             const AntennaArray& array, double snr_db,
                             double lambda, int realization, SeededRng rng) {
    const double power = db_to_linear(snr_db);
    const double noise = 1.0;
    const PrecoderMode mode =
        c.suite == Suite::Sdma ? PrecoderMode::Sdma : PrecoderMode::Hrsma;

    const CsitEnsemble ensemble = sample_csit_ensemble(
        rng, layout, array, c.error_variance, static_cast<int>(c.num_samples));
    const PrecoderMatrix init = svd_mrt_init(ensemble, layout, power, mode);
    const RealVector x0 = precoder_to_variable(init);
    const MlpSpec spec = MlpSpec::precoder_learner(x0.size(), c.hidden_width);

    RealVector thresholds = RealVector::Zero(c.num_users);
    for (std::size_t u = 0; u < c.thresholds.size(); ++u)
        thresholds[static_cast<Eigen::Index>(u)] = c.thresholds[u];
    const double qos_lambda = c.thresholds.empty() ? 0.0 : c.qos_lambda;

    ObjectiveFn objective;
    if (c.suite == Suite::Isac)
        objective = isac_objective(ensemble, layout, mode, noise, power,
                                   c.targets, array, lambda);
    else
        objective = hrsma_objective(ensemble, layout, mode, noise, power,
                                    thresholds, qos_lambda);

    const MetaResult res = meta_optimize_single(objective, x0, spec,
                                                c.iterations, c.learning_rate, rng);

    ItemOutput out;
    out.precoder = variable_to_precoder(res.best_x, c.num_tx, c.num_users,
                                        c.num_groups, mode, power);
    const SafRates saf = saf_rates(ensemble, out.precoder, layout, noise);

    AllocationInput alloc_in;
    alloc_in.global_common = saf.committed_global;
    alloc_in.group_common = saf.committed_group;
    alloc_in.private_saf = saf.private_rate;
    alloc_in.thresholds = thresholds;
    const AllocationResult alloc = allocate_common_rates(alloc_in, layout);

    ResultRecord& r = out.record;
    r.suite = suite_name(c.suite);
    r.seed = c.seed;
    r.realization = realization;
    r.snr_db = snr_db;
    r.lambda = c.suite == Suite::Isac ? lambda : qos_lambda;
    r.esr = saf.average_sum_rate();
    r.allocated = alloc.allocated;
    for (Eigen::Index u = 0; u < c.num_users; ++u)
        if (alloc.allocated[u] < thresholds[u] - 1e-12)
            ++r.qos_violations;
    if (c.suite == Suite::Isac)
        r.probing_power = probing_power(out.precoder, c.targets, array);
    r.initial_loss = res.initial_loss;
    r.final_loss = res.best_loss;
    return out;
}

ItemOutput run_ris_item(const ScenarioConfig& c, double power_dbm,
                        int realization, SeededRng rng) {
    const double power = db_to_linear(power_dbm); // mW
    const double noise = db_to_linear(c.noise_power_dbm);
    PathlossParams pathloss;
    pathloss.attenuation_ref_db = c.reference_gain_db;
    pathloss.dist_tx_ris = c.tx_ris_distance;
    pathloss.dist_ris_user = c.ris_user_distance;
    pathloss.exponent_tx_ris = c.pathloss_exponent;
    pathloss.exponent_ris_user = c.pathloss_exponent;

    const RisLink link = sample_ris_link(rng, c.num_tx, c.num_users,
                                         c.num_elements, pathloss, noise);
    const ComplexMatrix p0 = ris_mrt_init(link, power);
    const RealVector x0a = to_real_pairs(p0);

    const bool full = c.suite == Suite::Bdris;
    const RisMode mode = full ? RisMode::FullyConnected : RisMode::Diagonal;
    RealVector x0b;
    double lambda = 0.0;
    if (full) {
        const ScatteringParams warm =
            ris_warm_start(link, p0, power, c.warm_iterations, c.learning_rate,
                           c.ris_learning_rate, rng, c.hidden_width);
        x0b = warm.values;
        lambda = c.ris_lambda;
    } else {
        x0b = RealVector::Zero(c.num_elements);
        lambda = c.literal_penalty ? c.ris_lambda : 0.0;
    }
    const DualObjectiveFn objective =
        ris_objective(link, mode, power, lambda, c.literal_penalty);
    const MlpSpec spec_a = MlpSpec::ris_learner(x0a.size(), c.hidden_width);
    const MlpSpec spec_b = MlpSpec::ris_learner(x0b.size(), c.hidden_width);
    const DualMetaResult res =
        meta_optimize_dual(objective, x0a, x0b, spec_a, spec_b, c.iterations,
                           c.learning_rate, c.ris_learning_rate, rng);

    ScatteringParams phi;
    phi.mode = mode;
    phi.num_elements = c.num_elements;
    phi.values = res.best_b;
    const ComplexMatrix precoder = from_real_pairs(res.best_a, c.num_tx, c.num_users);
    const RealVector rates = ris_user_rates(link, phi.materialize(), precoder);

    ItemOutput out;
    ResultRecord& r = out.record;
    r.suite = suite_name(c.suite);
    r.seed = c.seed;
    r.realization = realization;
    r.snr_db = power_dbm;
    r.lambda = lambda;
    r.esr = rates.sum();
    r.initial_loss = res.initial_loss;
    r.final_loss = res.best_loss;
    return out;
}

ItemOutput run_item(const ScenarioConfig& c, const UserGroupLayout* layout,
                    const AntennaArray* array, double grid_value, int realization,
                    SeededRng rng) {
    if (c.suite == Suite::Ris || c.suite == Suite::Bdris)
        return run_ris_item(c, grid_value, realization, rng);
    const double lambda = c.lambda_grid.front();
    return run_precoder_item(c, *layout, *array, grid_value, lambda, realization,
                             rng);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::vector<ResultRecord> run_scenario(const ScenarioConfig& config, int parallel) {
    config.validate();
    if (parallel < 1)
        throw std::invalid_argument("run_scenario: parallel must be >= 1");

    UserGroupLayout layout;
    AntennaArray array;
    const bool precoder_suite =
        config.suite != Suite::Ris && config.suite != Suite::Bdris;
    if (precoder_suite) {
        layout = config.layout();
        array = make_array(config);
    }

    struct Item {
        std::size_t grid;
        int realization;
    };
    std::vector<Item> items;
    for (std::size_t g = 0; g < config.snr_db.size(); ++g)
        for (int r = 0; r < config.realizations; ++r)
            items.push_back({g, r});

    const SeededRng root(config.seed);
    std::vector<ResultRecord> records(items.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= items.size())
                return;
            try {
                const Item& item = items[i];
                const std::uint64_t substream =
                    item.grid * static_cast<std::uint64_t>(config.realizations) +
                    static_cast<std::uint64_t>(item.realization);
                const auto start = std::chrono::steady_clock::now();
                ItemOutput out = run_item(
                    config, precoder_suite ? &layout : nullptr,
                    precoder_suite ? &array : nullptr,
                    config.snr_db[item.grid], item.realization,
                    root.derive(substream));
                if (config.emit_timing) {
                    const auto stop = std::chrono::steady_clock::now();
                    out.record.seconds =
                        std::chrono::duration<double>(stop - start).count();
                }
                records[i] = std::move(out.record);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                return;
            }
        }
    };

    const int workers =
        std::min<std::size_t>(parallel, std::max<std::size_t>(items.size(), 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    return records;
}

std::vector<ResultRecord> tradeoff_sweep(const ScenarioConfig& config, int parallel) {
    config.validate();
    if (config.suite != Suite::Isac)
        throw ValidationError("tradeoff_sweep: suite must be isac");
    std::vector<ResultRecord> all;
    for (double lambda : config.lambda_grid) {
        ScenarioConfig point = config;
        point.lambda_grid = {lambda}; // same seed streams: paired across lambda
        const std::vector<ResultRecord> records = run_scenario(point, parallel);
        all.insert(all.end(), records.begin(), records.end());
    }
    return all;
}

BeampatternTable beampattern_dump(const ScenarioConfig& config, int resolution) {
    config.validate();
    if (resolution < 2)
        throw std::invalid_argument("beampattern_dump: resolution must be >= 2");
    if (config.suite == Suite::Ris || config.suite == Suite::Bdris)
        throw ValidationError("beampattern_dump: precoder suites only");

    const UserGroupLayout layout = config.layout();
    const AntennaArray array = make_array(config);
    const ItemOutput out =
        run_item(config, &layout, &array, config.snr_db.front(), 0,
                 SeededRng(config.seed).derive(0));

    std::vector<double> angles(resolution);
    for (int i = 0; i < resolution; ++i)
        angles[i] = -std::numbers::pi / 2.0 +
                    std::numbers::pi * i / static_cast<double>(resolution - 1);
    return beampattern(out.precoder, array, angles);
}

std::string csv_string(const std::vector<ResultRecord>& records) {
    std::ostringstream out;
    out << kCsvHeader << "\n";
    for (const ResultRecord& r : records) {
        out << r.suite << ',' << r.seed << ',' << r.realization << ','
            << fmt_double(r.snr_db) << ',' << fmt_double(r.lambda) << ','
            << fmt_double(r.esr) << ',' << fmt_double(r.probing_power) << ','
            << r.qos_violations << ',' << fmt_double(r.initial_loss) << ','
            << fmt_double(r.final_loss) << ',' << fmt_double(r.seconds) << "\n";
    }
    return out.str();
}

void write_csv(const std::vector<ResultRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << csv_string(records);
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

std::vector<ResultRecord> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw IoError("empty CSV '" + path + "'");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kCsvHeader)
        throw IoError("unexpected CSV header in '" + path + "'");
    std::vector<ResultRecord> records;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != 11)
            throw IoError("malformed CSV row in '" + path + "'");
        ResultRecord r;
        r.suite = fields[0];
        r.seed = std::stoull(fields[1]);
        r.realization = std::stoi(fields[2]);
        r.snr_db = std::stod(fields[3]);
        r.lambda = std::stod(fields[4]);
        r.esr = std::stod(fields[5]);
        r.probing_power = std::stod(fields[6]);
        r.qos_violations = std::stoi(fields[7]);
        r.initial_loss = std::stod(fields[8]);
        r.final_loss = std::stod(fields[9]);
        r.seconds = std::stod(fields[10]);
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace metaopt
