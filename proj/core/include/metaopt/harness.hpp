// SPDX-License-Identifier: Apache-2.0

#ifndef METAOPT_HARNESS_HPP
#define METAOPT_HARNESS_HPP

#include <string>
#include <vector>

#include "metaopt/config.hpp"
#include "metaopt/rates.hpp"

namespace metaopt {

inline constexpr const char* kCsvHeader =
    "suite,seed,realization,snr_db,lambda,esr,probing_power,qos_violations,"
    "initial_loss,final_loss,seconds";

struct ResultRecord {
    std::string suite;
    std::uint64_t seed = 0;
    int realization = 0;
    double snr_db = 0.0;        // transmit power in dBm for ris/bdris
    double lambda = 0.0;
    double esr = 0.0;           // ESR or SR, bits/s/Hz
    double probing_power = 0.0;
    int qos_violations = 0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    double seconds = 0.0;
    RealVector allocated;       // per-user allocated rates (not serialized)
};

// One run per (grid point, realization), deterministic given (config, seed);
// work items fan out over `parallel` threads, assembly is index-ordered.
std::vector<ResultRecord> run_scenario(const ScenarioConfig& config,
                                       int parallel = 1);

// ISAC tradeoff: one run_scenario pass per lambda grid entry.
std::vector<ResultRecord> tradeoff_sweep(const ScenarioConfig& config,
                                         int parallel = 1);

// Beampattern of the buffered ISAC precoder (first grid point, first
// realization) over `resolution` angles spanning [-pi/2, pi/2].
BeampatternTable beampattern_dump(const ScenarioConfig& config, int resolution);

std::string csv_string(const std::vector<ResultRecord>& records);
void write_csv(const std::vector<ResultRecord>& records, const std::string& path);
std::vector<ResultRecord> read_csv(const std::string& path); // inverse of write_csv

} // namespace metaopt

#endif
