// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "metaopt/config.hpp"

using namespace metaopt;

TEST_CASE("minimal hrsma config gets defaults") {
    const ScenarioConfig c = parse_config(
        "suite = hrsma\n"
        "system.num_tx = 8\n"
        "system.num_users = 4\n"
        "system.num_groups = 2\n");
    CHECK(c.num_tx == 8);
    CHECK(c.num_users == 4);
    CHECK(c.learning_rate == 1e-3);
    CHECK(c.qos_lambda == 10.0);
    CHECK(c.hidden_width == 400);
    CHECK(c.suite == Suite::Hrsma);
}

TEST_CASE("num_elements outside ris suites is rejected") {
    CHECK_THROWS_AS(parse_config("suite = hrsma\n"
                                 "system.num_elements = 8\n"),
                    ValidationError);
    CHECK_NOTHROW(parse_config("suite = ris\n"
                               "system.num_elements = 8\n"));
    // and ris without B is invalid
    CHECK_THROWS_AS(parse_config("suite = ris\n"), ValidationError);
}

TEST_CASE("unknown and malformed keys are rejected") {
    CHECK_THROWS_AS(parse_config("suite = hrsma\nbogus.key = 1\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config("this line has no equals\n"), ParseError);
    CHECK_THROWS_AS(parse_config("meta.iterations = twelve\n"), ParseError);
    CHECK_THROWS_AS(parse_config("suite = hrsma\nsuite = sdma\n"), ParseError);
}

TEST_CASE("validation messages name the offending field") {
    try {
        parse_config("suite = hrsma\ncsit.error_variance = 1.5\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("csit.error_variance") !=
              std::string::npos);
    }
}

TEST_CASE("config round trip is exact") {
    const std::string text =
        "suite = isac\n"
        "system.num_tx = 12\n"
        "system.num_users = 4\n"
        "system.num_groups = 2\n"
        "saa.num_samples = 16\n"
        "meta.iterations = 750\n"
        "meta.learning_rate = 0.00125\n"
        "csit.error_variance = 0.8\n"
        "grid.snr_db = 15,20.5,25\n"
        "grid.lambda = 1e-05,0.001,0.1\n"
        "qos.thresholds = 0.25,0.25,0.3,0.3\n"
        "groups.azimuths = -0.5235987755982988,0.5235987755982988\n"
        "groups.spreads = 0.1,0.2\n"
        "isac.targets = -0.6,0.6\n"
        "array.geometry = circular\n"
        "run.realizations = 7\n"
        "run.seed = 12345\n"
        "output.path = sweep.csv\n";
    const ScenarioConfig a = parse_config(text);
    const ScenarioConfig b = parse_config(serialize_config(a));
    CHECK(serialize_config(a) == serialize_config(b));
    CHECK(b.snr_db == a.snr_db);
    CHECK(b.lambda_grid == a.lambda_grid);
    CHECK(b.thresholds == a.thresholds);
    CHECK(b.targets == a.targets);
    CHECK(b.seed == a.seed);
    CHECK(b.learning_rate == a.learning_rate);
    CHECK(b.geometry == a.geometry);
}

TEST_CASE("comments and whitespace are tolerated") {
    const ScenarioConfig c = parse_config(
        "# experiment\n"
        "suite = sdma   # suite choice\n"
        "\n"
        "  system.num_tx   =  6\n");
    CHECK(c.suite == Suite::Sdma);
    CHECK(c.num_tx == 6);
}

TEST_CASE("layout defaults cover all groups") {
    const ScenarioConfig c = parse_config(
        "suite = hrsma\n"
        "system.num_users = 6\n"
        "system.num_groups = 3\n");
    const UserGroupLayout layout = c.layout();
    layout.validate();
    CHECK(layout.num_users == 6);
    CHECK(layout.num_groups == 3);
}
